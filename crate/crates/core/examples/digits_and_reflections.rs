//! Positional digits, admissible sets, and reflections.
//!
//! Run with: cargo run --example digits_and_reflections

use tiltquiver::admissible::{
    down_hull, is_down_admissible, minimal_down_stretches, minimal_up_stretches,
    reflect_down, reflect_up, AdmissibleSet,
};
use tiltquiver::arith::Prime;
use tiltquiver::padic::PadicDigits;

fn main() {
    let p = Prime::new(3);
    let v = 17;
    let d = PadicDigits::expand(v, p);
    println!("{v} = {d}, generation {}, digit set {:?}", d.generation(), d.digit_set());
    println!("mother of {v} is {}", d.mother().value_u64());

    // Reflections move between vertices of the same block.
    let s = AdmissibleSet::parse("{1}").unwrap();
    assert!(is_down_admissible(&s, v, p));
    let down = reflect_down(v, &s, p);
    println!("{v} reflected down along {s} is {down}");
    let back = reflect_up(down, &s, p);
    assert_eq!(back, v);
    println!("and back up along {s} is {back}");

    // Mixed-sign expansions denote the same numbers.
    let mixed = PadicDigits::parse("[3,-1,-6,-5,0,5,-6]_7").unwrap();
    println!("[3,-1,-6,-5,0,5,-6]_7 = {}", mixed.value());

    // Minimal stretches generate all admissible moves; hulls complete
    // a digit to the smallest down-admissible set around it.
    let w = 61;
    let p5 = Prime::new(5);
    println!(
        "minimal down stretches of {w} (base 5): {:?}",
        minimal_down_stretches(w, p5)
    );
    println!(
        "minimal up stretches of {w} (base 5): {:?}",
        minimal_up_stretches(w, p5)
    );
    let single = AdmissibleSet::parse("{1}").unwrap();
    println!("down hull of {{1}} at {w}: {:?}", down_hull(&single, w, p5));
}
