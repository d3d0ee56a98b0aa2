//! Rewriting arbitrary words of reflection factors into normal form.
//!
//! Run with: cargo run --example normalize_words

use tiltquiver::algebra::{Rewriter, Strategy};
use tiltquiver::arith::Prime;
use tiltquiver::expr::{eval_word, parse_word};

fn show(rw: &mut Rewriter, input: &str) {
    let parsed = parse_word(input).expect("parse");
    let m = eval_word(rw, &parsed).expect("eval");
    if m.is_zero() {
        println!("{input}\n  = 0");
        return;
    }
    println!("{input}");
    for (word, c) in &m.terms {
        println!("  = {} * {}", c.value(), word.display(rw.prime()));
    }
}

fn main() {
    let p = Prime::new(3);
    let mut rw = Rewriter::new(p);

    // A down-up round trip at its own stretch collapses to zero.
    show(&mut rw, "D{0} U{0} e[1]");

    // A zigzag relation: pushing down then up at overlapping stretches
    // rewrites into up-then-down with a scalar.
    show(&mut rw, "D{0} U{1} D{1} e[13]");
    show(&mut rw, "U{1,0} D{1} e[13]");

    // The two sides above agree term for term.
    let lhs = eval_word(&mut rw, &parse_word("D{0} U{1} D{1} e[13]").unwrap()).unwrap();
    let rhs = eval_word(&mut rw, &parse_word("U{1,0} D{1} e[13]").unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert!(!lhs.is_zero());

    // A loop (down then up at the same stretch) is already normal.
    show(&mut rw, "U{0} D{0} e[5]");

    // Two loops at distinct digits multiply to zero; the stated
    // target is still checked during evaluation.
    show(&mut rw, "e[5] U{1} D{1} U{0} D{0} e[5]");

    // Both normalisation strategies agree on every word.
    let parsed = parse_word("U{1} D{1} U{0} D{0} e[5]").unwrap();
    let fold = rw.normalize_with(&parsed.raw, Strategy::Fold).unwrap();
    let split = rw.normalize_with(&parsed.raw, Strategy::Split).unwrap();
    assert_eq!(fold, split);
    println!("fold/split strategies agree ({} rewrite steps so far)", rw.steps());
}
