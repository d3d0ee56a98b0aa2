//! Factorising indecomposables into twisted tensor factors read off
//! the base-p digits.
//!
//! Run with: cargo run --example donkin_factorization

use tiltquiver::arith::Prime;
use tiltquiver::padic::PadicDigits;
use tiltquiver::variants::{donkin_factorize, is_steinberg, SteinbergConvention};

fn main() {
    let p = Prime::new(7);

    // Digits [1,1,6,5,0,5,6] base 7: the leading digit gives the top
    // factor as-is, every lower digit is shifted by p.
    let v = PadicDigits::parse("[1,1,6,5,0,5,6]_7").unwrap().value_u64();
    let f = donkin_factorize(v, p);
    println!("{}", f.display());
    assert!(f.reconstructs());

    // The weight of each factor is index - 1, and the twisted weights
    // reassemble the original weight v - 1.
    let total: u64 = f
        .factors
        .iter()
        .map(|t| t.weight() * 7u64.pow(t.twist))
        .sum();
    assert_eq!(total, v - 1);
    println!("weights rebuild {} = {} - 1", total, v);

    // Zero digits become Steinberg factors (index p); pruning them
    // keeps only the informative part.
    let w = PadicDigits::parse("[3,0,0,0]_7").unwrap().value_u64();
    let g = donkin_factorize(w, p);
    println!("{}", g.display());
    let pruned = g.without_steinberg();
    println!(
        "pruned to {} factor(s): index {}, twist {}",
        pruned.len(),
        pruned[0].index,
        pruned[0].twist
    );
    assert_eq!(pruned.len(), 1);

    // Weight-one factors are tensor-trivial and can be dropped too.
    let h = donkin_factorize(50, p);
    println!("{}", h.display());
    println!("non-trivial factors: {}", h.without_trivial().len());

    // Two bookkeeping conventions for "Steinberg vertex": divisibility
    // of the vertex label or of the weight.
    assert!(is_steinberg(7, 7, SteinbergConvention::Vertex));
    assert!(is_steinberg(8, 7, SteinbergConvention::Weight));
}
