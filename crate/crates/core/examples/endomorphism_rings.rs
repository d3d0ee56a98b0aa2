//! Morphism spaces and endomorphism rings.
//!
//! Run with: cargo run --example endomorphism_rings

use tiltquiver::admissible::minimal_down_stretches;
use tiltquiver::algebra::{end_ring, hom_basis, hom_dim};
use tiltquiver::arith::Prime;

fn main() {
    let p = Prime::new(3);

    // Endomorphism dimensions are always powers of two: one basis word
    // per subset of the minimal down stretches.
    for v in [5u64, 16, 17, 53] {
        let k = minimal_down_stretches(v, p).len();
        let dim = hom_dim(v, v, p);
        println!("End({v}): dim {dim} = 2^{k}");
        assert_eq!(dim, 1 << k);
        let ring = end_ring(v, p);
        for w in &ring.basis {
            println!("  {}", w.display(p));
        }
    }

    // Hom spaces between different vertices, with symmetric dimensions.
    for (v, w) in [(16u64, 4u64), (17, 5), (13, 11)] {
        let d = hom_dim(v, w, p);
        assert_eq!(d, hom_dim(w, v, p));
        println!("Hom({v},{w}) has dimension {d}:");
        for word in hom_basis(v, w, p) {
            println!("  {}", word.display(p));
        }
    }
}
