//! The four coefficient-variant quivers: a semisimple family, two
//! zigzag chains, and a two-dimensional grid with loop calculus.
//!
//! Run with: cargo run --example variant_algebras

use tiltquiver::variants::{
    arrow_morphism, arrows_from, column_indices, end_basis, grid_position, variant_center_matches,
    variant_compose, variant_solve, variant_vertices, vertex_value, VariantKind,
};

fn main() {
    // Semisimple case: no arrows at all, every idempotent is central.
    let q = VariantKind::QuantumGeneric;
    assert!(arrows_from(q, 3).is_empty());
    println!("generic variant: vertex 3 carries value {}", vertex_value(q, 3).unwrap());

    // Zigzag chain at a root of unity: values snake through residues.
    let qr = VariantKind::QuantumRoot(5);
    let values: Vec<i64> = (0..5).map(|i| vertex_value(qr, i).unwrap()).collect();
    println!("root-of-unity chain values: {values:?}");
    assert_eq!(values, vec![1, 9, 11, 19, 21]);

    // The chain has a boundary: the loop at vertex 0 is zero.
    let up = &arrows_from(qr, 0)[0];
    let down = arrows_from(qr, 1).iter().find(|a| !a.up).cloned().unwrap();
    let loop0 = variant_compose(&arrow_morphism(qr, &down), &arrow_morphism(qr, up)).unwrap();
    assert!(loop0.is_zero());
    println!("boundary loop D{{0}} U{{0}} e_0 = 0");

    // The first Frobenius-kernel variant is the same chain without a
    // boundary; vertex -1 exists and its loop survives.
    let g1 = VariantKind::G1T(5);
    assert_eq!(vertex_value(g1, -1).unwrap(), -1);
    assert_eq!(end_basis(g1, 0).len(), 2);
    println!("doubly infinite chain: End(w_0) has dimension 2");

    // The second-kernel variant lives on a snaking grid.
    let g2 = VariantKind::G2T(5);
    for i in [-10i64, -1, 0, 1, 9, 10] {
        let (row, col) = grid_position(g2, i);
        println!(
            "  w_{i}: value {:>3}, grid row {row}, column {col}",
            vertex_value(g2, i).unwrap()
        );
    }
    assert_eq!(vertex_value(g2, 1).unwrap(), 9);
    assert_eq!(vertex_value(g2, 9).unwrap(), 49);
    assert_eq!(column_indices(5, 2, 10), vec![-8, -2, 2, 8]);

    // Interior grid vertices carry two independent loops; vertices on
    // the outer columns only one.
    assert_eq!(end_basis(g2, 2).len(), 4);
    assert_eq!(end_basis(g2, 5).len(), 2);
    println!("End dims: 4 in the interior, 2 on the boundary columns");

    // Brute-force centers of finite windows match the predicted bases
    // (unit, boundary-column loops, interior loop products, column sums).
    for (kind, bound) in [(qr, 8i64), (g1, 8), (g2, 14)] {
        let window: Vec<i64> = match kind {
            VariantKind::QuantumRoot(_) => (0..=bound).collect(),
            _ => (-bound..=bound).collect(),
        };
        let interior: Vec<i64> = match kind {
            VariantKind::QuantumRoot(_) => (0..=bound - 3).collect(),
            _ => (-(bound - 5)..=(bound - 5)).collect(),
        };
        let report = variant_solve(kind, &window, &interior).unwrap();
        assert!(variant_center_matches(kind, &window, &interior, &report));
        println!(
            "{}: {} unknowns, interior center dimension {}",
            kind.name(),
            report.unknowns.columns.len(),
            report.interior_basis.len()
        );
    }

    let count = variant_vertices(g2, 60).unwrap().len();
    println!("grid window |value| <= 60 holds {count} vertices");
}
