//! Computing the center of a truncated block two ways: constructed
//! candidates and a brute-force commutant solver.
//!
//! Run with: cargo run --example center_of_a_block

use tiltquiver::arith::Prime;
use tiltquiver::algebra::Rewriter;
use tiltquiver::center::{
    candidate_vector, central_loop, central_products, check_centrality, commutant_solve,
    digit_loop, restrict_to_interior, spans_equal, unit_candidate,
};
use tiltquiver::quiver::Block;

fn main() {
    let p = Prime::new(3);
    let mut rw = Rewriter::new(p);

    // A single digit loop: walk down the hull of one digit and back up.
    let l = digit_loop(17, 1, &mut rw).expect("loop");
    println!("loop at 17, digit 1:");
    for (word, c) in &l.morphism.terms {
        println!("  {} * {}", c.value(), word.display(p));
    }

    // The central element attached to a non-eve vertex spreads that
    // loop over its whole equivalence class within the bound.
    let block = Block::explore(1, 81, p);
    let lv = central_loop(5, block.bound, &mut rw).expect("central loop");
    println!(
        "L_5 is supported on {} vertices: {:?}",
        lv.support.len(),
        lv.support.keys().collect::<Vec<_>>()
    );

    // Constructed candidates: the unit plus one loop sum per class.
    let mut candidates = vec![unit_candidate(&block, p)];
    let mut seen = std::collections::BTreeSet::new();
    for &v in &block.vertices {
        if v > block.bound / 3 {
            continue;
        }
        if let Ok(c) = central_loop(v, block.bound, &mut rw) {
            if let tiltquiver::center::CandidateKind::Loop { key } = c.kind {
                if seen.insert(key) {
                    candidates.push(c);
                }
            }
        }
    }
    println!("{} candidates (unit + loop sums)", candidates.len());

    // Each one commutes with every generator inside the safe window.
    let interior = block.bound / 3;
    for c in &candidates {
        let report = check_centrality(c, &block, interior, &mut rw).expect("check");
        assert!(report.passed(), "candidate failed centrality");
    }
    println!("all candidates commute with the {interior}-interior generators");

    // Pairwise products of distinct loop sums vanish.
    for i in 1..candidates.len() {
        for j in i..candidates.len() {
            let prods = central_products(&candidates[i], &candidates[j], &mut rw).unwrap();
            assert!(prods.is_empty());
        }
    }
    println!("loop-sum products all vanish");

    // The solver finds the full commutant and agrees with the
    // constructed span on the interior window.
    let report = commutant_solve(&block, interior * 2, &mut rw).expect("solve");
    println!(
        "solver: {} unknowns, rank {}, interior nullspace dim {}",
        report.unknowns.columns.len(),
        report.rank,
        report.interior_basis.len()
    );
    let predicted: Vec<Vec<u32>> = candidates
        .iter()
        .map(|c| {
            let full = candidate_vector(c, &report.unknowns);
            restrict_to_interior(&full, &report.unknowns, report.interior_bound)
        })
        .collect();
    let ncols = report.unknowns.columns.len();
    assert!(spans_equal(&report.interior_basis, &predicted, ncols, p));
    println!("solver basis matches the constructed central elements");
}
