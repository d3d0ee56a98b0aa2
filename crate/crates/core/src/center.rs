//! Central elements of the quiver algebra and their verification.
//!
//! The center of a truncated block is approached from two sides:
//!
//! * *construction*: scaled hull loops `l_i`, their commuting products
//!   over digit sets, and the block-wide sums `L_v` supported on the
//!   equivalence class of `v`;
//! * *search*: a commutant solver that assembles the sparse linear
//!   system `[z, g] = 0` over every generator of the truncated block and
//!   computes its nullspace over `F_p`.
//!
//! Truncation invents spurious central elements near the cut, so both
//! sides are compared only after restricting supports to an interior
//! window `[1, N - M]`.

use crate::admissible::{down_hull, AdmissibleSet, Stretch};
use crate::algebra::{end_ring, BasisWord, Morphism, RewriteError, Rewriter};
use crate::arith::{Fp, Prime};
use crate::padic::{eves_below, PadicDigits};
use crate::quiver::{equiv_class, generators_at, Block, Generator, GeneratorKind};
use serde_json::json;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Errors from central-element construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CenterError {
    #[error("digit {index} is not a nonzero non-leading digit of {v}")]
    NotInDigitSet { v: u64, index: u32 },
    #[error("digit {index} of {v} has no down-admissible hull")]
    NoHull { v: u64, index: u32 },
    #[error("{v} is an eve and carries no loop")]
    EveHasNoLoop { v: u64 },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// The scaled hull loop at one digit of a vertex.
#[derive(Debug, Clone)]
pub struct DigitLoop {
    pub v: u64,
    pub index: u32,
    /// `(-1)^{a_i} a_i * U_{hull{i}} D_{hull{i}} e_v`, normalised.
    pub morphism: Morphism,
}

/// Builds the scaled loop `l_i` at `v`; `i` must be a nonzero
/// non-leading digit with a down-admissible hull.
pub fn digit_loop(v: u64, index: u32, rw: &mut Rewriter) -> Result<DigitLoop, CenterError> {
    let p = rw.prime();
    let d = PadicDigits::expand(v, p);
    if !d.digit_set().contains(&index) {
        return Err(CenterError::NotInDigitSet { v, index });
    }
    let singleton = AdmissibleSet::from_stretch(Stretch::singleton(index));
    let hull = down_hull(&singleton, v, p).ok_or(CenterError::NoHull { v, index })?;
    let a = p.reduce(d.digit(index));
    let sign = if d.digit(index) % 2 == 0 {
        p.one()
    } else {
        p.one().neg()
    };
    let down = rw.generalized_down(&hull, v)?;
    let up = rw.apply_factor(GeneratorKind::Up, &hull, &down)?;
    let mut morphism = up;
    morphism.scale(a.mul(sign));
    Ok(DigitLoop {
        v,
        index,
        morphism,
    })
}

/// The commuting product of digit loops over `set ⊆ D_v`; the empty set
/// yields the identity.
pub fn digit_set_loop(
    v: u64,
    set: &[u32],
    rw: &mut Rewriter,
) -> Result<Morphism, CenterError> {
    let mut m = Morphism::identity(rw.prime(), v);
    for &i in set {
        let l = digit_loop(v, i, rw)?;
        m = rw.compose(&l.morphism, &m)?;
    }
    Ok(m)
}

/// Which central element a candidate represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateKind {
    /// The sum of all idempotents of the block.
    Unit,
    /// The loop sum keyed by the minimal vertex of its class.
    Loop { key: u64 },
}

/// A would-be central element of a truncated block: one diagonal
/// component per supported vertex.
#[derive(Debug, Clone)]
pub struct CentralCandidate {
    pub kind: CandidateKind,
    pub support: BTreeMap<u64, Morphism>,
}

/// The unit of the truncated block.
pub fn unit_candidate(block: &Block, p: Prime) -> CentralCandidate {
    let support = block
        .vertices
        .iter()
        .map(|&v| (v, Morphism::identity(p, v)))
        .collect();
    CentralCandidate {
        kind: CandidateKind::Unit,
        support,
    }
}

/// The loop sum `L_v`: the product loop over `D_v` placed at every
/// vertex of the equivalence class of `v` within the bound.
pub fn central_loop(
    v: u64,
    bound: u64,
    rw: &mut Rewriter,
) -> Result<CentralCandidate, CenterError> {
    let p = rw.prime();
    let digits = PadicDigits::expand(v, p);
    if digits.is_eve() {
        return Err(CenterError::EveHasNoLoop { v });
    }
    let dv = digits.digit_set();
    let set: AdmissibleSet = dv.iter().copied().collect();
    let class = equiv_class(v, &set, bound, p);
    let key = *class.iter().min().expect("class contains v");
    let mut support = BTreeMap::new();
    for w in class {
        support.insert(w, digit_set_loop(w, &dv, rw)?);
    }
    Ok(CentralCandidate {
        kind: CandidateKind::Loop { key },
        support,
    })
}

/// One generator the candidate fails to commute with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralityFailure {
    pub kind: GeneratorKind,
    pub stretch: Stretch,
    pub source: u64,
    pub target: u64,
}

/// The outcome of checking a candidate against every generator.
#[derive(Debug, Clone)]
pub struct CentralityReport {
    pub checked: usize,
    pub failures: Vec<CentralityFailure>,
}

impl CentralityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All generators of the block with both endpoints within `bound`.
pub fn generators_within(block: &Block, bound: u64) -> Vec<Generator> {
    let mut out = Vec::new();
    for &v in &block.vertices {
        if v > bound {
            continue;
        }
        for g in generators_at(v, block.p) {
            if g.target <= bound {
                out.push(g);
            }
        }
    }
    out
}

/// Verifies `z ∘ g = g ∘ z` for every generator `g` of the block with
/// endpoints inside `[1, bound]`.  Missing support components count as
/// zero.
pub fn check_centrality(
    candidate: &CentralCandidate,
    block: &Block,
    bound: u64,
    rw: &mut Rewriter,
) -> Result<CentralityReport, CenterError> {
    let p = rw.prime();
    let mut failures = Vec::new();
    let gens = generators_within(block, bound);
    let checked = gens.len();
    for g in gens {
        let gm = rw.generator_morphism(&g);
        let z_target = candidate
            .support
            .get(&g.target)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(p, g.target, g.target));
        let z_source = candidate
            .support
            .get(&g.source)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(p, g.source, g.source));
        let left = rw.compose(&z_target, &gm)?;
        let right = rw.compose(&gm, &z_source)?;
        if left != right {
            failures.push(CentralityFailure {
                kind: g.kind,
                stretch: g.stretch,
                source: g.source,
                target: g.target,
            });
        }
    }
    Ok(CentralityReport { checked, failures })
}

/// Pointwise products of two loop candidates over the shared support;
/// returns the nonzero products (expected empty).
pub fn central_products(
    a: &CentralCandidate,
    b: &CentralCandidate,
    rw: &mut Rewriter,
) -> Result<Vec<(u64, Morphism)>, CenterError> {
    let mut nonzero = Vec::new();
    for (v, ma) in &a.support {
        if let Some(mb) = b.support.get(v) {
            let m = rw.compose(ma, mb)?;
            if !m.is_zero() {
                nonzero.push((*v, m));
            }
        }
    }
    Ok(nonzero)
}

/// Dense row-echelon accumulator over `F_p`.
pub struct Echelon {
    p: u32,
    ncols: usize,
    /// Reduced rows, each paired with its pivot column; kept in reduced
    /// echelon form (pivot entries are 1 and cleared elsewhere).
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(ncols: usize, p: Prime) -> Self {
        Echelon {
            p: p.get(),
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The reduced rows currently held, without their pivot columns.
    pub fn row_vectors(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    fn reduce(&self, row: &mut [u32]) {
        for (piv, r) in &self.rows {
            let f = row[*piv];
            if f != 0 {
                let neg = self.p - f;
                for (x, y) in row.iter_mut().zip(r.iter()) {
                    *x = (*x + neg * *y) % self.p;
                }
            }
        }
    }

    /// Reduces and inserts; returns true when the rank grew.
    pub fn insert(&mut self, mut row: Vec<u32>) -> bool {
        assert_eq!(row.len(), self.ncols);
        self.reduce(&mut row);
        let piv = match row.iter().position(|&x| x != 0) {
            Some(i) => i,
            None => return false,
        };
        // Normalise the pivot to one.
        let inv = Prime::new(self.p).reduce(row[piv] as i64).inv().value();
        for x in row.iter_mut() {
            *x = (*x * inv) % self.p;
        }
        // Clear the new pivot column from the existing rows.
        for (_, r) in self.rows.iter_mut() {
            let f = r[piv];
            if f != 0 {
                let neg = self.p - f;
                for (x, y) in r.iter_mut().zip(row.iter()) {
                    *x = (*x + neg * *y) % self.p;
                }
            }
        }
        let pos = self
            .rows
            .binary_search_by_key(&piv, |(c, _)| *c)
            .unwrap_err();
        self.rows.insert(pos, (piv, row));
        true
    }

    /// Membership of a vector in the row span.
    pub fn contains(&self, row: &[u32]) -> bool {
        let mut r = row.to_vec();
        self.reduce(&mut r);
        r.iter().all(|&x| x == 0)
    }

    /// A basis of the kernel of the accumulated rows read as equations.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let pivot_cols: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut x = vec![0u32; self.ncols];
            x[free] = 1;
            for (piv, r) in &self.rows {
                // Row reads x[piv] + Σ r[j] x[j] = 0 over free columns.
                let coeff = r[free] % self.p;
                if coeff != 0 {
                    x[*piv] = self.p - coeff;
                }
            }
            basis.push(x);
        }
        basis
    }
}

/// Compares the spans of two families of vectors over `F_p`.
pub fn spans_equal(a: &[Vec<u32>], b: &[Vec<u32>], ncols: usize, p: Prime) -> bool {
    let mut ea = Echelon::new(ncols, p);
    for r in a {
        ea.insert(r.clone());
    }
    let mut eb = Echelon::new(ncols, p);
    for r in b {
        eb.insert(r.clone());
    }
    ea.rank() == eb.rank()
        && a.iter().all(|r| eb.contains(r))
        && b.iter().all(|r| ea.contains(r))
}

/// Index of diagonal unknowns: one coefficient per (vertex, loop word).
#[derive(Debug, Clone)]
pub struct UnknownIndex {
    pub columns: Vec<(u64, BasisWord)>,
    pub lookup: HashMap<(u64, BasisWord), usize>,
}

impl UnknownIndex {
    /// One unknown per endomorphism basis word of every block vertex.
    pub fn for_block(block: &Block, p: Prime) -> Self {
        let mut columns = Vec::new();
        for &v in &block.vertices {
            for word in end_ring(v, p).basis {
                columns.push((v, word));
            }
        }
        let lookup = columns
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        UnknownIndex { columns, lookup }
    }
}

/// The commutant solver output.
pub struct SolverReport {
    pub unknowns: UnknownIndex,
    /// Rank of the assembled equation system.
    pub rank: usize,
    /// Nullspace basis (full coordinates).
    pub basis: Vec<Vec<u32>>,
    /// Echelonised basis of the nullspace projected to the interior
    /// columns (coordinates still full-length; boundary columns zeroed).
    pub interior_basis: Vec<Vec<u32>>,
    /// Interior window upper bound `N - M`.
    pub interior_bound: u64,
}

/// Restricts a coefficient vector to the columns of vertices within
/// `bound`, zeroing the rest.
pub fn restrict_to_interior(row: &[u32], unknowns: &UnknownIndex, bound: u64) -> Vec<u32> {
    row.iter()
        .enumerate()
        .map(|(i, &x)| if unknowns.columns[i].0 <= bound { x } else { 0 })
        .collect()
}

/// The coefficient vector of a candidate in the unknown index; support
/// components must expand over the endomorphism basis (they do, being
/// scaled basis words).
pub fn candidate_vector(c: &CentralCandidate, unknowns: &UnknownIndex) -> Vec<u32> {
    let mut row = vec![0u32; unknowns.columns.len()];
    for (v, m) in &c.support {
        for (word, coeff) in &m.terms {
            if let Some(&col) = unknowns.lookup.get(&(*v, word.clone())) {
                row[col] = coeff.value();
            }
        }
    }
    row
}

/// Assembles and solves the commutant system of the truncated block:
/// unknowns are diagonal coefficients, equations demand `[z, g] = 0`
/// for every generator with endpoints within the bound.
pub fn commutant_solve(
    block: &Block,
    margin: u64,
    rw: &mut Rewriter,
) -> Result<SolverReport, CenterError> {
    let p = rw.prime();
    let unknowns = UnknownIndex::for_block(block, p);
    let n = unknowns.columns.len();
    let mut echelon = Echelon::new(n, p);
    for g in generators_within(block, block.bound) {
        let gm = rw.generator_morphism(&g);
        // Coefficient of each hom-basis word in [z, g]: contributions
        // b∘g from unknowns at the target, minus g∘b from the source.
        let mut rows: HashMap<BasisWord, Vec<u32>> = HashMap::new();
        let accumulate = |m: &Morphism, col: usize, sign_neg: bool, rows: &mut HashMap<BasisWord, Vec<u32>>| {
            for (word, coeff) in &m.terms {
                let row = rows
                    .entry(word.clone())
                    .or_insert_with(|| vec![0u32; n]);
                let c = if sign_neg { coeff.neg() } else { *coeff };
                row[col] = (row[col] + c.value()) % p.get();
            }
        };
        for word in end_ring(g.target, p).basis {
            let col = unknowns.lookup[&(g.target, word.clone())];
            let zt = Morphism::single(p, word, p.one());
            let m = rw.compose(&zt, &gm)?;
            accumulate(&m, col, false, &mut rows);
        }
        for word in end_ring(g.source, p).basis {
            let col = unknowns.lookup[&(g.source, word.clone())];
            let zs = Morphism::single(p, word, p.one());
            let m = rw.compose(&gm, &zs)?;
            accumulate(&m, col, true, &mut rows);
        }
        for (_, row) in rows {
            echelon.insert(row);
        }
    }
    let rank = echelon.rank();
    let basis = echelon.nullspace();
    let interior_bound = block.bound.saturating_sub(margin);
    let mut interior = Echelon::new(n, p);
    for b in &basis {
        interior.insert(restrict_to_interior(b, &unknowns, interior_bound));
    }
    let interior_basis = interior.rows.iter().map(|(_, r)| r.clone()).collect();
    Ok(SolverReport {
        unknowns,
        rank,
        basis,
        interior_basis,
        interior_bound,
    })
}

/// The scalar by which the Casimir element acts on the block of `eve`.
pub fn casimir_scalar(eve: u64, p: Prime) -> Fp {
    p.reduce((eve as i64) * (eve as i64))
}

/// Verifies `v² ≡ eve²  (mod p)` for every member of the block.
pub fn casimir_check(block: &Block) -> Result<(), Vec<u64>> {
    let c = casimir_scalar(block.eve, block.p);
    let offenders: Vec<u64> = block
        .vertices
        .iter()
        .copied()
        .filter(|&v| casimir_scalar(v, block.p) != c)
        .collect();
    if offenders.is_empty() {
        Ok(())
    } else {
        Err(offenders)
    }
}

/// Each eve below the bound fibers its own block; the report pairs each
/// fiber with its Casimir character.
pub fn fibering_report(bound: u64, p: Prime) -> Vec<(u64, Fp, usize)> {
    eves_below(bound, p)
        .into_iter()
        .map(|e| {
            let block = Block::explore(e, bound, p);
            (e, casimir_scalar(e, p), block.vertices.len())
        })
        .collect()
}

/// JSON verification report for one block.
#[allow(clippy::too_many_arguments)]
pub fn center_report(
    p: Prime,
    eve: u64,
    bound: u64,
    margin: u64,
    candidates: &[(CandidateKind, CentralityReport)],
    solver: Option<&SolverReport>,
) -> serde_json::Value {
    let cands: Vec<_> = candidates
        .iter()
        .map(|(kind, rep)| {
            let (kind_str, key) = match kind {
                CandidateKind::Unit => ("unit", serde_json::Value::Null),
                CandidateKind::Loop { key } => ("loop", json!(key)),
            };
            json!({
                "kind": kind_str,
                "key_vertex": key,
                "checked": rep.checked,
                "verified": rep.passed(),
                "failures": rep.failures.iter().map(|f| json!({
                    "kind": match f.kind { GeneratorKind::Down => "down", GeneratorKind::Up => "up" },
                    "stretch": [f.stretch.lo(), f.stretch.hi()],
                    "source": f.source,
                    "target": f.target,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let solver_json = solver.map(|s| {
        json!({
            "unknowns": s.unknowns.columns.len(),
            "rank": s.rank,
            "nullity": s.basis.len(),
            "interior_bound": s.interior_bound,
            "interior_basis": s.interior_basis.iter().map(|row| {
                row.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| {
                    let (v, word) = &s.unknowns.columns[i];
                    json!({"vertex": v, "word": word.display(p), "coeff": x})
                }).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    });
    json!({
        "p": p.get(),
        "eve": eve,
        "N": bound,
        "margin": margin,
        "candidates": cands,
        "solver": solver_json,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::reflect_down;

    fn p3() -> Prime {
        Prime::new(3)
    }

    #[test]
    fn digit_loop_uses_the_hull() {
        // v = [3,1,6,5,0,5,6]_7: the loop at digit 1 runs along the
        // hull {2,1}.
        let p = Prime::new(7);
        let v = PadicDigits::parse("[3,1,6,5,0,5,6]_7").unwrap().value_u64();
        let mut rw = Rewriter::new(p);
        let l = digit_loop(v, 1, &mut rw).unwrap();
        assert_eq!(l.morphism.terms.len(), 1);
        let (word, _) = l.morphism.terms.iter().next().unwrap();
        assert_eq!(word.downs, vec![Stretch::new(1, 2)]);
        assert_eq!(word.ups, vec![Stretch::new(1, 2)]);
    }

    #[test]
    fn digit_loop_at_seventeen_matches_example() {
        // 17 = [1,2,2]_3: a_0 = 2, so l_0 = 2 * U{0} D{0} e_16.
        let mut rw = Rewriter::new(p3());
        let l = digit_loop(17, 0, &mut rw).unwrap();
        let (word, coeff) = l.morphism.terms.iter().next().unwrap();
        assert_eq!(coeff.value(), 2);
        assert_eq!(word.downs, vec![Stretch::singleton(0)]);
        assert_eq!(word.ups, vec![Stretch::singleton(0)]);
    }

    #[test]
    fn digit_loop_rejections() {
        let mut rw = Rewriter::new(p3());
        // 17 = [1,2,2]_3: digit 2 is leading, not in D_v.
        assert_eq!(
            digit_loop(17, 2, &mut rw).unwrap_err(),
            CenterError::NotInDigitSet { v: 17, index: 2 }
        );
    }

    #[test]
    fn loops_square_to_zero() {
        for p in [p3(), Prime::new(5)] {
            let mut rw = Rewriter::new(p);
            for v in 2..200u64 {
                for i in PadicDigits::expand(v, p).digit_set() {
                    if let Ok(l) = digit_loop(v, i, &mut rw) {
                        let sq = rw.compose(&l.morphism, &l.morphism).unwrap();
                        assert!(sq.is_zero(), "l_{i}^2 != 0 at v={v}, p={}", p.get());
                    }
                }
            }
        }
    }

    #[test]
    fn digit_set_loops_commute() {
        let p = p3();
        let mut rw = Rewriter::new(p);
        for v in [17u64, 53, 161, 215] {
            let dv = PadicDigits::expand(v, p).digit_set();
            if dv.len() < 2 {
                continue;
            }
            let fwd = digit_set_loop(v, &dv, &mut rw).unwrap();
            let mut rev = dv.clone();
            rev.reverse();
            let bwd = digit_set_loop(v, &rev, &mut rw).unwrap();
            assert_eq!(fwd, bwd, "loop factors fail to commute at {v}");
            assert!(!fwd.is_zero());
        }
        let empty = digit_set_loop(17, &[], &mut rw).unwrap();
        assert_eq!(empty, Morphism::identity(p, 17));
    }

    #[test]
    fn loops_transport_along_other_indices_and_die_along_their_own() {
        let p = p3();
        let mut rw = Rewriter::new(p);
        for v in 2..150u64 {
            let dv = PadicDigits::expand(v, p).digit_set();
            for &k in &dv {
                let hull_k = match down_hull(
                    &AdmissibleSet::from_stretch(Stretch::singleton(k)),
                    v,
                    p,
                ) {
                    Some(h) => h,
                    None => continue,
                };
                let u = reflect_down(v, &hull_k, p);
                let up = rw.generalized_up(&hull_k, u).unwrap();
                assert_eq!(up.target, v);
                for &i in &dv {
                    if !PadicDigits::expand(u, p).digit_set().contains(&i) {
                        continue;
                    }
                    let li_v = digit_loop(v, i, &mut rw).unwrap().morphism;
                    let li_u = match digit_loop(u, i, &mut rw) {
                        Ok(l) => l.morphism,
                        Err(_) => continue,
                    };
                    let lhs = rw.compose(&li_v, &up).unwrap();
                    let rhs = rw.compose(&up, &li_u).unwrap();
                    assert_eq!(lhs, rhs, "transport of l_{i} along {k} at v={v}");
                    if i == k {
                        assert!(lhs.is_zero(), "l_{i} survives its own arrow at v={v}");
                    } else {
                        assert!(!lhs.is_zero(), "l_{i} dies along {k} at v={v}");
                    }
                }
            }
        }
    }

    #[test]
    fn central_loop_rejects_eves_and_spans_the_class() {
        let p = p3();
        let mut rw = Rewriter::new(p);
        assert_eq!(
            central_loop(9, 100, &mut rw).unwrap_err(),
            CenterError::EveHasNoLoop { v: 9 }
        );
        // 5 = [1,2]_3: class members keep digit 0 of 5 below their
        // leading digit.
        let c = central_loop(5, 100, &mut rw).unwrap();
        assert_eq!(c.kind, CandidateKind::Loop { key: 5 });
        assert!(c.support.len() > 1, "classes are never singletons");
        for (&w, m) in &c.support {
            assert_eq!(PadicDigits::expand(w, p).digit(0), 2, "w={w}");
            assert!(!m.is_zero());
        }
    }

    #[test]
    fn unit_and_loops_are_central_on_a_small_block() {
        let p = p3();
        let mut rw = Rewriter::new(p);
        let block = Block::explore(1, 81, p);
        let interior = 54;
        let unit = unit_candidate(&block, p);
        let rep = check_centrality(&unit, &block, interior, &mut rw).unwrap();
        assert!(rep.passed());
        assert!(rep.checked > 0);
        for &v in &block.vertices {
            if v > interior || PadicDigits::expand(v, p).is_eve() {
                continue;
            }
            let c = central_loop(v, 81, &mut rw).unwrap();
            let rep = check_centrality(&c, &block, interior, &mut rw).unwrap();
            assert!(rep.passed(), "L_{v} fails: {:?}", rep.failures);
        }
    }

    #[test]
    fn single_vertex_loop_is_not_central() {
        // U{1} D{1} e_12 (weight 12 = vertex 13) cannot be completed to
        // a central element: transport along the down arrow at digit 0
        // has no counterpart at the neighbor.
        let p = p3();
        let mut rw = Rewriter::new(p);
        let word = BasisWord {
            source: 13,
            downs: vec![Stretch::singleton(1)],
            ups: vec![Stretch::singleton(1)],
        };
        let mut support = BTreeMap::new();
        support.insert(13u64, Morphism::single(p, word, p.one()));
        let candidate = CentralCandidate {
            kind: CandidateKind::Loop { key: 13 },
            support,
        };
        let block = Block::explore(1, 27, p);
        let rep = check_centrality(&candidate, &block, 18, &mut rw).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn loop_products_vanish() {
        let p = p3();
        let mut rw = Rewriter::new(p);
        let block = Block::explore(1, 81, p);
        let mut cands = Vec::new();
        for &v in &block.vertices {
            if PadicDigits::expand(v, p).is_eve() {
                continue;
            }
            let c = central_loop(v, 81, &mut rw).unwrap();
            if let CandidateKind::Loop { key } = c.kind {
                if key == v {
                    cands.push(c);
                }
            }
        }
        assert!(cands.len() >= 2);
        for a in &cands {
            for b in &cands {
                let bad = central_products(a, b, &mut rw).unwrap();
                assert!(bad.is_empty(), "{:?} * {:?} != 0", a.kind, b.kind);
            }
        }
    }

    #[test]
    fn echelon_and_nullspace() {
        let p = p3();
        let mut e = Echelon::new(3, p);
        assert!(e.insert(vec![1, 2, 0]));
        assert!(e.insert(vec![0, 1, 1]));
        assert!(!e.insert(vec![1, 0, 1])); // 1*r0 - 2*r1
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 1);
        // Check the kernel vector against both equations.
        for (row, ker) in [(vec![1u32, 2, 0], &ns[0]), (vec![0, 1, 1], &ns[0])] {
            let dot: u32 = row.iter().zip(ker.iter()).map(|(a, b)| a * b).sum();
            assert_eq!(dot % 3, 0);
        }
        assert!(e.contains(&[2, 2, 1]));
        assert!(!e.contains(&[1, 0, 0]));
    }

    #[test]
    fn commutant_solver_matches_constructed_candidates() {
        let p = p3();
        let mut rw = Rewriter::new(p);
        let bound = 27;
        let margin = 9;
        let block = Block::explore(1, bound, p);
        let report = commutant_solve(&block, margin, &mut rw).unwrap();
        let n = report.unknowns.columns.len();
        // Constructed candidates: the unit plus one loop sum per class.
        let mut vectors = vec![restrict_to_interior(
            &candidate_vector(&unit_candidate(&block, p), &report.unknowns),
            &report.unknowns,
            report.interior_bound,
        )];
        for &v in &block.vertices {
            if PadicDigits::expand(v, p).is_eve() {
                continue;
            }
            let c = central_loop(v, bound, &mut rw).unwrap();
            if c.kind != (CandidateKind::Loop { key: v }) {
                continue;
            }
            vectors.push(restrict_to_interior(
                &candidate_vector(&c, &report.unknowns),
                &report.unknowns,
                report.interior_bound,
            ));
        }
        assert!(
            spans_equal(&report.interior_basis, &vectors, n, p),
            "interior solver span differs from constructed candidates"
        );
        // The lone loop at weight 12 is not a restriction of any
        // solution.
        let word = BasisWord {
            source: 13,
            downs: vec![Stretch::singleton(1)],
            ups: vec![Stretch::singleton(1)],
        };
        let mut lone = vec![0u32; n];
        lone[report.unknowns.lookup[&(13u64, word)]] = 1;
        let mut span = Echelon::new(n, p);
        for r in &report.interior_basis {
            span.insert(r.clone());
        }
        assert!(!span.contains(&lone));
    }

    #[test]
    fn casimir_scalars_and_fibers() {
        let p = Prime::new(7);
        assert_eq!(casimir_scalar(2, p).value(), 4);
        for q in [Prime::new(2), p3(), Prime::new(5), Prime::new(7)] {
            assert_eq!(casimir_scalar(1, q).value(), 1);
        }
        let block = Block::explore(1, 243, p3());
        assert!(casimir_check(&block).is_ok());
        let fibers = fibering_report(100, p3());
        assert_eq!(fibers.len(), eves_below(100, p3()).len());
        let total: usize = fibers.iter().map(|(_, _, n)| n).sum();
        assert_eq!(total, 100); // the fibers partition every vertex
    }
}
