//! Degenerate relatives of the main quiver algebra.
//!
//! Three families share the surface shape of the main algebra but have
//! far simpler relations (all structure constants are 0 or ±1):
//!
//! * the root-of-unity chain: a zigzag algebra on a half-infinite chain
//!   with one boundary relation killing the loop at the start vertex;
//! * the first-generation chain: the same zigzag algebra on a chain
//!   indexed by all integers, with no boundary;
//! * the second-generation grid: vertices arranged on an integer grid
//!   with snaking rows, where every row and every column is a zigzag
//!   algebra and all complete squares commute.
//!
//! The module also exposes the tensor-product factorization of a vertex
//! into twisted elementary factors.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::arith::{Fp, Prime};
use crate::center::{spans_equal, Echelon};
use crate::padic::PadicDigits;

/// Field used for variant coefficient arithmetic. The variant relations
/// only involve 0 and ±1, so any odd characteristic large enough to
/// avoid accidental collisions gives the same dimensions; we fix a
/// large prime so the chain base never divides a coefficient.
pub const VARIANT_FIELD: u32 = 65521;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VariantError {
    #[error("chain base must be at least 2, got {0}")]
    BaseTooSmall(u32),
    #[error("grid variant requires an odd prime at least 3, got {0}")]
    GridBaseTooSmall(u32),
    #[error("vertex index {0} does not exist in this variant")]
    MissingVertex(i64),
    #[error("word targets vertex {expected} but next factor starts at {found}")]
    Mismatch { expected: i64, found: i64 },
}

/// Which degenerate algebra is in play.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantKind {
    /// Generic parameter: semisimple, no arrows at all.
    QuantumGeneric,
    /// Root-of-unity chain with base `k >= 2` and a boundary relation.
    QuantumRoot(u32),
    /// First-generation chain over all integers, base `p`, no boundary.
    G1T(u32),
    /// Second-generation grid over all integers, base `p >= 3`.
    G2T(u32),
}

impl VariantKind {
    pub fn validate(self) -> Result<(), VariantError> {
        match self {
            VariantKind::QuantumGeneric => Ok(()),
            VariantKind::QuantumRoot(k) if k < 2 => Err(VariantError::BaseTooSmall(k)),
            VariantKind::QuantumRoot(_) => Ok(()),
            VariantKind::G1T(p) if p < 2 => Err(VariantError::BaseTooSmall(p)),
            VariantKind::G1T(_) => Ok(()),
            VariantKind::G2T(p) if p < 3 => Err(VariantError::GridBaseTooSmall(p)),
            VariantKind::G2T(_) => Ok(()),
        }
    }

    /// The base of the positional expansion driving the vertex values.
    pub fn base(self) -> u32 {
        match self {
            VariantKind::QuantumGeneric => 0,
            VariantKind::QuantumRoot(k) => k,
            VariantKind::G1T(p) | VariantKind::G2T(p) => p,
        }
    }

    /// Chains index vertices by naturals (quantum) or integers (G1T);
    /// only the G2T variant uses a two-dimensional grid.
    pub fn is_grid(self) -> bool {
        matches!(self, VariantKind::G2T(_))
    }

    fn allows_negative(self) -> bool {
        matches!(self, VariantKind::G1T(_) | VariantKind::G2T(_))
    }

    pub fn name(self) -> &'static str {
        match self {
            VariantKind::QuantumGeneric => "quantum-generic",
            VariantKind::QuantumRoot(_) => "quantum",
            VariantKind::G1T(_) => "g1t",
            VariantKind::G2T(_) => "g2t",
        }
    }
}

/// A vertex of a variant quiver: its integer index, its value, and its
/// grid position (row 0 and column = index for chain variants).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridVertex {
    pub index: i64,
    pub value: i64,
    pub row: i64,
    pub col: i64,
}

/// Upward reflection of the lowest positional digit: `n*b + a` with
/// `0 <= a < b` maps to `(n+2)*b - a`.
fn reflect0_up(v: i64, b: i64) -> i64 {
    let n = v.div_euclid(b);
    let a = v.rem_euclid(b);
    (n + 2) * b - a
}

/// The value of the `i`-th chain vertex: `v_0 = 1` and each step
/// reflects the lowest digit upward. Negative indices mirror the
/// positive ones, with an offset depending on the parity of `i`.
pub fn vertex_value(kind: VariantKind, index: i64) -> Result<i64, VariantError> {
    kind.validate()?;
    let b = kind.base() as i64;
    if index < 0 && !kind.allows_negative() {
        return Err(VariantError::MissingVertex(index));
    }
    if kind == VariantKind::QuantumGeneric {
        // Semisimple case: the vertex values are just the naturals.
        return Ok(index + 1);
    }
    let mut v = 1i64;
    for _ in 0..index.unsigned_abs() {
        v = reflect0_up(v, b);
    }
    if index >= 0 {
        Ok(v)
    } else if index % 2 == 0 {
        Ok(-v + 2)
    } else {
        Ok(-v + 2 * b - 2)
    }
}

/// Grid coordinates of an index. Rows hold `p` consecutive indices and
/// snake: even rows occupy columns `0..p-1` left to right, odd rows
/// occupy columns `1..p` right to left.
pub fn grid_position(kind: VariantKind, index: i64) -> (i64, i64) {
    match kind {
        VariantKind::G2T(p) => {
            let p = p as i64;
            let row = index.div_euclid(p);
            let c0 = index.rem_euclid(p);
            let col = if row.rem_euclid(2) == 0 { c0 } else { p - c0 };
            (row, col)
        }
        _ => (0, index),
    }
}

/// Inverse of [`grid_position`] for the grid variant.
pub fn grid_index(p: u32, row: i64, col: i64) -> Option<i64> {
    let p = p as i64;
    let span = if row.rem_euclid(2) == 0 { 0..=p - 1 } else { 1..=p };
    if !span.contains(&col) {
        return None;
    }
    let c0 = if row.rem_euclid(2) == 0 { col } else { p - col };
    Some(row * p + c0)
}

pub fn vertex(kind: VariantKind, index: i64) -> Result<GridVertex, VariantError> {
    let value = vertex_value(kind, index)?;
    let (row, col) = grid_position(kind, index);
    Ok(GridVertex { index, value, row, col })
}

/// All vertices whose value has absolute value at most `bound`,
/// ordered by index.
pub fn variant_vertices(kind: VariantKind, bound: i64) -> Result<Vec<GridVertex>, VariantError> {
    kind.validate()?;
    let mut out = Vec::new();
    // Values grow without bound in |index|, but not monotonically at
    // small indices, so scan a generous window and filter.
    let lo = if kind.allows_negative() { -(bound + 2) } else { 0 };
    for i in lo..=(bound + 2) {
        let v = vertex(kind, i)?;
        if v.value.abs() <= bound {
            out.push(v);
        }
    }
    Ok(out)
}

/// Column label of a grid vertex, or `None` at the row ends (columns 0
/// and `p`, exactly the indices divisible by `p`).
pub fn column_label(p: u32, index: i64) -> Option<i64> {
    let (_, col) = grid_position(VariantKind::G2T(p), index);
    if col == 0 || col == p as i64 {
        None
    } else {
        Some(col)
    }
}

/// Indices of column `j` within `|index| <= bound`, ascending.
pub fn column_indices(p: u32, j: i64, bound: i64) -> Vec<i64> {
    (-bound..=bound)
        .filter(|&i| column_label(p, i) == Some(j))
        .collect()
}

/// A single arrow of a variant quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariantArrow {
    pub source: i64,
    pub target: i64,
    /// Digit the arrow reflects: 0 for horizontal, 1 for vertical.
    pub digit: u8,
    /// Whether the arrow is an upward reflection.
    pub up: bool,
}

/// All arrows out of `index`.
pub fn arrows_from(kind: VariantKind, index: i64) -> Vec<VariantArrow> {
    let mut out = Vec::new();
    match kind {
        VariantKind::QuantumGeneric => {}
        VariantKind::QuantumRoot(_) => {
            out.push(VariantArrow { source: index, target: index + 1, digit: 0, up: true });
            if index >= 1 {
                out.push(VariantArrow { source: index, target: index - 1, digit: 0, up: false });
            }
        }
        VariantKind::G1T(_) => {
            out.push(VariantArrow { source: index, target: index + 1, digit: 0, up: true });
            out.push(VariantArrow { source: index, target: index - 1, digit: 0, up: false });
        }
        VariantKind::G2T(p) => {
            let (row, col) = grid_position(kind, index);
            for t in [index + 1, index - 1] {
                if grid_position(kind, t).0 == row {
                    out.push(VariantArrow {
                        source: index,
                        target: t,
                        digit: 0,
                        up: t > index,
                    });
                }
            }
            if col != 0 && col != p as i64 {
                for dr in [1i64, -1] {
                    let t = grid_index(p, row + dr, col)
                        .expect("interior columns exist in every row");
                    out.push(VariantArrow {
                        source: index,
                        target: t,
                        digit: 1,
                        up: dr > 0,
                    });
                }
            }
        }
    }
    out
}

/// Canonical basis word of a variant algebra: a grid displacement with
/// optional loop decorations.
///
/// `dx`/`dy` are column/row displacements in `{-1, 0, 1}`. `lx` marks a
/// row loop, `ly` a column loop, both anchored at the source. Row loops
/// are killed by horizontal arrows and transported by vertical ones;
/// column loops behave dually. Decorations therefore only occur with a
/// zero displacement on their own axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VWord {
    pub index: i64,
    pub dx: i8,
    pub dy: i8,
    pub lx: bool,
    pub ly: bool,
}

impl VWord {
    pub fn idempotent(index: i64) -> Self {
        VWord { index, dx: 0, dy: 0, lx: false, ly: false }
    }

    pub fn target(&self, kind: VariantKind) -> i64 {
        match kind {
            VariantKind::G2T(p) => {
                let (row, col) = grid_position(kind, self.index);
                grid_index(p, row + self.dy as i64, col + self.dx as i64)
                    .expect("canonical words end on the grid")
            }
            _ => self.index + self.dx as i64,
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.dx == 0 && self.dy == 0 && !self.lx && !self.ly
    }

    pub fn display(&self, kind: VariantKind) -> String {
        let mut factors = Vec::new();
        if self.dy == 1 {
            factors.push("U{1}".to_string());
        } else if self.dy == -1 {
            factors.push("D{1}".to_string());
        }
        if self.dx != 0 {
            let up = horizontal_is_up(kind, self.index, self.dx);
            factors.push(if up { "U{0}" } else { "D{0}" }.to_string());
        }
        if self.ly {
            factors.push("l'".to_string());
        }
        if self.lx {
            factors.push("l".to_string());
        }
        let mid = if factors.is_empty() { String::new() } else { format!(" {}", factors.join(" ")) };
        format!("e[{}]{} e[{}]", self.target(kind), mid, self.index)
    }
}

/// Whether moving one column in direction `dx` from `index` is the
/// upward reflection (index increases along even rows and decreases
/// along odd rows because the rows snake).
fn horizontal_is_up(kind: VariantKind, index: i64, dx: i8) -> bool {
    match kind {
        VariantKind::G2T(_) => {
            let (row, _) = grid_position(kind, index);
            if row.rem_euclid(2) == 0 {
                dx > 0
            } else {
                dx < 0
            }
        }
        _ => dx > 0,
    }
}

/// Morphism of a variant algebra: a linear combination of canonical
/// words sharing endpoints, over the fixed coefficient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantMorphism {
    pub kind: VariantKind,
    pub source: i64,
    pub target: i64,
    pub terms: BTreeMap<VWord, Fp>,
}

impl VariantMorphism {
    pub fn zero(kind: VariantKind, source: i64, target: i64) -> Self {
        VariantMorphism { kind, source, target, terms: BTreeMap::new() }
    }

    pub fn identity(kind: VariantKind, index: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(VWord::idempotent(index), Prime::new(VARIANT_FIELD).one());
        VariantMorphism { kind, source: index, target: index, terms }
    }

    pub fn single(kind: VariantKind, word: VWord, coeff: Fp) -> Self {
        let target = word.target(kind);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        VariantMorphism { kind, source: word.index, target, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, word: VWord, coeff: Fp) {
        let entry = self.terms.entry(word).or_insert_with(|| Prime::new(VARIANT_FIELD).zero());
        *entry = entry.add(coeff);
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }
}

/// One rewriting step: post-compose the canonical word `w` with an
/// arrow moving by `(dcol, drow)` from its target. Returns `None` when
/// the composite is zero.
fn apply_step(kind: VariantKind, w: VWord, dcol: i8, drow: i8) -> Option<VWord> {
    debug_assert!(dcol == 0 || drow == 0);
    if drow == 0 {
        if w.dy == 0 {
            // Pure row motion: a horizontal arrow kills a row loop and
            // either extends, cancels (forming a loop), or annihilates
            // (two steps the same way) the displacement.
            if w.lx {
                return None;
            }
            match w.dx + dcol {
                2 | -2 => None,
                0 if w.dx != 0 => {
                    if matches!(kind, VariantKind::QuantumRoot(_)) && w.index == 0 {
                        // Boundary relation: the loop at the start
                        // vertex of the quantum chain is zero.
                        return None;
                    }
                    if w.ly && !has_column_loop(kind, w.index) {
                        // The decorated arrow only carried a column
                        // loop at its target; closing the row loop
                        // composes that column loop with a horizontal
                        // arrow, which kills it.
                        return None;
                    }
                    Some(VWord { dx: 0, lx: true, ..w })
                }
                ndx => Some(VWord { dx: ndx, ..w }),
            }
        } else {
            // The word already moved vertically; a transported row
            // loop is killed by any horizontal arrow, otherwise the
            // motion combines into a diagonal or collapses back into a
            // transported row loop.
            if w.lx {
                return None;
            }
            match w.dx + dcol {
                2 | -2 => None,
                0 if w.dx != 0 => Some(VWord { dx: 0, lx: true, ..w }),
                ndx => Some(VWord { dx: ndx, ..w }),
            }
        }
    } else if w.dx == 0 {
        if w.ly {
            return None;
        }
        match w.dy + drow {
            2 | -2 => None,
            0 if w.dy != 0 => Some(VWord { dy: 0, ly: true, ..w }),
            ndy => Some(VWord { dy: ndy, ..w }),
        }
    } else {
        if w.ly {
            return None;
        }
        match w.dy + drow {
            2 | -2 => None,
            0 if w.dy != 0 => Some(VWord { dy: 0, ly: true, ..w }),
            ndy => Some(VWord { dy: ndy, ..w }),
        }
    }
}

/// Whether the vertex carries a column loop (interior grid column).
fn has_column_loop(kind: VariantKind, index: i64) -> bool {
    match kind {
        VariantKind::G2T(p) => column_label(p, index).is_some(),
        _ => false,
    }
}

/// Whether the vertex carries a row loop.
fn has_row_loop(kind: VariantKind, index: i64) -> bool {
    match kind {
        VariantKind::QuantumGeneric => false,
        VariantKind::QuantumRoot(_) => index >= 1,
        _ => true,
    }
}

/// Grid step `(dcol, drow)` realized by an arrow.
fn arrow_step(kind: VariantKind, a: &VariantArrow) -> (i8, i8) {
    let (r0, c0) = grid_position(kind, a.source);
    let (r1, c1) = grid_position(kind, a.target);
    ((c1 - c0) as i8, (r1 - r0) as i8)
}

/// Concrete arrow path realizing a canonical word, in application
/// order, as grid steps from the source.
fn realize(kind: VariantKind, w: &VWord) -> Vec<(i8, i8)> {
    let mut steps = Vec::new();
    let (_, col) = grid_position(kind, w.index);
    let mut tail = Vec::new();
    if w.lx {
        // Row loop: out and back along whichever horizontal neighbor
        // exists at the source.
        let right = arrows_from(kind, w.index)
            .iter()
            .any(|a| arrow_step(kind, a) == (1, 0));
        let d = if right { 1 } else { -1 };
        steps.push((d, 0));
        steps.push((-d, 0));
    }
    if w.ly {
        if has_column_loop(kind, w.index) {
            steps.push((0, 1));
            steps.push((0, -1));
        } else {
            // Decorated arrow whose source sits on a boundary column:
            // the column loop lives at the target instead.
            tail.push((0, 1));
            tail.push((0, -1));
        }
    }
    if w.dx != 0 && w.dy != 0 {
        // Diagonal: prefer the horizontal-first path when its corner
        // supports a vertical arrow, otherwise go vertical first.
        let mid_col = col + w.dx as i64;
        let p = kind.base() as i64;
        if mid_col > 0 && mid_col < p {
            steps.push((w.dx, 0));
            steps.push((0, w.dy));
        } else {
            steps.push((0, w.dy));
            steps.push((w.dx, 0));
        }
    } else if w.dx != 0 {
        steps.push((w.dx, 0));
    } else if w.dy != 0 {
        steps.push((0, w.dy));
    }
    steps.extend(tail);
    steps
}

/// Compose `f` after `g`.
pub fn variant_compose(
    f: &VariantMorphism,
    g: &VariantMorphism,
) -> Result<VariantMorphism, VariantError> {
    if f.source != g.target {
        return Err(VariantError::Mismatch { expected: g.target, found: f.source });
    }
    let kind = f.kind;
    let mut out = VariantMorphism::zero(kind, g.source, f.target);
    for (wf, cf) in &f.terms {
        let path = realize(kind, wf);
        for (wg, cg) in &g.terms {
            let mut cur = Some(*wg);
            for &(dc, dr) in &path {
                cur = cur.and_then(|w| apply_step(kind, w, dc, dr));
            }
            if let Some(w) = cur {
                out.add_scaled(w, cf.mul(*cg));
            }
        }
    }
    Ok(out)
}

/// The morphism of a single arrow.
pub fn arrow_morphism(kind: VariantKind, a: &VariantArrow) -> VariantMorphism {
    let (dc, dr) = arrow_step(kind, a);
    let word = VWord { index: a.source, dx: dc, dy: dr, lx: false, ly: false };
    VariantMorphism::single(kind, word, Prime::new(VARIANT_FIELD).one())
}

/// Normalize a word given as a sequence of arrows in application
/// order.
pub fn variant_normalize(
    kind: VariantKind,
    source: i64,
    arrows: &[VariantArrow],
) -> Result<VariantMorphism, VariantError> {
    let mut m = VariantMorphism::identity(kind, source);
    for a in arrows {
        if a.source != m.target {
            return Err(VariantError::Mismatch { expected: m.target, found: a.source });
        }
        m = variant_compose(&arrow_morphism(kind, a), &m)?;
    }
    Ok(m)
}

/// Basis of the endomorphism space at a vertex.
pub fn end_basis(kind: VariantKind, index: i64) -> Vec<VWord> {
    let mut out = vec![VWord::idempotent(index)];
    if has_row_loop(kind, index) {
        out.push(VWord { index, dx: 0, dy: 0, lx: true, ly: false });
    }
    if has_column_loop(kind, index) {
        out.push(VWord { index, dx: 0, dy: 0, lx: false, ly: true });
        out.push(VWord { index, dx: 0, dy: 0, lx: true, ly: true });
    }
    out
}

/// Basis words with source `index`, grouped towards every reachable
/// target.
pub fn words_from(kind: VariantKind, index: i64) -> Vec<VWord> {
    let mut out = end_basis(kind, index);
    for a in arrows_from(kind, index) {
        let (dc, dr) = arrow_step(kind, &a);
        out.push(VWord { index, dx: dc, dy: dr, lx: false, ly: false });
        if dr == 0 {
            if has_column_loop(kind, index) || has_column_loop(kind, a.target) {
                // Column-loop-decorated horizontal arrow; the loop
                // sits at whichever endpoint supports it.
                out.push(VWord { index, dx: dc, dy: 0, lx: false, ly: true });
            }
        } else {
            // Row loops exist everywhere on the grid, so every
            // vertical arrow has a decorated companion.
            out.push(VWord { index, dx: 0, dy: dr, lx: true, ly: false });
        }
    }
    if kind.is_grid() {
        let p = kind.base();
        let (row, col) = grid_position(kind, index);
        for dx in [-1i8, 1] {
            for dy in [-1i8, 1] {
                if grid_index(p, row + dy as i64, col + dx as i64).is_some() {
                    out.push(VWord { index, dx, dy, lx: false, ly: false });
                }
            }
        }
    }
    out
}

/// Ordered index of all basis words with both endpoints in the window.
pub struct VariantUnknowns {
    pub kind: VariantKind,
    pub columns: Vec<VWord>,
    pub lookup: BTreeMap<VWord, usize>,
}

impl VariantUnknowns {
    pub fn for_window(kind: VariantKind, window: &[i64]) -> Self {
        let inside = |i: i64| window.contains(&i);
        let mut columns = Vec::new();
        for &i in window {
            for w in words_from(kind, i) {
                if inside(w.target(kind)) {
                    columns.push(w);
                }
            }
        }
        columns.sort();
        columns.dedup();
        let lookup = columns.iter().enumerate().map(|(n, w)| (*w, n)).collect();
        VariantUnknowns { kind, columns, lookup }
    }
}

/// Result of the variant commutant solver.
pub struct VariantSolverReport {
    pub unknowns: VariantUnknowns,
    pub rank: usize,
    pub basis: Vec<Vec<u32>>,
    pub interior_basis: Vec<Vec<u32>>,
}

/// Zero out all coordinates whose word touches a vertex outside the
/// interior.
pub fn variant_restrict(
    row: &[u32],
    unknowns: &VariantUnknowns,
    interior: &[i64],
) -> Vec<u32> {
    row.iter()
        .enumerate()
        .map(|(n, &c)| {
            let w = &unknowns.columns[n];
            if interior.contains(&w.index) && interior.contains(&w.target(unknowns.kind)) {
                c
            } else {
                0
            }
        })
        .collect()
}

/// Solve `[z, g] = 0` for every arrow `g` inside the window, then
/// restrict the solution space to the interior sub-window.
pub fn variant_solve(
    kind: VariantKind,
    window: &[i64],
    interior: &[i64],
) -> Result<VariantSolverReport, VariantError> {
    kind.validate()?;
    let p = Prime::new(VARIANT_FIELD);
    let unknowns = VariantUnknowns::for_window(kind, window);
    let n = unknowns.columns.len();
    let mut ech = Echelon::new(n, p);
    for &i in window {
        for a in arrows_from(kind, i) {
            if !window.contains(&a.target) {
                continue;
            }
            let gm = arrow_morphism(kind, &a);
            let mut rows: BTreeMap<VWord, Vec<u32>> = BTreeMap::new();
            for (idx, b) in unknowns.columns.iter().enumerate() {
                let bm = VariantMorphism::single(kind, *b, p.one());
                if b.index == a.target {
                    let prod = variant_compose(&bm, &gm)?;
                    for (w, c) in &prod.terms {
                        let e = rows.entry(*w).or_insert_with(|| vec![0; n]);
                        e[idx] = (e[idx] + c.value()) % p.get();
                    }
                }
                if b.target(kind) == a.source {
                    let prod = variant_compose(&gm, &bm)?;
                    for (w, c) in &prod.terms {
                        let e = rows.entry(*w).or_insert_with(|| vec![0; n]);
                        e[idx] = (e[idx] + p.get() - c.value()) % p.get();
                    }
                }
            }
            for (_, row) in rows {
                ech.insert(row);
            }
        }
    }
    let rank = ech.rank();
    let basis = ech.nullspace();
    let mut interior_ech = Echelon::new(n, p);
    for b in &basis {
        interior_ech.insert(variant_restrict(b, &unknowns, interior));
    }
    let interior_basis = interior_ech.row_vectors();
    Ok(VariantSolverReport { unknowns, rank, basis, interior_basis })
}

/// The central families predicted for each variant, as coefficient
/// vectors over the window's unknowns:
///
/// * generic: every idempotent separately;
/// * chains: the unit plus each loop separately;
/// * grid: the unit, the row loop at each row-end vertex, the
///   double loop elsewhere, and the row loops summed along each
///   column.
pub fn predicted_center(
    kind: VariantKind,
    window: &[i64],
    unknowns: &VariantUnknowns,
) -> Vec<Vec<u32>> {
    let n = unknowns.columns.len();
    let mut out = Vec::new();
    let set = |words: &[VWord]| {
        let mut v = vec![0u32; n];
        for w in words {
            v[unknowns.lookup[w]] = 1;
        }
        v
    };
    match kind {
        VariantKind::QuantumGeneric => {
            for &i in window {
                out.push(set(&[VWord::idempotent(i)]));
            }
        }
        VariantKind::QuantumRoot(_) | VariantKind::G1T(_) => {
            let unit: Vec<VWord> = window.iter().map(|&i| VWord::idempotent(i)).collect();
            out.push(set(&unit));
            for &i in window {
                if has_row_loop(kind, i) {
                    out.push(set(&[VWord { index: i, dx: 0, dy: 0, lx: true, ly: false }]));
                }
            }
        }
        VariantKind::G2T(p) => {
            let unit: Vec<VWord> = window.iter().map(|&i| VWord::idempotent(i)).collect();
            out.push(set(&unit));
            for &i in window {
                if has_column_loop(kind, i) {
                    out.push(set(&[VWord { index: i, dx: 0, dy: 0, lx: true, ly: true }]));
                } else {
                    out.push(set(&[VWord { index: i, dx: 0, dy: 0, lx: true, ly: false }]));
                }
            }
            for j in 1..p as i64 {
                let col: Vec<VWord> = window
                    .iter()
                    .filter(|&&i| column_label(p, i) == Some(j))
                    .map(|&i| VWord { index: i, dx: 0, dy: 0, lx: true, ly: false })
                    .collect();
                if !col.is_empty() {
                    out.push(set(&col));
                }
            }
        }
    }
    out
}

/// Compare the solver's interior basis against the predicted central
/// families restricted to the interior.
pub fn variant_center_matches(
    kind: VariantKind,
    window: &[i64],
    interior: &[i64],
    report: &VariantSolverReport,
) -> bool {
    let predicted = predicted_center(kind, window, &report.unknowns);
    let restricted: Vec<Vec<u32>> = predicted
        .iter()
        .map(|v| variant_restrict(v, &report.unknowns, interior))
        .collect();
    spans_equal(
        &report.interior_basis,
        &restricted,
        report.unknowns.columns.len(),
        Prime::new(VARIANT_FIELD),
    )
}

/// Which of `v` or `v - 1` must be divisible by the base for a vertex
/// to belong to the degenerate summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SteinbergConvention {
    /// The vertex itself is divisible by the base (default reading).
    #[default]
    Vertex,
    /// The displayed weight `v - 1` is divisible by the base.
    Weight,
}

pub fn is_steinberg(v: u64, base: u32, convention: SteinbergConvention) -> bool {
    match convention {
        SteinbergConvention::Vertex => v % base as u64 == 0,
        SteinbergConvention::Weight => (v - 1) % base as u64 == 0,
    }
}

/// One tensor factor: the vertex `index` (of weight `index - 1`)
/// twisted `twist` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DonkinFactor {
    pub index: u64,
    pub twist: u32,
}

impl DonkinFactor {
    pub fn weight(&self) -> u64 {
        self.index - 1
    }
}

/// Tensor-product factorization of a vertex into one elementary factor
/// per digit, twists strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DonkinFactorization {
    pub p: Prime,
    pub v: u64,
    pub factors: Vec<DonkinFactor>,
}

/// Factor the vertex digit by digit: the leading digit `a_j`
/// contributes the factor `a_j` at twist `j`, and every lower digit
/// `a_i` contributes `a_i + p` at twist `i`.
pub fn donkin_factorize(v: u64, p: Prime) -> DonkinFactorization {
    assert!(v >= 1, "vertices start at 1");
    let d = PadicDigits::expand(v, p);
    let j = d.leading_index();
    let mut factors = vec![DonkinFactor { index: d.digit(j) as u64, twist: j }];
    for i in (0..j).rev() {
        factors.push(DonkinFactor {
            index: d.digit(i) as u64 + p.get() as u64,
            twist: i,
        });
    }
    DonkinFactorization { p, v, factors }
}

impl DonkinFactorization {
    /// Drop trivial factors of weight zero.
    pub fn without_trivial(&self) -> Vec<DonkinFactor> {
        self.factors.iter().copied().filter(|f| f.weight() != 0).collect()
    }

    /// Drop the factors contributed by zero digits (weight `p - 1`);
    /// the leading factor is always kept.
    pub fn without_steinberg(&self) -> Vec<DonkinFactor> {
        let lead = self.factors[0];
        std::iter::once(lead)
            .chain(
                self.factors[1..]
                    .iter()
                    .copied()
                    .filter(|f| f.index != self.p.get() as u64),
            )
            .collect()
    }

    /// The factor weights reassemble the weight of `v` positionally.
    pub fn reconstructs(&self) -> bool {
        let p = self.p.get() as u128;
        let total: u128 = self
            .factors
            .iter()
            .map(|f| f.weight() as u128 * p.pow(f.twist))
            .sum();
        total == (self.v - 1) as u128
    }

    pub fn display(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("T({})^({})", f.weight(), f.twist))
            .collect::<Vec<_>>()
            .join(" ⊗ ")
    }
}

/// DOT rendering of a variant quiver window.
pub fn variant_dot(kind: VariantKind, window: &[i64], weights: bool) -> String {
    let mut out = String::from("digraph variant {\n  rankdir=LR;\n");
    for &i in window {
        let v = vertex(kind, i).expect("window vertices exist");
        let label = if weights { v.value - 1 } else { v.value };
        out.push_str(&format!("  \"{i}\" [label=\"{label}\"];\n"));
    }
    for &i in window {
        for a in arrows_from(kind, i) {
            if !window.contains(&a.target) {
                continue;
            }
            let name = format!("{}{{{}}}", if a.up { "U" } else { "D" }, a.digit);
            out.push_str(&format!("  \"{}\" -> \"{}\" [label=\"{name}\"];\n", a.source, a.target));
        }
    }
    out.push_str("}\n");
    out
}

/// JSON rendering of a variant quiver window, with a `variant`
/// discriminator field.
pub fn variant_json(kind: VariantKind, window: &[i64], weights: bool) -> serde_json::Value {
    let vertices: Vec<_> = window
        .iter()
        .map(|&i| {
            let v = vertex(kind, i).expect("window vertices exist");
            json!({
                "index": v.index,
                "value": if weights { v.value - 1 } else { v.value },
                "row": v.row,
                "col": v.col,
            })
        })
        .collect();
    let mut arrows = Vec::new();
    for &i in window {
        for a in arrows_from(kind, i) {
            if window.contains(&a.target) {
                arrows.push(json!({
                    "source": a.source,
                    "target": a.target,
                    "digit": a.digit,
                    "up": a.up,
                }));
            }
        }
    }
    json!({
        "variant": kind.name(),
        "base": kind.base(),
        "vertices": vertices,
        "arrows": arrows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> VariantKind {
        VariantKind::QuantumRoot(5)
    }

    fn g2t5() -> VariantKind {
        VariantKind::G2T(5)
    }

    fn field() -> Prime {
        Prime::new(VARIANT_FIELD)
    }

    fn loop_at(kind: VariantKind, i: i64) -> VariantMorphism {
        VariantMorphism::single(
            kind,
            VWord { index: i, dx: 0, dy: 0, lx: true, ly: false },
            field().one(),
        )
    }

    #[test]
    fn chain_values_match_the_examples() {
        let vals: Vec<i64> = (0..5).map(|i| vertex_value(q5(), i).unwrap()).collect();
        assert_eq!(vals, vec![1, 9, 11, 19, 21]);
        assert_eq!(vertex_value(VariantKind::G1T(5), -1).unwrap(), -1);
        assert_eq!(vertex_value(g2t5(), 1).unwrap(), 9);
        assert_eq!(vertex_value(g2t5(), 9).unwrap(), 49);
        assert_eq!(vertex_value(q5(), -1), Err(VariantError::MissingVertex(-1)));
    }

    #[test]
    fn grid_layout_snakes() {
        assert_eq!(grid_position(g2t5(), 9), (1, 1));
        assert_eq!(grid_position(g2t5(), 5), (1, 5));
        assert_eq!(grid_position(g2t5(), -1), (-1, 1));
        assert_eq!(grid_position(g2t5(), -10), (-2, 0));
        assert_eq!(grid_index(5, 1, 1), Some(9));
        assert_eq!(grid_index(5, 1, 0), None);
        assert_eq!(column_indices(5, 2, 10), vec![-8, -2, 2, 8]);
    }

    #[test]
    fn chain_zigzag_relations() {
        for kind in [q5(), VariantKind::G1T(5)] {
            let lo = if kind == q5() { 0 } else { -8 };
            for i in lo..8i64 {
                let up = arrow_morphism(
                    kind,
                    &VariantArrow { source: i, target: i + 1, digit: 0, up: true },
                );
                let down = arrow_morphism(
                    kind,
                    &VariantArrow { source: i + 1, target: i, digit: 0, up: false },
                );
                let du = variant_compose(&down, &up).unwrap();
                if kind == q5() && i == 0 {
                    assert!(du.is_zero(), "boundary loop must vanish");
                } else {
                    assert!(!du.is_zero());
                    // The other loop expression at i + 1 agrees.
                    let up2 = arrow_morphism(
                        kind,
                        &VariantArrow { source: i, target: i + 1, digit: 0, up: true },
                    );
                    let ud = variant_compose(&up2, &down).unwrap();
                    let du2 = variant_compose(
                        &arrow_morphism(
                            kind,
                            &VariantArrow { source: i + 2, target: i + 1, digit: 0, up: false },
                        ),
                        &arrow_morphism(
                            kind,
                            &VariantArrow { source: i + 1, target: i + 2, digit: 0, up: true },
                        ),
                    )
                    .unwrap();
                    assert_eq!(ud, du2, "the two loops at {} agree", i + 1);
                }
                // Two steps the same way vanish.
                let uu = variant_compose(
                    &arrow_morphism(
                        kind,
                        &VariantArrow { source: i + 1, target: i + 2, digit: 0, up: true },
                    ),
                    &up,
                )
                .unwrap();
                assert!(uu.is_zero());
            }
        }
    }

    #[test]
    fn grid_end_dimensions() {
        for i in -60..=60i64 {
            let expect = if i.rem_euclid(5) == 0 { 2 } else { 4 };
            assert_eq!(end_basis(g2t5(), i).len(), expect, "End dim at {i}");
        }
    }

    #[test]
    fn complete_squares_commute_and_corners_survive() {
        let kind = g2t5();
        for x in -30..=30i64 {
            for a1 in arrows_from(kind, x) {
                for a2 in arrows_from(kind, a1.target) {
                    if a2.digit == a1.digit {
                        continue;
                    }
                    let y = a2.target;
                    let first = variant_normalize(kind, x, &[a1, a2]).unwrap();
                    // Find the other 2-path through the square.
                    let mut alt = None;
                    for b1 in arrows_from(kind, x) {
                        if b1.target == a1.target || b1.digit == a1.digit {
                            continue;
                        }
                        for b2 in arrows_from(kind, b1.target) {
                            if b2.target == y {
                                alt = Some((b1, b2));
                            }
                        }
                    }
                    match alt {
                        Some((b1, b2)) => {
                            let second = variant_normalize(kind, x, &[b1, b2]).unwrap();
                            assert_eq!(first, second, "square at {x} via {y}");
                        }
                        None => {
                            assert!(!first.is_zero(), "corner path {x} -> {y} must survive");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn corner_at_the_origin_is_nonzero() {
        let kind = g2t5();
        let r = VariantArrow { source: 0, target: 1, digit: 0, up: true };
        let u = VariantArrow { source: 1, target: 9, digit: 1, up: true };
        let m = variant_normalize(kind, 0, &[r, u]).unwrap();
        assert!(!m.is_zero());
        assert_eq!(m.target, 9);
    }

    #[test]
    fn loops_transport_and_annihilate_on_the_grid() {
        let kind = g2t5();
        for i in -20..=20i64 {
            for a in arrows_from(kind, i) {
                let g = arrow_morphism(kind, &a);
                let li = loop_at(kind, i);
                let lt = loop_at(kind, a.target);
                let gl = variant_compose(&g, &li).unwrap();
                let lg = variant_compose(&lt, &g).unwrap();
                assert_eq!(gl, lg, "row loop transport along {i} -> {}", a.target);
                if a.digit == 0 {
                    assert!(gl.is_zero(), "horizontal arrows kill row loops at {i}");
                } else {
                    assert!(!gl.is_zero(), "vertical arrows transport row loops at {i}");
                }
            }
        }
    }

    #[test]
    fn realize_reproduces_canonical_words() {
        let kind = g2t5();
        for i in -12..=12i64 {
            for w in words_from(kind, i) {
                let m = VariantMorphism::single(kind, w, field().one());
                let id = VariantMorphism::identity(kind, i);
                let again = variant_compose(&m, &id).unwrap();
                assert_eq!(again, m, "realize/apply round trip for {w:?}");
            }
        }
    }

    #[test]
    fn variant_associativity_fuzz() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in [q5(), VariantKind::G1T(3), g2t5(), VariantKind::G2T(3)] {
            for _ in 0..400 {
                let start = if kind == q5() {
                    rng.gen_range(0..12i64)
                } else {
                    rng.gen_range(-12..12i64)
                };
                let mut arrows = Vec::new();
                let mut at = start;
                for _ in 0..rng.gen_range(1..7usize) {
                    let outs = arrows_from(kind, at);
                    if outs.is_empty() {
                        break;
                    }
                    let a = outs[rng.gen_range(0..outs.len())];
                    at = a.target;
                    arrows.push(a);
                }
                if arrows.len() < 2 {
                    continue;
                }
                let whole = variant_normalize(kind, start, &arrows).unwrap();
                let cut = rng.gen_range(1..arrows.len());
                let left = variant_normalize(kind, start, &arrows[..cut]).unwrap();
                let right = variant_normalize(kind, left.target, &arrows[cut..]).unwrap();
                let glued = variant_compose(&right, &left).unwrap();
                assert_eq!(whole, glued, "split at {cut} diverges for {kind:?}");
            }
        }
    }

    #[test]
    fn chain_centers_match_predictions() {
        for kind in [VariantKind::QuantumGeneric, q5(), VariantKind::G1T(5)] {
            let window: Vec<i64> = if kind == VariantKind::G1T(5) {
                (-10..=10).collect()
            } else {
                (0..=20).collect()
            };
            let interior: Vec<i64> = if kind == VariantKind::G1T(5) {
                (-6..=6).collect()
            } else {
                (0..=14).collect()
            };
            let report = variant_solve(kind, &window, &interior).unwrap();
            assert!(
                variant_center_matches(kind, &window, &interior, &report),
                "center mismatch for {kind:?}"
            );
        }
    }

    #[test]
    fn grid_center_matches_predictions() {
        let kind = g2t5();
        // Rows -2..=2 of the grid, a 5-row window.
        let window: Vec<i64> = (-10..=14).collect();
        let interior: Vec<i64> = (-5..=9).collect();
        let report = variant_solve(kind, &window, &interior).unwrap();
        assert!(variant_center_matches(kind, &window, &interior, &report));
    }

    #[test]
    fn central_family_products_vanish() {
        let kind = g2t5();
        let p = field();
        let mut family: Vec<VariantMorphism> = Vec::new();
        for i in -10..=14i64 {
            if has_column_loop(kind, i) {
                family.push(VariantMorphism::single(
                    kind,
                    VWord { index: i, dx: 0, dy: 0, lx: true, ly: true },
                    p.one(),
                ));
            } else {
                family.push(loop_at(kind, i));
            }
        }
        // Column sums only share support within a column; pointwise
        // loop products already cover them, so check loops pairwise.
        for a in &family {
            for b in &family {
                if a.source == b.source {
                    let prod = variant_compose(a, b).unwrap();
                    assert!(prod.is_zero(), "product at {} must vanish", a.source);
                }
            }
        }
    }

    #[test]
    fn donkin_examples() {
        let p = Prime::new(7);
        // v' = [1,1,6,5,0,5,6] in base 7.
        let vp = PadicDigits::parse("[1,1,6,5,0,5,6]_7").unwrap().value_u64();
        let f = donkin_factorize(vp, p);
        let weights: Vec<(u64, u32)> = f.factors.iter().map(|x| (x.weight(), x.twist)).collect();
        assert_eq!(
            weights,
            vec![(0, 6), (7, 5), (12, 4), (11, 3), (6, 2), (11, 1), (12, 0)]
        );
        assert!(f.reconstructs());
        // Dropping the trivial leading factor matches the printed
        // six-term factorization.
        let displayed: Vec<u64> = f.without_trivial().iter().map(|x| x.weight()).collect();
        assert_eq!(displayed, vec![7, 12, 11, 6, 11, 12]);

        // w = [1,4,1,6,5,0,5,6]: the two leading digits factor off as
        // T(0) at twist 7 and T(10) at twist 6.
        let w = PadicDigits::parse("[1,4,1,6,5,0,5,6]_7").unwrap().value_u64();
        let g = donkin_factorize(w, p);
        assert_eq!(g.factors[0], DonkinFactor { index: 1, twist: 7 });
        assert_eq!(g.factors[1], DonkinFactor { index: 11, twist: 6 });
        assert_eq!(g.factors[1].weight(), 10);
        assert!(g.reconstructs());
        // Below the top two twists, w factors exactly like v'.
        assert_eq!(g.factors[2..], f.factors[1..]);

        // An eve has a single nontrivial factor once the zero digits
        // (Steinberg factors, weight p - 1) are pruned.
        let eve = donkin_factorize(3 * 7 * 7 * 7, p);
        let pruned = eve.without_steinberg();
        assert_eq!(pruned, vec![DonkinFactor { index: 3, twist: 3 }]);
        assert!(eve
            .factors
            .iter()
            .skip(1)
            .all(|x| x.weight() == 6));
    }

    #[test]
    fn steinberg_conventions() {
        assert!(is_steinberg(10, 5, SteinbergConvention::Vertex));
        assert!(!is_steinberg(10, 5, SteinbergConvention::Weight));
        assert!(is_steinberg(11, 5, SteinbergConvention::Weight));
        assert_eq!(SteinbergConvention::default(), SteinbergConvention::Vertex);
    }

    #[test]
    fn exports_carry_the_discriminator() {
        let window: Vec<i64> = (0..=4).collect();
        let dot = variant_dot(q5(), &window, false);
        assert!(dot.contains("digraph"));
        assert!(dot.contains("U{0}"));
        let js = variant_json(q5(), &window, true);
        assert_eq!(js["variant"], "quantum");
        assert_eq!(js["vertices"][1]["value"], 8);
    }
}
