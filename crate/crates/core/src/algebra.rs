//! Morphisms of the quiver algebra and the rewriting engine.
//!
//! Morphisms between vertices are finite `F_p`-linear combinations of
//! *basis words*: a chain of downward reflections along strictly
//! decreasing minimal stretches followed by a chain of upward
//! reflections along strictly increasing minimal stretches.  Composition
//! of arbitrary words is normalised onto this basis by an oriented
//! rewriting system:
//!
//! * containment of consecutive equal-direction stretches kills a word;
//! * distant factors commute;
//! * adjacent mixed factors merge into a longer stretch;
//! * adjacent out-of-order factors of equal direction exchange into a
//!   mixed pair and pick up an `H` scalar;
//! * single-point overlaps of equal direction split off a singleton
//!   excursion;
//! * a down after the same up resolves through the zigzag relation into
//!   hull loops scaled by `G` and `F`.
//!
//! The engine pushes one generator at a time onto an already normalised
//! morphism, memoising each (generator, basis word) step.

use crate::admissible::{
    down_hull, is_down_admissible, is_up_admissible, minimal_down_stretch_at,
    minimal_down_stretches, minimal_up_stretch_at, minimal_up_stretches, reflect_down,
    reflect_up, AdmissibleSet, Stretch,
};
use crate::arith::{scale_f, scale_g, scale_h, Fp, Prime};
use crate::padic::PadicDigits;
use crate::quiver::{Generator, GeneratorKind};
use serde_json::json;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Errors surfaced by normalisation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("rewriting exceeded the step budget of {budget} steps")]
    BudgetExceeded { budget: u64 },
    #[error("composition endpoint mismatch: {left} after {right}")]
    EndpointMismatch { left: u64, right: u64 },
}

/// A basis word: downward reflections along strictly decreasing minimal
/// stretches, then upward reflections along strictly increasing minimal
/// stretches, all anchored at `source`.
///
/// Both chains are stored in application order: `downs[0]` (the largest
/// stretch) acts first, `ups[0]` (the smallest) acts first among the
/// ups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisWord {
    pub source: u64,
    pub downs: Vec<Stretch>,
    pub ups: Vec<Stretch>,
}

impl BasisWord {
    /// The idempotent at `v`.
    pub fn idempotent(v: u64) -> Self {
        BasisWord {
            source: v,
            downs: Vec::new(),
            ups: Vec::new(),
        }
    }

    /// The running vertices: source, then each intermediate vertex after
    /// every reflection.  The last entry is the target.
    pub fn chain(&self, p: Prime) -> Vec<u64> {
        let mut out = Vec::with_capacity(1 + self.downs.len() + self.ups.len());
        let mut v = self.source;
        out.push(v);
        for &s in &self.downs {
            v = reflect_down(v, &AdmissibleSet::from_stretch(s), p);
            out.push(v);
        }
        for &s in &self.ups {
            v = reflect_up(v, &AdmissibleSet::from_stretch(s), p);
            out.push(v);
        }
        out
    }

    /// The target vertex.
    pub fn target(&self, p: Prime) -> u64 {
        *self.chain(p).last().unwrap()
    }

    /// True when the word is an idempotent.
    pub fn is_idempotent(&self) -> bool {
        self.downs.is_empty() && self.ups.is_empty()
    }

    /// Checks the basis invariants: strict ordering of both chains and
    /// minimality of every stretch at its application vertex.
    pub fn is_basis_form(&self, p: Prime) -> bool {
        let mut v = self.source;
        let mut prev: Option<Stretch> = None;
        for &s in &self.downs {
            if let Some(q) = prev {
                // Application order is strictly decreasing.
                if !(s.hi() < q.lo()) {
                    return false;
                }
            }
            if minimal_down_stretch_at(v, s.lo(), p) != Some(s) {
                return false;
            }
            v = reflect_down(v, &AdmissibleSet::from_stretch(s), p);
            prev = Some(s);
        }
        prev = None;
        for &s in &self.ups {
            if let Some(q) = prev {
                // Application order is strictly increasing.
                if !(s.lo() > q.hi()) {
                    return false;
                }
            }
            if minimal_up_stretch_at(v, s.lo(), p) != Some(s) {
                return false;
            }
            v = reflect_up(v, &AdmissibleSet::from_stretch(s), p);
            prev = Some(s);
        }
        true
    }

    /// Renders in the textual grammar, rightmost factor first:
    /// `e[target] U{..} .. D{..} e[source]`.
    pub fn display(&self, p: Prime) -> String {
        let mut out = format!("e[{}]", self.target(p));
        for s in self.ups.iter().rev() {
            out.push_str(&format!(" U{}", AdmissibleSet::from_stretch(*s)));
        }
        for s in self.downs.iter().rev() {
            out.push_str(&format!(" D{}", AdmissibleSet::from_stretch(*s)));
        }
        out.push_str(&format!(" e[{}]", self.source));
        out
    }
}

/// An `F_p`-linear combination of basis words sharing source and target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub p: Prime,
    pub source: u64,
    pub target: u64,
    /// Basis words with nonzero coefficients, in canonical order.
    pub terms: BTreeMap<BasisWord, Fp>,
}

impl Morphism {
    /// The zero morphism between the given vertices.
    pub fn zero(p: Prime, source: u64, target: u64) -> Self {
        Morphism {
            p,
            source,
            target,
            terms: BTreeMap::new(),
        }
    }

    /// The identity at `v`.
    pub fn identity(p: Prime, v: u64) -> Self {
        Morphism::single(p, BasisWord::idempotent(v), p.one())
    }

    /// A single scaled basis word.
    pub fn single(p: Prime, word: BasisWord, coeff: Fp) -> Self {
        let source = word.source;
        let target = word.target(p);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        Morphism {
            p,
            source,
            target,
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * rhs` into `self`; endpoints must agree.
    pub fn add_scaled(&mut self, rhs: &Morphism, coeff: Fp) {
        assert_eq!(self.source, rhs.source, "source mismatch in sum");
        assert_eq!(self.target, rhs.target, "target mismatch in sum");
        if coeff.is_zero() {
            return;
        }
        for (w, c) in &rhs.terms {
            let newc = match self.terms.get(w) {
                Some(old) => old.add(c.mul(coeff)),
                None => c.mul(coeff),
            };
            if newc.is_zero() {
                self.terms.remove(w);
            } else {
                self.terms.insert(w.clone(), newc);
            }
        }
    }

    /// Scales in place.
    pub fn scale(&mut self, coeff: Fp) {
        if coeff.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c = c.mul(coeff);
        }
    }

    /// Drops every word whose running chain leaves `1..=bound`.
    pub fn truncate(&self, bound: u64) -> Morphism {
        let mut out = Morphism::zero(self.p, self.source, self.target);
        out.terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.chain(self.p).iter().all(|&v| v <= bound))
            .map(|(w, c)| (w.clone(), *c))
            .collect();
        out
    }

    /// Serialises with deterministic term order.  Stretches appear as
    /// `[lo, hi]` pairs in application order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(w, c)| {
                json!({
                    "downs": w.downs.iter().map(|s| json!([s.lo(), s.hi()])).collect::<Vec<_>>(),
                    "ups": w.ups.iter().map(|s| json!([s.lo(), s.hi()])).collect::<Vec<_>>(),
                    "coeff": c.value(),
                })
            })
            .collect();
        json!({
            "p": self.p.get(),
            "source": self.source,
            "target": self.target,
            "terms": terms,
        })
    }

    /// Parses the JSON produced by [`Morphism::to_json`].
    pub fn from_json(value: &serde_json::Value) -> Option<Morphism> {
        let p = Prime::new(value.get("p")?.as_u64()? as u32);
        let source = value.get("source")?.as_u64()?;
        let target = value.get("target")?.as_u64()?;
        let mut m = Morphism::zero(p, source, target);
        let parse_stretches = |v: &serde_json::Value| -> Option<Vec<Stretch>> {
            v.as_array()?
                .iter()
                .map(|pair| {
                    let a = pair.as_array()?;
                    Some(Stretch::new(a[0].as_u64()? as u32, a[1].as_u64()? as u32))
                })
                .collect()
        };
        for t in value.get("terms")?.as_array()? {
            let word = BasisWord {
                source,
                downs: parse_stretches(t.get("downs")?)?,
                ups: parse_stretches(t.get("ups")?)?,
            };
            let coeff = p.reduce(t.get("coeff")?.as_u64()? as i64);
            m.add_scaled(&Morphism::single(p, word, p.one()), coeff);
        }
        Some(m)
    }
}

/// A word of generalized reflection factors before normalisation,
/// anchored at `source`; `factors[0]` acts first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawWord {
    pub source: u64,
    pub factors: Vec<(GeneratorKind, AdmissibleSet)>,
}

/// Rule-application strategy for normalisation; both must agree on every
/// input (empirical confluence).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Left fold: push factors one by one onto a normalised prefix.
    Fold,
    /// Divide and conquer: normalise both halves, then compose them.
    Split,
}

/// Pins the target of a vanished morphism to its source.  A composite
/// that collapses to zero has no meaningful endpoint beyond the vertex
/// it started from, and different evaluation orders may otherwise
/// record different nominal targets for the same zero result.
fn settle(mut m: Morphism) -> Morphism {
    if m.terms.is_empty() {
        m.target = m.source;
    }
    m
}

fn default_memo_cap() -> usize {
    std::env::var("TILTQUIVER_MEMO_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1 << 20)
}

/// The rewriting engine.  Owns a memo table of single-generator pushes;
/// use one instance per task (it is not shareable across threads).
pub struct Rewriter {
    p: Prime,
    memo: HashMap<(GeneratorKind, Stretch, BasisWord), Morphism>,
    memo_cap: usize,
    steps: u64,
    budget: u64,
}

type Rw<T> = Result<T, RewriteError>;

impl Rewriter {
    pub fn new(p: Prime) -> Self {
        Rewriter {
            p,
            memo: HashMap::new(),
            memo_cap: default_memo_cap(),
            steps: 0,
            budget: 1_000_000,
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Steps consumed so far (one per single-generator push).
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Resets the step counter (the budget applies per top-level call
    /// sequence between resets).
    pub fn reset_steps(&mut self) {
        self.steps = 0;
    }

    fn tick(&mut self) -> Rw<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(RewriteError::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// The morphism of a single generator arrow.
    pub fn generator_morphism(&self, g: &Generator) -> Morphism {
        let word = match g.kind {
            GeneratorKind::Down => BasisWord {
                source: g.source,
                downs: vec![g.stretch],
                ups: Vec::new(),
            },
            GeneratorKind::Up => BasisWord {
                source: g.source,
                downs: Vec::new(),
                ups: vec![g.stretch],
            },
        };
        Morphism::single(self.p, word, self.p.one())
    }

    /// Generalized downward factor applied to the identity:
    /// the composite of minimal downs partitioning `set`.
    pub fn generalized_down(&mut self, set: &AdmissibleSet, v: u64) -> Rw<Morphism> {
        let id = Morphism::identity(self.p, v);
        self.push_general_down(set, &id)
    }

    /// Generalized upward factor applied to the identity.
    pub fn generalized_up(&mut self, set: &AdmissibleSet, v: u64) -> Rw<Morphism> {
        let id = Morphism::identity(self.p, v);
        self.push_general_up(set, &id)
    }

    /// Composition `f` after `g` (apply `g` first).
    pub fn compose(&mut self, f: &Morphism, g: &Morphism) -> Rw<Morphism> {
        if f.source != g.target {
            return Err(RewriteError::EndpointMismatch {
                left: f.source,
                right: g.target,
            });
        }
        let mut out = Morphism::zero(self.p, g.source, f.target);
        for (bf, cf) in &f.terms {
            for (bg, cg) in &g.terms {
                let m = self.compose_words(bf, bg)?;
                out.add_scaled(&m, cf.mul(*cg));
            }
        }
        Ok(out)
    }

    fn compose_words(&mut self, bf: &BasisWord, bg: &BasisWord) -> Rw<Morphism> {
        let mut m = Morphism::single(self.p, bg.clone(), self.p.one());
        for &s in &bf.downs {
            m = self.push_general_down(&AdmissibleSet::from_stretch(s), &m)?;
        }
        for &s in &bf.ups {
            m = self.push_general_up(&AdmissibleSet::from_stretch(s), &m)?;
        }
        Ok(m)
    }

    /// Normalises a raw word with the default strategy.
    pub fn normalize(&mut self, raw: &RawWord) -> Rw<Morphism> {
        self.normalize_with(raw, Strategy::Fold)
    }

    /// Normalises a raw word.  A factor that is not admissible at its
    /// application vertex yields the zero morphism.
    pub fn normalize_with(&mut self, raw: &RawWord, strategy: Strategy) -> Rw<Morphism> {
        match strategy {
            Strategy::Fold => {
                let mut m = Morphism::identity(self.p, raw.source);
                for (kind, set) in &raw.factors {
                    m = self.apply_factor(*kind, set, &m)?;
                    if m.is_zero() {
                        return Ok(settle(m));
                    }
                }
                Ok(m)
            }
            Strategy::Split => self.normalize_split(raw),
        }
    }

    fn normalize_split(&mut self, raw: &RawWord) -> Rw<Morphism> {
        if raw.factors.len() <= 1 {
            return self.normalize_with(raw, Strategy::Fold);
        }
        let mid = raw.factors.len() / 2;
        let first = RawWord {
            source: raw.source,
            factors: raw.factors[..mid].to_vec(),
        };
        let low = self.normalize_split(&first)?;
        if low.is_zero() {
            return Ok(Morphism::zero(self.p, raw.source, raw.source));
        }
        let second = RawWord {
            source: low.target,
            factors: raw.factors[mid..].to_vec(),
        };
        let high = self.normalize_split(&second)?;
        Ok(settle(self.compose(&high, &low)?))
    }

    /// Applies one generalized factor to a morphism, returning zero when
    /// the set is not admissible at the current target.
    pub fn apply_factor(
        &mut self,
        kind: GeneratorKind,
        set: &AdmissibleSet,
        m: &Morphism,
    ) -> Rw<Morphism> {
        let v = m.target;
        let admissible = match kind {
            GeneratorKind::Down => is_down_admissible(set, v, self.p),
            GeneratorKind::Up => is_up_admissible(set, v, self.p),
        };
        if !admissible {
            return Ok(Morphism::zero(self.p, m.source, m.source));
        }
        match kind {
            GeneratorKind::Down => self.push_general_down(set, m),
            GeneratorKind::Up => self.push_general_up(set, m),
        }
    }

    /// The endpoint of the downward composite factorising `set` at `v`,
    /// obtained by folding minimal pieces (each recomputed after the
    /// previous one is applied).
    fn down_composite_target(&self, set: &AdmissibleSet, v: u64) -> u64 {
        let mut v = v;
        let mut rest = set.clone();
        while !rest.is_empty() {
            let piece = self.top_down_piece(&rest, v);
            v = reflect_down(v, &AdmissibleSet::from_stretch(piece), self.p);
            rest = rest.iter().filter(|&i| !piece.contains(i)).collect();
        }
        v
    }

    /// The endpoint of the upward composite factorising `set` at `v`.
    fn up_composite_target(&self, set: &AdmissibleSet, v: u64) -> u64 {
        let mut v = v;
        let mut rest = set.clone();
        while !rest.is_empty() {
            let piece = self.bottom_up_piece(&rest, v);
            v = reflect_up(v, &AdmissibleSet::from_stretch(piece), self.p);
            rest = rest.iter().filter(|&i| !piece.contains(i)).collect();
        }
        v
    }

    /// The highest minimal down stretch of `v` inside `set`: the piece
    /// of the factorisation that acts first.  Later pieces only become
    /// minimal after this one is applied, so they are recomputed at the
    /// reflected vertex.
    fn top_down_piece(&self, set: &AdmissibleSet, v: u64) -> Stretch {
        let d = PadicDigits::expand(v, self.p);
        let mut k = AdmissibleSet::max(set).unwrap();
        // The top piece ends at max(set) and starts at the highest
        // nonzero digit at or below it within the set.
        while d.digit(k) == 0 {
            assert!(
                k > 0 && set.contains(k - 1),
                "no downward factor covers digit {} of {v} in {set}",
                AdmissibleSet::max(set).unwrap()
            );
            k -= 1;
        }
        let s = minimal_down_stretch_at(v, k, self.p)
            .unwrap_or_else(|| panic!("no minimal down stretch at digit {k} of {v} in {set}"));
        assert!(
            s.iter().all(|i| set.contains(i)),
            "minimal stretch {s:?} escapes {set} at {v}"
        );
        s
    }

    /// The lowest minimal up stretch of `v` inside `set`: the piece of
    /// the factorisation that acts first.
    fn bottom_up_piece(&self, set: &AdmissibleSet, v: u64) -> Stretch {
        let lo = AdmissibleSet::min(set).unwrap();
        let s = minimal_up_stretch_at(v, lo, self.p)
            .unwrap_or_else(|| panic!("no minimal up stretch at digit {lo} of {v} in {set}"));
        assert!(
            s.iter().all(|i| set.contains(i)),
            "minimal stretch {s:?} escapes {set} at {v}"
        );
        s
    }

    /// Pushes a generalized downward factor onto a normalised morphism:
    /// the set splits into minimal stretches applied largest first.
    pub fn push_general_down(&mut self, set: &AdmissibleSet, m: &Morphism) -> Rw<Morphism> {
        if set.is_empty() {
            return Ok(m.clone());
        }
        let target = self.down_composite_target(set, m.target);
        let mut out = Morphism::zero(self.p, m.source, target);
        for (word, coeff) in &m.terms {
            let v = m.target;
            debug_assert!(
                is_down_admissible(set, v, self.p),
                "{set} not down-admissible at {v}"
            );
            let top = self.top_down_piece(set, v);
            let pushed = self.push_down_minimal(top, word)?;
            let rest: AdmissibleSet = set.iter().filter(|&i| !top.contains(i)).collect();
            let deeper = self.push_general_down(&rest, &pushed)?;
            out.add_scaled(&deeper, *coeff);
        }
        Ok(out)
    }

    /// Pushes a generalized upward factor onto a normalised morphism:
    /// the set splits into minimal stretches applied smallest first.
    pub fn push_general_up(&mut self, set: &AdmissibleSet, m: &Morphism) -> Rw<Morphism> {
        if set.is_empty() {
            return Ok(m.clone());
        }
        let target = self.up_composite_target(set, m.target);
        let mut out = Morphism::zero(self.p, m.source, target);
        for (word, coeff) in &m.terms {
            let v = m.target;
            debug_assert!(
                is_up_admissible(set, v, self.p),
                "{set} not up-admissible at {v}"
            );
            let bottom = self.bottom_up_piece(set, v);
            let pushed = self.push_up_minimal(bottom, word)?;
            let rest: AdmissibleSet = set.iter().filter(|&i| !bottom.contains(i)).collect();
            let deeper = self.push_general_up(&rest, &pushed)?;
            out.add_scaled(&deeper, *coeff);
        }
        Ok(out)
    }

    fn memo_get(&self, kind: GeneratorKind, s: Stretch, w: &BasisWord) -> Option<Morphism> {
        self.memo.get(&(kind, s, w.clone())).cloned()
    }

    fn memo_put(&mut self, kind: GeneratorKind, s: Stretch, w: &BasisWord, m: &Morphism) {
        if self.memo.len() >= self.memo_cap {
            self.memo.clear();
        }
        self.memo.insert((kind, s, w.clone()), m.clone());
    }

    /// Pushes one minimal down stretch onto one basis word.
    fn push_down_minimal(&mut self, t: Stretch, word: &BasisWord) -> Rw<Morphism> {
        if let Some(hit) = self.memo_get(GeneratorKind::Down, t, word) {
            return Ok(hit);
        }
        self.tick()?;
        let w = word.target(self.p);
        debug_assert_eq!(
            minimal_down_stretch_at(w, t.lo(), self.p),
            Some(t),
            "push of non-minimal down stretch {t:?} at {w}"
        );
        let result = if let Some(&s_up) = word.ups.last() {
            // The incoming down meets the most recent up.
            let mut rest = word.clone();
            rest.ups.pop();
            let v_before = rest.target(self.p);
            let rest_m = Morphism::single(self.p, rest, self.p.one());
            if t == s_up {
                self.zigzag(s_up, v_before, &rest_m)?
            } else if t.disjoint(s_up) {
                let d = t.distance(s_up);
                if d >= 2 {
                    // Far-commutativity.
                    let m = self.push_general_down(&t.into(), &rest_m)?;
                    self.push_general_up(&s_up.into(), &m)?
                } else if t.entirely_above(s_up) {
                    // Adjacent: the down after the up merges into a
                    // longer downward stretch.
                    let union: AdmissibleSet = t.iter().chain(s_up.iter()).collect();
                    self.push_general_down(&union, &rest_m)?
                } else {
                    // Adjacent below: merges into a longer upward
                    // stretch.
                    let union: AdmissibleSet = t.iter().chain(s_up.iter()).collect();
                    self.push_general_up(&union, &rest_m)?
                }
            } else {
                unreachable!(
                    "down {t:?} overlaps distinct up {s_up:?} at vertex {w} (word {word:?})"
                )
            }
        } else if let Some(&s0) = word.downs.last() {
            let mut rest = word.clone();
            rest.downs.pop();
            let u = rest.target(self.p);
            let rest_m = Morphism::single(self.p, rest, self.p.one());
            if t.subset_of(s0) {
                // Containment kills the word.
                Morphism::zero(self.p, word.source, reflect_down(w, &t.into(), self.p))
            } else if t.disjoint(s0) && s0.entirely_above(t) {
                // Already ordered: append.
                let mut next = word.clone();
                next.downs.push(t);
                Morphism::single(self.p, next, self.p.one())
            } else if t.disjoint(s0) {
                let d = t.distance(s0);
                if d >= 2 {
                    // Far-commutativity: move the new down inward.
                    let m = self.push_general_down(&t.into(), &rest_m)?;
                    self.push_general_down(&s0.into(), &m)?
                } else {
                    // Adjacent out-of-order downs exchange into an
                    // up-after-down pair with an H scalar.
                    let h = scale_h(&s0.into(), u, self.p);
                    let m = self.push_general_down(&t.into(), &rest_m)?;
                    let mut m = self.push_general_up(&s0.into(), &m)?;
                    m.scale(h);
                    m
                }
            } else if t.lo() == s0.hi() && t.hi() > s0.hi() {
                // Single-point overlap from above: split off the shared
                // singleton as an upward excursion.
                let shared = Stretch::singleton(t.lo());
                let upper = Stretch::new(t.lo() + 1, t.hi());
                let m = self.push_general_down(&upper.into(), &rest_m)?;
                let m = self.push_general_down(&s0.into(), &m)?;
                self.push_general_up(&shared.into(), &m)?
            } else {
                unreachable!(
                    "unhandled down-down overlap {t:?} vs {s0:?} at vertex {w} (word {word:?})"
                )
            }
        } else {
            // Bare idempotent: start the down chain.
            let next = BasisWord {
                source: word.source,
                downs: vec![t],
                ups: Vec::new(),
            };
            Morphism::single(self.p, next, self.p.one())
        };
        self.memo_put(GeneratorKind::Down, t, word, &result);
        Ok(result)
    }

    /// Pushes one minimal up stretch onto one basis word.
    fn push_up_minimal(&mut self, t: Stretch, word: &BasisWord) -> Rw<Morphism> {
        if let Some(hit) = self.memo_get(GeneratorKind::Up, t, word) {
            return Ok(hit);
        }
        self.tick()?;
        let w = word.target(self.p);
        debug_assert_eq!(
            minimal_up_stretch_at(w, t.lo(), self.p),
            Some(t),
            "push of non-minimal up stretch {t:?} at {w}"
        );
        let result = if let Some(&s_up) = word.ups.last() {
            let mut rest = word.clone();
            rest.ups.pop();
            let rest_m = Morphism::single(self.p, rest, self.p.one());
            if s_up.subset_of(t) {
                // Containment kills the word.
                Morphism::zero(self.p, word.source, reflect_up(w, &t.into(), self.p))
            } else if t.disjoint(s_up) && t.entirely_above(s_up) {
                // Already ordered: append.
                let mut next = word.clone();
                next.ups.push(t);
                Morphism::single(self.p, next, self.p.one())
            } else if t.disjoint(s_up) {
                let d = t.distance(s_up);
                if d >= 2 {
                    // Far-commutativity: move the new up inward.
                    let m = self.push_general_up(&t.into(), &rest_m)?;
                    self.push_general_up(&s_up.into(), &m)?
                } else {
                    // Adjacent out-of-order ups exchange into an
                    // up-after-down pair with an H scalar read at the
                    // target vertex.
                    let m = self.push_general_down(&t.into(), &rest_m)?;
                    let mut m = self.push_general_up(&s_up.into(), &m)?;
                    let h = scale_h(&t.into(), m.target, self.p);
                    m.scale(h);
                    m
                }
            } else if t.hi() == s_up.lo() && s_up.len() > 1 {
                // Single-point overlap from below: the shared digit
                // splits off as a downward excursion before the whole
                // incoming stretch, and the rest of the older stretch is
                // re-applied above.
                let shared = Stretch::singleton(t.hi());
                let upper = Stretch::new(s_up.lo() + 1, s_up.hi());
                let m = self.push_general_down(&shared.into(), &rest_m)?;
                let m = self.push_general_up(&t.into(), &m)?;
                self.push_general_up(&upper.into(), &m)?
            } else {
                unreachable!(
                    "unhandled up-up overlap {t:?} vs {s_up:?} at vertex {w} (word {word:?})"
                )
            }
        } else {
            // Any up may start the up chain after the downs.
            let mut next = word.clone();
            next.ups.push(t);
            Morphism::single(self.p, next, self.p.one())
        };
        self.memo_put(GeneratorKind::Up, t, word, &result);
        Ok(result)
    }

    /// The zigzag relation: a down straight after the same up, anchored
    /// at `v` (the vertex below the up).  Resolves into the hull loop
    /// scaled by `G` plus the next-stretch detour scaled by `F`; missing
    /// hull or next stretch make the corresponding summand vanish.
    fn zigzag(&mut self, s: Stretch, v: u64, rest: &Morphism) -> Rw<Morphism> {
        let set = AdmissibleSet::from_stretch(s);
        let mut out = Morphism::zero(self.p, rest.source, v);
        let hull = match down_hull(&set, v, self.p) {
            Some(h) => h,
            None => return Ok(out),
        };
        let g = scale_g(&set, v, self.p);
        if !g.is_zero() {
            let m = self.push_general_down(&hull, rest)?;
            let m = self.push_general_up(&hull, &m)?;
            out.add_scaled(&m, g);
        }
        let f = scale_f(&set, v, self.p);
        if !f.is_zero() {
            let hull_hi = AdmissibleSet::max(&hull).unwrap();
            let next = minimal_down_stretches(v, self.p)
                .into_iter()
                .find(|t| t.lo() > hull_hi);
            if let Some(tn) = next {
                let m = self.push_general_down(&tn.into(), rest)?;
                let m = self.push_general_down(&hull, &m)?;
                let m = self.push_general_up(&hull, &m)?;
                let m = self.push_general_up(&tn.into(), &m)?;
                out.add_scaled(&m, f);
            }
        }
        Ok(out)
    }
}

/// Enumerates the basis of `Hom(v, w)`: every down chain from `v` along
/// strictly decreasing minimal stretches, continued by every up chain
/// along strictly increasing minimal stretches ending at `w`.
pub fn hom_basis(v: u64, w: u64, p: Prime) -> Vec<BasisWord> {
    let mut out = Vec::new();
    // Depth-first over down chains.
    let mut down_stack: Vec<(u64, Vec<Stretch>)> = vec![(v, Vec::new())];
    while let Some((u, downs)) = down_stack.pop() {
        // Continue with up chains from u.
        let mut up_stack: Vec<(u64, Vec<Stretch>)> = vec![(u, Vec::new())];
        while let Some((x, ups)) = up_stack.pop() {
            if x == w {
                out.push(BasisWord {
                    source: v,
                    downs: downs.clone(),
                    ups: ups.clone(),
                });
            }
            if x < w {
                for s in minimal_up_stretches(x, p) {
                    if ups.last().is_none_or(|last| s.lo() > last.hi()) {
                        let y = reflect_up(x, &AdmissibleSet::from_stretch(s), p);
                        if y <= w {
                            let mut next = ups.clone();
                            next.push(s);
                            up_stack.push((y, next));
                        }
                    }
                }
            }
        }
        for s in minimal_down_stretches(u, p) {
            if downs.last().is_none_or(|last| s.hi() < last.lo()) {
                let y = reflect_down(u, &AdmissibleSet::from_stretch(s), p);
                let mut next = downs.clone();
                next.push(s);
                down_stack.push((y, next));
            }
        }
    }
    out.sort();
    out
}

/// The dimension of `Hom(v, w)`.
pub fn hom_dim(v: u64, w: u64, p: Prime) -> usize {
    hom_basis(v, w, p).len()
}

/// The endomorphism ring of a vertex: dual numbers on one loop per
/// minimal down stretch (all squares and pairwise products of distinct
/// loops that meet vanish; disjoint loops multiply to longer words).
#[derive(Debug, Clone)]
pub struct EndRing {
    pub v: u64,
    /// The minimal down stretches of `v`, ascending: one loop each.
    pub loops: Vec<Stretch>,
    /// Basis: one word per subset of `loops`, canonically ordered.
    pub basis: Vec<BasisWord>,
}

/// Builds the endomorphism ring of `v`: the basis consists of one word
/// per subset of the minimal down stretches (downs descending, ups
/// ascending).
pub fn end_ring(v: u64, p: Prime) -> EndRing {
    let loops = minimal_down_stretches(v, p);
    let k = loops.len();
    let mut basis = Vec::with_capacity(1 << k);
    for mask in 0..(1u32 << k) {
        let subset: Vec<Stretch> = loops
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| *s)
            .collect();
        let mut downs = subset.clone();
        downs.reverse();
        basis.push(BasisWord {
            source: v,
            downs,
            ups: subset,
        });
    }
    basis.sort();
    EndRing { v, loops, basis }
}
