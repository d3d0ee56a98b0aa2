//! Stretches, admissible sets and digit reflections.
//!
//! A *stretch* is a run of consecutive digit indices.  Finite index sets
//! are kept in coarsest-stretch form.  A set is *down-admissible* for a
//! vertex when each stretch starts at a nonzero digit and zeros force
//! upward extension; *up-admissible* is the same with `p-1` in place of
//! zero.  Admissible sets act on vertices by digit reflections.
//!
//! The text format lists digits descending, stretches separated by bars:
//! `{5,4,3|0}`.

use crate::arith::Prime;
use crate::padic::PadicDigits;
use std::fmt;
use thiserror::Error;

/// A run of consecutive digit indices `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stretch {
    lo: u32,
    hi: u32,
}

impl Stretch {
    /// Creates the stretch `lo..=hi`.
    ///
    /// # Panics
    ///
    /// Panics if `lo > hi`.
    pub fn new(lo: u32, hi: u32) -> Self {
        assert!(lo <= hi, "stretch bounds out of order: {lo}..={hi}");
        Stretch { lo, hi }
    }

    /// A single index.
    pub fn singleton(i: u32) -> Self {
        Stretch { lo: i, hi: i }
    }

    pub fn lo(self) -> u32 {
        self.lo
    }

    pub fn hi(self) -> u32 {
        self.hi
    }

    pub fn len(self) -> u32 {
        self.hi - self.lo + 1
    }

    pub fn contains(self, i: u32) -> bool {
        self.lo <= i && i <= self.hi
    }

    /// Iterates the indices ascending.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }

    /// True when every index of `self` is strictly above every index of
    /// `other`.
    pub fn entirely_above(self, other: Stretch) -> bool {
        self.lo > other.hi
    }

    /// True when the two stretches share no index.
    pub fn disjoint(self, other: Stretch) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// True when `self` is contained in `other` (possibly equal).
    pub fn subset_of(self, other: Stretch) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Minimal absolute index distance between the two stretches
    /// (zero when they intersect).
    pub fn distance(self, other: Stretch) -> u32 {
        if self.hi < other.lo {
            other.lo - self.hi
        } else if other.hi < self.lo {
            self.lo - other.hi
        } else {
            0
        }
    }
}

/// Errors from parsing admissible-set strings.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseSetError {
    #[error("malformed set string: {0}")]
    Malformed(String),
}

/// A finite set of digit indices in coarsest-stretch form: stretches are
/// kept sorted ascending, pairwise disjoint and non-adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AdmissibleSet {
    stretches: Vec<Stretch>,
}

impl AdmissibleSet {
    /// The empty set.
    pub fn empty() -> Self {
        AdmissibleSet::default()
    }

    /// Builds the set of a single stretch.
    pub fn from_stretch(s: Stretch) -> Self {
        AdmissibleSet {
            stretches: vec![s],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.stretches.is_empty()
    }

    /// Number of indices in the set.
    pub fn card(&self) -> u32 {
        self.stretches.iter().map(|s| s.len()).sum()
    }

    /// The coarsest stretches, ascending.
    pub fn stretches(&self) -> &[Stretch] {
        &self.stretches
    }

    /// The single stretch of a one-stretch set.
    pub fn as_single_stretch(&self) -> Option<Stretch> {
        match self.stretches.as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }

    pub fn contains(&self, i: u32) -> bool {
        self.stretches.iter().any(|s| s.contains(i))
    }

    pub fn min(&self) -> Option<u32> {
        self.stretches.first().map(|s| s.lo())
    }

    pub fn max(&self) -> Option<u32> {
        self.stretches.last().map(|s| s.hi())
    }

    /// Iterates all indices ascending.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.stretches.iter().flat_map(|s| s.iter())
    }

    /// Set difference.
    pub fn without(&self, other: &AdmissibleSet) -> AdmissibleSet {
        self.iter().filter(|i| !other.contains(*i)).collect()
    }

    /// Set union.
    pub fn union(&self, other: &AdmissibleSet) -> AdmissibleSet {
        self.iter().chain(other.iter()).collect()
    }

    /// Minimal absolute distance between indices of the two sets.
    ///
    /// # Panics
    ///
    /// Panics when either set is empty.
    pub fn distance(&self, other: &AdmissibleSet) -> u32 {
        assert!(
            !self.is_empty() && !other.is_empty(),
            "distance with an empty set"
        );
        self.stretches
            .iter()
            .flat_map(|a| other.stretches.iter().map(|b| a.distance(*b)))
            .min()
            .unwrap()
    }

    /// Parses the text format `{5,4,3|0}`.  Digit order inside the braces
    /// is not significant on input.
    pub fn parse(s: &str) -> Result<Self, ParseSetError> {
        let t = s.trim();
        let malformed = || ParseSetError::Malformed(s.to_string());
        let body = t
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .ok_or_else(malformed)?;
        let mut indices = Vec::new();
        if !body.trim().is_empty() {
            for group in body.split('|') {
                for part in group.split(',') {
                    let i: u32 = part.trim().parse().map_err(|_| malformed())?;
                    indices.push(i);
                }
            }
        }
        Ok(indices.into_iter().collect())
    }
}

impl FromIterator<u32> for AdmissibleSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        let mut indices: Vec<u32> = iter.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        let mut stretches: Vec<Stretch> = Vec::new();
        for i in indices {
            match stretches.last_mut() {
                Some(last) if last.hi() + 1 == i => *last = Stretch::new(last.lo(), i),
                _ => stretches.push(Stretch::singleton(i)),
            }
        }
        AdmissibleSet { stretches }
    }
}

impl From<Stretch> for AdmissibleSet {
    fn from(s: Stretch) -> Self {
        AdmissibleSet::from_stretch(s)
    }
}

impl fmt::Display for AdmissibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.stretches.iter().rev().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            let mut first = true;
            for i in (s.lo()..=s.hi()).rev() {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

/// True when `set` is down-admissible for `v`: each stretch starts at a
/// nonzero digit, and an index followed by a zero digit forces the next
/// index into the set.
pub fn is_down_admissible(set: &AdmissibleSet, v: u64, p: Prime) -> bool {
    let d = PadicDigits::expand(v, p);
    for s in set.stretches() {
        if d.digit(s.lo()) == 0 {
            return false;
        }
        // Interior indices followed by a zero digit are in the set by
        // construction; only the top of each coarsest stretch can fail.
        if d.digit(s.hi() + 1) == 0 && !set.contains(s.hi() + 1) {
            return false;
        }
    }
    true
}

/// True when `set` is up-admissible for `v`: each stretch starts at a
/// nonzero digit, and an index followed by a `p-1` digit forces the next
/// index into the set.
pub fn is_up_admissible(set: &AdmissibleSet, v: u64, p: Prime) -> bool {
    let d = PadicDigits::expand(v, p);
    let top = (p.get() - 1) as i64;
    for s in set.stretches() {
        if d.digit(s.lo()) == 0 {
            return false;
        }
        if d.digit(s.hi() + 1) == top && !set.contains(s.hi() + 1) {
            return false;
        }
    }
    true
}

/// Down reflection `v[S]`: flips the sign of the digits indexed by `S`.
///
/// # Panics
///
/// Panics when `S` is not down-admissible for `v` or the reflected value
/// fails to be a vertex.
pub fn reflect_down(v: u64, set: &AdmissibleSet, p: Prime) -> u64 {
    assert!(
        is_down_admissible(set, v, p),
        "{set} is not down-admissible for {v} (p={})",
        p.get()
    );
    let d = PadicDigits::expand(v, p);
    let digits: Vec<i64> = (0..d.len())
        .map(|i| {
            let a = d.digit(i);
            if set.contains(i) {
                -a
            } else {
                a
            }
        })
        .collect();
    PadicDigits::from_digits(digits, p).value_u64()
}

/// Up reflection `v(S)`: negates the digits indexed by `S` and adds two
/// to each digit just above a stretch.
///
/// # Panics
///
/// Panics when `S` is not up-admissible for `v`.
pub fn reflect_up(v: u64, set: &AdmissibleSet, p: Prime) -> u64 {
    assert!(
        is_up_admissible(set, v, p),
        "{set} is not up-admissible for {v} (p={})",
        p.get()
    );
    let d = PadicDigits::expand(v, p);
    // Indices above the leading digit carry zeros and reflect trivially;
    // the worked examples treat them as absent, so the carry of two lands
    // just above the highest surviving index.
    let j = d.leading_index();
    let set = &set.iter().filter(|&i| i <= j).collect::<AdmissibleSet>();
    if set.is_empty() {
        return v;
    }
    let len = d.len().max(set.max().map_or(0, |m| m + 2));
    let digits: Vec<i64> = (0..len)
        .map(|i| {
            let a = d.digit(i);
            if set.contains(i) {
                -a
            } else if i > 0 && set.contains(i - 1) {
                a + 2
            } else {
                a
            }
        })
        .collect();
    PadicDigits::from_digits(digits, p).value_u64()
}

/// The minimal down-admissible stretch of `v` starting at index `i`
/// (which must carry a nonzero, non-leading digit): the run from `i` up
/// to just below the next nonzero digit.
pub fn minimal_down_stretch_at(v: u64, i: u32, p: Prime) -> Option<Stretch> {
    let d = PadicDigits::expand(v, p);
    let j = d.leading_index();
    if i >= j || d.digit(i) == 0 {
        return None;
    }
    let mut hi = i;
    while d.digit(hi + 1) == 0 {
        hi += 1;
    }
    Some(Stretch::new(i, hi))
}

/// The minimal up-admissible stretch of `v` starting at index `i`
/// (which must carry a nonzero digit): the run from `i` through the
/// `p-1` digits above it.
pub fn minimal_up_stretch_at(v: u64, i: u32, p: Prime) -> Option<Stretch> {
    let d = PadicDigits::expand(v, p);
    if d.digit(i) == 0 {
        return None;
    }
    let top = (p.get() - 1) as i64;
    let mut hi = i;
    while d.digit(hi + 1) == top {
        hi += 1;
    }
    Some(Stretch::new(i, hi))
}

/// All minimal down-admissible stretches of `v`, ascending by start.
pub fn minimal_down_stretches(v: u64, p: Prime) -> Vec<Stretch> {
    let d = PadicDigits::expand(v, p);
    let j = d.leading_index();
    (0..j)
        .filter_map(|i| minimal_down_stretch_at(v, i, p))
        .collect()
}

/// All minimal up-admissible stretches of `v`, ascending by start.
pub fn minimal_up_stretches(v: u64, p: Prime) -> Vec<Stretch> {
    let d = PadicDigits::expand(v, p);
    let j = d.leading_index();
    (0..=j)
        .filter_map(|i| minimal_up_stretch_at(v, i, p))
        .collect()
}

/// The down-admissible hull: the smallest down-admissible superset of
/// `set` for `v`, or `None` when the closure runs past the leading digit
/// or below index zero.
pub fn down_hull(set: &AdmissibleSet, v: u64, p: Prime) -> Option<AdmissibleSet> {
    if set.is_empty() {
        return Some(AdmissibleSet::empty());
    }
    let d = PadicDigits::expand(v, p);
    let j = d.leading_index();
    let mut indices: std::collections::BTreeSet<u32> = set.iter().collect();
    loop {
        let mut changed = false;
        // Upward closure: a member followed by a zero digit pulls in the
        // next index; past the leading digit this never terminates.
        for s in indices.clone() {
            if d.digit(s + 1) == 0 && !indices.contains(&(s + 1)) {
                if s + 1 > j {
                    return None;
                }
                indices.insert(s + 1);
                changed = true;
            }
        }
        // Downward repair: a stretch starting on a zero digit is extended
        // below until it reaches a nonzero digit.
        let as_set: AdmissibleSet = indices.iter().copied().collect();
        for s in as_set.stretches() {
            if d.digit(s.lo()) == 0 {
                if s.lo() == 0 {
                    return None;
                }
                indices.insert(s.lo() - 1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let hull: AdmissibleSet = indices.into_iter().collect();
    debug_assert!(is_down_admissible(&hull, v, p));
    Some(hull)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u32) -> Prime {
        Prime::new(p)
    }

    /// The running base-7 example vertex [3,1,6,5,0,5,6].
    fn sample_vertex() -> u64 {
        PadicDigits::parse("[3,1,6,5,0,5,6]_7").unwrap().value_u64()
    }

    #[test]
    fn set_text_round_trip() {
        for s in ["{5,4,3|0}", "{1}", "{2,1}", "{}"] {
            let set = AdmissibleSet::parse(s).unwrap();
            assert_eq!(set.to_string(), s);
        }
        // Input order is free.
        assert_eq!(
            AdmissibleSet::parse("{0|3,4,5}").unwrap().to_string(),
            "{5,4,3|0}"
        );
    }

    #[test]
    fn coarsest_partition() {
        let set: AdmissibleSet = [0u32, 3, 4, 5].into_iter().collect();
        assert_eq!(
            set.stretches(),
            &[Stretch::singleton(0), Stretch::new(3, 5)]
        );
        assert_eq!(set.card(), 4);
    }

    #[test]
    fn distance_between_sets() {
        let a: AdmissibleSet = [1u32, 2].into_iter().collect();
        let b: AdmissibleSet = [4u32].into_iter().collect();
        assert_eq!(a.distance(&b), 2);
        let c: AdmissibleSet = [3u32].into_iter().collect();
        assert_eq!(a.distance(&c), 1);
        assert_eq!(a.distance(&a), 0);
    }

    #[test]
    fn minimal_stretches_of_sample() {
        let p = prime(7);
        let v = sample_vertex();
        let down = minimal_down_stretches(v, p);
        assert_eq!(
            down,
            vec![
                Stretch::singleton(0),
                Stretch::new(1, 2),
                Stretch::singleton(3),
                Stretch::singleton(4),
                Stretch::singleton(5),
            ]
        );
        let up = minimal_up_stretches(v, p);
        assert_eq!(
            up,
            vec![
                Stretch::singleton(0),
                Stretch::singleton(1),
                Stretch::new(3, 4),
                Stretch::singleton(4),
                Stretch::singleton(5),
                Stretch::singleton(6),
            ]
        );
    }

    #[test]
    fn down_admissibility_on_sample() {
        let p = prime(7);
        let v = sample_vertex();
        for (s, expect) in [
            ("{0}", true),
            ("{1}", false),
            ("{2,1}", true),
            ("{3}", true),
            ("{5,4,3|0}", true),
            ("{6}", false),
        ] {
            let set = AdmissibleSet::parse(s).unwrap();
            assert_eq!(is_down_admissible(&set, v, p), expect, "set {s}");
        }
    }

    #[test]
    fn up_admissibility_on_sample() {
        let p = prime(7);
        let v = sample_vertex();
        for (s, expect) in [
            ("{0}", true),
            ("{1}", true),
            ("{3}", false),
            ("{4,3}", true),
            ("{6}", true),
            ("{7,6}", true),
        ] {
            let set = AdmissibleSet::parse(s).unwrap();
            assert_eq!(is_up_admissible(&set, v, p), expect, "set {s}");
        }
    }

    #[test]
    fn reflections_match_worked_example() {
        let p = prime(7);
        let v = sample_vertex();
        // v[{5,4,3|0}] = [3,-1,-6,-5,0,5,-6] = 320048.
        let set = AdmissibleSet::parse("{5,4,3|0}").unwrap();
        assert_eq!(reflect_down(v, &set, p), 320048);
        // v({7,6}) = [1,4,1,6,5,0,5,6].
        let up = AdmissibleSet::parse("{7,6}").unwrap();
        let w = reflect_up(v, &up, p);
        assert_eq!(
            PadicDigits::expand(w, p).to_string(),
            "[1,4,1,6,5,0,5,6]_7"
        );
    }

    #[test]
    fn reflections_are_mutually_inverse() {
        let p = prime(3);
        for v in 2..500u64 {
            for s in minimal_down_stretches(v, p) {
                let set = AdmissibleSet::from_stretch(s);
                let w = reflect_down(v, &set, p);
                assert!(w < v);
                assert!(is_up_admissible(&set, w, p), "v={v} set={set}");
                assert_eq!(reflect_up(w, &set, p), v, "v={v} set={set}");
            }
            for s in minimal_up_stretches(v, p) {
                let set = AdmissibleSet::from_stretch(s);
                let w = reflect_up(v, &set, p);
                assert!(w > v);
                assert_eq!(reflect_down(w, &set, p), v, "v={v} set={set}");
            }
        }
    }

    #[test]
    fn hull_of_sample_singletons() {
        let p = prime(7);
        let v = sample_vertex();
        // hull({1}) = {2,1}.
        let h = down_hull(&AdmissibleSet::parse("{1}").unwrap(), v, p).unwrap();
        assert_eq!(h.to_string(), "{2,1}");
        // Already admissible sets are their own hull.
        let s0 = AdmissibleSet::parse("{0}").unwrap();
        assert_eq!(down_hull(&s0, v, p).unwrap(), s0);
        // No hull above the leading digit.
        for i in 6..9u32 {
            let s: AdmissibleSet = [i].into_iter().collect();
            assert_eq!(down_hull(&s, v, p), None, "index {i}");
        }
    }
}
