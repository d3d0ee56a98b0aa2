//! p-adic digit expansions with possibly negative digits.
//!
//! Vertices of the quiver are positive integers, handled through their
//! base-`p` expansions.  Reflections produce intermediate expansions with
//! negative digits; [`PadicDigits::normalize`] folds any such expansion
//! back into the canonical one with digits in `0..p`.
//!
//! The text format is `[a_j,...,a_0]_p`, most significant digit first.

use crate::arith::Prime;
use std::fmt;
use thiserror::Error;

/// Errors produced while parsing digit strings.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseDigitsError {
    #[error("malformed digit string: {0}")]
    Malformed(String),
    #[error("invalid base: {0}")]
    BadBase(String),
    #[error("digit {digit} out of range for base {base}")]
    DigitRange { digit: i64, base: u32 },
}

/// A base-`p` expansion, stored least significant digit first.
///
/// Canonical expansions have digits in `0..p` and no leading zero;
/// non-canonical ones (digits outside this range) arise transiently from
/// reflections and can be normalized as long as their value is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicDigits {
    /// Digits, index 0 is the coefficient of `p^0`.
    digits: Vec<i64>,
    p: Prime,
}

impl PadicDigits {
    /// Builds an expansion from digits given least significant first.
    /// The digits may be arbitrary integers.
    pub fn from_digits(digits: Vec<i64>, p: Prime) -> Self {
        let mut d = PadicDigits { digits, p };
        d.trim();
        d
    }

    /// Canonical expansion of a positive integer.
    pub fn expand(v: u64, p: Prime) -> Self {
        assert!(v >= 1, "vertices are positive integers, got {v}");
        let mut digits = Vec::new();
        let mut n = v;
        let q = p.get() as u64;
        while n > 0 {
            digits.push((n % q) as i64);
            n /= q;
        }
        PadicDigits { digits, p }
    }

    fn trim(&mut self) {
        while self.digits.last() == Some(&0) {
            self.digits.pop();
        }
    }

    /// The base of the expansion.
    pub fn prime(&self) -> Prime {
        self.p
    }

    /// The represented integer.
    pub fn value(&self) -> i128 {
        let q = self.p.get() as i128;
        let mut acc = 0i128;
        for &d in self.digits.iter().rev() {
            acc = acc * q + d as i128;
        }
        acc
    }

    /// The represented integer as a vertex.
    ///
    /// # Panics
    ///
    /// Panics if the value is not a positive integer fitting `u64`.
    pub fn value_u64(&self) -> u64 {
        let v = self.value();
        assert!(v >= 1 && v <= u64::MAX as i128, "value {v} is not a vertex");
        v as u64
    }

    /// The digit at index `i` (zero beyond the stored length).
    pub fn digit(&self, i: u32) -> i64 {
        self.digits.get(i as usize).copied().unwrap_or(0)
    }

    /// Number of stored digits.
    pub fn len(&self) -> u32 {
        self.digits.len() as u32
    }

    /// True for the expansion of zero.
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Index of the leading (highest nonzero) digit of a canonical
    /// expansion.
    ///
    /// # Panics
    ///
    /// Panics on the empty expansion.
    pub fn leading_index(&self) -> u32 {
        assert!(!self.digits.is_empty(), "leading index of zero");
        self.len() - 1
    }

    /// Recomputes the canonical expansion with digits in `0..p`.
    ///
    /// # Panics
    ///
    /// Panics if the value is not positive.
    pub fn normalize(&self) -> Self {
        PadicDigits::expand(self.value_u64(), self.p)
    }

    /// True if all digits are already in `0..p`.
    pub fn is_canonical(&self) -> bool {
        self.digits
            .iter()
            .all(|&d| d >= 0 && d < self.p.get() as i64)
    }

    /// The generation: number of nonzero digits minus one.
    pub fn generation(&self) -> u32 {
        let nz = self.digits.iter().filter(|&&d| d != 0).count() as u32;
        assert!(nz > 0, "generation of zero");
        nz - 1
    }

    /// An eve has a single nonzero digit (generation zero).
    pub fn is_eve(&self) -> bool {
        self.generation() == 0
    }

    /// The mother: the expansion with the lowest nonzero digit set to
    /// zero.  The mother of an eve is zero (the empty expansion).
    pub fn mother(&self) -> Self {
        let mut digits = self.digits.clone();
        if let Some(slot) = digits.iter_mut().find(|d| **d != 0) {
            *slot = 0;
        }
        PadicDigits::from_digits(digits, self.p)
    }

    /// The digit set: indices of nonzero digits strictly below the
    /// leading one.
    pub fn digit_set(&self) -> Vec<u32> {
        let j = self.leading_index();
        (0..j).filter(|&i| self.digit(i) != 0).collect()
    }

    /// Parses the text format `[a_j,...,a_0]_p`.
    pub fn parse(s: &str) -> Result<Self, ParseDigitsError> {
        let s = s.trim();
        let malformed = || ParseDigitsError::Malformed(s.to_string());
        let open = s.strip_prefix('[').ok_or_else(malformed)?;
        let close = open.find(']').ok_or_else(malformed)?;
        let (body, tail) = open.split_at(close);
        let base_str = tail[1..].strip_prefix('_').ok_or_else(malformed)?;
        let base: u32 = base_str
            .parse()
            .map_err(|_| ParseDigitsError::BadBase(base_str.to_string()))?;
        if base < 2 {
            return Err(ParseDigitsError::BadBase(base_str.to_string()));
        }
        let p = Prime::new(base);
        let mut digits = Vec::new();
        for part in body.split(',') {
            let d: i64 = part
                .trim()
                .parse()
                .map_err(|_| ParseDigitsError::Malformed(s.to_string()))?;
            if d.unsigned_abs() >= base as u64 {
                return Err(ParseDigitsError::DigitRange { digit: d, base });
            }
            digits.push(d);
        }
        digits.reverse();
        Ok(PadicDigits::from_digits(digits, p))
    }
}

impl fmt::Display for PadicDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, d) in self.digits.iter().rev().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]_{}", self.p.get())
    }
}

/// All eves (single nonzero digit) up to and including `bound`,
/// ascending.
pub fn eves_below(bound: u64, p: Prime) -> Vec<u64> {
    let q = p.get() as u64;
    let mut out = Vec::new();
    let mut power = 1u64;
    loop {
        for a in 1..q {
            match power.checked_mul(a) {
                Some(v) if v <= bound => out.push(v),
                _ => {}
            }
        }
        match power.checked_mul(q) {
            Some(next) if next <= bound => power = next,
            _ => break,
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_and_value_round_trip() {
        for q in [2u32, 3, 5, 7] {
            let p = Prime::new(q);
            for v in 1..=3000u64 {
                let d = PadicDigits::expand(v, p);
                assert!(d.is_canonical());
                assert_eq!(d.value_u64(), v);
            }
        }
    }

    #[test]
    fn seventeen_base_three() {
        let p = Prime::new(3);
        let d = PadicDigits::expand(17, p);
        assert_eq!(d.to_string(), "[1,2,2]_3");
        assert_eq!(d.generation(), 2);
        assert!(!d.is_eve());
        assert_eq!(d.digit_set(), vec![0, 1]);
    }

    #[test]
    fn normalize_mixed_digit_example() {
        // [3,-1,-6,-5,0,5,-6] in base 7 represents 320048.
        let d = PadicDigits::parse("[3,-1,-6,-5,0,5,-6]_7").unwrap();
        assert_eq!(d.value(), 320048);
        let n = d.normalize();
        assert!(n.is_canonical());
        assert_eq!(n.value(), 320048);
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["[1,2,2]_3", "[3,1,6,5,0,5,6]_7", "[1,0,4]_5"] {
            let d = PadicDigits::parse(s).unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PadicDigits::parse("1,2,2_3").is_err());
        assert!(PadicDigits::parse("[1,2,2]_1").is_err());
        assert!(PadicDigits::parse("[1,5,2]_3").is_err());
    }

    #[test]
    fn mother_zeroes_lowest_nonzero_digit() {
        let p = Prime::new(3);
        // 17 = [1,2,2] -> mother [1,2,0] = 15.
        assert_eq!(PadicDigits::expand(17, p).mother().value(), 15);
        // Eve: 9 = [1,0,0] -> mother 0.
        assert!(PadicDigits::expand(9, p).mother().is_empty());
    }

    #[test]
    fn eves_are_prime_power_multiples() {
        let p = Prime::new(3);
        assert_eq!(eves_below(20, p), vec![1, 2, 3, 6, 9, 18]);
        for &e in &eves_below(1000, p) {
            assert!(PadicDigits::expand(e, p).is_eve());
        }
    }
}
