//! Prime-field arithmetic and the scalar functions attached to digits.
//!
//! All structure constants of the algebra live in the prime field `F_p`.
//! Besides the field itself, this module provides the two scalar functions
//! `f` and `g` on digits that appear in the zigzag relation, together with
//! the anchored variants that read the digit just above a stretch.

use crate::admissible::AdmissibleSet;
use crate::padic::PadicDigits;
use std::fmt;

/// A prime number used as the characteristic throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    /// Creates a new prime, verifying primality.
    ///
    /// # Panics
    ///
    /// Panics if `p` is not prime.
    pub fn new(p: u32) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        Prime(p)
    }

    /// Returns the underlying integer value.
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces an arbitrary signed integer into `F_p`.
    pub fn reduce(self, n: i64) -> Fp {
        let p = self.0 as i64;
        Fp {
            value: n.rem_euclid(p) as u32,
            p: self,
        }
    }

    /// The zero element of `F_p`.
    pub fn zero(self) -> Fp {
        Fp { value: 0, p: self }
    }

    /// The unit element of `F_p`.
    pub fn one(self) -> Fp {
        self.reduce(1)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of the prime field `F_p`.
///
/// Elements carry their modulus; mixing moduli in arithmetic panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u32,
    p: Prime,
}

impl Fp {
    /// Canonical representative in `0..p`.
    pub fn value(self) -> u32 {
        self.value
    }

    /// The modulus.
    pub fn prime(self) -> Prime {
        self.p
    }

    /// True if this is the zero element.
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        self.p.reduce(self.value as i64 + rhs.value as i64)
    }

    pub fn sub(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        self.p.reduce(self.value as i64 - rhs.value as i64)
    }

    pub fn neg(self) -> Fp {
        self.p.reduce(-(self.value as i64))
    }

    pub fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        self.p
            .reduce((self.value as i64 * rhs.value as i64) % self.p.get() as i64)
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    ///
    /// Panics on the zero element.
    pub fn inv(self) -> Fp {
        assert!(!self.is_zero(), "inverse of zero in F_{}", self.p.get());
        // Fermat: a^(p-2) = a^(-1) for a != 0.
        self.pow(self.p.get() - 2)
    }

    /// Raises to a non-negative integer power.
    pub fn pow(self, mut e: u32) -> Fp {
        let mut base = self;
        let mut acc = self.p.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The digit scalar `f`: for `1 <= a <= p-2` this is `(-1)^a * 2/a`,
/// and `0` for `a = 0` and `a = p-1`.
pub fn f_of(a: u32, p: Prime) -> Fp {
    let a = a % p.get();
    if a == 0 || a == p.get() - 1 {
        return p.zero();
    }
    let sign = if a % 2 == 0 { 1 } else { -1 };
    p.reduce(2 * sign).mul(p.reduce(a as i64).inv())
}

/// The digit scalar `g`: for `1 <= a <= p-1` this is `-(a+1)/a`,
/// and `g(0) = -2`.
pub fn g_of(a: u32, p: Prime) -> Fp {
    let a = a % p.get();
    if a == 0 {
        return p.reduce(-2);
    }
    p.reduce(-(a as i64 + 1)).mul(p.reduce(a as i64).inv())
}

/// Reads the digit just above a stretch set: the digit of `v` at index
/// `max(S) + 1`.
fn anchor_digit(set: &AdmissibleSet, v: u64, p: Prime) -> u32 {
    let digits = PadicDigits::expand(v, p);
    let idx = set.max().expect("anchor digit of an empty set") + 1;
    digits.digit(idx).rem_euclid(p.get() as i64) as u32
}

/// The `F` scalar of a stretch set at vertex `v`: `f` of the digit above
/// the set.
pub fn scale_f(set: &AdmissibleSet, v: u64, p: Prime) -> Fp {
    f_of(anchor_digit(set, v, p), p)
}

/// The `G` scalar of a stretch set at vertex `v`: `g` of the digit above
/// the set.
pub fn scale_g(set: &AdmissibleSet, v: u64, p: Prime) -> Fp {
    g_of(anchor_digit(set, v, p), p)
}

/// The `H` scalar of a stretch set at vertex `v`: `g` of the digit above
/// the set, shifted down by one (reduced mod `p`).
pub fn scale_h(set: &AdmissibleSet, v: u64, p: Prime) -> Fp {
    let a = anchor_digit(set, v, p);
    g_of((a + p.get() - 1) % p.get(), p)
}
