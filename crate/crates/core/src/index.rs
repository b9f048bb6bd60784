//! Rationals of the form `p / b^q` used as indices: base 3 for bundles on P³,
//! base 2 for exceptional slopes on P².
//!
//! Numerators and exponents are machine integers; `b^q` must fit in an `i64`,
//! which bounds the order at 39 (base 3) and 62 (base 2).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `p / B^q`, normalized so that `q = 0` or `B ∤ p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdicRational<const B: i64> {
    p: i64,
    q: u32,
}

pub type ThreeAdicRational = AdicRational<3>;
pub type DyadicRational = AdicRational<2>;

const fn max_order(base: i64) -> u32 {
    let mut q = 0;
    let mut power: i64 = 1;
    while power <= i64::MAX / base {
        power *= base;
        q += 1;
    }
    q
}

impl<const B: i64> AdicRational<B> {
    pub const MAX_ORDER: u32 = max_order(B);

    pub fn new(p: i64, q: u32) -> Result<Self> {
        if q > Self::MAX_ORDER {
            return Err(Error::InvalidIndex(format!("order {q} exceeds the supported maximum {}", Self::MAX_ORDER)));
        }
        let (mut p, mut q) = (p, q);
        while q > 0 && p % B == 0 {
            p /= B;
            q -= 1;
        }
        Ok(AdicRational { p, q })
    }

    pub fn integer(n: i64) -> Self {
        AdicRational { p: n, q: 0 }
    }

    pub fn numer(self) -> i64 {
        self.p
    }

    /// The exponent of the normalized denominator.
    pub fn order(self) -> u32 {
        self.q
    }

    pub fn denom(self) -> i64 {
        B.pow(self.q)
    }

    pub fn is_integer(self) -> bool {
        self.q == 0
    }

    pub fn value(self) -> Rational {
        Rational::new(BigInt::from(self.p), BigInt::from(self.denom()))
    }

    pub fn floor(self) -> i64 {
        self.p.div_euclid(self.denom())
    }

    /// The part in `[0, 1)`.
    pub fn fract(self) -> Self {
        AdicRational { p: self.p.rem_euclid(self.denom()), q: self.q }
    }

    /// `self + n`.
    pub fn shift(self, n: i64) -> Result<Self> {
        let p = n
            .checked_mul(self.denom())
            .and_then(|m| m.checked_add(self.p))
            .ok_or_else(|| Error::InvalidIndex(format!("{self} + {n} overflows")))?;
        Ok(AdicRational { p, q: self.q })
    }

    /// True when strictly between 0 and 1.
    pub fn in_unit_interval(self) -> bool {
        self.p > 0 && self.p < self.denom()
    }

    /// The numerator over `B^q` for a larger exponent `q`.
    pub fn numer_at(self, q: u32) -> i64 {
        self.p * B.pow(q - self.q)
    }

    /// All indices in `(0, 1)` of order exactly `q`, increasing.
    pub fn of_order(q: u32) -> Vec<Self> {
        if q == 0 {
            return Vec::new();
        }
        (1..B.pow(q)).filter(|p| p % B != 0).map(|p| AdicRational { p, q }).collect()
    }

    /// All indices in `(0, 1)` of order at most `max_order`, increasing.
    pub fn up_to_order(max_order: u32) -> Vec<Self> {
        let mut all: Vec<Self> = (1..=max_order).flat_map(Self::of_order).collect();
        all.sort();
        all
    }

    pub fn from_rational(x: &Rational) -> Result<Self> {
        let bad = || Error::InvalidIndex(format!("{} is not of the form p/{B}^q", rational::format(x)));
        let p = num_traits::ToPrimitive::to_i64(x.numer()).ok_or_else(bad)?;
        let mut d = num_traits::ToPrimitive::to_i64(x.denom()).ok_or_else(bad)?;
        let mut q = 0;
        while d % B == 0 {
            d /= B;
            q += 1;
        }
        if d != 1 {
            return Err(bad());
        }
        Self::new(p, q)
    }
}

impl<const B: i64> Ord for AdicRational<B> {
    fn cmp(&self, other: &Self) -> Ordering {
        let q = self.q.max(other.q);
        let scale = |x: &Self| i128::from(x.p) * i128::from(B).pow(q - x.q);
        scale(self).cmp(&scale(other))
    }
}

impl<const B: i64> PartialOrd for AdicRational<B> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const B: i64> fmt::Display for AdicRational<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.denom())
        }
    }
}

impl<const B: i64> fmt::Debug for AdicRational<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts `n`, `p/d` with `d` a power of the base, and `p/B^q`.
impl<const B: i64> FromStr for AdicRational<B> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((p, d)) = t.split_once('/') {
            if let Some((base, q)) = d.trim().split_once('^') {
                let bad = || Error::InvalidIndex(format!("cannot read {s:?} as p/{B}^q"));
                if base.trim() != B.to_string() {
                    return Err(bad());
                }
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: u32 = q.trim().parse().map_err(|_| bad())?;
                return Self::new(p, q);
            }
        }
        let x = rational::parse(t).map_err(|_| Error::InvalidIndex(format!("cannot read {s:?} as an index")))?;
        Self::from_rational(&x)
    }
}

impl<const B: i64> Serialize for AdicRational<B> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de, const B: i64> Deserialize<'de> for AdicRational<B> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
