//! The numerical Grothendieck group of P³.
//!
//! Classes are written in the Chern character basis
//! `(ch0·H³, ch1·H², ch2·H, ch3)`. The Euler pairing is Hirzebruch–Riemann–Roch
//! with the Todd class of P³, so everything here is exact rational algebra.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, frac, int, is_integral, to_integer, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChernCharacter {
    pub ch0: Rational,
    pub ch1: Rational,
    pub ch2: Rational,
    pub ch3: Rational,
}

/// Integral Chern classes `(c1, c2, c3)`, serialized as a 3-array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChernClasses {
    pub c1: BigInt,
    pub c2: BigInt,
    pub c3: BigInt,
}

#[derive(Serialize, Deserialize)]
struct JsonInt(#[serde(with = "rational::integer")] BigInt);

impl Serialize for ChernClasses {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [JsonInt(self.c1.clone()), JsonInt(self.c2.clone()), JsonInt(self.c3.clone())].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChernClasses {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [JsonInt(c1), JsonInt(c2), JsonInt(c3)] = <[JsonInt; 3]>::deserialize(d)?;
        Ok(ChernClasses { c1, c2, c3 })
    }
}

impl ChernCharacter {
    pub fn new(ch0: Rational, ch1: Rational, ch2: Rational, ch3: Rational) -> Self {
        ChernCharacter { ch0, ch1, ch2, ch3 }
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fracs(c: [(i64, i64); 4]) -> Self {
        let [a, b, c, d] = c.map(|(p, q)| frac(p, q));
        ChernCharacter::new(a, b, c, d)
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        let [a, b, c, d] = c.map(int);
        ChernCharacter::new(a, b, c, d)
    }

    pub fn zero() -> Self {
        ChernCharacter::from_ints([0; 4])
    }

    pub fn coords(&self) -> [&Rational; 4] {
        [&self.ch0, &self.ch1, &self.ch2, &self.ch3]
    }

    pub fn from_coords(c: [Rational; 4]) -> Self {
        let [a, b, c, d] = c;
        ChernCharacter::new(a, b, c, d)
    }

    pub fn rank(&self) -> &Rational {
        &self.ch0
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ChernCharacter::from_coords(self.coords().map(|x| x * k))
    }

    /// Parses either a JSON-style array `["3","1","-1/2","1/6"]` (entries may
    /// also be bare numbers) or a tuple `(3,1,-1/2,1/6)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .or_else(|| t.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| Error::Parse(format!("expected [..] or (..) around a Chern character: {t:?}")))?;
        let parts: Vec<Rational> = inner
            .split(',')
            .map(|p| rational::parse(p.trim().trim_matches('"')))
            .collect::<Result<_>>()?;
        let coords: [Rational; 4] = parts
            .try_into()
            .map_err(|v: Vec<_>| Error::Parse(format!("a Chern character has 4 entries, got {}", v.len())))?;
        Ok(ChernCharacter::from_coords(coords))
    }

    pub fn to_strings(&self) -> [String; 4] {
        self.coords().map(rational::format)
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.to_strings();
        write!(f, "({a},{b},{c},{d})")
    }
}

impl fmt::Debug for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ch{self}")
    }
}

impl Serialize for ChernCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChernCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[String; 4]>::deserialize(d)?;
        let mut coords = Vec::with_capacity(4);
        for s in &raw {
            coords.push(rational::parse(s).map_err(serde::de::Error::custom)?);
        }
        let coords: [Rational; 4] = coords.try_into().expect("four entries");
        Ok(ChernCharacter::from_coords(coords))
    }
}

impl Add for &ChernCharacter {
    type Output = ChernCharacter;
    fn add(self, o: &ChernCharacter) -> ChernCharacter {
        ChernCharacter::new(&self.ch0 + &o.ch0, &self.ch1 + &o.ch1, &self.ch2 + &o.ch2, &self.ch3 + &o.ch3)
    }
}

impl Sub for &ChernCharacter {
    type Output = ChernCharacter;
    fn sub(self, o: &ChernCharacter) -> ChernCharacter {
        ChernCharacter::new(&self.ch0 - &o.ch0, &self.ch1 - &o.ch1, &self.ch2 - &o.ch2, &self.ch3 - &o.ch3)
    }
}

impl Neg for &ChernCharacter {
    type Output = ChernCharacter;
    fn neg(self) -> ChernCharacter {
        ChernCharacter::from_coords(self.coords().map(|x| -x))
    }
}

impl Mul<&ChernCharacter> for &Rational {
    type Output = ChernCharacter;
    fn mul(self, v: &ChernCharacter) -> ChernCharacter {
        v.scale(self)
    }
}

/// `ch(O(n)) = (1, n, n²/2, n³/6)`.
pub fn ch_line(n: i64) -> ChernCharacter {
    let n = int(n);
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    ChernCharacter::new(int(1), n.clone(), n2 / int(2), n3 / int(6))
}

/// Tensor with `O(t)`: multiplication by `exp(tH)`.
pub fn twist(v: &ChernCharacter, t: i64) -> ChernCharacter {
    if t == 0 {
        return v.clone();
    }
    let t = int(t);
    let t2 = &t * &t / int(2);
    let t3 = &t * &t * &t / int(6);
    ChernCharacter::new(
        v.ch0.clone(),
        &v.ch1 + &t * &v.ch0,
        &v.ch2 + &t * &v.ch1 + &t2 * &v.ch0,
        &v.ch3 + &t * &v.ch2 + &t2 * &v.ch1 + &t3 * &v.ch0,
    )
}

pub fn dual(v: &ChernCharacter) -> ChernCharacter {
    ChernCharacter::new(v.ch0.clone(), -&v.ch1, v.ch2.clone(), -&v.ch3)
}

/// `χ(E) = ch0 + 11/6 ch1 + 2 ch2 + ch3`.
pub fn euler_chi(v: &ChernCharacter) -> Rational {
    &v.ch0 + frac(11, 6) * &v.ch1 + int(2) * &v.ch2 + &v.ch3
}

/// `χ(E, F) = χ(F ⊗ E^∨)`, expanded bilinearly.
pub fn euler_pair(e: &ChernCharacter, f: &ChernCharacter) -> Rational {
    let (e0, e1, e2, e3) = (&e.ch0, &e.ch1, &e.ch2, &e.ch3);
    let (f0, f1, f2, f3) = (&f.ch0, &f.ch1, &f.ch2, &f.ch3);
    f0 * e0 + frac(11, 6) * (f1 * e0 - e1 * f0) + int(2) * (f2 * e0 - f1 * e1 + e2 * f0) + f3 * e0 - f2 * e1
        + e2 * f1
        - e3 * f0
}

/// Inverts the Newton relations: `c1 = ch1`, `c2 = (c1² − 2ch2)/2`,
/// `c3 = 2ch3 − c1³/3 + c1c2`.
pub fn chern_classes(v: &ChernCharacter) -> Result<ChernClasses> {
    if !is_integral(&v.ch0) || !is_integral(&v.ch1) {
        return Err(Error::NonIntegral);
    }
    let c1 = v.ch1.clone();
    let c2 = (&c1 * &c1 - int(2) * &v.ch2) / int(2);
    let c3 = int(2) * &v.ch3 - &c1 * &c1 * &c1 / int(3) + &c1 * &c2;
    match (to_integer(&c1), to_integer(&c2), to_integer(&c3)) {
        (Some(c1), Some(c2), Some(c3)) => Ok(ChernClasses { c1, c2, c3 }),
        _ => Err(Error::NonIntegral),
    }
}

pub fn slope(v: &ChernCharacter) -> Result<Rational> {
    if v.ch0.is_zero() {
        return Err(Error::ZeroRank);
    }
    Ok(&v.ch1 / &v.ch0)
}

/// Numerical shadow of exceptionality: positive integral rank, `χ(v,v) = 1`,
/// coprime rank and degree, integral Chern classes.
pub fn is_candidate_exceptional(v: &ChernCharacter) -> bool {
    let (Some(r), Some(d)) = (to_integer(&v.ch0), to_integer(&v.ch1)) else {
        return false;
    };
    r.is_positive() && r.gcd(&d).is_one() && euler_pair(v, v) == int(1) && chern_classes(v).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t_minus_1() -> ChernCharacter {
        ChernCharacter::from_fracs([(3, 1), (1, 1), (-1, 2), (1, 6)])
    }

    /// C(n+3, 3) as a polynomial in n, valid for every integer n.
    fn cubics_oracle(n: i64) -> Rational {
        frac((n + 3) * (n + 2) * (n + 1), 6)
    }

    #[test]
    fn line_bundles() {
        assert_eq!(ch_line(0), ChernCharacter::from_ints([1, 0, 0, 0]));
        assert_eq!(ch_line(1), ChernCharacter::from_fracs([(1, 1), (1, 1), (1, 2), (1, 6)]));
        assert_eq!(ch_line(-2), ChernCharacter::from_fracs([(1, 1), (-2, 1), (2, 1), (-4, 3)]));
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist(&ch_line(0), 1), ch_line(1));
        // T = T(-1) ⊗ O(1); Euler sequence gives ch(T) = 4 ch(O(1)) - ch(O).
        let euler = &ch_line(1).scale(&int(4)) - &ch_line(0);
        assert_eq!(twist(&t_minus_1(), 1), euler);
        assert_eq!(twist(&t_minus_1(), 1), ChernCharacter::from_fracs([(3, 1), (4, 1), (2, 1), (2, 3)]));
        assert_eq!(twist(&t_minus_1(), 0), t_minus_1());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual(&ch_line(1)), ch_line(-1));
        assert_eq!(dual(&t_minus_1()), ChernCharacter::from_fracs([(3, 1), (-1, 1), (-1, 2), (-1, 6)]));
        assert_eq!(dual(&dual(&t_minus_1())), t_minus_1());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(euler_chi(&ch_line(1)), int(4));
        assert_eq!(euler_chi(&t_minus_1()), int(4));
        assert_eq!(euler_chi(&ChernCharacter::from_fracs([(9, 1), (2, 1), (-2, 1), (4, 3)])), int(10));
    }

    #[test]
    fn pair_examples() {
        assert_eq!(euler_pair(&ch_line(2), &t_minus_1()), int(0));
        assert_eq!(euler_pair(&ch_line(0), &ch_line(3)), int(20));
        let o_minus_4 = ChernCharacter::from_fracs([(1, 1), (-4, 1), (8, 1), (-32, 3)]);
        assert_eq!(o_minus_4, ch_line(-4));
        assert_eq!(euler_pair(&ch_line(0), &o_minus_4), int(-1));
    }

    #[test]
    fn pair_with_structure_sheaf_is_chi() {
        for v in [t_minus_1(), ch_line(5), ChernCharacter::from_fracs([(2, 3), (1, 7), (-5, 2), (9, 4)])] {
            assert_eq!(euler_pair(&ch_line(0), &v), euler_chi(&v));
        }
    }

    #[test]
    fn lines_against_binomial() {
        for n in 0..=10 {
            assert_eq!(euler_pair(&ch_line(0), &ch_line(n)), cubics_oracle(n), "n = {n}");
        }
        for n in [-1, -2, -3] {
            assert_eq!(euler_pair(&ch_line(0), &ch_line(n)), int(0));
        }
    }

    #[test]
    fn chern_class_examples() {
        let c = chern_classes(&ch_line(2)).unwrap();
        assert_eq!((c.c1, c.c2, c.c3), (2.into(), 0.into(), 0.into()));
        // c(T(-1)) = 1/(1-h) = 1 + h + h² + h³ from 0 → O(-1) → O⁴ → T(-1) → 0.
        let c = chern_classes(&t_minus_1()).unwrap();
        assert_eq!((c.c1, c.c2, c.c3), (1.into(), 1.into(), 1.into()));
        assert_eq!(chern_classes(&ChernCharacter::from_fracs([(1, 1), (0, 1), (1, 3), (0, 1)])), Err(Error::NonIntegral));
    }

    #[test]
    fn slope_examples() {
        assert_eq!(slope(&t_minus_1()).unwrap(), frac(1, 3));
        assert_eq!(slope(&ch_line(5)).unwrap(), int(5));
        assert_eq!(slope(&ChernCharacter::from_fracs([(17, 1), (5, 1), (-7, 2), (5, 6)])).unwrap(), frac(5, 17));
        assert_eq!(slope(&ChernCharacter::zero()), Err(Error::ZeroRank));
    }

    #[test]
    fn exceptional_candidates() {
        assert!(is_candidate_exceptional(&t_minus_1()));
        assert!(is_candidate_exceptional(&ch_line(0)));
        assert!(!is_candidate_exceptional(&ChernCharacter::from_ints([2, 0, 0, 0])));
        assert!(!is_candidate_exceptional(&dual(&ch_line(0)).scale(&int(-1))));
    }

    #[test]
    fn parse_and_display() {
        let v = ChernCharacter::parse(r#"["3","1","-1/2","1/6"]"#).unwrap();
        assert_eq!(v, t_minus_1());
        assert_eq!(ChernCharacter::parse("(3, 1, -1/2, 1/6)").unwrap(), v);
        assert_eq!(v.to_string(), "(3,1,-1/2,1/6)");
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["3","1","-1/2","1/6"]"#);
        assert_eq!(serde_json::from_str::<ChernCharacter>(r#"["3","1","-1/2","1/6"]"#).unwrap(), v);
        assert!(ChernCharacter::parse("(1,2,3)").is_err());
        assert!(ChernCharacter::parse("1,2,3,4").is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..13).prop_map(|(p, q)| frac(p, q))
    }

    fn class() -> impl Strategy<Value = ChernCharacter> {
        [small_rational(), small_rational(), small_rational(), small_rational()].prop_map(ChernCharacter::from_coords)
    }

    proptest! {
        #[test]
        fn pairing_is_bilinear(a in class(), b in class(), c in class(), k in small_rational()) {
            prop_assert_eq!(euler_pair(&(&a + &b), &c), euler_pair(&a, &c) + euler_pair(&b, &c));
            prop_assert_eq!(euler_pair(&c, &(&a + &b)), euler_pair(&c, &a) + euler_pair(&c, &b));
            prop_assert_eq!(euler_pair(&a.scale(&k), &c), &k * euler_pair(&a, &c));
            prop_assert_eq!(euler_pair(&c, &a.scale(&k)), &k * euler_pair(&c, &a));
        }

        #[test]
        fn serre_duality(a in class(), b in class()) {
            prop_assert_eq!(euler_pair(&a, &b), -euler_pair(&b, &twist(&a, -4)));
        }

        #[test]
        fn twist_is_group_action(v in class(), s in -6i64..6, t in -6i64..6) {
            prop_assert_eq!(twist(&twist(&v, s), t), twist(&v, s + t));
        }

        #[test]
        fn dual_involution_negates_slope(v in class()) {
            prop_assert_eq!(dual(&dual(&v)), v.clone());
            if !v.ch0.is_zero() {
                prop_assert_eq!(slope(&dual(&v)).unwrap(), -slope(&v).unwrap());
            }
        }

        #[test]
        fn twist_preserves_pairing(a in class(), b in class(), t in -5i64..5) {
            prop_assert_eq!(euler_pair(&twist(&a, t), &twist(&b, t)), euler_pair(&a, &b));
        }
    }
}
