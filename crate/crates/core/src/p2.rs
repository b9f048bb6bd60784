//! Exceptional slopes on P² and the stability boundary δ(μ).
//!
//! An exceptional slope `α` determines the rank `r(α)` (its denominator), the
//! discriminant `Δ(α) = (1 − 1/r²)/2` and `χ(α) = r(P(α) − Δ(α))` with
//! `P(x) = (x+1)(x+2)/2`. The bijection from dyadic rationals is
//! `ε(n) = n` and `ε((2p+1)/2^(q+1)) = ε(p/2^q).ε((p+1)/2^q)`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::DyadicRational;
use crate::rational::{self, floor, int, is_integral, Rational};

/// The Hilbert polynomial of `O` on P², `P(x) = (x+1)(x+2)/2`.
pub fn hilbert_p(x: &Rational) -> Rational {
    (x + int(1)) * (x + int(2)) / int(2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P2SlopeData {
    #[serde(with = "rational::as_string")]
    pub alpha: Rational,
    #[serde(with = "rational::integer")]
    pub r: BigInt,
    #[serde(with = "rational::as_string")]
    pub delta: Rational,
    #[serde(with = "rational::as_string")]
    pub chi: Rational,
}

fn discriminant_of_rank(r: &BigInt) -> Rational {
    let r2 = Rational::from_integer(r * r);
    (int(1) - int(1) / r2) / int(2)
}

pub fn slope_data(alpha: &Rational) -> P2SlopeData {
    let r = alpha.denom().clone();
    let delta = discriminant_of_rank(&r);
    let chi = Rational::from_integer(r.clone()) * (hilbert_p(alpha) - &delta);
    P2SlopeData { alpha: alpha.clone(), r, delta, chi }
}

/// `α.β = (α+β)/2 + (Δ(β) − Δ(α))/(3 + α − β)`.
pub fn dot(alpha: &Rational, beta: &Rational) -> Result<Rational> {
    let denom = int(3) + alpha - beta;
    if denom.is_zero() {
        return Err(Error::PoleInDot);
    }
    let da = discriminant_of_rank(alpha.denom());
    let db = discriminant_of_rank(beta.denom());
    Ok((alpha + beta) / int(2) + (db - da) / denom)
}

/// Memoized ε on dyadic rationals.
#[derive(Default)]
pub struct EpsilonP2 {
    memo: RwLock<HashMap<DyadicRational, Rational>>,
}

impl EpsilonP2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static EpsilonP2 {
        static GLOBAL: OnceLock<EpsilonP2> = OnceLock::new();
        GLOBAL.get_or_init(EpsilonP2::new)
    }

    pub fn value(&self, t: DyadicRational) -> Rational {
        if t.is_integer() {
            return int(t.numer());
        }
        if let Some(hit) = self.memo.read().expect("memo lock").get(&t) {
            return hit.clone();
        }
        let (p, q) = ((t.numer() - 1) / 2, t.order() - 1);
        // Neighbours at the previous order; normalization handles even numerators.
        let lo = DyadicRational::new(p, q).expect("smaller order");
        let hi = DyadicRational::new(p + 1, q).expect("smaller order");
        let v = dot(&self.value(lo), &self.value(hi)).expect("neighbouring exceptional slopes are less than 3 apart");
        self.memo.write().expect("memo lock").entry(t).or_insert(v).clone()
    }

    /// The dyadic index of `alpha` among orders up to `max_order`.
    pub fn inverse(&self, alpha: &Rational, max_order: u32) -> Option<DyadicRational> {
        let n = floor(alpha).to_i64()?;
        if is_integral(alpha) {
            return Some(DyadicRational::integer(n));
        }
        // Bisection: the index lies in (lo/2^q, (lo+1)/2^q).
        let mut lo = n;
        for q in 1..=max_order.min(DyadicRational::MAX_ORDER - 1) {
            let mid = DyadicRational::new(2 * lo + 1, q).ok()?;
            let v = self.value(mid);
            if &v == alpha {
                return Some(mid);
            }
            lo = if alpha < &v { 2 * lo } else { 2 * lo + 1 };
        }
        None
    }
}

pub fn epsilon_p2(t: DyadicRational) -> Rational {
    EpsilonP2::global().value(t)
}

pub fn epsilon_p2_inverse(alpha: &Rational, max_order: u32) -> Option<DyadicRational> {
    EpsilonP2::global().inverse(alpha, max_order)
}

/// All exceptional slopes `ε(t)` with `order(t) ≤ cutoff` and `t` in `[a, b]`
/// for integers `a ≤ b`, increasing.
fn slopes_between(a: i64, b: i64, cutoff: u32) -> Vec<Rational> {
    let eps = EpsilonP2::global();
    let step = 1i64 << cutoff;
    (a * step..=b * step).map(|p| eps.value(DyadicRational::new(p, cutoff).expect("bounded order"))).collect()
}

/// The simplest rational strictly between `a` and `b` (or above `a` when `b`
/// is `None`): the one with the smallest denominator.
pub fn simplest_between(a: &Rational, b: Option<&Rational>) -> Rational {
    let n = Rational::from_integer(floor(a));
    let next = &n + int(1);
    if b.is_none_or(|b| &next < b) {
        return next;
    }
    let b = b.expect("bounded");
    // Both ends lie in [n, n+1]; recurse on the reciprocals of the fractional parts.
    let lo = int(1) / (b - &n);
    let hi = if *a == n { None } else { Some(int(1) / (a - &n)) };
    n + int(1) / simplest_between(&lo, hi.as_ref())
}

/// Largest value of `P(−|x − μ|)` for `x` in `[a, b]`.
fn max_weight_on(a: &Rational, b: &Rational, mu: &Rational) -> Rational {
    let w = |x: &Rational| hilbert_p(&-rational::abs(&(x - mu)));
    let mut best = w(a).max(w(b));
    if a < mu && mu < b {
        best = best.max(int(1));
    }
    best
}

/// δ at a cutoff, with the certificate that no slope beyond the cutoff can
/// raise it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    #[serde(with = "rational::as_string")]
    pub mu: Rational,
    pub cutoff: u32,
    /// Maximum over enumerated slopes within distance 3 of `μ`.
    #[serde(with = "rational::as_string")]
    pub value: Rational,
    /// A slope attaining the maximum.
    #[serde(with = "rational::as_string")]
    pub witness: Rational,
    /// Upper bound on the terms of all slopes not enumerated at this cutoff.
    #[serde(with = "rational::as_string")]
    pub remainder_bound: Rational,
    /// True when `remainder_bound ≤ value`, so `value` is the exact δ(μ).
    pub certified: bool,
}

/// `max P(−|α−μ|) − Δ(α)` over exceptional slopes `α = ε(t)`, `order(t) ≤ cutoff`,
/// `|α − μ| < 3`.
pub fn delta_of_mu(mu: &Rational, cutoff: u32) -> DeltaReport {
    let m = floor(mu).to_i64().expect("slope of moderate size");
    let slopes = slopes_between(m - 3, m + 4, cutoff);
    let three = int(3);
    let near = |a: &Rational| rational::abs(&(a - mu)) < three;
    let term = |a: &Rational| hilbert_p(&-rational::abs(&(a - mu))) - discriminant_of_rank(a.denom());

    let (witness, value) = slopes
        .iter()
        .filter(|a| near(a))
        .map(|a| (a.clone(), term(a)))
        .max_by(|x, y| x.1.cmp(&y.1))
        .expect("an integer lies within distance 3");

    // Slopes not enumerated fall strictly inside a gap between consecutive
    // enumerated ones and have rank at least that of the simplest rational there.
    let (lo_window, hi_window) = (mu - &three, mu + &three);
    let mut remainder_bound: Option<Rational> = None;
    for w in slopes.windows(2) {
        let a = (&w[0]).max(&lo_window).clone();
        let b = (&w[1]).min(&hi_window).clone();
        if a >= b {
            continue;
        }
        let r = simplest_between(&w[0], Some(&w[1])).denom().clone();
        let bound = max_weight_on(&a, &b, mu) - discriminant_of_rank(&r);
        if remainder_bound.as_ref().is_none_or(|best| &bound > best) {
            remainder_bound = Some(bound);
        }
    }
    let remainder_bound = remainder_bound.expect("window covers at least one gap");
    let certified = remainder_bound <= value;
    DeltaReport { mu: mu.clone(), cutoff, value, witness, remainder_bound, certified }
}

/// The first cutoff up to `max_cutoff` whose δ is certified.
pub fn certified_delta(mu: &Rational, max_cutoff: u32) -> Option<DeltaReport> {
    (0..=max_cutoff).map(|c| delta_of_mu(mu, c)).find(|r| r.certified)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Exceptional,
    Stable,
    Unstable,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Stability,
    #[serde(with = "rational::as_string")]
    pub chi: Rational,
    pub delta: DeltaReport,
}

/// Decides whether `(r, μ, Δ)` is the character of a stable bundle on P²,
/// looking at exceptional slopes up to `cutoff`.
pub fn stability_p2(r: &BigInt, mu: &Rational, delta: &Rational, cutoff: u32) -> Result<StabilityReport> {
    if !r.is_positive() {
        return Err(Error::InvalidCharacter(format!("rank {r} is not positive")));
    }
    let rank = Rational::from_integer(r.clone());
    let c1 = &rank * mu;
    let ch2 = &rank * (mu * mu / int(2) - delta);
    let c2 = (&c1 * &c1 - int(2) * &ch2) / int(2);
    let chi = &rank * (hilbert_p(mu) - delta);
    if !is_integral(&c1) || !is_integral(&c2) || !is_integral(&chi) {
        return Err(Error::NonIntegralCharacter(format!(
            "(r, c1, c2, χ) = ({r}, {}, {}, {})",
            rational::format(&c1),
            rational::format(&c2),
            rational::format(&chi)
        )));
    }
    let report = delta_of_mu(mu, cutoff);
    let exceptional_shape = mu.denom() == r && *delta == discriminant_of_rank(r);
    let verdict = if exceptional_shape && epsilon_p2_inverse(mu, cutoff).is_some() {
        Stability::Exceptional
    } else if *delta < report.value {
        // The enumerated maximum is a lower bound for δ(μ); only an
        // exceptional character of higher order could still be stable.
        if exceptional_shape {
            Stability::Undecided
        } else {
            Stability::Unstable
        }
    } else if report.certified {
        Stability::Stable
    } else {
        Stability::Undecided
    };
    Ok(StabilityReport { verdict, chi, delta: report })
}

pub fn is_stable_character_p2(r: &BigInt, mu: &Rational, delta: &Rational, cutoff: u32) -> Result<Stability> {
    Ok(stability_p2(r, mu, delta, cutoff)?.verdict)
}
