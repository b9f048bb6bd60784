//! Foundations of helices and their mutations, at the level of Chern characters.
//!
//! A foundation `(E, F, G, H)` determines the periodic helix
//! `… H(-4), E, F, G, H, E(4), …`. Mutating a consecutive pair replaces one
//! bundle by `k·ch(partner) − ch(bundle)` with `k = χ` of the pair; inside a
//! helix the higher Ext groups vanish so `χ` is the hom count.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kgroup::{euler_pair, is_candidate_exceptional, slope, twist, ChernCharacter};
use crate::rational::{floor, int, is_integral, Rational};

/// `R_F E = χ(E,F)·ch(F) − ch(E)`, the cokernel of coevaluation.
pub fn right_mutation(e: &ChernCharacter, f: &ChernCharacter) -> Result<ChernCharacter> {
    let k = hom_count(e, f)?;
    Ok(&f.scale(&k) - e)
}

/// `L_E F = χ(E,F)·ch(E) − ch(F)`, the kernel of evaluation.
pub fn left_mutation(e: &ChernCharacter, f: &ChernCharacter) -> Result<ChernCharacter> {
    let k = hom_count(e, f)?;
    Ok(&e.scale(&k) - f)
}

/// `χ(e, f)` checked to be a positive integer.
pub fn hom_count(e: &ChernCharacter, f: &ChernCharacter) -> Result<Rational> {
    let k = euler_pair(e, f);
    if !is_integral(&k) || !k.is_positive() {
        return Err(Error::NonPositiveHom(crate::rational::format(&k)));
    }
    Ok(k)
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Foundation([ChernCharacter; 4]);

impl Foundation {
    /// Validates slope ordering, numerical exceptionality of the collection
    /// and of each entry.
    pub fn new(bundles: [ChernCharacter; 4]) -> Result<Self> {
        let f = Foundation(bundles);
        f.check()?;
        Ok(f)
    }

    /// Wraps a 4-tuple without validation.
    pub fn new_unchecked(bundles: [ChernCharacter; 4]) -> Self {
        Foundation(bundles)
    }

    /// `(O(-1), O, O(1), O(2))`.
    pub fn standard() -> Self {
        Foundation([-1, 0, 1, 2].map(crate::kgroup::ch_line))
    }

    pub fn check(&self) -> Result<()> {
        let slopes = self.slopes().map_err(|_| Error::InvalidFoundation("entry of rank zero".into()))?;
        if slopes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFoundation(format!("slopes not increasing in {self}")));
        }
        for (i, b) in self.0.iter().enumerate() {
            if !is_candidate_exceptional(b) {
                return Err(Error::InvalidFoundation(format!("entry {i} = {b} is not exceptional")));
            }
            for j in 0..i {
                if euler_pair(b, &self.0[j]) != int(0) {
                    return Err(Error::InvalidFoundation(format!("χ(entry {i}, entry {j}) ≠ 0 in {self}")));
                }
            }
        }
        Ok(())
    }

    pub fn bundles(&self) -> &[ChernCharacter; 4] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &ChernCharacter {
        &self.0[i]
    }

    pub fn slopes(&self) -> Result<[Rational; 4]> {
        let [a, b, c, d] = &self.0;
        Ok([slope(a)?, slope(b)?, slope(c)?, slope(d)?])
    }

    /// Entry at position `i` of the helix spanned by this foundation.
    pub fn helix_entry(&self, i: i64) -> ChernCharacter {
        let period = i.div_euclid(4);
        twist(&self.0[i.rem_euclid(4) as usize], 4 * period)
    }

    /// The four consecutive helix entries starting at position `start`.
    pub fn window(&self, start: i64) -> Foundation {
        Foundation(std::array::from_fn(|k| self.helix_entry(start + k as i64)))
    }

    pub fn twisted(&self, n: i64) -> Foundation {
        Foundation(std::array::from_fn(|k| twist(&self.0[k], n)))
    }

    /// Canonical window of the helix: the one starting at the first entry of
    /// non-negative slope. Equal keys mean equal helices.
    pub fn helix_key(&self) -> Foundation {
        let s = self.slopes().expect("validated foundation");
        let at = |i: i64| &s[i.rem_euclid(4) as usize] + int(4 * i.div_euclid(4));
        let shift = floor(&(-&s[0] / int(4))).to_i64().expect("small twist");
        let mut i = 4 * shift;
        while at(i) < int(0) {
            i += 1;
        }
        while at(i - 1) >= int(0) {
            i -= 1;
        }
        self.window(i)
    }

    pub fn same_helix(&self, other: &Foundation) -> bool {
        self.helix_key() == other.helix_key()
    }
}

impl fmt::Display for Foundation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "[{a}, {b}, {c}, {d}]")
    }
}

impl fmt::Debug for Foundation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Foundation{self}")
    }
}

/// A foundation with one distinguished position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedFoundation {
    pub foundation: Foundation,
    pub mark: usize,
}

impl MarkedFoundation {
    pub fn new(foundation: Foundation, mark: usize) -> Result<Self> {
        if mark > 3 {
            return Err(Error::InvalidFoundation(format!("mark {mark} out of range")));
        }
        Ok(MarkedFoundation { foundation, mark })
    }

    pub fn marked(&self) -> &ChernCharacter {
        self.foundation.get(self.mark)
    }

    /// The entries directly left and right of the mark, read in the helix.
    pub fn neighbours(&self) -> (ChernCharacter, ChernCharacter) {
        let m = self.mark as i64;
        (self.foundation.helix_entry(m - 1), self.foundation.helix_entry(m + 1))
    }

    /// The three other entries in the order that `perp` expects:
    /// one right-orthogonal class then two left-orthogonal ones.
    pub fn perp_arguments(&self) -> [ChernCharacter; 3] {
        let m = self.mark as i64;
        let f = &self.foundation;
        [f.helix_entry(m - 1), f.helix_entry(m + 1), f.helix_entry(m + 2)]
    }
}

/// The six admissible moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MutationMove {
    R0,
    R1,
    R2,
    L0,
    L1,
    L2,
}

impl MutationMove {
    pub const ALL: [MutationMove; 6] =
        [MutationMove::R0, MutationMove::R1, MutationMove::R2, MutationMove::L0, MutationMove::L1, MutationMove::L2];

    pub fn is_right(self) -> bool {
        matches!(self, MutationMove::R0 | MutationMove::R1 | MutationMove::R2)
    }

    /// Position of the bundle the move introduces.
    pub fn new_position(self) -> usize {
        if self.is_right() {
            1
        } else {
            2
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MutationMove::R0 => "R0",
            MutationMove::R1 => "R1",
            MutationMove::R2 => "R2",
            MutationMove::L0 => "L0",
            MutationMove::L1 => "L1",
            MutationMove::L2 => "L2",
        }
    }
}

impl fmt::Display for MutationMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MutationMove {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MutationMove::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown move {s:?}, expected one of R0 R1 R2 L0 L1 L2")))
    }
}

/// `(E,F,G,H)` to the tuple listed for the move; the inner mutations use
/// `right_mutation`/`left_mutation` and twists by ±4. The result is validated.
pub fn apply_move(f: &Foundation, m: MutationMove) -> Result<Foundation> {
    let [e, ff, g, h] = f.bundles();
    let out = match m {
        MutationMove::R0 => [e.clone(), right_mutation(&twist(h, -4), e)?, ff.clone(), g.clone()],
        MutationMove::R1 => [ff.clone(), right_mutation(e, ff)?, g.clone(), h.clone()],
        MutationMove::R2 => [g.clone(), right_mutation(ff, g)?, h.clone(), twist(e, 4)],
        MutationMove::L0 => [twist(h, -4), e.clone(), left_mutation(ff, g)?, ff.clone()],
        MutationMove::L1 => [e.clone(), ff.clone(), left_mutation(g, h)?, g.clone()],
        MutationMove::L2 => [ff.clone(), g.clone(), left_mutation(h, &twist(e, 4))?, h.clone()],
    };
    Foundation::new(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

/// Which consecutive pair of a foundation `(A,B,C,D)` is mutated.
/// `Wrap` is `(D(-4), A)` for right mutations and `(D, A(4))` for left ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pair {
    First,
    Second,
    Third,
    Wrap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairMutation {
    pub direction: Direction,
    pub pair: Pair,
}

impl PairMutation {
    pub const fn right(pair: Pair) -> Self {
        PairMutation { direction: Direction::Right, pair }
    }

    pub const fn left(pair: Pair) -> Self {
        PairMutation { direction: Direction::Left, pair }
    }

    /// All eight, in the order R/L of (A,B), (B,C), (C,D), then the two wrap-arounds.
    pub const ALL: [PairMutation; 8] = [
        PairMutation::right(Pair::First),
        PairMutation::left(Pair::First),
        PairMutation::right(Pair::Second),
        PairMutation::left(Pair::Second),
        PairMutation::right(Pair::Third),
        PairMutation::left(Pair::Third),
        PairMutation::right(Pair::Wrap),
        PairMutation::left(Pair::Wrap),
    ];
}

impl fmt::Display for PairMutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.direction {
            Direction::Left => "L",
            Direction::Right => "R",
        };
        let p = match (self.pair, self.direction) {
            (Pair::First, _) => "A,B",
            (Pair::Second, _) => "B,C",
            (Pair::Third, _) => "C,D",
            (Pair::Wrap, Direction::Right) => "D(-4),A",
            (Pair::Wrap, Direction::Left) => "D,A(4)",
        };
        write!(f, "{d}({p})")
    }
}

/// Reads the display form, e.g. `R(A,B)` or `L(D,A(4))`; spaces are ignored.
impl FromStr for PairMutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        PairMutation::ALL
            .into_iter()
            .find(|m| m.to_string() == compact)
            .ok_or_else(|| Error::Parse(format!("unknown mutation {s:?}; expected R0..L2 or a pair form like R(A,B)")))
    }
}

fn pair_tuple(f: &Foundation, m: PairMutation) -> Result<[ChernCharacter; 4]> {
    let [a, b, c, d] = f.bundles();
    Ok(match (m.direction, m.pair) {
        (Direction::Right, Pair::First) => [b.clone(), right_mutation(a, b)?, c.clone(), d.clone()],
        (Direction::Left, Pair::First) => [left_mutation(a, b)?, a.clone(), c.clone(), d.clone()],
        (Direction::Right, Pair::Second) => [a.clone(), c.clone(), right_mutation(b, c)?, d.clone()],
        (Direction::Left, Pair::Second) => [a.clone(), left_mutation(b, c)?, b.clone(), d.clone()],
        (Direction::Right, Pair::Third) => [a.clone(), b.clone(), d.clone(), right_mutation(c, d)?],
        (Direction::Left, Pair::Third) => [a.clone(), b.clone(), left_mutation(c, d)?, c.clone()],
        (Direction::Right, Pair::Wrap) => [a.clone(), right_mutation(&twist(d, -4), a)?, b.clone(), c.clone()],
        (Direction::Left, Pair::Wrap) => [b.clone(), c.clone(), left_mutation(d, &twist(a, 4))?, d.clone()],
    })
}

/// Mutates one pair of `(A,B,C,D)` and returns the resulting foundation.
pub fn mutate_pair(f: &Foundation, m: PairMutation) -> Result<Foundation> {
    Foundation::new(pair_tuple(f, m)?)
}

/// The eight mutations of the helix through `f`.
pub fn enumerate_mutations(f: &Foundation) -> Result<Vec<(PairMutation, Foundation)>> {
    PairMutation::ALL.iter().map(|&m| Ok((m, mutate_pair(f, m)?))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MutationClass {
    Commuting,
    Admissible,
    Extraneous,
}

/// Classifies a mutation of `τ` relative to the mutation `γ` that produced it.
///
/// `child` is written on `τ`'s foundation with the new bundle in position 1
/// when `γ` was a right mutation, `τ = (F, R_F E, G, H)`, and in position 0
/// when `γ` was a left mutation, `τ = (L_E F, E, G, H)`.
pub fn classify_mutation(gamma: Direction, child: PairMutation) -> MutationClass {
    use Direction::*;
    use MutationClass::*;
    use Pair::*;
    let admissible = match child.pair {
        Third => return Commuting,
        First => child.direction == gamma,
        Second => child.direction == Left,
        Wrap => child.direction == Right,
    };
    if admissible {
        Admissible
    } else {
        Extraneous
    }
}

/// The bundles the six moves would introduce, in slope order
/// `R0 < L0 < F < R1 < L1 < G < R2 < L2`.
pub fn interleaved_slopes(f: &Foundation) -> Result<Vec<Rational>> {
    let [e, ff, g, h] = f.bundles();
    let new = |m: MutationMove| -> Result<Rational> { slope(apply_move(f, m)?.get(m.new_position())) };
    Ok(vec![
        slope(e)?,
        new(MutationMove::R0)?,
        new(MutationMove::L0)?,
        slope(ff)?,
        new(MutationMove::R1)?,
        new(MutationMove::L1)?,
        slope(g)?,
        new(MutationMove::R2)?,
        new(MutationMove::L2)?,
        slope(h)?,
    ])
}

/// Checks both helix-relation squares at the Chern level:
/// `R(E,F) = L(G, L_H(E(4))) ∘ L(H, E(4))` and
/// `L(G,H) = R(F, R_E(H(-4))) ∘ R(H(-4), E)`.
pub fn verify_helix_relation(f: &Foundation) -> Result<bool> {
    let direct = mutate_pair(f, PairMutation::right(Pair::First))?;
    let around = mutate_pair(&mutate_pair(f, PairMutation::left(Pair::Wrap))?, PairMutation::left(Pair::Second))?;
    if direct != around {
        return Ok(false);
    }
    let direct = mutate_pair(f, PairMutation::left(Pair::Third))?;
    let around = mutate_pair(&mutate_pair(f, PairMutation::right(Pair::Wrap))?, PairMutation::right(Pair::Second))?;
    Ok(direct == around)
}

/// Like `verify_helix_relation` but on an unvalidated tuple: any failure
/// along either path counts as the relation not holding.
pub fn helix_relation_holds(bundles: &[ChernCharacter; 4]) -> bool {
    let step = |f: &Foundation, m| pair_tuple(f, m).map(Foundation::new_unchecked);
    let paths = || -> Result<bool> {
        let f = Foundation::new_unchecked(bundles.clone());
        let a = step(&f, PairMutation::right(Pair::First))?;
        let b = step(&step(&f, PairMutation::left(Pair::Wrap))?, PairMutation::left(Pair::Second))?;
        let c = step(&f, PairMutation::left(Pair::Third))?;
        let d = step(&step(&f, PairMutation::right(Pair::Wrap))?, PairMutation::right(Pair::Second))?;
        Ok(a == b && c == d)
    };
    paths().unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgroup::ch_line;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn ch(c: [(i64, i64); 4]) -> ChernCharacter {
        ChernCharacter::from_fracs(c)
    }

    fn t_minus_1() -> ChernCharacter {
        ch([(3, 1), (1, 1), (-1, 2), (1, 6)])
    }

    fn tv_2() -> ChernCharacter {
        ch([(3, 1), (2, 1), (0, 1), (-2, 3)])
    }

    #[test]
    fn right_mutation_examples() {
        assert_eq!(right_mutation(&ch_line(-1), &ch_line(0)).unwrap(), t_minus_1());
        assert_eq!(right_mutation(&ch_line(-2), &ch_line(-1)).unwrap(), ch([(3, 1), (-2, 1), (0, 1), (2, 3)]));
        assert_eq!(right_mutation(&ch_line(0), &ch_line(1)).unwrap(), twist(&t_minus_1(), 1));
    }

    #[test]
    fn left_mutation_examples() {
        assert_eq!(left_mutation(&ch_line(1), &ch_line(2)).unwrap(), tv_2());
        assert_eq!(hom_count(&t_minus_1(), &ch_line(1)).unwrap(), int(6));
        assert_eq!(left_mutation(&t_minus_1(), &ch_line(1)).unwrap(), ch([(17, 1), (5, 1), (-7, 2), (5, 6)]));
    }

    #[test]
    fn mutation_needs_positive_hom() {
        assert!(matches!(right_mutation(&ch_line(0), &ch_line(-1)), Err(Error::NonPositiveHom(_))));
        assert!(matches!(left_mutation(&ch_line(1), &ch_line(0)), Err(Error::NonPositiveHom(_))));
    }

    #[test]
    fn mutations_are_inverse() {
        let f = Foundation::standard();
        for m in [MutationMove::R0, MutationMove::R1, MutationMove::L1, MutationMove::L2] {
            let g = apply_move(&f, m).unwrap();
            for w in g.bundles().windows(2) {
                let (e, ff) = (&w[0], &w[1]);
                assert_eq!(left_mutation(ff, &right_mutation(e, ff).unwrap()).unwrap(), *e);
                assert_eq!(right_mutation(&left_mutation(e, ff).unwrap(), e).unwrap(), *ff);
            }
        }
    }

    #[test]
    fn apply_move_examples() {
        let f = Foundation::standard();
        let r1 = apply_move(&f, MutationMove::R1).unwrap();
        assert_eq!(r1.bundles(), &[ch_line(0), t_minus_1(), ch_line(1), ch_line(2)]);
        let l1 = apply_move(&f, MutationMove::L1).unwrap();
        assert_eq!(l1.bundles(), &[ch_line(-1), ch_line(0), tv_2(), ch_line(1)]);
        let r0 = apply_move(&r1, MutationMove::R0).unwrap();
        assert_eq!(r0.bundles(), &[ch_line(0), ch([(9, 1), (2, 1), (-2, 1), (4, 3)]), t_minus_1(), ch_line(1)]);
        assert_eq!(hom_count(&ch_line(-2), &ch_line(0)).unwrap(), int(10));
    }

    #[test]
    fn every_move_is_a_pair_mutation() {
        let f = apply_move(&Foundation::standard(), MutationMove::R1).unwrap();
        let pairs = [
            (MutationMove::R0, PairMutation::right(Pair::Wrap)),
            (MutationMove::R1, PairMutation::right(Pair::First)),
            (MutationMove::R2, PairMutation::right(Pair::Second)),
            (MutationMove::L0, PairMutation::left(Pair::Second)),
            (MutationMove::L1, PairMutation::left(Pair::Third)),
            (MutationMove::L2, PairMutation::left(Pair::Wrap)),
        ];
        for (m, p) in pairs {
            assert!(apply_move(&f, m).unwrap().same_helix(&mutate_pair(&f, p).unwrap()), "{m}");
        }
    }

    #[test]
    fn eight_distinct_mutations() {
        for f in [Foundation::standard(), apply_move(&Foundation::standard(), MutationMove::R1).unwrap()] {
            let all = enumerate_mutations(&f).unwrap();
            assert_eq!(all.len(), 8);
            let keys: std::collections::HashSet<_> = all.iter().map(|(_, g)| g.helix_key()).collect();
            assert_eq!(keys.len(), 8);
            assert!(!keys.contains(&f.helix_key()));
        }
    }

    /// On `(O, T(-1), O(1), O(2))` the right mutation across `T(-1)` introduces
    /// the slope-4/11 bundle with foundation `(T(-1), E, O(1), O(2))`.
    #[test]
    fn tangent_foundation_mutation_to_four_elevenths() {
        let f = apply_move(&Foundation::standard(), MutationMove::R1).unwrap();
        let g = mutate_pair(&f, PairMutation::right(Pair::First)).unwrap();
        let e = ch([(11, 1), (4, 1), (-2, 1), (2, 3)]);
        assert_eq!(slope(&e).unwrap(), frac(4, 11));
        assert_eq!(g.bundles(), &[t_minus_1(), e, ch_line(1), ch_line(2)]);
        assert_eq!(apply_move(&f, MutationMove::R1).unwrap(), g);
    }

    #[test]
    fn classification_tables() {
        use Direction::*;
        use MutationClass::*;
        assert_eq!(classify_mutation(Right, PairMutation::right(Pair::Third)), Commuting);
        assert_eq!(classify_mutation(Right, PairMutation::left(Pair::Third)), Commuting);
        assert_eq!(classify_mutation(Right, PairMutation::left(Pair::First)), Extraneous);
        assert_eq!(classify_mutation(Right, PairMutation::right(Pair::First)), Admissible);
        assert_eq!(classify_mutation(Left, PairMutation::left(Pair::Second)), Admissible);
        assert_eq!(classify_mutation(Left, PairMutation::right(Pair::Second)), Extraneous);
        assert_eq!(classify_mutation(Left, PairMutation::left(Pair::First)), Admissible);
        assert_eq!(classify_mutation(Left, PairMutation::right(Pair::Wrap)), Admissible);
        for gamma in [Left, Right] {
            let count = |c| PairMutation::ALL.iter().filter(|&&m| classify_mutation(gamma, m) == c).count();
            assert_eq!((count(Commuting), count(Admissible), count(Extraneous)), (2, 3, 3));
        }
    }

    /// The admissible classes after a right mutation produce exactly the bundles
    /// of R0, L0 and R1, and after a left mutation those of L1, R2 and L2.
    #[test]
    fn admissible_classes_match_moves() {
        let root = Foundation::standard();
        let cases = [(MutationMove::R1, Direction::Right, 1usize), (MutationMove::L1, Direction::Left, 2)];
        for (gamma_move, gamma, mark) in cases {
            let sigma = apply_move(&root, gamma_move).unwrap();
            // τ written with the new bundle at position 1 (right) or 0 (left).
            let tau = match gamma {
                Direction::Right => sigma.clone(),
                Direction::Left => sigma.window(mark as i64),
            };
            let mut from_classes: Vec<_> = PairMutation::ALL
                .iter()
                .filter(|&&m| classify_mutation(gamma, m) == MutationClass::Admissible)
                .map(|&m| mutate_pair(&tau, m).unwrap().helix_key())
                .collect();
            let moves: &[MutationMove] = match gamma {
                Direction::Right => &[MutationMove::R0, MutationMove::L0, MutationMove::R1],
                Direction::Left => &[MutationMove::L1, MutationMove::R2, MutationMove::L2],
            };
            let mut from_moves: Vec<_> = moves.iter().map(|&m| apply_move(&sigma, m).unwrap().helix_key()).collect();
            from_classes.sort_by_key(|f| f.to_string());
            from_moves.sort_by_key(|f| f.to_string());
            assert_eq!(from_classes, from_moves);
        }
    }

    #[test]
    fn helix_relation_on_standard() {
        let f = Foundation::standard();
        assert!(verify_helix_relation(&f).unwrap());
        assert!(helix_relation_holds(f.bundles()));
        for m in MutationMove::ALL {
            assert!(verify_helix_relation(&apply_move(&f, m).unwrap()).unwrap(), "{m}");
        }
    }

    #[test]
    fn helix_relation_detects_corruption() {
        let mut b = Foundation::standard().bundles().clone();
        b[3] = &b[3] + &ChernCharacter::from_ints([0, 0, 0, 1]);
        assert!(!helix_relation_holds(&b));
    }

    #[test]
    fn slopes_interleave() {
        let root = Foundation::standard();
        for f in [root.clone(), apply_move(&root, MutationMove::R1).unwrap(), apply_move(&root, MutationMove::L1).unwrap()] {
            let s = interleaved_slopes(&f).unwrap();
            assert!(s.windows(2).all(|w| w[0] < w[1]), "{s:?}");
        }
    }

    #[test]
    fn foundation_validation() {
        let swapped = [ch_line(0), ch_line(-1), ch_line(1), ch_line(2)];
        assert!(matches!(Foundation::new(swapped), Err(Error::InvalidFoundation(_))));
        let gap = [ch_line(-1), ch_line(0), ch_line(1), ch_line(3)];
        assert!(matches!(Foundation::new(gap), Err(Error::InvalidFoundation(_))));
    }

    #[test]
    fn helix_key_is_window_independent() {
        let f = apply_move(&Foundation::standard(), MutationMove::R1).unwrap();
        for start in -9..9 {
            assert_eq!(f.window(start).helix_key(), f.helix_key());
        }
        assert_eq!(Foundation::standard().helix_key().bundles(), &[0, 1, 2, 3].map(ch_line));
    }

    #[test]
    fn move_parsing() {
        assert_eq!("l2".parse::<MutationMove>().unwrap(), MutationMove::L2);
        assert!("R3".parse::<MutationMove>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_move_sequences_stay_valid(moves in proptest::collection::vec(0usize..6, 0..5)) {
            let mut f = Foundation::standard();
            for i in moves {
                f = apply_move(&f, MutationMove::ALL[i]).unwrap();
                prop_assert!(verify_helix_relation(&f).unwrap());
                for mark in 0..4 {
                    let mf = MarkedFoundation::new(f.clone(), mark).unwrap();
                    let [a, b, c] = mf.perp_arguments();
                    prop_assert_eq!(&crate::perp::perp(&a, &b, &c).unwrap(), mf.marked());
                }
            }
        }
    }
}
