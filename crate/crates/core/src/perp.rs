//! The class cut out by three orthogonality conditions.
//!
//! `perp(e, g, h)` is the line `{v : χ(v,e) = χ(g,v) = χ(h,v) = 0}` in
//! `K(P³)⊗Q`, read off in the affine chart `ch0 ≠ 0` and lifted to an
//! integral class by taking `ch0` to be the denominator of `ch1/ch0`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kgroup::{euler_pair, is_candidate_exceptional, ChernCharacter};
use crate::rational::{self, int, Rational};

/// A point `(ch1/ch0, ch2/ch0, ch3/ch0)` of the affine chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopePoint {
    #[serde(with = "rational::as_string")]
    pub x1: Rational,
    #[serde(with = "rational::as_string")]
    pub x2: Rational,
    #[serde(with = "rational::as_string")]
    pub x3: Rational,
}

fn basis(i: usize) -> ChernCharacter {
    let mut c = [0i64; 4];
    c[i] = 1;
    ChernCharacter::from_ints(c)
}

/// Row-reduces in place and returns the pivot column of each nonzero row.
fn row_reduce(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn rank(classes: &[&ChernCharacter]) -> usize {
    let mut rows: Vec<Vec<Rational>> = classes.iter().map(|v| v.coords().map(Clone::clone).to_vec()).collect();
    row_reduce(&mut rows).len()
}

/// The orthogonal line as a homogeneous vector, or the reason there is none.
fn orthogonal_line(e: &ChernCharacter, g: &ChernCharacter, h: &ChernCharacter) -> Result<[Rational; 4]> {
    if rank(&[e, g, h]) < 3 {
        return Err(Error::SingularSystem);
    }
    let mut rows: Vec<Vec<Rational>> = vec![
        (0..4).map(|i| euler_pair(&basis(i), e)).collect(),
        (0..4).map(|i| euler_pair(g, &basis(i))).collect(),
        (0..4).map(|i| euler_pair(h, &basis(i))).collect(),
    ];
    let pivots = row_reduce(&mut rows);
    if pivots.len() < 3 {
        return Err(Error::SingularSystem);
    }
    let free = (0..4).find(|c| !pivots.contains(c)).expect("one free column");
    let mut line: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
    line[free] = int(1);
    for (row, &p) in rows.iter().zip(&pivots) {
        line[p] = -row[free].clone();
    }
    Ok(line)
}

/// Solves the three conditions after dividing through by `ch0`.
pub fn solve_orthogonality(e: &ChernCharacter, g: &ChernCharacter, h: &ChernCharacter) -> Result<SlopePoint> {
    let line = orthogonal_line(e, g, h)?;
    if line[0].is_zero() {
        return Err(Error::LineAtInfinity);
    }
    let [ch0, ch1, ch2, ch3] = line;
    Ok(SlopePoint { x1: ch1 / &ch0, x2: ch2 / &ch0, x3: ch3 / &ch0 })
}

/// The exceptional class orthogonal to `e` on the right and to `g`, `h` on the left.
pub fn perp(e: &ChernCharacter, g: &ChernCharacter, h: &ChernCharacter) -> Result<ChernCharacter> {
    let point = solve_orthogonality(e, g, h)?;
    let rank = Rational::from_integer(point.x1.denom().clone());
    let v = ChernCharacter::new(int(1), point.x1, point.x2, point.x3).scale(&rank);
    if !is_candidate_exceptional(&v) {
        return Err(Error::NonExceptionalLift(v.to_string()));
    }
    Ok(v)
}
