//! The verification suite: every invariant of the library, run at chosen
//! bounds against a given ε instance.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epsilon::{is_left_type, Epsilon};
use crate::helix::{helix_relation_holds, verify_helix_relation};
use crate::index::{DyadicRational, ThreeAdicRational};
use crate::kgroup::{ch_line, chern_classes, euler_chi, euler_pair, slope, ChernCharacter};
use crate::p2::{certified_delta, epsilon_p2, slope_data};
use crate::perp::perp;
use crate::rational::{frac, int, is_integral, to_integer, Rational};
use crate::reference::audit_table;
use crate::tree::build_tree;

/// One named check. `elapsed` is reported in the text rendering only, so
/// the JSON rendering is reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// How many cases were examined.
    pub count: usize,
    /// The first failing case, exactly.
    pub witness: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_order: u32,
    pub tree_depth: u32,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("verification at max order {}, tree depth {}\n", self.max_order, self.tree_depth);
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<28} {:>7} cases {:>9.3} ms",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.count,
                c.elapsed.as_secs_f64() * 1e3
            ));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  witness: {w}"));
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} failed: {}\n",
            self.checks.len(),
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// `(cases examined, first failure)`.
type Outcome = (usize, Option<String>);
type CheckFn = fn(&Epsilon, u32) -> Outcome;

/// Runs `bad` over `cases` and reports the first failure in case order.
fn sweep<T: Sync>(cases: &[T], bad: impl Fn(&T) -> Option<String> + Sync) -> Outcome {
    let failures: Vec<(usize, String)> =
        cases.par_iter().enumerate().filter_map(|(i, c)| bad(c).map(|w| (i, w))).collect();
    (cases.len(), failures.into_iter().min_by_key(|f| f.0).map(|f| f.1))
}

fn err(e: impl std::fmt::Display) -> Option<String> {
    Some(e.to_string())
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn pairing(_: &Epsilon, _: u32) -> Outcome {
    let mut count = 0;
    for n in 0..=10i64 {
        count += 1;
        let expected = int(binomial(n as u64 + 3, 3) as i64);
        if euler_pair(&ch_line(0), &ch_line(n)) != expected {
            return (count, Some(format!("χ(O, O({n})) ≠ {expected}")));
        }
    }
    count += 1;
    let v = &ch_line(-3).scale(&int(12)) - &ch_line(-4).scale(&int(9));
    if euler_chi(&v) != int(9) {
        return (count, Some(format!("χ(12·O(-3) − 9·O(-4)) = {}", euler_chi(&v))));
    }
    // Serre duality χ(a, b) = −χ(b, a(−4)) on line bundles.
    for a in -3..=3 {
        for b in -3..=3 {
            count += 1;
            if euler_pair(&ch_line(a), &ch_line(b)) != -euler_pair(&ch_line(b), &ch_line(a - 4)) {
                return (count, Some(format!("Serre duality fails for O({a}), O({b})")));
            }
        }
    }
    (count, None)
}

fn base_values(eps: &Epsilon, _: u32) -> Outcome {
    let mut cases: Vec<(ThreeAdicRational, ChernCharacter)> =
        (-5..=5).map(|n| (ThreeAdicRational::integer(n), ch_line(n))).collect();
    cases.push((ThreeAdicRational::new(1, 1).expect("1/3"), ChernCharacter::from_fracs([(3, 1), (1, 1), (-1, 2), (1, 6)])));
    sweep(&cases, |(t, v)| match eps.epsilon(*t) {
        Ok(w) if w == *v => None,
        Ok(w) => Some(format!("ε({t}) = {w}, expected {v}")),
        Err(e) => err(e),
    })
}

fn exceptional(eps: &Epsilon, max_order: u32) -> Outcome {
    sweep(&ThreeAdicRational::up_to_order(max_order), |&t| {
        let v = match eps.epsilon(t) {
            Ok(v) => v,
            Err(e) => return Some(format!("{t}: {e}")),
        };
        let chi = euler_pair(&v, &v);
        if chi != int(1) {
            return Some(format!("{t}: χ(E, E) = {chi} for {v}"));
        }
        let (Some(r), Some(d)) = (to_integer(&v.ch0), to_integer(&v.ch1)) else {
            return Some(format!("{t}: non-integral rank or degree in {v}"));
        };
        if r.gcd(&d) != BigInt::from(1) {
            return Some(format!("{t}: gcd(ch0, ch1) = {} for {v}", r.gcd(&d)));
        }
        chern_classes(&v).err().map(|e| format!("{t}: {e}"))
    })
}

fn bijection(eps: &Epsilon, max_order: u32) -> Outcome {
    let indices = ThreeAdicRational::up_to_order(max_order);
    let values: Vec<_> = indices.par_iter().map(|&t| eps.epsilon(t)).collect();
    let mut seen = HashSet::new();
    let mut prev: Option<(ThreeAdicRational, Rational)> = None;
    for (t, v) in indices.iter().zip(values) {
        let v = match v {
            Ok(v) => v,
            Err(e) => return (indices.len(), Some(format!("{t}: {e}"))),
        };
        let s = match slope(&v) {
            Ok(s) => s,
            Err(e) => return (indices.len(), Some(format!("{t}: {e}"))),
        };
        if !seen.insert(v.clone()) {
            return (indices.len(), Some(format!("{t}: character {v} repeats")));
        }
        if let Some((p, ps)) = &prev {
            if *ps >= s {
                return (indices.len(), Some(format!("slope of {t} is not above slope of {p}")));
            }
        }
        prev = Some((*t, s));
    }
    (indices.len(), None)
}

fn perp_consistency(eps: &Epsilon, max_order: u32) -> Outcome {
    sweep(&ThreeAdicRational::up_to_order(max_order), |&t| {
        let mf = match eps.distinguished_foundation(t) {
            Ok(mf) => mf,
            Err(e) => return Some(format!("{t}: {e}")),
        };
        let [a, b, c] = mf.perp_arguments();
        match perp(&a, &b, &c) {
            Ok(p) if &p == mf.marked() => None,
            Ok(p) => Some(format!("{t}: perp gives {p}, foundation holds {}", mf.marked())),
            Err(e) => Some(format!("{t}: {e}")),
        }
    })
}

fn recursion_identity(eps: &Epsilon, max_order: u32) -> Outcome {
    sweep(&ThreeAdicRational::up_to_order(max_order), |&t| match eps.recursion_identity(t) {
        Ok(Some(false)) => Some(format!("{t}: recursion identity fails")),
        Ok(_) => None,
        Err(e) => Some(format!("{t}: {e}")),
    })
}

fn resolutions(eps: &Epsilon, max_order: u32) -> Outcome {
    sweep(&ThreeAdicRational::up_to_order(max_order), |&t| {
        let (Ok(v), Ok(rs)) = (eps.epsilon(t), eps.standard_resolutions(t)) else {
            return Some(format!("{t}: resolutions unavailable"));
        };
        rs.iter().enumerate().find_map(|(i, r)| {
            if !r.is_additive() {
                Some(format!("{t}: resolution {} is not additive", i + 1))
            } else if r.defined() != &v {
                Some(format!("{t}: resolution {} presents {} instead of ε({t})", i + 1, r.defined()))
            } else {
                None
            }
        })
    })
}

fn helix_relations(eps: &Epsilon, max_order: u32) -> Outcome {
    sweep(&ThreeAdicRational::up_to_order(max_order), |&t| match eps.distinguished_foundation(t) {
        Ok(mf) => match verify_helix_relation(&mf.foundation) {
            Ok(true) => None,
            Ok(false) => Some(format!("{t}: helix relation fails on {}", mf.foundation)),
            Err(e) => Some(format!("{t}: {e}")),
        },
        Err(e) => Some(format!("{t}: {e}")),
    })
}

fn inverse(eps: &Epsilon, max_order: u32) -> Outcome {
    sweep(&ThreeAdicRational::up_to_order(max_order), |&t| {
        let v = eps.epsilon(t).ok()?;
        let back = eps.epsilon_inverse(&v, max_order);
        (back != Some(t)).then(|| format!("{t}: inverse returns {back:?}"))
    })
}

fn global_generation(eps: &Epsilon, max_order: u32) -> Outcome {
    let units = ThreeAdicRational::up_to_order(max_order);
    let mut cases: Vec<ThreeAdicRational> = (0..=2).map(ThreeAdicRational::integer).collect();
    for n in 0..=2 {
        cases.extend(units.iter().filter_map(|t| t.shift(n).ok()));
    }
    let (count, witness) = sweep(&cases, |&t| match eps.is_globally_generated(t) {
        Ok(true) => None,
        Ok(false) => Some(format!("{t}: not globally generated")),
        Err(e) => Some(format!("{t}: {e}")),
    });
    if witness.is_some() {
        return (count, witness);
    }
    let lefts: Vec<_> = units.into_iter().filter(|&t| is_left_type(t)).collect();
    let (more, witness) = sweep(&lefts, |&t| match eps.parents(t) {
        Ok((l, _)) if l >= ThreeAdicRational::integer(0) => None,
        Ok((l, _)) => Some(format!("{t}: left parent {l} is negative")),
        Err(e) => Some(format!("{t}: {e}")),
    });
    (count + more, witness)
}

fn reference_audit(eps: &Epsilon, _: u32) -> Outcome {
    let report = audit_table(eps);
    if report.passed() {
        return (report.rows.len(), None);
    }
    let (extra, missing) = report.unexpected();
    let inconsistent = report.rows.iter().find(|r| !r.consistent()).map(|r| r.index.to_string());
    (
        report.rows.len(),
        Some(format!("unexpected {extra:?}, not reproduced {missing:?}, inconsistent row {inconsistent:?}")),
    )
}

fn p2_companion() -> Outcome {
    let mut count = 0;
    for (t, alpha) in [("1/2", frac(1, 2)), ("1/4", frac(2, 5)), ("3/4", frac(3, 5))] {
        count += 1;
        let got = epsilon_p2(t.parse().expect("dyadic"));
        if got != alpha {
            return (count, Some(format!("ε_P2({t}) = {got}")));
        }
    }
    let mut grid: Vec<DyadicRational> = DyadicRational::up_to_order(8);
    grid.insert(0, DyadicRational::integer(0));
    grid.push(DyadicRational::integer(1));
    let values: Vec<Rational> = grid.par_iter().map(|&t| epsilon_p2(t)).collect();
    for (w, ts) in values.windows(2).zip(grid.windows(2)) {
        count += 1;
        if w[0] >= w[1] {
            return (count, Some(format!("ε_P2 not increasing between {} and {}", ts[0], ts[1])));
        }
    }
    for (t, a) in grid.iter().zip(&values) {
        count += 1;
        let d = slope_data(a);
        if !is_integral(&(Rational::from_integer(d.r.clone()) * a)) || !is_integral(&d.chi) {
            return (count, Some(format!("ε_P2({t}) = {a}: r·α or χ not integral")));
        }
    }
    count += 1;
    match certified_delta(&int(0), 4) {
        Some(r) if r.value == int(1) => (count, None),
        Some(r) => (count, Some(format!("δ(0) certified as {}", r.value))),
        None => (count, Some("δ(0) not certified by cutoff 4".into())),
    }
}

fn timed(name: &str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (count, witness) = f();
    Check { name: name.into(), passed: witness.is_none(), count, witness, elapsed: start.elapsed() }
}

fn tree_checks(eps: &Epsilon, depth: u32) -> Vec<Check> {
    let start = Instant::now();
    let tree = match build_tree(depth) {
        Ok(t) => t,
        Err(e) => {
            return vec![Check {
                name: "tree-build".into(),
                passed: false,
                count: 0,
                witness: Some(e.to_string()),
                elapsed: start.elapsed(),
            }]
        }
    };
    let built = start.elapsed();
    let report = tree.verify();
    let mut checks: Vec<Check> = report
        .checks
        .into_iter()
        .map(|c| Check {
            name: format!("tree-{}", c.name),
            passed: c.passed,
            count: report.vertices,
            witness: c.witness,
            elapsed: built,
        })
        .collect();
    let vertices: Vec<_> = tree.vertices.iter().filter(|v| !v.is_root()).collect();
    checks.push(timed("tree-edge-perp", || {
        sweep(&vertices, |v| {
            let mf = v.marked()?;
            let [a, b, c] = mf.perp_arguments();
            match perp(&a, &b, &c) {
                Ok(p) if &p == mf.marked() => None,
                Ok(p) => Some(format!("{:?}: mutation gives {}, perp gives {p}", v.index, mf.marked())),
                Err(e) => Some(format!("{:?}: {e}", v.index)),
            }
        })
    }));
    checks.push(timed("tree-epsilon-agreement", || {
        sweep(&vertices, |v| {
            let t = v.index?;
            match eps.epsilon(t) {
                Ok(e) if Some(&e) == v.new_bundle() => None,
                Ok(e) => Some(format!("{t}: ε gives {e}, tree vertex has {:?}", v.new_bundle())),
                Err(e) => Some(format!("{t}: {e}")),
            }
        })
    }));
    checks.push(timed("tree-helix-relation", || {
        sweep(&tree.vertices, |v| {
            (!helix_relation_holds(v.foundation.bundles())).then(|| format!("{:?}: {}", v.index, v.foundation))
        })
    }));
    checks
}

type Job<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

/// Runs every check at the given bounds; the checks run in parallel and the
/// report lists them in a fixed order.
pub fn run_verification(eps: &Epsilon, max_order: u32, tree_depth: u32) -> VerificationReport {
    let suite: [(&str, CheckFn); 11] = [
        ("pairing", pairing),
        ("base-values", base_values),
        ("exceptional", exceptional),
        ("bijection", bijection),
        ("perp-consistency", perp_consistency),
        ("recursion-identity", recursion_identity),
        ("resolutions", resolutions),
        ("helix-relation", helix_relations),
        ("inverse", inverse),
        ("global-generation", global_generation),
        ("printed-table-audit", reference_audit),
    ];
    let mut jobs: Vec<Job> = suite
        .into_iter()
        .map(|(name, f)| Box::new(move || vec![timed(name, || f(eps, max_order))]) as Job)
        .collect();
    jobs.push(Box::new(move || tree_checks(eps, tree_depth)));
    jobs.push(Box::new(|| vec![timed("p2-companion", p2_companion)]));
    let checks = jobs.par_iter().flat_map(|job| job()).collect();
    VerificationReport { max_order, tree_depth, checks }
}
