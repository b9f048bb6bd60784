//! The tree Γ′ of helices reached from `(O(-1), O, O(1), O(2))` by admissible
//! moves that introduce bundles of slope in `(0, 1)`.
//!
//! The root has the two children R1 and L1. A vertex whose bundle came from a
//! right move has children R0, L0, R1; one from a left move has L1, R2, L2.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epsilon::child_indices;
use crate::error::Result;
use crate::helix::{apply_move, Foundation, MarkedFoundation, MutationMove};
use crate::index::ThreeAdicRational;
use crate::kgroup::{slope, ChernCharacter};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaVertex {
    pub foundation: Foundation,
    /// `None` at the root.
    pub incoming_move: Option<MutationMove>,
    pub index: Option<ThreeAdicRational>,
    pub depth: u32,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl GammaVertex {
    pub fn is_root(&self) -> bool {
        self.incoming_move.is_none()
    }

    /// The bundle introduced by the incoming move, with the foundation as a
    /// marked foundation.
    pub fn marked(&self) -> Option<MarkedFoundation> {
        let m = self.incoming_move?;
        MarkedFoundation::new(self.foundation.clone(), m.new_position()).ok()
    }

    pub fn new_bundle(&self) -> Option<&ChernCharacter> {
        self.incoming_move.map(|m| self.foundation.get(m.new_position()))
    }

    pub fn new_slope(&self) -> Option<Rational> {
        self.new_bundle().and_then(|v| slope(v).ok())
    }

    /// The admissible moves out of this vertex, in slope order of what they introduce.
    pub fn admissible_moves(&self) -> [Option<MutationMove>; 3] {
        use MutationMove::*;
        match self.incoming_move {
            None => [Some(R1), Some(L1), None],
            Some(m) if m.is_right() => [Some(R0), Some(L0), Some(R1)],
            Some(_) => [Some(L1), Some(R2), Some(L2)],
        }
    }
}

/// Arena of vertices; vertex 0 is the root and parents precede children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTree {
    pub vertices: Vec<GammaVertex>,
    pub depth: u32,
}

/// Children of a vertex, ordered by the slope of the new bundle.
pub fn children(v: &GammaVertex) -> Result<Vec<GammaVertex>> {
    let indices = child_indices(v.index)?;
    let mut out = Vec::with_capacity(3);
    for (m, (index, expected)) in v.admissible_moves().into_iter().flatten().zip(indices) {
        debug_assert_eq!(m, expected);
        out.push(GammaVertex {
            foundation: apply_move(&v.foundation, m)?,
            incoming_move: Some(m),
            index: Some(index),
            depth: v.depth + 1,
            parent: None,
            children: Vec::new(),
        });
    }
    out.sort_by_key(|c| c.new_slope());
    Ok(out)
}

/// Breadth-first expansion to `depth`; each level is expanded in parallel.
pub fn build_tree(depth: u32) -> Result<GammaTree> {
    let root = GammaVertex {
        foundation: Foundation::standard(),
        incoming_move: None,
        index: None,
        depth: 0,
        parent: None,
        children: Vec::new(),
    };
    let mut vertices = vec![root];
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let expanded: Vec<Vec<GammaVertex>> =
            frontier.par_iter().map(|&i| children(&vertices[i])).collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (&parent, kids) in frontier.iter().zip(expanded) {
            for mut kid in kids {
                kid.parent = Some(parent);
                let id = vertices.len();
                vertices[parent].children.push(id);
                vertices.push(kid);
                next.push(id);
            }
        }
        frontier = next;
    }
    Ok(GammaTree { vertices, depth })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCheck {
    pub name: String,
    pub passed: bool,
    /// First offending vertex, when failed.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeReport {
    pub vertices: usize,
    pub checks: Vec<TreeCheck>,
}

impl TreeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&TreeCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl GammaTree {
    pub fn root(&self) -> &GammaVertex {
        &self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn label(&self, i: usize) -> String {
        match self.vertices[i].index {
            Some(t) => format!("vertex {i} (index {t})"),
            None => format!("vertex {i} (root)"),
        }
    }

    fn first_failure(&self, bad: impl Fn(usize) -> bool) -> TreeCheckOutcome {
        (0..self.len()).find(|&i| bad(i)).map(|i| self.label(i))
    }

    /// Structural checks: distinct helices, degrees, sibling order, slopes in
    /// `(0,1)`, nested slope intervals, parent links and the index set.
    pub fn verify(&self) -> TreeReport {
        let mut checks = Vec::new();
        let mut record = |name: &str, witness: TreeCheckOutcome| {
            checks.push(TreeCheck { name: name.into(), passed: witness.is_none(), witness });
        };

        let mut seen = HashMap::new();
        let duplicate = (0..self.len()).find_map(|i| {
            seen.insert(self.vertices[i].foundation.helix_key(), i).map(|j| format!("{} repeats {}", self.label(i), self.label(j)))
        });
        record("distinct-helices", duplicate);

        record(
            "parent-links",
            self.first_failure(|i| {
                let v = &self.vertices[i];
                match v.parent {
                    None => i != 0 || !v.is_root(),
                    Some(p) => {
                        p >= i || self.vertices[p].depth + 1 != v.depth || !self.vertices[p].children.contains(&i)
                    }
                }
            }),
        );

        record(
            "degrees",
            self.first_failure(|i| {
                let v = &self.vertices[i];
                let expected = match (v.is_root(), v.depth < self.depth) {
                    (_, false) => 0,
                    (true, true) => 2,
                    (false, true) => 3,
                };
                v.children.len() != expected
            }),
        );

        record(
            "sibling-order",
            self.first_failure(|i| {
                let slopes: Vec<_> = self.vertices[i].children.iter().map(|&c| self.vertices[c].new_slope()).collect();
                slopes.windows(2).any(|w| !(w[0] < w[1]))
            }),
        );

        record(
            "unit-slopes",
            self.first_failure(|i| {
                let v = &self.vertices[i];
                !v.is_root() && !v.new_slope().is_some_and(|s| s > int(0) && s < int(1))
            }),
        );

        record("nested-intervals", self.first_failure(|i| !self.subtree_inside_interval(i)));

        let indices: Vec<_> = self.vertices.iter().filter_map(|v| v.index).collect();
        let distinct: HashSet<_> = indices.iter().collect();
        let expected = ThreeAdicRational::up_to_order(self.depth);
        let bijection = (distinct.len() != indices.len()
            || expected.len() != indices.len()
            || expected.iter().any(|t| !distinct.contains(t)))
        .then(|| format!("{} indices for {} expected", distinct.len(), expected.len()));
        record("index-bijection", bijection);

        record(
            "index-slope-monotone",
            {
                let mut by_index: Vec<_> =
                    self.vertices.iter().filter_map(|v| Some((v.index?, v.new_slope()))).collect();
                by_index.sort_by_key(|p| p.0);
                by_index.windows(2).find(|w| !(w[0].1 < w[1].1)).map(|w| format!("index {} then {}", w[0].0, w[1].0))
            },
        );

        TreeReport { vertices: self.len(), checks }
    }

    /// Every descendant of `i` introduces a slope strictly between the slopes
    /// of the entries adjacent to the new bundle of `i`.
    fn subtree_inside_interval(&self, i: usize) -> bool {
        let Some(mf) = self.vertices[i].marked() else {
            return true;
        };
        let (l, r) = mf.neighbours();
        let (Ok(lo), Ok(hi)) = (slope(&l), slope(&r)) else {
            return false;
        };
        let mut stack = self.vertices[i].children.clone();
        while let Some(c) = stack.pop() {
            match self.vertices[c].new_slope() {
                Some(s) if s > lo && s < hi => stack.extend(&self.vertices[c].children),
                _ => return false,
            }
        }
        true
    }

    /// Graphviz text; vertices are labeled by index and slope, edges by move.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph gamma {\n  node [shape=box];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label = match (v.index, v.new_slope()) {
                (Some(t), Some(s)) => format!("ε({t})\\nμ = {}", rational::format(&s)),
                _ => "root\\n(O(-1), O, O(1), O(2))".into(),
            };
            let _ = writeln!(out, "  n{i} [label=\"{label}\"];");
        }
        for (i, v) in self.vertices.iter().enumerate() {
            for &c in &v.children {
                let m = self.vertices[c].incoming_move.map_or("", MutationMove::as_str);
                let _ = writeln!(out, "  n{i} -> n{c} [label=\"{m}\"];");
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_export(&self) -> ExportNode {
        self.export_from(0)
    }

    fn export_from(&self, i: usize) -> ExportNode {
        let v = &self.vertices[i];
        ExportNode {
            index: v.index,
            slope: v.new_slope(),
            ch: v.new_bundle().cloned(),
            step: v.incoming_move,
            foundation: v.foundation.clone(),
            children: v.children.iter().map(|&c| self.export_from(c)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_export()).expect("tree serializes")
    }
}

type TreeCheckOutcome = Option<String>;

/// Nested JSON form of a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportNode {
    pub index: Option<ThreeAdicRational>,
    #[serde(with = "optional_rational")]
    pub slope: Option<Rational>,
    pub ch: Option<ChernCharacter>,
    #[serde(rename = "move")]
    pub step: Option<MutationMove>,
    pub foundation: Foundation,
    pub children: Vec<ExportNode>,
}

impl ExportNode {
    pub fn parse(text: &str) -> Result<ExportNode> {
        serde_json::from_str(text).map_err(|e| crate::Error::Parse(e.to_string()))
    }

    /// Pre-order list of the Chern characters of new bundles.
    pub fn characters(&self) -> Vec<ChernCharacter> {
        let mut out: Vec<_> = self.ch.iter().cloned().collect();
        for c in &self.children {
            out.extend(c.characters());
        }
        out
    }
}

mod optional_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.as_ref().map(rational::format).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| rational::parse(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epsilon::Epsilon;
    use crate::helix::verify_helix_relation;
    use crate::perp::perp;
    use crate::rational::frac;

    fn new_slopes(t: &GammaTree, i: usize) -> Vec<Rational> {
        t.vertices[i].children.iter().map(|&c| t.vertices[c].new_slope().unwrap()).collect()
    }

    #[test]
    fn counts() {
        assert_eq!(build_tree(0).unwrap().len(), 1);
        assert_eq!(build_tree(1).unwrap().len(), 3);
        assert_eq!(build_tree(3).unwrap().len(), 27);
        assert_eq!(build_tree(4).unwrap().len(), 81);
    }

    #[test]
    fn first_children() {
        let t = build_tree(2).unwrap();
        assert_eq!(new_slopes(&t, 0), [frac(1, 3), frac(2, 3)]);
        let [a, b] = t.root().children[..] else { panic!() };
        assert_eq!(new_slopes(&t, a), [frac(2, 9), frac(5, 17), frac(4, 11)]);
        assert_eq!(new_slopes(&t, b), [frac(7, 11), frac(12, 17), frac(7, 9)]);
    }

    #[test]
    fn depth_four_passes() {
        let t = build_tree(4).unwrap();
        let report = t.verify();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.checks.len(), 8);
    }

    #[test]
    fn depth_zero_is_vacuous() {
        assert!(build_tree(0).unwrap().verify().passed());
    }

    #[test]
    fn duplicate_is_caught() {
        let mut t = build_tree(2).unwrap();
        let mut copy = t.vertices[3].clone();
        copy.children.clear();
        copy.depth = 3;
        copy.parent = Some(4);
        let id = t.vertices.len();
        t.vertices[4].children.push(id);
        t.vertices.push(copy);
        let report = t.verify();
        assert!(!report.check("distinct-helices").unwrap().passed);
    }

    #[test]
    fn swapped_siblings_are_caught() {
        let mut t = build_tree(2).unwrap();
        t.vertices[1].children.swap(0, 2);
        let report = t.verify();
        assert!(!report.check("sibling-order").unwrap().passed);
    }

    #[test]
    fn agrees_with_epsilon_and_perp() {
        let eps = Epsilon::new();
        let t = build_tree(4).unwrap();
        for v in t.vertices.iter().skip(1) {
            let mf = v.marked().unwrap();
            let df = eps.distinguished_foundation(v.index.unwrap()).unwrap();
            assert_eq!(mf, df);
            let [a, b, c] = mf.perp_arguments();
            assert_eq!(&perp(&a, &b, &c).unwrap(), mf.marked());
            assert!(verify_helix_relation(&v.foundation).unwrap());
        }
    }

    #[test]
    fn dot_export() {
        let dot = build_tree(1).unwrap().to_dot();
        assert!(dot.starts_with("digraph gamma {"));
        assert_eq!(dot.matches("->").count(), 2);
        assert_eq!(dot.matches("[label=").count(), 5);
        assert!(dot.contains("ε(1/3)\\nμ = 1/3"));
    }

    #[test]
    fn json_round_trip() {
        let t = build_tree(2).unwrap();
        let parsed = ExportNode::parse(&t.to_json()).unwrap();
        assert_eq!(parsed.children.len(), 2);
        assert!(parsed.children.iter().all(|c| c.children.len() == 3));
        let expected: Vec<_> = t.vertices.iter().filter_map(|v| v.new_bundle().cloned()).collect();
        let mut got = parsed.characters();
        let mut want = expected.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(parsed, t.to_export());
    }

    #[test]
    fn exports_are_deterministic() {
        assert_eq!(build_tree(3).unwrap().to_json(), build_tree(3).unwrap().to_json());
        assert_eq!(build_tree(3).unwrap().to_dot(), build_tree(3).unwrap().to_dot());
    }
}
