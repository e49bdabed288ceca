//! Signatures and graphs over them.
//!
//! A [`Signature`] fixes the directions (with their opposition involution),
//! the node labels, which labels may mark the initial node, and the set of
//! directions every label uses. A [`Graph`] over a signature is a finite set
//! of labelled nodes whose edges are given per node as a partial map from
//! directions to neighbours.
//!
//! Identifiers are opaque strings. Whenever order matters (star rays,
//! tie-breaking, canonical node allocation) the order declared in the
//! signature is used.

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub type DirId = String;
pub type LabelId = String;
pub type NodeId = String;

/// The alphabet of graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signature {
    pub directions: Vec<DirId>,
    pub opposite: IndexMap<DirId, DirId>,
    pub labels: Vec<LabelId>,
    pub initial_labels: Vec<LabelId>,
    pub dirs_of_label: IndexMap<LabelId, Vec<DirId>>,
}

/// A finite graph over some signature.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Graph {
    pub nodes: Vec<NodeId>,
    pub initial: NodeId,
    pub labels: IndexMap<NodeId, LabelId>,
    pub edges: IndexMap<NodeId, IndexMap<DirId, NodeId>>,
}

/// A single broken invariant, naming the offending element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateDirection {
        direction: DirId,
    },
    MissingOpposite {
        direction: DirId,
    },
    OppositeOfUnknown {
        direction: DirId,
    },
    OppositeUnknown {
        direction: DirId,
        opposite: DirId,
    },
    NotInvolution {
        direction: DirId,
    },
    DuplicateLabel {
        label: LabelId,
    },
    InitialLabelUnknown {
        label: LabelId,
    },
    DuplicateInitialLabel {
        label: LabelId,
    },
    MissingDirectionSet {
        label: LabelId,
    },
    DirectionSetOfUnknownLabel {
        label: LabelId,
    },
    UnknownDirectionInLabel {
        label: LabelId,
        direction: DirId,
    },
    DuplicateDirectionInLabel {
        label: LabelId,
        direction: DirId,
    },
    DirectionsOutOfOrder {
        label: LabelId,
    },

    DuplicateNode {
        node: NodeId,
    },
    InitialNodeUnknown {
        node: NodeId,
    },
    MissingLabel {
        node: NodeId,
    },
    LabelOfUnknownNode {
        node: NodeId,
    },
    UnknownLabel {
        node: NodeId,
        label: LabelId,
    },
    EdgesOfUnknownNode {
        node: NodeId,
    },
    UnexpectedEdge {
        node: NodeId,
        direction: DirId,
    },
    MissingEdge {
        node: NodeId,
        direction: DirId,
    },
    EdgeToUnknownNode {
        node: NodeId,
        direction: DirId,
        target: NodeId,
    },
    AsymmetricEdge {
        node: NodeId,
        direction: DirId,
        target: NodeId,
    },
    NonInitialWithInitialLabel {
        node: NodeId,
    },
    InitialWithoutInitialLabel {
        node: NodeId,
    },

    /// Used by validators of automata built on top of a signature.
    Other {
        message: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DuplicateDirection { direction } => write!(f, "duplicate direction {direction}"),
            MissingOpposite { direction } => write!(f, "no opposite declared for {direction}"),
            OppositeOfUnknown { direction } => {
                write!(f, "opposite declared for unknown direction {direction}")
            }
            OppositeUnknown {
                direction,
                opposite,
            } => write!(f, "opposite of {direction} is unknown direction {opposite}"),
            NotInvolution { direction } => write!(f, "opposite not involution on {direction}"),
            DuplicateLabel { label } => write!(f, "duplicate label {label}"),
            InitialLabelUnknown { label } => write!(f, "initial label {label} is not a label"),
            DuplicateInitialLabel { label } => write!(f, "initial label {label} listed twice"),
            MissingDirectionSet { label } => write!(f, "no direction set for label {label}"),
            DirectionSetOfUnknownLabel { label } => {
                write!(f, "direction set given for unknown label {label}")
            }
            UnknownDirectionInLabel { label, direction } => {
                write!(f, "label {label} uses unknown direction {direction}")
            }
            DuplicateDirectionInLabel { label, direction } => {
                write!(f, "label {label} lists direction {direction} twice")
            }
            DirectionsOutOfOrder { label } => write!(
                f,
                "directions of label {label} do not follow the signature's direction order"
            ),
            DuplicateNode { node } => write!(f, "duplicate node {node}"),
            InitialNodeUnknown { node } => write!(f, "initial node {node} is not a node"),
            MissingLabel { node } => write!(f, "node {node} has no label"),
            LabelOfUnknownNode { node } => write!(f, "label given for unknown node {node}"),
            UnknownLabel { node, label } => write!(f, "node {node} has unknown label {label}"),
            EdgesOfUnknownNode { node } => write!(f, "edges given for unknown node {node}"),
            UnexpectedEdge { node, direction } => {
                write!(
                    f,
                    "node {node} has edge {direction} outside its label's directions"
                )
            }
            MissingEdge { node, direction } => write!(f, "node {node} lacks edge {direction}"),
            EdgeToUnknownNode {
                node,
                direction,
                target,
            } => write!(f, "edge {node}+{direction} leads to unknown node {target}"),
            AsymmetricEdge {
                node,
                direction,
                target,
            } => write!(
                f,
                "edge {node}+{direction}={target} is not matched by the opposite direction"
            ),
            NonInitialWithInitialLabel { node } => {
                write!(f, "non-initial node carries initial label: {node}")
            }
            InitialWithoutInitialLabel { node } => {
                write!(f, "initial node {node} does not carry an initial label")
            }
            Other { message } => f.write_str(message),
        }
    }
}

/// Outcome of a validation: every violation found, not just the first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn ok() -> Self {
        Self::from_violations(Vec::new())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Signature {
    /// Checks every signature invariant and collects the violations.
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();

        let mut seen = HashSet::new();
        for d in &self.directions {
            if !seen.insert(d.as_str()) {
                out.push(Violation::DuplicateDirection {
                    direction: d.clone(),
                });
            }
        }
        for d in &self.directions {
            match self.opposite.get(d) {
                None => out.push(Violation::MissingOpposite {
                    direction: d.clone(),
                }),
                Some(o) if !seen.contains(o.as_str()) => out.push(Violation::OppositeUnknown {
                    direction: d.clone(),
                    opposite: o.clone(),
                }),
                Some(o) => {
                    if self.opposite.get(o) != Some(d) {
                        out.push(Violation::NotInvolution {
                            direction: d.clone(),
                        });
                    }
                }
            }
        }
        for d in self.opposite.keys() {
            if !seen.contains(d.as_str()) {
                out.push(Violation::OppositeOfUnknown {
                    direction: d.clone(),
                });
            }
        }

        let mut labels = HashSet::new();
        for a in &self.labels {
            if !labels.insert(a.as_str()) {
                out.push(Violation::DuplicateLabel { label: a.clone() });
            }
        }
        let mut initial = HashSet::new();
        for a in &self.initial_labels {
            if !labels.contains(a.as_str()) {
                out.push(Violation::InitialLabelUnknown { label: a.clone() });
            }
            if !initial.insert(a.as_str()) {
                out.push(Violation::DuplicateInitialLabel { label: a.clone() });
            }
        }

        let position: HashMap<&str, usize> = self
            .directions
            .iter()
            .enumerate()
            .map(|(i, d)| (d.as_str(), i))
            .collect();
        for a in &self.labels {
            if !self.dirs_of_label.contains_key(a) {
                out.push(Violation::MissingDirectionSet { label: a.clone() });
            }
        }
        for (a, dirs) in &self.dirs_of_label {
            if !labels.contains(a.as_str()) {
                out.push(Violation::DirectionSetOfUnknownLabel { label: a.clone() });
            }
            let mut used = HashSet::new();
            let mut last = None;
            let mut ordered = true;
            for d in dirs {
                match position.get(d.as_str()) {
                    None => out.push(Violation::UnknownDirectionInLabel {
                        label: a.clone(),
                        direction: d.clone(),
                    }),
                    Some(&p) => {
                        if last.is_some_and(|l| l >= p) {
                            ordered = false;
                        }
                        last = Some(p);
                    }
                }
                if !used.insert(d.as_str()) {
                    out.push(Violation::DuplicateDirectionInLabel {
                        label: a.clone(),
                        direction: d.clone(),
                    });
                }
            }
            if !ordered && used.len() == dirs.len() {
                out.push(Violation::DirectionsOutOfOrder { label: a.clone() });
            }
        }

        ValidationReport::from_violations(out)
    }

    pub fn opposite_of(&self, d: &str) -> Option<&str> {
        self.opposite.get(d).map(String::as_str)
    }

    pub fn dirs_of(&self, a: &str) -> &[DirId] {
        self.dirs_of_label.get(a).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_initial(&self, a: &str) -> bool {
        self.initial_labels.iter().any(|x| x == a)
    }
}

impl Graph {
    /// Checks the graph invariants relative to `sig`.
    pub fn validate(&self, sig: &Signature) -> ValidationReport {
        let mut out = Vec::new();

        let mut nodes = HashSet::new();
        for v in &self.nodes {
            if !nodes.insert(v.as_str()) {
                out.push(Violation::DuplicateNode { node: v.clone() });
            }
        }
        if !nodes.contains(self.initial.as_str()) {
            out.push(Violation::InitialNodeUnknown {
                node: self.initial.clone(),
            });
        }
        for v in self.labels.keys() {
            if !nodes.contains(v.as_str()) {
                out.push(Violation::LabelOfUnknownNode { node: v.clone() });
            }
        }
        for v in self.edges.keys() {
            if !nodes.contains(v.as_str()) {
                out.push(Violation::EdgesOfUnknownNode { node: v.clone() });
            }
        }

        let known_labels: HashSet<&str> = sig.labels.iter().map(String::as_str).collect();
        let empty = IndexMap::new();
        for v in &self.nodes {
            let Some(a) = self.labels.get(v) else {
                out.push(Violation::MissingLabel { node: v.clone() });
                continue;
            };
            if !known_labels.contains(a.as_str()) {
                out.push(Violation::UnknownLabel {
                    node: v.clone(),
                    label: a.clone(),
                });
                continue;
            }
            let initial = sig.is_initial(a);
            if initial && *v != self.initial {
                out.push(Violation::NonInitialWithInitialLabel { node: v.clone() });
            }
            if !initial && *v == self.initial {
                out.push(Violation::InitialWithoutInitialLabel { node: v.clone() });
            }

            let wanted = sig.dirs_of(a);
            let have = self.edges.get(v).unwrap_or(&empty);
            for d in wanted {
                if !have.contains_key(d) {
                    out.push(Violation::MissingEdge {
                        node: v.clone(),
                        direction: d.clone(),
                    });
                }
            }
            for (d, u) in have {
                if !wanted.contains(d) {
                    out.push(Violation::UnexpectedEdge {
                        node: v.clone(),
                        direction: d.clone(),
                    });
                    continue;
                }
                if !nodes.contains(u.as_str()) {
                    out.push(Violation::EdgeToUnknownNode {
                        node: v.clone(),
                        direction: d.clone(),
                        target: u.clone(),
                    });
                    continue;
                }
                let back = sig
                    .opposite_of(d)
                    .and_then(|od| self.edges.get(u).and_then(|m| m.get(od)));
                if back != Some(v) {
                    out.push(Violation::AsymmetricEdge {
                        node: v.clone(),
                        direction: d.clone(),
                        target: u.clone(),
                    });
                }
            }
        }

        ValidationReport::from_violations(out)
    }

    pub fn label_of(&self, v: &str) -> Option<&str> {
        self.labels.get(v).map(String::as_str)
    }

    pub fn neighbour(&self, v: &str, d: &str) -> Option<&str> {
        self.edges.get(v)?.get(d).map(String::as_str)
    }
}

pub fn validate_signature(sig: &Signature) -> ValidationReport {
    sig.validate()
}

pub fn validate_graph(sig: &Signature, g: &Graph) -> ValidationReport {
    g.validate(sig)
}

/// Number of nodes carrying each label of `sig`, in label order (zeros included).
pub fn label_counts(sig: &Signature, g: &Graph) -> IndexMap<LabelId, u64> {
    let mut counts: IndexMap<LabelId, u64> = sig.labels.iter().map(|a| (a.clone(), 0)).collect();
    for v in &g.nodes {
        if let Some(a) = g.labels.get(v) {
            *counts.entry(a.clone()).or_insert(0) += 1;
        }
    }
    counts
}

/// Structural equality under node-identifier equality; no isomorphism search.
pub fn graphs_identical(g1: &Graph, g2: &Graph) -> bool {
    let s1: HashSet<&String> = g1.nodes.iter().collect();
    let s2: HashSet<&String> = g2.nodes.iter().collect();
    if g1.nodes.len() != g2.nodes.len() || s1 != s2 || g1.initial != g2.initial {
        return false;
    }
    if g1.labels != g2.labels {
        return false;
    }
    let non_empty = |g: &Graph| -> HashMap<String, IndexMap<DirId, NodeId>> {
        g.edges
            .iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(v, m)| (v.clone(), m.clone()))
            .collect()
    };
    non_empty(g1) == non_empty(g2)
}

pub(crate) fn require_signature(sig: &Signature) -> crate::Result<()> {
    let report = sig.validate();
    if report.ok {
        Ok(())
    } else {
        Err(crate::Error::invalid("signature", report))
    }
}

pub(crate) fn require_graph(sig: &Signature, g: &Graph) -> crate::Result<()> {
    let report = g.validate(sig);
    if report.ok {
        Ok(())
    } else {
        Err(crate::Error::invalid("graph", report))
    }
}

/// Integer-indexed view of a validated signature.
#[derive(Clone, Debug)]
pub(crate) struct SigIndex {
    pub dir_ix: HashMap<String, usize>,
    pub label_ix: HashMap<String, usize>,
    pub opposite: Vec<usize>,
    pub initial: Vec<bool>,
    /// Directions of each label, in signature order.
    pub label_dirs: Vec<Vec<usize>>,
}

impl SigIndex {
    pub fn new(sig: &Signature) -> Self {
        let dir_ix: HashMap<String, usize> = sig
            .directions
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), i))
            .collect();
        let label_ix: HashMap<String, usize> = sig
            .labels
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let opposite = sig
            .directions
            .iter()
            .map(|d| dir_ix[&sig.opposite[d]])
            .collect();
        let initial = sig.labels.iter().map(|a| sig.is_initial(a)).collect();
        let label_dirs = sig
            .labels
            .iter()
            .map(|a| sig.dirs_of(a).iter().map(|d| dir_ix[d]).collect())
            .collect();
        Self {
            dir_ix,
            label_ix,
            opposite,
            initial,
            label_dirs,
        }
    }

    pub fn label_count(&self) -> usize {
        self.initial.len()
    }

    pub fn dir_count(&self) -> usize {
        self.opposite.len()
    }
}

/// Integer-indexed view of a validated graph; nodes are numbered in `nodes` order.
#[derive(Clone, Debug)]
pub(crate) struct GraphIndex {
    pub label: Vec<usize>,
    pub initial: usize,
    /// `next[v][d]` is the neighbour of `v` in direction `d`, if any.
    pub next: Vec<Vec<Option<usize>>>,
}

impl GraphIndex {
    pub fn new(six: &SigIndex, g: &Graph) -> Self {
        let node_ix: HashMap<String, usize> = g
            .nodes
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let label = g.nodes.iter().map(|v| six.label_ix[&g.labels[v]]).collect();
        let mut next = vec![vec![None; six.dir_count()]; g.nodes.len()];
        for (v, m) in &g.edges {
            let vi = node_ix[v];
            for (d, u) in m {
                next[vi][six.dir_ix[d]] = Some(node_ix[u]);
            }
        }
        Self {
            initial: node_ix[&g.initial],
            label,
            next,
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn sig(
        dirs: &[(&str, &str)],
        labels: &[&str],
        initial: &[&str],
        dirs_of: &[(&str, &[&str])],
    ) -> Signature {
        Signature {
            directions: dirs.iter().map(|(d, _)| d.to_string()).collect(),
            opposite: dirs
                .iter()
                .map(|(d, o)| (d.to_string(), o.to_string()))
                .collect(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            initial_labels: initial.iter().map(|s| s.to_string()).collect(),
            dirs_of_label: dirs_of
                .iter()
                .map(|(a, ds)| (a.to_string(), ds.iter().map(|s| s.to_string()).collect()))
                .collect(),
        }
    }

    /// One self-opposite direction, one initial label using it.
    pub fn sig_loop() -> Signature {
        sig(&[("s", "s")], &["a0"], &["a0"], &[("a0", &["s"])])
    }

    /// Paths: a0 at the left end, a in the middle, e at the right end.
    pub fn sig_line() -> Signature {
        sig(
            &[("r", "l"), ("l", "r")],
            &["a0", "a", "e"],
            &["a0"],
            &[("a0", &["r"]), ("a", &["r", "l"]), ("e", &["l"])],
        )
    }

    /// Empty signature: the initial node needs an r-edge nobody can answer.
    pub fn sig_odd() -> Signature {
        sig(
            &[("r", "l"), ("l", "r")],
            &["a0"],
            &["a0"],
            &[("a0", &["r"])],
        )
    }

    pub fn graph(nodes: &[(&str, &str)], initial: &str, edges: &[(&str, &str, &str)]) -> Graph {
        let mut g = Graph {
            nodes: nodes.iter().map(|(v, _)| v.to_string()).collect(),
            initial: initial.to_string(),
            labels: nodes
                .iter()
                .map(|(v, a)| (v.to_string(), a.to_string()))
                .collect(),
            edges: IndexMap::new(),
        };
        for (v, d, u) in edges {
            g.edges
                .entry(v.to_string())
                .or_default()
                .insert(d.to_string(), u.to_string());
        }
        g
    }

    pub fn loop_graph() -> Graph {
        graph(&[("v0", "a0")], "v0", &[("v0", "s", "v0")])
    }

    pub fn line_pair() -> Graph {
        graph(
            &[("u", "a0"), ("v", "e")],
            "u",
            &[("u", "r", "v"), ("v", "l", "u")],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn loop_signature_is_valid() {
        assert!(sig_loop().validate().ok);
    }

    #[test]
    fn broken_involution_is_reported_on_the_offending_direction() {
        let s = sig(
            &[("r", "r"), ("l", "r")],
            &["a0"],
            &["a0"],
            &[("a0", &["r"])],
        );
        let report = s.validate();
        assert!(!report.ok);
        assert_eq!(
            report.violations,
            vec![Violation::NotInvolution {
                direction: "l".into()
            }]
        );
        assert_eq!(
            report.violations[0].to_string(),
            "opposite not involution on l"
        );
    }

    #[test]
    fn line_signature_is_valid() {
        assert!(sig_line().validate().ok);
    }

    #[test]
    fn signature_violations_are_all_collected() {
        let mut s = sig_line();
        s.initial_labels.push("zz".into());
        s.dirs_of_label
            .insert("a".into(), vec!["l".into(), "r".into()]);
        s.dirs_of_label
            .insert("e".into(), vec!["l".into(), "l".into()]);
        s.dirs_of_label.insert("a0".into(), vec!["q".into()]);
        let report = s.validate();
        assert_eq!(report.violations.len(), 4, "{report}");
    }

    #[test]
    fn simple_graphs_validate() {
        assert!(loop_graph().validate(&sig_loop()).ok);
        assert!(line_pair().validate(&sig_line()).ok);
    }

    #[test]
    fn second_initial_label_is_rejected() {
        let mut g = line_pair();
        g.labels.insert("v".into(), "a0".into());
        // v now also needs r but has l; report every violation including the label one
        let report = g.validate(&sig_line());
        assert!(report
            .violations
            .contains(&Violation::NonInitialWithInitialLabel { node: "v".into() }));
        assert!(report
            .violations
            .iter()
            .any(|v| v.to_string() == "non-initial node carries initial label: v"));
    }

    #[test]
    fn asymmetric_and_missing_edges_are_reported() {
        let mut g = line_pair();
        g.edges.get_mut("v").unwrap().shift_remove("l");
        let report = g.validate(&sig_line());
        assert!(report.violations.contains(&Violation::MissingEdge {
            node: "v".into(),
            direction: "l".into()
        }));
        assert!(report.violations.contains(&Violation::AsymmetricEdge {
            node: "u".into(),
            direction: "r".into(),
            target: "v".into()
        }));
    }

    #[test]
    fn validation_is_pure() {
        let mut g = line_pair();
        g.labels.insert("v".into(), "a0".into());
        let s = sig_line();
        assert_eq!(g.validate(&s), g.validate(&s));
        assert_eq!(s.validate(), s.validate());
    }

    #[test]
    fn counts() {
        let c = label_counts(&sig_loop(), &loop_graph());
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![("a0".into(), 1)]);

        let c = label_counts(&sig_line(), &line_pair());
        assert_eq!(c["a0"], 1);
        assert_eq!(c["a"], 0);
        assert_eq!(c["e"], 1);

        let path = graph(
            &[("1", "a0"), ("2", "a"), ("3", "e")],
            "1",
            &[
                ("1", "r", "2"),
                ("2", "l", "1"),
                ("2", "r", "3"),
                ("3", "l", "2"),
            ],
        );
        assert!(path.validate(&sig_line()).ok);
        let c = label_counts(&sig_line(), &path);
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(c.values().sum::<u64>(), path.nodes.len() as u64);
    }

    #[test]
    fn identity_uses_node_names() {
        let g = line_pair();
        assert!(graphs_identical(&g, &g));
        let renamed = graph(
            &[("v", "a0"), ("u", "e")],
            "v",
            &[("v", "r", "u"), ("u", "l", "v")],
        );
        assert!(!graphs_identical(&g, &renamed));
    }

    #[test]
    fn graph_json_rejects_unknown_fields() {
        let bad = r#"{"nodes":["v"],"initial":"v","labels":{"v":"a0"},"edges":{},"extra":1}"#;
        assert!(serde_json::from_str::<Graph>(bad).is_err());
        let good =
            r#"{"nodes":["v0"],"initial":"v0","labels":{"v0":"a0"},"edges":{"v0":{"s":"v0"}}}"#;
        let g: Graph = serde_json::from_str(good).unwrap();
        assert!(graphs_identical(&g, &loop_graph()));
        assert_eq!(serde_json::to_string(&g).unwrap(), good);
    }
}
