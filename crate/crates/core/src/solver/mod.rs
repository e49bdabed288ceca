//! Signature emptiness.
//!
//! A graph over a signature exists exactly when there is a *balanced* vector
//! of label counts: exactly one node carries an initial label, and for every
//! direction pair `{d, -d}` with `d != -d` the nodes offer as many
//! `d`-endpoints as `-d`-endpoints. This module checks balance, searches for a
//! balanced vector of minimum total count, turns a balanced vector into a
//! concrete graph, bounds the size of the smallest graph, and provides a
//! brute-force enumerator of all small graphs used as a test oracle.

mod bound;
mod enumerate;
mod lp;
mod search;

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::model::{require_signature, Graph, LabelId, SigIndex, Signature};
use crate::{Error, Result};

pub use bound::{node_count_bound, pow_u64, saturating_u64};
pub use enumerate::{enumerate_graphs, GraphEnumerator};

/// Per-label node counts satisfying both balance conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalancedVector {
    pub counts: IndexMap<LabelId, u64>,
}

impl BalancedVector {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// The opposite-direction pairs of a signature, each unordered pair once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionPairing {
    /// `(d, -d)` with `d` listed before `-d` in the signature.
    pub pairs: Vec<(String, String)>,
    pub self_opposite: Vec<String>,
}

/// Net effect of one node with a given label on each direction pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContributionVector {
    pub entries: Vec<i8>,
}

impl ContributionVector {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
}

/// Budgets for the witness search and for the reductions feeding it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of distinct search states kept in memory.
    pub max_states: usize,
    /// Maximum number of labels a reduction may generate.
    pub max_labels: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_states: 2_000_000,
            max_labels: 200_000,
        }
    }
}

/// Answer to "is there a graph over this signature?".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum SignatureVerdict {
    NonEmpty { witness: Graph },
    Empty,
}

impl SignatureVerdict {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, SignatureVerdict::NonEmpty { .. })
    }

    pub fn witness(&self) -> Option<&Graph> {
        match self {
            SignatureVerdict::NonEmpty { witness } => Some(witness),
            SignatureVerdict::Empty => None,
        }
    }
}

pub fn direction_pairing(sig: &Signature) -> DirectionPairing {
    let mut pairs = Vec::new();
    let mut self_opposite = Vec::new();
    let position: HashMap<&str, usize> = sig
        .directions
        .iter()
        .enumerate()
        .map(|(i, d)| (d.as_str(), i))
        .collect();
    for (i, d) in sig.directions.iter().enumerate() {
        let Some(o) = sig.opposite_of(d) else {
            continue;
        };
        if o == d {
            self_opposite.push(d.clone());
        } else if position.get(o).is_some_and(|&j| j > i) {
            pairs.push((d.clone(), o.to_string()));
        }
    }
    DirectionPairing {
        pairs,
        self_opposite,
    }
}

pub fn contribution_vector(
    sig: &Signature,
    label: &str,
    pairing: &DirectionPairing,
) -> ContributionVector {
    let dirs = sig.dirs_of(label);
    let entries = pairing
        .pairs
        .iter()
        .map(|(d, o)| match (dirs.contains(d), dirs.contains(o)) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        })
        .collect();
    ContributionVector { entries }
}

/// Both balance conditions. Labels missing from `counts` count as zero;
/// counts for labels outside the signature make the vector unbalanced.
pub fn is_balanced(sig: &Signature, counts: &IndexMap<LabelId, u64>) -> bool {
    if counts.keys().any(|a| !sig.labels.contains(a)) {
        return false;
    }
    let x = |a: &str| counts.get(a).copied().unwrap_or(0);
    let initial: u64 = sig.initial_labels.iter().map(|a| x(a)).sum();
    if initial != 1 {
        return false;
    }
    let pairing = direction_pairing(sig);
    pairing.pairs.iter().all(|(d, o)| {
        let mut plus = 0u128;
        let mut minus = 0u128;
        for a in &sig.labels {
            let dirs = sig.dirs_of(a);
            if dirs.contains(d) {
                plus += x(a) as u128;
            }
            if dirs.contains(o) {
                minus += x(a) as u128;
            }
        }
        plus == minus
    })
}

/// Minimum-total balanced vector, ties broken towards the lexicographically
/// smallest count vector in label order. `None` means the signature is empty.
pub fn find_balanced_vector(
    sig: &Signature,
    limits: &SearchLimits,
) -> Result<Option<BalancedVector>> {
    require_signature(sig)?;
    let found = search::minimal_counts(sig, limits)?;
    Ok(found.map(|counts| BalancedVector {
        counts: sig.labels.iter().cloned().zip(counts).collect(),
    }))
}

/// Builds a graph with exactly the given label counts.
///
/// Nodes are named `1..N`, allocated label by label in signature order. For
/// each self-opposite direction every node using it gets a loop; for each
/// pair `(d, -d)` the nodes using `d` are matched with the nodes using `-d`
/// in ascending node order.
pub fn build_graph(sig: &Signature, x: &BalancedVector) -> Result<Graph> {
    require_signature(sig)?;
    if !is_balanced(sig, &x.counts) {
        return Err(Error::Precondition("vector is not balanced".into()));
    }
    let six = SigIndex::new(sig);

    let mut node_label = Vec::new();
    for (li, a) in sig.labels.iter().enumerate() {
        let c = x.counts.get(a).copied().unwrap_or(0);
        node_label.extend(std::iter::repeat_n(li, c as usize));
    }
    let n = node_label.len();
    let mut next: Vec<Vec<Option<usize>>> = vec![vec![None; six.dir_count()]; n];

    let mut users: Vec<Vec<usize>> = vec![Vec::new(); six.dir_count()];
    for (v, &li) in node_label.iter().enumerate() {
        for &d in &six.label_dirs[li] {
            users[d].push(v);
        }
    }
    for d in 0..six.dir_count() {
        let o = six.opposite[d];
        if o == d {
            for &v in &users[d] {
                next[v][d] = Some(v);
            }
        } else if d < o {
            debug_assert_eq!(users[d].len(), users[o].len());
            for (&v, &u) in users[d].iter().zip(&users[o]) {
                next[v][d] = Some(u);
                next[u][o] = Some(v);
            }
        }
    }

    Ok(assemble(sig, &six, &node_label, &next))
}

/// Turns indexed nodes into a [`Graph`] with node names `1..N`.
pub(crate) fn assemble(
    sig: &Signature,
    six: &SigIndex,
    node_label: &[usize],
    next: &[Vec<Option<usize>>],
) -> Graph {
    let name = |v: usize| (v + 1).to_string();
    let initial = node_label
        .iter()
        .position(|&li| six.initial[li])
        .expect("balanced vectors have an initial node");
    let mut g = Graph {
        nodes: (0..node_label.len()).map(name).collect(),
        initial: name(initial),
        labels: IndexMap::new(),
        edges: IndexMap::new(),
    };
    for (v, &li) in node_label.iter().enumerate() {
        g.labels.insert(name(v), sig.labels[li].clone());
        let mut out = IndexMap::new();
        for &d in &six.label_dirs[li] {
            let u = next[v][d].expect("every used direction is wired");
            out.insert(sig.directions[d].clone(), name(u));
        }
        g.edges.insert(name(v), out);
    }
    g
}

/// Decides non-emptiness; the witness has the minimum possible node count.
pub fn signature_nonempty(sig: &Signature, limits: &SearchLimits) -> Result<SignatureVerdict> {
    match find_balanced_vector(sig, limits)? {
        None => Ok(SignatureVerdict::Empty),
        Some(x) => Ok(SignatureVerdict::NonEmpty {
            witness: build_graph(sig, &x)?,
        }),
    }
}
