//! Star automata.
//!
//! A star automaton accepts a graph when every node can be given a state so
//! that each node's *star* — its label, its own state, and the states of its
//! neighbours listed in direction order — is one of the automaton's stars.
//! Such an assignment is a tiling.
//!
//! Emptiness reduces to signature emptiness with one label per star: the
//! edge from `v` along `d` becomes an edge along `(d, q(v), q(v+d))`, which
//! makes both endpoints agree on the states they see. This correspondence
//! between tiled graphs and graphs over the reduced signature is a
//! bijection, implemented by [`encode_tiling`] and [`decode_tiling`].

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::gwa::StateId;
use crate::model::{
    require_graph, require_signature, Graph, GraphIndex, LabelId, NodeId, SigIndex, Signature,
    ValidationReport, Violation,
};
use crate::naming::{decode, encode};
use crate::solver::{pow_u64, signature_nonempty, SearchLimits, SignatureVerdict};
use crate::{Error, Result};

/// A label with a centre state and one ray state per direction of the
/// label, in the signature's direction order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Star {
    pub label: LabelId,
    pub centre: StateId,
    pub rays: Vec<StateId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarAutomaton {
    pub states: Vec<StateId>,
    pub stars: Vec<Star>,
}

/// A state for every node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingAssignment {
    pub state_of: IndexMap<NodeId, StateId>,
}

impl StarAutomaton {
    pub fn validate(&self, sig: &Signature) -> ValidationReport {
        let mut out = Vec::new();
        let mut other = |message: String| out.push(Violation::Other { message });
        let mut states = HashSet::new();
        for q in &self.states {
            if !states.insert(q.as_str()) {
                other(format!("duplicate state {q}"));
            }
        }
        let labels: HashSet<&str> = sig.labels.iter().map(String::as_str).collect();
        let mut seen = HashSet::new();
        for (i, t) in self.stars.iter().enumerate() {
            if !labels.contains(t.label.as_str()) {
                other(format!("star {i} has unknown label {}", t.label));
            } else if t.rays.len() != sig.dirs_of(&t.label).len() {
                other(format!(
                    "star {i} has {} rays but label {} has {} directions",
                    t.rays.len(),
                    t.label,
                    sig.dirs_of(&t.label).len()
                ));
            }
            for q in std::iter::once(&t.centre).chain(&t.rays) {
                if !states.contains(q.as_str()) {
                    other(format!("star {i} uses unknown state {q}"));
                }
            }
            if !seen.insert(t) {
                other(format!("star {i} is listed twice"));
            }
        }
        ValidationReport::from_violations(out)
    }
}

pub fn validate_star(sig: &Signature, a: &StarAutomaton) -> ValidationReport {
    a.validate(sig)
}

fn require_star(sig: &Signature, a: &StarAutomaton) -> Result<()> {
    require_signature(sig)?;
    let report = a.validate(sig);
    if report.ok {
        Ok(())
    } else {
        Err(Error::invalid("star automaton", report))
    }
}

/// Stars as state indices, grouped by label index.
struct CompiledStars {
    q_ix: HashMap<String, usize>,
    /// `by_label[a]` lists `(centre, rays)`.
    by_label: Vec<Vec<(usize, Vec<usize>)>>,
    members: HashSet<(usize, usize, Vec<usize>)>,
}

impl CompiledStars {
    fn new(six: &SigIndex, a: &StarAutomaton) -> Self {
        let q_ix: HashMap<String, usize> = a
            .states
            .iter()
            .enumerate()
            .map(|(i, q)| (q.clone(), i))
            .collect();
        let mut by_label = vec![Vec::new(); six.label_count()];
        let mut members = HashSet::new();
        for t in &a.stars {
            let li = six.label_ix[&t.label];
            let c = q_ix[&t.centre];
            let rays: Vec<usize> = t.rays.iter().map(|q| q_ix[q]).collect();
            members.insert((li, c, rays.clone()));
            by_label[li].push((c, rays));
        }
        Self {
            q_ix,
            by_label,
            members,
        }
    }
}

/// Whether every node's induced star is a star of `a`.
pub fn check_tiling(
    sig: &Signature,
    a: &StarAutomaton,
    g: &Graph,
    t: &TilingAssignment,
) -> Result<bool> {
    require_star(sig, a)?;
    require_graph(sig, g)?;
    let six = SigIndex::new(sig);
    let cs = CompiledStars::new(&six, a);
    let gi = GraphIndex::new(&six, g);
    let mut state = Vec::with_capacity(g.nodes.len());
    for v in &g.nodes {
        let Some(q) = t.state_of.get(v) else {
            return Err(Error::Precondition(format!("node {v} has no state")));
        };
        let Some(&qi) = cs.q_ix.get(q) else {
            return Err(Error::Precondition(format!(
                "node {v} has unknown state {q}"
            )));
        };
        state.push(qi);
    }
    Ok((0..g.nodes.len()).all(|v| {
        let li = gi.label[v];
        let rays = six.label_dirs[li]
            .iter()
            .map(|&d| state[gi.next[v][d].expect("validated")])
            .collect();
        cs.members.contains(&(li, state[v], rays))
    }))
}

/// Finds a tiling by backtracking over nodes in order and states in order,
/// with forward checking on the neighbourhood of each assigned node. The
/// first tiling in that order is returned.
pub fn find_tiling(
    sig: &Signature,
    a: &StarAutomaton,
    g: &Graph,
) -> Result<Option<TilingAssignment>> {
    require_star(sig, a)?;
    require_graph(sig, g)?;
    let six = SigIndex::new(sig);
    let cs = CompiledStars::new(&six, a);
    let gi = GraphIndex::new(&six, g);
    let n = g.nodes.len();

    // Nodes whose stars involve v: v itself and its neighbours.
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        watchers[v].push(v);
        for &d in &six.label_dirs[gi.label[v]] {
            let u = gi.next[v][d].expect("validated");
            if !watchers[u].contains(&v) {
                watchers[u].push(v);
            }
        }
    }

    let possible = |v: usize, state: &[Option<usize>]| -> bool {
        let li = gi.label[v];
        let dirs = &six.label_dirs[li];
        cs.by_label[li].iter().any(|(c, rays)| {
            state[v].is_none_or(|s| s == *c)
                && dirs.iter().zip(rays).all(|(&d, &r)| {
                    let u = gi.next[v][d].expect("validated");
                    // a loop ray is the node's own state
                    if u == v && state[v].is_none() && r != *c {
                        return false;
                    }
                    state[u].is_none_or(|s| s == r)
                })
        })
    };

    fn search(
        v: usize,
        n: usize,
        states: usize,
        state: &mut Vec<Option<usize>>,
        watchers: &[Vec<usize>],
        possible: &dyn Fn(usize, &[Option<usize>]) -> bool,
    ) -> bool {
        if v == n {
            return true;
        }
        for q in 0..states {
            state[v] = Some(q);
            if watchers[v].iter().all(|&w| possible(w, state))
                && search(v + 1, n, states, state, watchers, possible)
            {
                return true;
            }
        }
        state[v] = None;
        false
    }

    let mut state = vec![None; n];
    if !search(0, n, a.states.len(), &mut state, &watchers, &possible) {
        return Ok(None);
    }
    Ok(Some(TilingAssignment {
        state_of: g
            .nodes
            .iter()
            .zip(&state)
            .map(|(v, q)| (v.clone(), a.states[q.expect("complete")].clone()))
            .collect(),
    }))
}

fn star_name(t: &Star) -> String {
    encode(&(&t.label, &t.centre, &t.rays))
}

fn direction_name(d: &str, q1: &str, q2: &str) -> String {
    encode(&(d, q1, q2))
}

/// The reduced signature: one label per star.
pub fn reduce_star_to_signature(sig: &Signature, a: &StarAutomaton) -> Result<Signature> {
    require_star(sig, a)?;
    let six = SigIndex::new(sig);
    let cs = CompiledStars::new(&six, a);

    let mut used: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen = HashSet::new();
    for t in &a.stars {
        let li = six.label_ix[&t.label];
        let c = cs.q_ix[&t.centre];
        for (&d, r) in six.label_dirs[li].iter().zip(&t.rays) {
            let r = cs.q_ix[r];
            for x in [(d, c, r), (six.opposite[d], r, c)] {
                if seen.insert(x) {
                    used.push(x);
                }
            }
        }
    }
    used.sort_unstable();
    let dname = |(d, q1, q2): (usize, usize, usize)| {
        direction_name(&sig.directions[d], &a.states[q1], &a.states[q2])
    };

    let mut out = Signature::default();
    for &(d, q1, q2) in &used {
        out.directions.push(dname((d, q1, q2)));
        out.opposite
            .insert(dname((d, q1, q2)), dname((six.opposite[d], q2, q1)));
    }
    for t in &a.stars {
        let name = star_name(t);
        out.labels.push(name.clone());
        if sig.is_initial(&t.label) {
            out.initial_labels.push(name.clone());
        }
        let li = six.label_ix[&t.label];
        let c = cs.q_ix[&t.centre];
        let dirs = six.label_dirs[li]
            .iter()
            .zip(&t.rays)
            .map(|(&d, r)| dname((d, c, cs.q_ix[r])))
            .collect();
        out.dirs_of_label.insert(name, dirs);
    }
    Ok(out)
}

/// The graph over the reduced signature corresponding to a tiled graph.
pub fn encode_tiling(
    sig: &Signature,
    a: &StarAutomaton,
    g: &Graph,
    t: &TilingAssignment,
) -> Result<Graph> {
    if !check_tiling(sig, a, g, t)? {
        return Err(Error::Precondition("the assignment is not a tiling".into()));
    }
    let mut out = Graph {
        nodes: g.nodes.clone(),
        initial: g.initial.clone(),
        labels: IndexMap::new(),
        edges: IndexMap::new(),
    };
    for v in &g.nodes {
        let a_v = &g.labels[v];
        let q = &t.state_of[v];
        let mut rays = Vec::new();
        let mut edges = IndexMap::new();
        for d in sig.dirs_of(a_v) {
            let u = &g.edges[v][d];
            let r = &t.state_of[u];
            edges.insert(direction_name(d, q, r), u.clone());
            rays.push(r.clone());
        }
        out.labels.insert(
            v.clone(),
            star_name(&Star {
                label: a_v.clone(),
                centre: q.clone(),
                rays,
            }),
        );
        out.edges.insert(v.clone(), edges);
    }
    Ok(out)
}

/// Recovers the graph and its tiling from a graph over the reduced signature.
pub fn decode_tiling(reduced: &Signature, gp: &Graph) -> Result<(Graph, TilingAssignment)> {
    require_graph(reduced, gp)?;
    let mut g = Graph {
        nodes: gp.nodes.clone(),
        initial: gp.initial.clone(),
        labels: IndexMap::new(),
        edges: IndexMap::new(),
    };
    let mut t = TilingAssignment::default();
    for v in &gp.nodes {
        let (label, centre, _): (LabelId, StateId, Vec<StateId>) =
            decode(&gp.labels[v], "star label")?;
        g.labels.insert(v.clone(), label);
        t.state_of.insert(v.clone(), centre);
        let mut edges = IndexMap::new();
        if let Some(m) = gp.edges.get(v) {
            for (d, u) in m {
                let (base, _, _): (String, StateId, StateId) = decode(d, "star direction")?;
                edges.insert(base, u.clone());
            }
        }
        g.edges.insert(v.clone(), edges);
    }
    Ok((g, t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum StarVerdict {
    NonEmpty {
        witness: Graph,
        tiling: TilingAssignment,
    },
    Empty,
}

impl StarVerdict {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, StarVerdict::NonEmpty { .. })
    }

    pub fn witness(&self) -> Option<&Graph> {
        match self {
            StarVerdict::NonEmpty { witness, .. } => Some(witness),
            StarVerdict::Empty => None,
        }
    }
}

/// Decides whether `a` accepts some graph over `sig`. The witness is a
/// smallest accepted graph, checked against its tiling before returning.
pub fn star_nonempty(
    sig: &Signature,
    a: &StarAutomaton,
    limits: &SearchLimits,
) -> Result<StarVerdict> {
    let reduced = reduce_star_to_signature(sig, a)?;
    match signature_nonempty(&reduced, limits)? {
        SignatureVerdict::Empty => Ok(StarVerdict::Empty),
        SignatureVerdict::NonEmpty { witness } => {
            let (g, t) = decode_tiling(&reduced, &witness)?;
            assert!(
                check_tiling(sig, a, &g, &t)?,
                "decoded witness does not carry a tiling"
            );
            Ok(StarVerdict::NonEmpty {
                witness: g,
                tiling: t,
            })
        }
    }
}

/// Size bound `s·n²·k^(k·n² - 1)` on the smallest accepted graph, for `s`
/// stars, `n` states and `k` directions. Requires `k >= 2` and no label
/// without directions.
pub fn star_bound(sig: &Signature, a: &StarAutomaton) -> Result<BigUint> {
    let k = sig.directions.len() as u64;
    if k < 2 {
        return Err(Error::NotApplicable(
            "the bound needs at least two directions",
        ));
    }
    if sig.labels.iter().any(|l| sig.dirs_of(l).is_empty()) {
        return Err(Error::NotApplicable(
            "the bound needs every label to have a direction",
        ));
    }
    let n = a.states.len() as u64;
    if n == 0 {
        return Err(Error::NotApplicable("the bound needs at least one state"));
    }
    let s = a.stars.len() as u64;
    Ok(BigUint::from(s) * BigUint::from(n * n) * pow_u64(k, k * n * n - 1))
}
