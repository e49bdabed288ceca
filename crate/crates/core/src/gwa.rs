//! Graph-walking automata.
//!
//! A graph-walking automaton starts in its initial state at the initial node
//! and repeatedly looks at its state and the current node's label: it either
//! accepts, or moves along one of the node's directions while changing state,
//! or halts rejecting when neither is defined. Being deterministic, it loops
//! forever as soon as a configuration repeats.
//!
//! Emptiness is decided by reduction to a signature. Each label of the
//! reduced signature is an original label annotated, per direction, with the
//! states in which an accepting run enters the node through that direction
//! and the states in which it leaves through it. Graphs over the reduced
//! signature are exactly the accepted graphs together with their runs (plus
//! possibly some harmless disjoint cycles), so a witness of the reduced
//! signature projects to an accepted graph.

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::model::{
    require_graph, require_signature, DirId, Graph, GraphIndex, LabelId, NodeId, SigIndex,
    Signature, ValidationReport, Violation,
};
use crate::naming::{decode, encode};
use crate::solver::{pow_u64, signature_nonempty, SearchLimits, SignatureVerdict};
use crate::{Error, Result};

pub type StateId = String;

/// A deterministic graph-walking automaton.
///
/// In JSON, transitions are keyed by `"state,label"`; the key is split at the
/// first comma, so state names must not contain one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphWalkingAutomaton {
    pub states: Vec<StateId>,
    pub initial: StateId,
    /// Accepting (state, label) pairs.
    pub accept: Vec<(StateId, LabelId)>,
    /// `(state, label) -> (next state, direction)`.
    #[serde(with = "delta_json")]
    pub delta: IndexMap<(StateId, LabelId), (StateId, DirId)>,
}

mod delta_json {
    use super::*;
    use serde::de::Error as _;

    type Delta = IndexMap<(StateId, LabelId), (StateId, DirId)>;

    pub fn serialize<S: Serializer>(delta: &Delta, s: S) -> Result<S::Ok, S::Error> {
        let flat: IndexMap<String, &(StateId, DirId)> = delta
            .iter()
            .map(|((q, a), t)| (format!("{q},{a}"), t))
            .collect();
        flat.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Delta, D::Error> {
        let flat: IndexMap<String, (StateId, DirId)> = IndexMap::deserialize(d)?;
        let mut out = IndexMap::new();
        for (key, t) in flat {
            let Some((q, a)) = key.split_once(',') else {
                return Err(D::Error::custom(format!(
                    "transition key {key:?} is not of the form \"state,label\""
                )));
            };
            out.insert((q.to_string(), a.to_string()), t);
        }
        Ok(out)
    }
}

impl GraphWalkingAutomaton {
    pub fn transition(&self, q: &str, a: &str) -> Option<(&str, &str)> {
        self.delta
            .get(&(q.to_string(), a.to_string()))
            .map(|(p, d)| (p.as_str(), d.as_str()))
    }

    pub fn accepts(&self, q: &str, a: &str) -> bool {
        self.accept.iter().any(|(p, b)| p == q && b == a)
    }

    /// Checks the automaton against `sig`, collecting every violation.
    pub fn validate(&self, sig: &Signature) -> ValidationReport {
        let mut out = Vec::new();
        let mut other = |message: String| out.push(Violation::Other { message });

        let mut states = HashSet::new();
        for q in &self.states {
            if !states.insert(q.as_str()) {
                other(format!("duplicate state {q}"));
            }
            if q.contains(',') {
                other(format!("state {q} contains a comma"));
            }
        }
        if !states.contains(self.initial.as_str()) {
            other(format!("initial state {} is not a state", self.initial));
        }
        let labels: HashSet<&str> = sig.labels.iter().map(String::as_str).collect();
        let mut accepting = HashSet::new();
        for (q, a) in &self.accept {
            if !states.contains(q.as_str()) {
                other(format!("accepting pair ({q},{a}) has unknown state {q}"));
            }
            if !labels.contains(a.as_str()) {
                other(format!("accepting pair ({q},{a}) has unknown label {a}"));
            }
            if !accepting.insert((q.as_str(), a.as_str())) {
                other(format!("accepting pair ({q},{a}) listed twice"));
            }
        }
        for ((q, a), (p, d)) in &self.delta {
            if !states.contains(q.as_str()) {
                other(format!("transition on ({q},{a}) has unknown state {q}"));
            }
            if !labels.contains(a.as_str()) {
                other(format!("transition on ({q},{a}) has unknown label {a}"));
                continue;
            }
            if !states.contains(p.as_str()) {
                other(format!(
                    "transition on ({q},{a}) leads to unknown state {p}"
                ));
            }
            if !sig.dirs_of(a).contains(d) {
                other(format!(
                    "direction not in D_a: transition on ({q},{a}) moves along {d}"
                ));
            }
            if accepting.contains(&(q.as_str(), a.as_str())) {
                other(format!("δ defined on F: ({q},{a}) both accepts and moves"));
            }
        }
        ValidationReport::from_violations(out)
    }
}

pub fn validate_gwa(sig: &Signature, a: &GraphWalkingAutomaton) -> ValidationReport {
    a.validate(sig)
}

fn require_gwa(sig: &Signature, a: &GraphWalkingAutomaton) -> Result<()> {
    require_signature(sig)?;
    let report = a.validate(sig);
    if report.ok {
        Ok(())
    } else {
        Err(Error::invalid("automaton", report))
    }
}

/// Integer-indexed automaton over an indexed signature.
pub(crate) struct CompiledGwa {
    pub state_count: usize,
    pub initial: usize,
    /// `accept[q][a]`
    pub accept: Vec<Vec<bool>>,
    /// `delta[q][a] = (q', d)`
    pub delta: Vec<Vec<Option<(usize, usize)>>>,
}

impl CompiledGwa {
    pub fn new(six: &SigIndex, a: &GraphWalkingAutomaton) -> Self {
        let q_ix: HashMap<&str, usize> = a
            .states
            .iter()
            .enumerate()
            .map(|(i, q)| (q.as_str(), i))
            .collect();
        let n = a.states.len();
        let m = six.label_count();
        let mut accept = vec![vec![false; m]; n];
        for (q, l) in &a.accept {
            accept[q_ix[q.as_str()]][six.label_ix[l]] = true;
        }
        let mut delta = vec![vec![None; m]; n];
        for ((q, l), (p, d)) in &a.delta {
            delta[q_ix[q.as_str()]][six.label_ix[l]] = Some((q_ix[p.as_str()], six.dir_ix[d]));
        }
        Self {
            state_count: n,
            initial: q_ix[a.initial.as_str()],
            accept,
            delta,
        }
    }
}

/// A (state, node) pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub state: StateId,
    pub node: NodeId,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.state, self.node)
    }
}

/// How a computation ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Outcome {
    Accept {
        configuration: Configuration,
    },
    Reject {
        configuration: Configuration,
    },
    /// `configuration` is the first configuration seen twice.
    Loop {
        configuration: Configuration,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Number of moves made.
    pub steps: u64,
    /// Configurations in order, starting with the initial one; for a loop the
    /// repeated configuration appears again at the end. Present only when
    /// requested, and cut after the requested number of entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Configuration>>,
}

impl RunResult {
    pub fn is_accept(&self) -> bool {
        matches!(self.outcome, Outcome::Accept { .. })
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.outcome, Outcome::Loop { .. })
    }
}

/// Trace recording for [`simulate_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraceOptions {
    pub record: bool,
    /// Maximum number of configurations kept in the trace.
    pub max_entries: usize,
}

pub fn simulate(sig: &Signature, a: &GraphWalkingAutomaton, g: &Graph) -> Result<RunResult> {
    simulate_with(sig, a, g, TraceOptions::default())
}

pub fn simulate_with(
    sig: &Signature,
    a: &GraphWalkingAutomaton,
    g: &Graph,
    opts: TraceOptions,
) -> Result<RunResult> {
    require_gwa(sig, a)?;
    require_graph(sig, g)?;
    let six = SigIndex::new(sig);
    let ca = CompiledGwa::new(&six, a);
    let gi = GraphIndex::new(&six, g);
    Ok(run(&ca, &gi, opts, |q, v| Configuration {
        state: a.states[q].clone(),
        node: g.nodes[v].clone(),
    }))
}

/// Runs a compiled automaton on an indexed graph.
pub(crate) fn run(
    ca: &CompiledGwa,
    gi: &GraphIndex,
    opts: TraceOptions,
    name: impl Fn(usize, usize) -> Configuration,
) -> RunResult {
    let mut seen = vec![false; ca.state_count * gi.label.len()];
    let mut trace = opts.record.then(Vec::new);
    let (mut q, mut v) = (ca.initial, gi.initial);
    let mut steps = 0u64;
    loop {
        if let Some(t) = &mut trace {
            if t.len() < opts.max_entries {
                t.push(name(q, v));
            }
        }
        let slot = q * gi.label.len() + v;
        if seen[slot] {
            return RunResult {
                outcome: Outcome::Loop {
                    configuration: name(q, v),
                },
                steps,
                trace,
            };
        }
        seen[slot] = true;
        let a = gi.label[v];
        if ca.accept[q][a] {
            return RunResult {
                outcome: Outcome::Accept {
                    configuration: name(q, v),
                },
                steps,
                trace,
            };
        }
        match ca.delta[q][a] {
            None => {
                return RunResult {
                    outcome: Outcome::Reject {
                        configuration: name(q, v),
                    },
                    steps,
                    trace,
                }
            }
            Some((p, d)) => {
                q = p;
                v = gi.next[v][d].expect("validated graphs have every label direction");
                steps += 1;
            }
        }
    }
}

/// Per-direction annotation `(d, states entering through d, states leaving
/// through d)`, as it appears in reduced identifiers.
type Annotation = (DirId, Vec<StateId>, Vec<StateId>);

fn direction_name(d: &str, q_in: &[StateId], q_out: &[StateId]) -> String {
    encode(&(d, q_in, q_out))
}

fn label_name(a: &str, e: &[Annotation]) -> String {
    encode(&(a, e))
}

fn states_of(mask: u64, states: &[StateId]) -> Vec<StateId> {
    (0..states.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| states[i].clone())
        .collect()
}

/// Reduces emptiness of `a` to emptiness of a signature (default label budget).
pub fn reduce_gwa_to_signature(sig: &Signature, a: &GraphWalkingAutomaton) -> Result<Signature> {
    reduce_gwa_with_limit(sig, a, SearchLimits::default().max_labels)
}

/// As [`reduce_gwa_to_signature`], failing once more than `max_labels`
/// annotated labels would be produced.
///
/// Labels are produced base label by base label. For each base label every
/// state is either not entering the node or entering through exactly one of
/// its directions (at the initial label the initial state enters "from
/// nowhere" and through no direction); combinations where an entering state
/// can neither accept nor move, or where two entering states move the same
/// way, are dropped. The leaving states of each direction are then forced.
pub fn reduce_gwa_with_limit(
    sig: &Signature,
    a: &GraphWalkingAutomaton,
    max_labels: usize,
) -> Result<Signature> {
    require_gwa(sig, a)?;
    let n = a.states.len();
    if n > 63 {
        return Err(Error::ResourceLimit {
            resource: "automaton states for the reduction",
            limit: 63,
        });
    }
    let six = SigIndex::new(sig);
    let ca = CompiledGwa::new(&six, a);

    struct Admitted {
        name: String,
        initial: bool,
        /// (direction index, in mask, out mask), in D_a order.
        dirs: Vec<(usize, u64, u64)>,
    }
    let mut admitted: Vec<Admitted> = Vec::new();

    for (li, base) in sig.labels.iter().enumerate() {
        let dirs = &six.label_dirs[li];
        let k = dirs.len();
        let initial = six.initial[li];
        // choice[q]: 0 = not entering, i + 1 = entering through dirs[i]
        let mut choice = vec![0usize; n];
        let free = |q: usize| !(initial && q == ca.initial);
        loop {
            let mut q_in: u64 = 0;
            let mut per_dir = vec![0u64; k];
            for q in 0..n {
                if !free(q) {
                    q_in |= 1 << q;
                } else if choice[q] > 0 {
                    q_in |= 1 << q;
                    per_dir[choice[q] - 1] |= 1 << q;
                }
            }
            if let Some(out) = forced_out(&ca, li, dirs, q_in) {
                if admitted.len() >= max_labels {
                    return Err(Error::ResourceLimit {
                        resource: "reduced labels",
                        limit: max_labels,
                    });
                }
                let ann: Vec<(usize, u64, u64)> = dirs
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| (d, per_dir[i], out[i]))
                    .collect();
                let e: Vec<Annotation> = ann
                    .iter()
                    .map(|&(d, i, o)| {
                        (
                            sig.directions[d].clone(),
                            states_of(i, &a.states),
                            states_of(o, &a.states),
                        )
                    })
                    .collect();
                admitted.push(Admitted {
                    name: label_name(base, &e),
                    initial,
                    dirs: ann,
                });
            }
            // odometer, last state fastest, skipping the pinned initial state
            let mut pos = n;
            let mut carried = true;
            while carried && pos > 0 {
                pos -= 1;
                if !free(pos) {
                    continue;
                }
                if choice[pos] < k {
                    choice[pos] += 1;
                    carried = false;
                } else {
                    choice[pos] = 0;
                }
            }
            if carried {
                break;
            }
        }
    }

    // Materialize used directions and their opposites, in a stable order.
    let mut used: Vec<(usize, u64, u64)> = Vec::new();
    let mut seen = HashSet::new();
    for l in &admitted {
        for &(d, i, o) in &l.dirs {
            for t in [(d, i, o), (six.opposite[d], o, i)] {
                if seen.insert(t) {
                    used.push(t);
                }
            }
        }
    }
    used.sort_unstable();
    let dname = |(d, i, o): (usize, u64, u64)| {
        direction_name(
            &sig.directions[d],
            &states_of(i, &a.states),
            &states_of(o, &a.states),
        )
    };

    let mut out = Signature::default();
    for &t in &used {
        out.directions.push(dname(t));
        out.opposite
            .insert(dname(t), dname((six.opposite[t.0], t.2, t.1)));
    }
    for l in admitted {
        out.labels.push(l.name.clone());
        if l.initial {
            out.initial_labels.push(l.name.clone());
        }
        out.dirs_of_label
            .insert(l.name, l.dirs.into_iter().map(dname).collect());
    }
    Ok(out)
}

/// The leaving-state masks per direction forced by the entering states, or
/// `None` if the entering states are not admissible for this label.
fn forced_out(ca: &CompiledGwa, label: usize, dirs: &[usize], q_in: u64) -> Option<Vec<u64>> {
    let mut out = vec![0u64; dirs.len()];
    let mut moves = HashSet::new();
    for q in 0..ca.state_count {
        if q_in >> q & 1 == 0 {
            continue;
        }
        if ca.accept[q][label] {
            continue;
        }
        let (p, d) = ca.delta[q][label]?;
        if !moves.insert((p, d)) {
            return None;
        }
        let i = dirs.iter().position(|&x| x == d)?;
        out[i] |= 1 << p;
    }
    Some(out)
}

/// The annotated graph recording the accepting run of `a` on `g`.
pub fn encode_accepting_run(
    sig: &Signature,
    a: &GraphWalkingAutomaton,
    g: &Graph,
) -> Result<Graph> {
    require_gwa(sig, a)?;
    require_graph(sig, g)?;
    let six = SigIndex::new(sig);
    let ca = CompiledGwa::new(&six, a);
    let gi = GraphIndex::new(&six, g);

    let n = g.nodes.len();
    let mut q_in = vec![vec![0u64; six.dir_count()]; n];
    let mut q_out = vec![vec![0u64; six.dir_count()]; n];
    let (mut q, mut v) = (ca.initial, gi.initial);
    let mut steps = 0usize;
    let limit = ca.state_count * n;
    loop {
        let l = gi.label[v];
        if ca.accept[q][l] {
            break;
        }
        let Some((p, d)) = ca.delta[q][l] else {
            return Err(Error::Precondition(
                "the automaton rejects the graph".into(),
            ));
        };
        let u = gi.next[v][d].expect("validated graphs have every label direction");
        q_out[v][d] |= 1 << p;
        q_in[u][six.opposite[d]] |= 1 << p;
        q = p;
        v = u;
        steps += 1;
        if steps > limit {
            return Err(Error::Precondition(
                "the automaton loops on the graph".into(),
            ));
        }
    }

    let mut out = Graph {
        nodes: g.nodes.clone(),
        initial: g.initial.clone(),
        labels: IndexMap::new(),
        edges: IndexMap::new(),
    };
    for (vi, vname) in g.nodes.iter().enumerate() {
        let li = gi.label[vi];
        let mut e: Vec<Annotation> = Vec::new();
        let mut edges = IndexMap::new();
        for &d in &six.label_dirs[li] {
            let ins = states_of(q_in[vi][d], &a.states);
            let outs = states_of(q_out[vi][d], &a.states);
            let u = gi.next[vi][d].expect("validated graphs have every label direction");
            edges.insert(
                direction_name(&sig.directions[d], &ins, &outs),
                g.nodes[u].clone(),
            );
            e.push((sig.directions[d].clone(), ins, outs));
        }
        out.labels
            .insert(vname.clone(), label_name(&sig.labels[li], &e));
        out.edges.insert(vname.clone(), edges);
    }
    Ok(out)
}

/// Drops the annotations of a graph over a reduced signature.
pub fn decode_annotated(reduced: &Signature, gp: &Graph) -> Result<Graph> {
    require_graph(reduced, gp)?;
    let mut out = Graph {
        nodes: gp.nodes.clone(),
        initial: gp.initial.clone(),
        labels: IndexMap::new(),
        edges: IndexMap::new(),
    };
    for v in &gp.nodes {
        let (base, _): (LabelId, Vec<Annotation>) = decode(&gp.labels[v], "reduced label")?;
        out.labels.insert(v.clone(), base);
        let mut edges = IndexMap::new();
        if let Some(m) = gp.edges.get(v) {
            for (d, u) in m {
                let (base, _, _): Annotation = decode(d, "reduced direction")?;
                edges.insert(base, u.clone());
            }
        }
        out.edges.insert(v.clone(), edges);
    }
    Ok(out)
}

/// Emptiness verdict for an automaton, with a certified witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum GwaVerdict {
    NonEmpty { witness: Graph, run: RunResult },
    Empty,
}

impl GwaVerdict {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, GwaVerdict::NonEmpty { .. })
    }

    pub fn witness(&self) -> Option<&Graph> {
        match self {
            GwaVerdict::NonEmpty { witness, .. } => Some(witness),
            GwaVerdict::Empty => None,
        }
    }
}

/// Decides whether `a` accepts some graph over `sig`. The witness is a
/// smallest accepted graph and is re-simulated before being returned.
pub fn gwa_nonempty(
    sig: &Signature,
    a: &GraphWalkingAutomaton,
    limits: &SearchLimits,
) -> Result<GwaVerdict> {
    let reduced = reduce_gwa_with_limit(sig, a, limits.max_labels)?;
    match signature_nonempty(&reduced, limits)? {
        SignatureVerdict::Empty => Ok(GwaVerdict::Empty),
        SignatureVerdict::NonEmpty { witness } => {
            let g = decode_annotated(&reduced, &witness)?;
            let run = simulate(sig, a, &g)?;
            assert!(
                run.is_accept(),
                "decoded witness is not accepted: {:?}",
                run.outcome
            );
            Ok(GwaVerdict::NonEmpty { witness: g, run })
        }
    }
}

/// Size bound `m·4^(n(k+1))·k^(k·4^n - 1)` on the smallest accepted graph,
/// for `m` labels, `n` states and `k` directions. Requires `k >= 2` and no
/// label without directions.
pub fn gwa_bound(sig: &Signature, a: &GraphWalkingAutomaton) -> Result<BigUint> {
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
    let m = sig.labels.len() as u64;
    let n = a.states.len() as u64;
    const MAX_EXPONENT: u64 = 1 << 24;
    let four_n = 4u64
        .checked_pow(n as u32)
        .filter(|&x| x.saturating_mul(k) <= MAX_EXPONENT)
        .ok_or(Error::ResourceLimit {
            resource: "bound exponent",
            limit: MAX_EXPONENT as usize,
        })?;
    Ok(BigUint::from(m) * pow_u64(4, n * (k + 1)) * pow_u64(k, k * four_n - 1))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn gwa(
        states: &[&str],
        accept: &[(&str, &str)],
        delta: &[(&str, &str, &str, &str)],
    ) -> GraphWalkingAutomaton {
        GraphWalkingAutomaton {
            states: states.iter().map(|s| s.to_string()).collect(),
            initial: states[0].to_string(),
            accept: accept
                .iter()
                .map(|(q, a)| (q.to_string(), a.to_string()))
                .collect(),
            delta: delta
                .iter()
                .map(|(q, a, p, d)| {
                    (
                        (q.to_string(), a.to_string()),
                        (p.to_string(), d.to_string()),
                    )
                })
                .collect(),
        }
    }

    /// Walks right along a line and accepts at its end.
    pub fn gwa_right() -> GraphWalkingAutomaton {
        gwa(
            &["q0"],
            &[("q0", "e")],
            &[("q0", "a0", "q0", "r"), ("q0", "a", "q0", "r")],
        )
    }

    /// Bounces between the two ends of a line forever.
    pub fn gwa_bounce() -> GraphWalkingAutomaton {
        gwa(
            &["q0"],
            &[],
            &[
                ("q0", "a0", "q0", "r"),
                ("q0", "e", "q0", "l"),
                ("q0", "a", "q0", "r"),
            ],
        )
    }
}
