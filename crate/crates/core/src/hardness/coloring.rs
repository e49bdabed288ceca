//! 3-colourability as signature emptiness, and the universal star automaton.

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::model::{
    require_graph, require_signature, Graph, Signature, ValidationReport, Violation,
};
use crate::naming::{decode, encode};
use crate::star::{Star, StarAutomaton};
use crate::{Error, Result};

/// An undirected graph without loops.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl SimpleGraph {
    /// Checks the structural invariants, including connectivity.
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let mut other = |message: String| out.push(Violation::Other { message });
        if self.vertices.is_empty() {
            other("graph has no vertices".into());
        }
        let mut vs = HashSet::new();
        for v in &self.vertices {
            if !vs.insert(v.as_str()) {
                other(format!("duplicate vertex {v}"));
            }
        }
        let mut seen = HashSet::new();
        for (u, v) in &self.edges {
            for x in [u, v] {
                if !vs.contains(x.as_str()) {
                    other(format!("edge {{{u},{v}}} uses unknown vertex {x}"));
                }
            }
            if u == v {
                other(format!("self-loop at {u}"));
            }
            let key = if u < v { (u, v) } else { (v, u) };
            if !seen.insert(key) {
                other(format!("duplicate edge {{{u},{v}}}"));
            }
        }
        if out.is_empty() && !self.is_connected() {
            out.push(Violation::Other {
                message: "graph is not connected".into(),
            });
        }
        ValidationReport::from_violations(out)
    }

    fn is_connected(&self) -> bool {
        let Some(first) = self.vertices.first() else {
            return true;
        };
        let adj = self.adjacency();
        let mut seen = HashSet::from([first.as_str()]);
        let mut stack = vec![first.as_str()];
        while let Some(v) = stack.pop() {
            for &u in adj.get(v).into_iter().flatten() {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    fn adjacency(&self) -> HashMap<&str, Vec<&str>> {
        let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
        for (u, v) in &self.edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        adj
    }
}

fn require_simple(g: &SimpleGraph) -> Result<()> {
    let report = g.validate();
    if report.ok {
        Ok(())
    } else {
        Err(Error::invalid("simple graph", report))
    }
}

fn vertex_label(v: &str, i: u8) -> String {
    encode(&(v, i))
}

fn edge_label(u: &str, i: u8, v: &str, j: u8) -> String {
    encode(&((u, i), (v, j)))
}

/// `sign` is `"+"` at the vertex end and `"-"` at the edge end of the
/// connection from vertex `u` coloured `i` towards its neighbour `v`.
fn connection(sign: &str, u: &str, i: u8, v: &str) -> String {
    encode(&(sign, u, i, v))
}

/// The signature whose graphs are exactly the proper 3-colourings of `g`:
/// one node per vertex, labelled with the vertex and its colour, and one
/// node per edge, labelled with both coloured endpoints (colours distinct).
pub fn gen_3col_signature(g: &SimpleGraph) -> Result<Signature> {
    require_simple(g)?;
    let mut sig = Signature::default();
    for (u, v) in &g.edges {
        for i in 1..=3u8 {
            for (a, b) in [(u, v), (v, u)] {
                let plus = connection("+", a, i, b);
                let minus = connection("-", a, i, b);
                sig.directions.push(plus.clone());
                sig.directions.push(minus.clone());
                sig.opposite.insert(plus.clone(), minus.clone());
                sig.opposite.insert(minus, plus);
            }
        }
    }
    let position: HashMap<String, usize> = sig
        .directions
        .iter()
        .enumerate()
        .map(|(i, d)| (d.clone(), i))
        .collect();
    let adj = g.adjacency();

    for (vi, v) in g.vertices.iter().enumerate() {
        for i in 1..=3u8 {
            let name = vertex_label(v, i);
            let dirs = adj
                .get(v.as_str())
                .into_iter()
                .flatten()
                .map(|u| connection("+", v, i, u))
                .collect::<Vec<_>>();
            sig.labels.push(name.clone());
            if vi == 0 {
                sig.initial_labels.push(name.clone());
            }
            sig.dirs_of_label.insert(name, sorted(dirs, &position));
        }
    }
    for (u, v) in &g.edges {
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                if i == j {
                    continue;
                }
                let name = edge_label(u, i, v, j);
                let dirs = vec![connection("-", u, i, v), connection("-", v, j, u)];
                sig.labels.push(name.clone());
                sig.dirs_of_label.insert(name, sorted(dirs, &position));
            }
        }
    }
    Ok(sig)
}

fn sorted(mut dirs: Vec<String>, position: &HashMap<String, usize>) -> Vec<String> {
    dirs.sort_by_key(|d| position[d]);
    dirs
}

/// Reads the colour of every vertex from a graph over [`gen_3col_signature`].
pub fn extract_coloring(g: &SimpleGraph, witness: &Graph) -> Result<IndexMap<String, u8>> {
    let sig = gen_3col_signature(g)?;
    require_graph(&sig, witness)?;
    let mut colour: IndexMap<String, u8> = IndexMap::new();
    for node in &witness.nodes {
        let label = &witness.labels[node];
        // vertex labels are pairs (vertex, colour); edge labels are pairs of pairs
        if let Ok((v, i)) = decode::<(String, u8)>(label, "colour label") {
            if colour.insert(v.clone(), i).is_some() {
                return Err(Error::Malformed(format!("vertex {v} occurs twice")));
            }
        }
    }
    let mut out = IndexMap::new();
    for v in &g.vertices {
        let Some(&c) = colour.get(v) else {
            return Err(Error::Malformed(format!("vertex {v} does not occur")));
        };
        out.insert(v.clone(), c);
    }
    if let Some((u, v)) = g.edges.iter().find(|(u, v)| out[u] == out[v]) {
        return Err(Error::Malformed(format!(
            "edge {{{u},{v}}} is monochromatic"
        )));
    }
    Ok(out)
}

/// The graph over [`gen_3col_signature`] representing a proper colouring.
pub fn canonical_colored_graph(g: &SimpleGraph, colouring: &IndexMap<String, u8>) -> Result<Graph> {
    require_simple(g)?;
    for v in &g.vertices {
        match colouring.get(v) {
            Some(1..=3) => {}
            Some(c) => return Err(Error::Precondition(format!("vertex {v} has colour {c}"))),
            None => return Err(Error::Precondition(format!("vertex {v} is not coloured"))),
        }
    }
    if let Some((u, v)) = g.edges.iter().find(|(u, v)| colouring[u] == colouring[v]) {
        return Err(Error::Precondition(format!(
            "colouring is not proper on edge {{{u},{v}}}"
        )));
    }
    let vnode = |v: &str| encode(&("vertex", v));
    let enode = |u: &str, v: &str| encode(&("edge", u, v));
    let mut out = Graph::default();
    for v in &g.vertices {
        out.nodes.push(vnode(v));
        out.labels.insert(vnode(v), vertex_label(v, colouring[v]));
        out.edges.insert(vnode(v), IndexMap::new());
    }
    out.initial = vnode(&g.vertices[0]);
    for (u, v) in &g.edges {
        let (i, j) = (colouring[u], colouring[v]);
        let e = enode(u, v);
        out.nodes.push(e.clone());
        out.labels.insert(e.clone(), edge_label(u, i, v, j));
        let mut m = IndexMap::new();
        m.insert(connection("-", u, i, v), vnode(u));
        m.insert(connection("-", v, j, u), vnode(v));
        out.edges.insert(e.clone(), m);
        out.edges
            .get_mut(&vnode(u))
            .expect("vertex node")
            .insert(connection("+", u, i, v), e.clone());
        out.edges
            .get_mut(&vnode(v))
            .expect("vertex node")
            .insert(connection("+", v, j, u), e);
    }
    // Keep each node's edges in signature order for stable output.
    let sig = gen_3col_signature(g)?;
    for node in &out.nodes {
        let label = &out.labels[node];
        let m = out.edges.get_mut(node).expect("edges");
        let ordered: IndexMap<String, String> = sig
            .dirs_of(label)
            .iter()
            .map(|d| (d.clone(), m[d].clone()))
            .collect();
        *m = ordered;
    }
    Ok(out)
}

/// One state, and for every label the star with that state everywhere; it
/// accepts exactly the graphs over `sig`.
pub fn gen_universal_star_automaton(sig: &Signature) -> Result<StarAutomaton> {
    require_signature(sig)?;
    let q = "q".to_string();
    Ok(StarAutomaton {
        states: vec![q.clone()],
        stars: sig
            .labels
            .iter()
            .map(|a| Star {
                label: a.clone(),
                centre: q.clone(),
                rays: vec![q.clone(); sig.dirs_of(a).len()],
            })
            .collect(),
    })
}
