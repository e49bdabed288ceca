//! Seeded instance generators and brute-force oracles shared by the
//! integration tests.
#![allow(dead_code)]

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use gwalk_core::gwa::GraphWalkingAutomaton;
use gwalk_core::hardness::SimpleGraph;
use gwalk_core::star::{Star, StarAutomaton};
use gwalk_core::{Graph, Signature};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// A signature from explicit parts; label direction lists are given in any
/// order and sorted into the signature's direction order.
pub fn signature(dirs: &[(&str, &str)], labels: &[(&str, &[&str])], initial: &[&str]) -> Signature {
    let directions: Vec<String> = dirs.iter().map(|(d, _)| d.to_string()).collect();
    let order = |d: &String| directions.iter().position(|x| x == d).unwrap();
    let mut dirs_of_label = IndexMap::new();
    for (a, ds) in labels {
        let mut ds: Vec<String> = ds.iter().map(|s| s.to_string()).collect();
        ds.sort_by_key(order);
        dirs_of_label.insert(a.to_string(), ds);
    }
    Signature {
        opposite: dirs
            .iter()
            .map(|(d, o)| (d.to_string(), o.to_string()))
            .collect(),
        directions,
        labels: labels.iter().map(|(a, _)| a.to_string()).collect(),
        initial_labels: strings(initial),
        dirs_of_label,
    }
}

/// Paths `a0 - a - ... - a - e`.
pub fn sig_line() -> Signature {
    signature(
        &[("r", "l"), ("l", "r")],
        &[("a0", &["r"]), ("a", &["r", "l"]), ("e", &["l"])],
        &["a0"],
    )
}

/// No graphs: the initial node needs an `r` neighbour nobody can provide.
pub fn sig_odd() -> Signature {
    signature(&[("r", "l"), ("l", "r")], &[("a0", &["r"])], &["a0"])
}

/// A random valid signature with at most `max_labels` labels and
/// `max_dirs` directions. Each direction is a member of an opposite pair or
/// self-opposite; label 0 is initial, a second initial label is rare.
pub fn random_signature(rng: &mut TestRng, max_labels: usize, max_dirs: usize) -> Signature {
    let total = rng.gen_range(1..=max_dirs);
    let pairs = rng.gen_range(0..=total / 2);
    let loops = total - 2 * pairs;
    let mut dirs: Vec<(String, String)> = Vec::new();
    for i in 0..pairs {
        dirs.push((format!("r{i}"), format!("l{i}")));
        dirs.push((format!("l{i}"), format!("r{i}")));
    }
    for i in 0..loops {
        dirs.push((format!("s{i}"), format!("s{i}")));
    }
    let m = rng.gen_range(1..=max_labels);
    let density = [0.2, 0.35, 0.5, 0.7][rng.gen_range(0..4)];
    let mut dirs_of_label = IndexMap::new();
    for a in 0..m {
        let ds: Vec<String> = dirs
            .iter()
            .filter(|_| rng.gen_bool(density))
            .map(|(d, _)| d.clone())
            .collect();
        dirs_of_label.insert(format!("a{a}"), ds);
    }
    let mut initial = vec!["a0".to_string()];
    if m > 1 && rng.gen_bool(0.15) {
        initial.push(format!("a{}", m - 1));
    }
    Signature {
        directions: dirs.iter().map(|(d, _)| d.clone()).collect(),
        opposite: dirs.into_iter().collect(),
        labels: (0..m).map(|a| format!("a{a}")).collect(),
        initial_labels: initial,
        dirs_of_label,
    }
}

/// A random star automaton with `n` states, each candidate star present
/// with probability `p`.
pub fn random_star_automaton(
    rng: &mut TestRng,
    sig: &Signature,
    n: usize,
    p: f64,
) -> StarAutomaton {
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut stars = Vec::new();
    for a in &sig.labels {
        let arity = sig.dirs_of(a).len();
        let combos = n.pow(arity as u32 + 1);
        for code in 0..combos {
            if !rng.gen_bool(p) {
                continue;
            }
            let mut c = code;
            let mut pick = || {
                let q = states[c % n].clone();
                c /= n;
                q
            };
            let centre = pick();
            let rays = (0..arity).map(|_| pick()).collect();
            stars.push(Star {
                label: a.clone(),
                centre,
                rays,
            });
        }
    }
    StarAutomaton { states, stars }
}

/// A random deterministic graph-walking automaton with `n` states: each
/// `(state, label)` pair accepts, moves, or has no transition.
pub fn random_gwa(rng: &mut TestRng, sig: &Signature, n: usize) -> GraphWalkingAutomaton {
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut accept = Vec::new();
    let mut delta = IndexMap::new();
    for q in &states {
        for a in &sig.labels {
            let ds = sig.dirs_of(a);
            let roll: f64 = rng.gen();
            if roll < 0.25 {
                accept.push((q.clone(), a.clone()));
            } else if roll < 0.9 && !ds.is_empty() {
                let p = states.choose(rng).unwrap().clone();
                let d = ds.choose(rng).unwrap().clone();
                delta.insert((q.clone(), a.clone()), (p, d));
            }
        }
    }
    GraphWalkingAutomaton {
        initial: states[0].clone(),
        states,
        accept,
        delta,
    }
}

pub fn gwa(
    states: &[&str],
    accept: &[(&str, &str)],
    delta: &[(&str, &str, &str, &str)],
) -> GraphWalkingAutomaton {
    GraphWalkingAutomaton {
        states: strings(states),
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

pub fn simple_graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
    SimpleGraph {
        vertices: (0..n).map(|v| v.to_string()).collect(),
        edges: edges
            .iter()
            .map(|&(u, v)| (u.to_string(), v.to_string()))
            .collect(),
    }
}

pub fn complete(n: usize) -> SimpleGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    simple_graph(n, &edges)
}

pub fn cycle(n: usize) -> SimpleGraph {
    simple_graph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn complete_bipartite(a: usize, b: usize) -> SimpleGraph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    simple_graph(a + b, &edges)
}

pub const PETERSEN: [(usize, usize); 15] = [
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 0),
    (0, 5),
    (1, 6),
    (2, 7),
    (3, 8),
    (4, 9),
    (5, 7),
    (7, 9),
    (9, 6),
    (6, 8),
    (8, 5),
];

/// The subgraph of the Petersen graph induced by `keep`, renumbered.
pub fn petersen_induced(keep: &[usize]) -> SimpleGraph {
    let ix = |v: usize| keep.iter().position(|&x| x == v);
    let edges: Vec<(usize, usize)> = PETERSEN
        .iter()
        .filter_map(|&(u, v)| Some((ix(u)?, ix(v)?)))
        .collect();
    simple_graph(keep.len(), &edges)
}

/// A random connected graph: a random spanning tree plus extra edges.
pub fn random_connected(rng: &mut TestRng, n: usize, extra: f64) -> SimpleGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(extra) {
                edges.push((u, v));
            }
        }
    }
    simple_graph(n, &edges)
}

/// Exhaustive search over all colourings with three colours.
pub fn three_colourable(g: &SimpleGraph) -> bool {
    let n = g.vertices.len();
    let ix = |v: &String| g.vertices.iter().position(|x| x == v).unwrap();
    let edges: Vec<(usize, usize)> = g.edges.iter().map(|(u, v)| (ix(u), ix(v))).collect();
    (0..3usize.pow(n as u32)).any(|code| {
        let colour = |v: usize| code / 3usize.pow(v as u32) % 3;
        edges.iter().all(|&(u, v)| colour(u) != colour(v))
    })
}

/// Colours are `1..=3`.
pub fn is_proper(g: &SimpleGraph, colouring: &IndexMap<String, u8>) -> bool {
    g.vertices
        .iter()
        .all(|v| colouring.get(v).is_some_and(|c| (1..=3).contains(c)))
        && g.edges.iter().all(|(u, v)| colouring[u] != colouring[v])
}

pub fn node_count(g: &Graph) -> usize {
    g.nodes.len()
}
