//! The grid signature and its canonical graphs.
//!
//! Graphs over the grid signature have three layers:
//! - a full binary tree of height `2n` rooted at the initial node, whose
//!   `4^n` leaves each point at one grid node;
//! - the grid nodes, labelled with a position type (corner, side or centre),
//!   a tape symbol and an optional head state, wired by `±1` (right/left)
//!   and `±2` (up/down);
//! - below every grid node, a chain of `2n` bit nodes: the row number then
//!   the column number, most significant bit first.

use super::turing::{check_computation, require_machine, TmConfiguration, TuringMachine};
use crate::model::{Graph, Signature};
use crate::naming::encode;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Dir {
    PlusL(usize),
    MinusL(usize),
    PlusR(usize),
    MinusR(usize),
    PlusLeaf,
    MinusLeaf,
    Right,
    Left,
    Up,
    Down,
    PlusChain,
    MinusChain,
    PlusC(usize),
    MinusC(usize),
}

impl Dir {
    pub fn name(self) -> String {
        match self {
            Dir::PlusL(i) => format!("+l{i}"),
            Dir::MinusL(i) => format!("-l{i}"),
            Dir::PlusR(i) => format!("+r{i}"),
            Dir::MinusR(i) => format!("-r{i}"),
            Dir::PlusLeaf => "+leaf".into(),
            Dir::MinusLeaf => "-leaf".into(),
            Dir::Right => "+1".into(),
            Dir::Left => "-1".into(),
            Dir::Up => "+2".into(),
            Dir::Down => "-2".into(),
            Dir::PlusChain => "+chain".into(),
            Dir::MinusChain => "-chain".into(),
            Dir::PlusC(i) => format!("+c{i}"),
            Dir::MinusC(i) => format!("-c{i}"),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::PlusL(i) => Dir::MinusL(i),
            Dir::MinusL(i) => Dir::PlusL(i),
            Dir::PlusR(i) => Dir::MinusR(i),
            Dir::MinusR(i) => Dir::PlusR(i),
            Dir::PlusLeaf => Dir::MinusLeaf,
            Dir::MinusLeaf => Dir::PlusLeaf,
            Dir::Right => Dir::Left,
            Dir::Left => Dir::Right,
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
            Dir::PlusChain => Dir::MinusChain,
            Dir::MinusChain => Dir::PlusChain,
            Dir::PlusC(i) => Dir::MinusC(i),
            Dir::MinusC(i) => Dir::PlusC(i),
        }
    }
}

/// Horizontal position type: left border, centre, right border.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Col {
    L,
    C,
    R,
}

/// Vertical position type: bottom (row 0), centre, top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Row {
    D,
    C,
    U,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Pos {
    pub col: Col,
    pub row: Row,
}

impl Pos {
    pub const ALL: [Pos; 9] = {
        use Col as H;
        use Row as V;
        [
            Pos {
                col: H::L,
                row: V::U,
            },
            Pos {
                col: H::C,
                row: V::U,
            },
            Pos {
                col: H::R,
                row: V::U,
            },
            Pos {
                col: H::L,
                row: V::C,
            },
            Pos {
                col: H::C,
                row: V::C,
            },
            Pos {
                col: H::R,
                row: V::C,
            },
            Pos {
                col: H::L,
                row: V::D,
            },
            Pos {
                col: H::C,
                row: V::D,
            },
            Pos {
                col: H::R,
                row: V::D,
            },
        ]
    };

    pub fn of(i: usize, j: usize, side: usize) -> Pos {
        let class = |x: usize| {
            if x == 0 {
                0
            } else if x + 1 == side {
                2
            } else {
                1
            }
        };
        Pos {
            col: [Col::L, Col::C, Col::R][class(j)],
            row: [Row::D, Row::C, Row::U][class(i)],
        }
    }

    pub fn name(self) -> String {
        let h = match self.col {
            Col::L => 'L',
            Col::C => 'C',
            Col::R => 'R',
        };
        let v = match self.row {
            Row::D => 'D',
            Row::C => 'C',
            Row::U => 'U',
        };
        format!("{h}{v}")
    }

    pub fn has(self, d: Dir) -> bool {
        match d {
            Dir::Right => self.col != Col::R,
            Dir::Left => self.col != Col::L,
            Dir::Up => self.row != Row::U,
            Dir::Down => self.row != Row::D,
            Dir::MinusLeaf | Dir::PlusChain => true,
            _ => false,
        }
    }

    pub fn dirs(self) -> Vec<Dir> {
        [
            Dir::MinusLeaf,
            Dir::Right,
            Dir::Left,
            Dir::Up,
            Dir::Down,
            Dir::PlusChain,
        ]
        .into_iter()
        .filter(|&d| self.has(d))
        .collect()
    }
}

/// A label of the grid signature in structured form. Symbols and head
/// states are indices into the machine's work alphabet and state list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Lab {
    Root,
    /// Tree node at `level >= 1`; `left` for `a_level`, otherwise `b_level`.
    Tree {
        level: usize,
        left: bool,
    },
    Grid {
        pos: Pos,
        sym: usize,
        head: Option<usize>,
    },
    Chain {
        bit: u8,
        index: usize,
    },
}

/// Shape parameters shared by the signature, the automaton and the graphs.
pub(crate) struct Layout<'m> {
    pub n: usize,
    pub machine: &'m TuringMachine,
}

impl<'m> Layout<'m> {
    pub fn new(n: usize, machine: &'m TuringMachine) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("the grid needs n >= 1".into()));
        }
        if n > 16 {
            return Err(Error::ResourceLimit {
                resource: "grid exponent n",
                limit: 16,
            });
        }
        require_machine(machine)?;
        Ok(Self { n, machine })
    }

    /// Tree height and chain length.
    pub fn depth(&self) -> usize {
        2 * self.n
    }

    pub fn side(&self) -> usize {
        1 << self.n
    }

    pub fn directions(&self) -> Vec<Dir> {
        let mut out = Vec::new();
        for i in 1..=self.depth() {
            out.extend([Dir::PlusL(i), Dir::MinusL(i), Dir::PlusR(i), Dir::MinusR(i)]);
        }
        out.push(Dir::PlusLeaf);
        out.extend([
            Dir::MinusLeaf,
            Dir::Right,
            Dir::Left,
            Dir::Up,
            Dir::Down,
            Dir::PlusChain,
        ]);
        out.push(Dir::MinusChain);
        for i in 1..self.depth() {
            out.extend([Dir::PlusC(i), Dir::MinusC(i)]);
        }
        out
    }

    pub fn labels(&self) -> Vec<Lab> {
        let mut out = vec![Lab::Root];
        for level in 1..=self.depth() {
            out.push(Lab::Tree { level, left: true });
            out.push(Lab::Tree { level, left: false });
        }
        for pos in Pos::ALL {
            for sym in 0..self.machine.work_alphabet.len() {
                out.push(Lab::Grid {
                    pos,
                    sym,
                    head: None,
                });
                for q in 0..self.machine.states.len() {
                    out.push(Lab::Grid {
                        pos,
                        sym,
                        head: Some(q),
                    });
                }
            }
        }
        for bit in 0..=1u8 {
            for index in 1..=self.depth() {
                out.push(Lab::Chain { bit, index });
            }
        }
        out
    }

    pub fn label_name(&self, l: Lab) -> String {
        match l {
            Lab::Root => "a0".into(),
            Lab::Tree { level, left: true } => format!("a{level}"),
            Lab::Tree { level, left: false } => format!("b{level}"),
            Lab::Grid { pos, sym, head } => encode(&(
                pos.name(),
                &self.machine.work_alphabet[sym],
                head.map(|q| &self.machine.states[q]),
            )),
            Lab::Chain { bit, index } => format!("{bit}_{index}"),
        }
    }

    pub fn label_dirs(&self, l: Lab) -> Vec<Dir> {
        let depth = self.depth();
        match l {
            Lab::Root => vec![Dir::PlusL(1), Dir::PlusR(1)],
            Lab::Tree { level, left } => {
                let up = if left {
                    Dir::MinusL(level)
                } else {
                    Dir::MinusR(level)
                };
                if level < depth {
                    vec![up, Dir::PlusL(level + 1), Dir::PlusR(level + 1)]
                } else {
                    vec![up, Dir::PlusLeaf]
                }
            }
            Lab::Grid { pos, .. } => pos.dirs(),
            Lab::Chain { index, .. } => {
                let up = if index == 1 {
                    Dir::MinusChain
                } else {
                    Dir::MinusC(index - 1)
                };
                if index < depth {
                    vec![up, Dir::PlusC(index)]
                } else {
                    vec![up]
                }
            }
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for d in self.directions() {
            sig.directions.push(d.name());
            sig.opposite.insert(d.name(), d.opposite().name());
        }
        for l in self.labels() {
            let name = self.label_name(l);
            if l == Lab::Root {
                sig.initial_labels.push(name.clone());
            }
            sig.labels.push(name.clone());
            sig.dirs_of_label.insert(
                name,
                self.label_dirs(l).into_iter().map(Dir::name).collect(),
            );
        }
        sig
    }
}

/// The grid signature for grids of side `2^n`, over the machine's work
/// alphabet and states.
pub fn gen_grid_signature(n: usize, machine: &TuringMachine) -> Result<Signature> {
    Ok(Layout::new(n, machine)?.signature())
}

fn tree_node(level: usize, k: usize) -> String {
    format!("t{level}_{k}")
}

fn grid_node(i: usize, j: usize) -> String {
    format!("g{i}_{j}")
}

fn chain_node(i: usize, j: usize, p: usize) -> String {
    format!("c{i}_{j}_{p}")
}

/// The graph laying out an accepting computation of `machine` on `w` on a
/// grid of side `2^n`: row `r` holds configuration `r`, and rows after the
/// last configuration repeat it. The computation is checked first.
pub fn canonical_grid_graph(
    n: usize,
    machine: &TuringMachine,
    w: &[String],
    computation: &[TmConfiguration],
) -> Result<Graph> {
    let lay = Layout::new(n, machine)?;
    let side = lay.side();
    let depth = lay.depth();
    check_computation(machine, w, side, side, computation)?;

    let mut g = Graph::default();
    let add = |g: &mut Graph, v: String, label: Lab, edges: Vec<(Dir, String)>| {
        g.nodes.push(v.clone());
        g.labels.insert(v.clone(), lay.label_name(label));
        g.edges
            .insert(v, edges.into_iter().map(|(d, u)| (d.name(), u)).collect());
    };

    for level in 0..=depth {
        for k in 0..1usize << level {
            let label = if level == 0 {
                Lab::Root
            } else {
                Lab::Tree {
                    level,
                    left: k % 2 == 0,
                }
            };
            let mut edges = Vec::new();
            if level > 0 {
                let up = if k % 2 == 0 {
                    Dir::MinusL(level)
                } else {
                    Dir::MinusR(level)
                };
                edges.push((up, tree_node(level - 1, k / 2)));
            }
            if level < depth {
                edges.push((Dir::PlusL(level + 1), tree_node(level + 1, 2 * k)));
                edges.push((Dir::PlusR(level + 1), tree_node(level + 1, 2 * k + 1)));
            } else {
                edges.push((Dir::PlusLeaf, grid_node(k >> n, k & (side - 1))));
            }
            add(&mut g, tree_node(level, k), label, edges);
        }
    }
    g.initial = tree_node(0, 0);

    let sym_ix = |s: &str| {
        machine
            .work_alphabet
            .iter()
            .position(|x| x == s)
            .expect("checked computation uses work symbols")
    };
    let state_ix = |s: &str| {
        machine
            .states
            .iter()
            .position(|x| x == s)
            .expect("checked computation uses machine states")
    };
    for i in 0..side {
        let config = &computation[i.min(computation.len() - 1)];
        for j in 0..side {
            let pos = Pos::of(i, j, side);
            let head = (config.head == j).then(|| state_ix(&config.state));
            let label = Lab::Grid {
                pos,
                sym: sym_ix(&config.tape[j]),
                head,
            };
            let edges = pos
                .dirs()
                .into_iter()
                .map(|d| {
                    let u = match d {
                        Dir::MinusLeaf => tree_node(depth, (i << n) | j),
                        Dir::Right => grid_node(i, j + 1),
                        Dir::Left => grid_node(i, j - 1),
                        Dir::Up => grid_node(i + 1, j),
                        Dir::Down => grid_node(i - 1, j),
                        Dir::PlusChain => chain_node(i, j, 1),
                        _ => unreachable!("grid nodes use grid directions"),
                    };
                    (d, u)
                })
                .collect();
            add(&mut g, grid_node(i, j), label, edges);
        }
    }

    for i in 0..side {
        for j in 0..side {
            let coords = (i << n) | j;
            for p in 1..=depth {
                let bit = (coords >> (depth - p) & 1) as u8;
                let label = Lab::Chain { bit, index: p };
                let mut edges = Vec::new();
                if p == 1 {
                    edges.push((Dir::MinusChain, grid_node(i, j)));
                } else {
                    edges.push((Dir::MinusC(p - 1), chain_node(i, j, p - 1)));
                }
                if p < depth {
                    edges.push((Dir::PlusC(p), chain_node(i, j, p + 1)));
                }
                add(&mut g, chain_node(i, j, p), label, edges);
            }
        }
    }
    Ok(g)
}

/// Single-defect variants of a canonical grid graph, each still a graph over
/// the grid signature, each describing something other than a correct grid
/// holding an accepting computation. Every mutant is named.
///
/// The suite covers every chain bit, chain swaps between grid nodes, rewired
/// `±1` and `±2` edges, a rewired leftmost leaf, and corrupted first rows
/// (wrong input symbol, extra head, missing head, non-blank tail).
pub fn grid_mutations(
    n: usize,
    machine: &TuringMachine,
    w: &[String],
    computation: &[TmConfiguration],
) -> Result<Vec<(String, Graph)>> {
    let base = canonical_grid_graph(n, machine, w, computation)?;
    let lay = Layout::new(n, machine)?;
    let side = lay.side();
    let depth = lay.depth();
    let mut out = Vec::new();

    for i in 0..side {
        for j in 0..side {
            for p in 1..=depth {
                let mut g = base.clone();
                let v = chain_node(i, j, p);
                let label = g.labels[&v].clone();
                let flipped = if label.starts_with('0') {
                    label.replacen('0', "1", 1)
                } else {
                    label.replacen('1', "0", 1)
                };
                g.labels.insert(v, flipped);
                out.push((format!("flip chain bit {p} of grid node ({i},{j})"), g));
            }
        }
    }

    let mut g = base.clone();
    for i in 0..side {
        for j in 0..side {
            let coords = ((last_row(side) - i) << n) | j;
            for p in 1..=depth {
                let bit = (coords >> (depth - p) & 1) as u8;
                g.labels.insert(
                    chain_node(i, j, p),
                    lay.label_name(Lab::Chain { bit, index: p }),
                );
            }
        }
    }
    out.push(("rows mirrored: every pos disagrees with its row".into(), g));

    let swap_targets = |g: &mut Graph, v1: &str, v2: &str, d: Dir| {
        let (dn, on) = (d.name(), d.opposite().name());
        let u1 = g.edges[v1][&dn].clone();
        let u2 = g.edges[v2][&dn].clone();
        g.edges.get_mut(v1).expect("node")[&dn] = u2.clone();
        g.edges.get_mut(v2).expect("node")[&dn] = u1.clone();
        g.edges.get_mut(&u1).expect("node")[&on] = v2.to_string();
        g.edges.get_mut(&u2).expect("node")[&on] = v1.to_string();
    };

    let last = side - 1;
    let mut g = base.clone();
    swap_targets(
        &mut g,
        &grid_node(0, 0),
        &grid_node(0, last),
        Dir::PlusChain,
    );
    out.push(("swap the chains of (0,0) and (0,last)".into(), g));
    let mut g = base.clone();
    swap_targets(
        &mut g,
        &grid_node(0, 0),
        &grid_node(last, last),
        Dir::PlusChain,
    );
    out.push(("swap the chains of (0,0) and (last,last)".into(), g));

    let mut g = base.clone();
    swap_targets(&mut g, &grid_node(0, 0), &grid_node(last, 0), Dir::Right);
    out.push(("rewire +1 of (0,0) and (last,0)".into(), g));
    let mut g = base.clone();
    swap_targets(&mut g, &grid_node(0, 0), &grid_node(0, last), Dir::Up);
    out.push(("rewire +2 of (0,0) and (0,last)".into(), g));
    let mut g = base.clone();
    swap_targets(&mut g, &grid_node(0, 1), &grid_node(last, 1), Dir::Left);
    out.push(("rewire -1 of (0,1) and (last,1)".into(), g));
    let mut g = base.clone();
    swap_targets(&mut g, &grid_node(1, 0), &grid_node(1, last), Dir::Down);
    out.push(("rewire -2 of (1,0) and (1,last)".into(), g));

    let mut g = base.clone();
    swap_targets(
        &mut g,
        &tree_node(depth, 0),
        &tree_node(depth, 1),
        Dir::PlusLeaf,
    );
    out.push(("swap the grid nodes of the first two leaves".into(), g));

    let relabel = |g: &mut Graph, i: usize, j: usize, f: &dyn Fn(Lab) -> Lab| {
        let v = grid_node(i, j);
        let old = lay
            .labels()
            .into_iter()
            .find(|&l| lay.label_name(l) == g.labels[&v])
            .expect("grid label");
        g.labels.insert(v, lay.label_name(f(old)));
    };
    let blank = machine
        .work_alphabet
        .iter()
        .position(|s| *s == machine.blank)
        .expect("validated machine");
    let other_symbol = |s: usize| (0..machine.work_alphabet.len()).find(|&x| x != s);

    if let Lab::Grid { sym, .. } = label_at(&lay, &base, 0, 0) {
        if let Some(x) = other_symbol(sym) {
            let mut g = base.clone();
            relabel(&mut g, 0, 0, &|l| match l {
                Lab::Grid { pos, head, .. } => Lab::Grid { pos, sym: x, head },
                other => other,
            });
            out.push(("wrong symbol at (0,0)".into(), g));
        }
    }
    let mut g = base.clone();
    relabel(&mut g, 0, 1, &|l| match l {
        Lab::Grid { pos, sym, .. } => Lab::Grid {
            pos,
            sym,
            head: Some(0),
        },
        other => other,
    });
    out.push(("second head at (0,1)".into(), g));
    let mut g = base.clone();
    relabel(&mut g, 0, 0, &|l| match l {
        Lab::Grid { pos, sym, .. } => Lab::Grid {
            pos,
            sym,
            head: None,
        },
        other => other,
    });
    out.push(("no head at (0,0)".into(), g));
    if let Some(x) = other_symbol(blank) {
        let mut g = base.clone();
        relabel(&mut g, 0, last, &|l| match l {
            Lab::Grid { pos, head, .. } => Lab::Grid { pos, sym: x, head },
            other => other,
        });
        out.push(("non-blank symbol at (0,last)".into(), g));
    }
    Ok(out)
}

fn last_row(side: usize) -> usize {
    side - 1
}

fn label_at(lay: &Layout<'_>, g: &Graph, i: usize, j: usize) -> Lab {
    let name = &g.labels[&grid_node(i, j)];
    lay.labels()
        .into_iter()
        .find(|&l| lay.label_name(l) == *name)
        .expect("grid label")
}

#[cfg(test)]
mod tests {
    use super::super::turing::find_accepting_computation;
    use super::super::turing::fixtures::*;
    use super::*;

    #[test]
    fn signature_counts() {
        let m = instant();
        let sig = gen_grid_signature(1, &m).unwrap();
        assert!(sig.validate().ok, "{}", sig.validate());
        let count = |p: &dyn Fn(&String) -> bool| sig.labels.iter().filter(|l| p(l)).count();
        assert_eq!(count(&|l| l.starts_with('a') || l.starts_with('b')), 5);
        assert_eq!(count(&|l| l.starts_with('[')), 9 * 2 * 2);
        assert_eq!(count(&|l| l.starts_with('0') || l.starts_with('1')), 4);
        assert_eq!(sig.initial_labels, vec!["a0"]);
        assert_eq!(sig.dirs_of("a0"), ["+l1", "+r1"]);
        assert_eq!(sig.dirs_of("a2"), ["-l2", "+leaf"]);
        assert_eq!(sig.dirs_of("b2"), ["-r2", "+leaf"]);
        let lu = r#"["LU","x",null]"#;
        assert_eq!(sig.dirs_of(lu), ["-leaf", "+1", "-2", "+chain"]);
        let cc = r#"["CC","_","s"]"#;
        assert_eq!(sig.dirs_of(cc), ["-leaf", "+1", "-1", "+2", "-2", "+chain"]);
        assert_eq!(sig.dirs_of("0_1"), ["-chain", "+c1"]);
        assert_eq!(sig.dirs_of("1_2"), ["-c1"]);
    }

    #[test]
    fn canonical_graph_for_n1() {
        let m = instant();
        let w = strings(&["x"]);
        let run = find_accepting_computation(&m, &w, 2, 2).unwrap().unwrap();
        let g = canonical_grid_graph(1, &m, &w, &run).unwrap();
        let sig = gen_grid_signature(1, &m).unwrap();
        assert!(g.validate(&sig).ok, "{}", g.validate(&sig));
        assert_eq!(g.nodes.len(), 19);
        assert_eq!(g.labels["g0_0"], r#"["LD","x","s"]"#);
        assert_eq!(g.labels["g1_1"], r#"["RU","_",null]"#);
        assert_eq!(g.labels["c0_0_1"], "0_1");
        assert_eq!(g.labels["c0_0_2"], "0_2");
        assert_eq!(g.labels["c1_0_1"], "1_1");
        assert_eq!(g.labels["c1_0_2"], "0_2");
        assert_eq!(g.neighbour("t2_2", "+leaf"), Some("g1_0"));
    }

    #[test]
    fn canonical_graph_for_n2() {
        let m = right_left();
        let w = strings(&["x"]);
        let run = find_accepting_computation(&m, &w, 4, 4).unwrap().unwrap();
        let g = canonical_grid_graph(2, &m, &w, &run).unwrap();
        let sig = gen_grid_signature(2, &m).unwrap();
        assert!(g.validate(&sig).ok, "{}", g.validate(&sig));
        assert_eq!(g.nodes.len(), 31 + 16 + 64);
        assert_eq!(g.labels["g1_1"], r#"["CC","_","t"]"#);
        assert_eq!(g.labels["g3_0"], r#"["LU","y","u"]"#);
    }

    #[test]
    fn invalid_computations_are_refused() {
        let m = right_left();
        let w = strings(&["x"]);
        let mut run = find_accepting_computation(&m, &w, 4, 4).unwrap().unwrap();
        run.pop();
        assert!(canonical_grid_graph(2, &m, &w, &run).is_err());
    }

    #[test]
    fn mutants_stay_over_the_signature() {
        let m = instant();
        let w = strings(&["x"]);
        let run = find_accepting_computation(&m, &w, 2, 2).unwrap().unwrap();
        let sig = gen_grid_signature(1, &m).unwrap();
        let ms = grid_mutations(1, &m, &w, &run).unwrap();
        assert!(ms.len() >= 10);
        for (name, g) in &ms {
            assert!(g.validate(&sig).ok, "{name}: {}", g.validate(&sig));
        }
    }
}
