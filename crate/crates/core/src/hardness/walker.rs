//! The graph-walking automaton that accepts exactly the correct grids
//! holding an accepting computation.
//!
//! The walk has two phases.
//!
//! Phase 1 checks the grid. The automaton descends the leftmost tree path
//! and checks that the grid node found there has an all-zero chain. It then
//! visits the leaves in order with a depth-first traversal. At each leaf's
//! grid node it checks that the position type agrees with the coordinates
//! on the chain, and that along each of `+1`, `-1`, `+2`, `-2` the neighbour's
//! coordinates differ by exactly one in the right block. Coordinates are
//! compared bit by bit: the automaton fetches bit `p` of the current node,
//! carries it to the neighbour, fetches the neighbour's bit `p`, and comes
//! back. An increment is a common prefix, then `0 -> 1`, then `1 -> 0` only.
//!
//! Phase 2 checks the computation. From `(0,0)` it verifies the first row
//! against the input, then for every row: accept if the row holds an
//! accepting head, otherwise check the row above is a successor, cell by
//! cell from left to right, and move up.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use indexmap::IndexMap;

use super::grid::{Col, Dir, Lab, Layout, Pos, Row};
use super::turing::{Move, TuringMachine};
use crate::gwa::GraphWalkingAutomaton;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Stage {
    Pos,
    Nb(Dir),
    Done,
}

const STAGES: [Stage; 6] = [
    Stage::Pos,
    Stage::Nb(Dir::Right),
    Stage::Nb(Dir::Left),
    Stage::Nb(Dir::Up),
    Stage::Nb(Dir::Down),
    Stage::Done,
];

fn after(stage: Stage) -> Stage {
    let i = STAGES
        .iter()
        .position(|&s| s == stage)
        .expect("known stage");
    STAGES[(i + 1).min(STAGES.len() - 1)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Mode {
    Eq,
    After,
}

/// What has been established about the step from the current row to the
/// one above, scanning left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Window {
    /// Nothing has changed so far.
    Clean,
    /// The head moved left into the previous cell, now in this state.
    NewLeft(usize),
    /// The head in state `q` on symbol `a` wrote `b` and should reappear
    /// in this cell: `(q, a, b)`.
    Old(usize, usize, usize),
    /// The change has been accounted for.
    Done,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum St {
    Start,
    Zero,
    Next(Stage),
    Back(Stage),
    PosWalk {
        pos: Pos,
        p: usize,
        seen0: bool,
        seen1: bool,
    },
    NbVDown {
        dir: Dir,
        p: usize,
        mode: Mode,
    },
    NbVUp {
        dir: Dir,
        p: usize,
        mode: Mode,
        bit: u8,
    },
    NbUDown {
        dir: Dir,
        p: usize,
        mode: Mode,
        bit: u8,
    },
    NbUUp {
        dir: Dir,
        p: usize,
        mode: Mode,
    },
    Ascend,
    FromLeft,
    Down,
    Home,
    Init(usize),
    ToLeft,
    Find,
    RetLeft,
    Scan(Window),
    Up {
        win: Window,
        sym: usize,
        head: Option<usize>,
    },
    Below(Window),
}

enum Act {
    Accept,
    Move(St, Dir),
    Reject,
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Eq => "eq",
        Mode::After => "after",
    }
}

fn window_name(w: Window) -> String {
    match w {
        Window::Clean => "clean".into(),
        Window::NewLeft(q) => format!("newleft{q}"),
        Window::Old(q, a, b) => format!("old{q}.{a}.{b}"),
        Window::Done => "done".into(),
    }
}

fn stage_name(s: Stage) -> String {
    match s {
        Stage::Pos => "pos".into(),
        Stage::Nb(d) => d.name(),
        Stage::Done => "done".into(),
    }
}

/// State names use indices into the machine's states and work alphabet and
/// never contain a comma.
fn state_name(s: St) -> String {
    match s {
        St::Start => "start".into(),
        St::Zero => "zero".into(),
        St::Next(stage) => format!("next.{}", stage_name(stage)),
        St::Back(stage) => format!("back.{}", stage_name(stage)),
        St::PosWalk {
            pos,
            p,
            seen0,
            seen1,
        } => format!("pos.{}.{p}.{}{}", pos.name(), seen0 as u8, seen1 as u8),
        St::NbVDown { dir, p, mode } => format!("vdown.{}.{p}.{}", dir.name(), mode_name(mode)),
        St::NbVUp { dir, p, mode, bit } => {
            format!("vup.{}.{p}.{}.{bit}", dir.name(), mode_name(mode))
        }
        St::NbUDown { dir, p, mode, bit } => {
            format!("udown.{}.{p}.{}.{bit}", dir.name(), mode_name(mode))
        }
        St::NbUUp { dir, p, mode } => format!("uup.{}.{p}.{}", dir.name(), mode_name(mode)),
        St::Ascend => "ascend".into(),
        St::FromLeft => "fromleft".into(),
        St::Down => "down".into(),
        St::Home => "home".into(),
        St::Init(j) => format!("init.{j}"),
        St::ToLeft => "toleft".into(),
        St::Find => "find".into(),
        St::RetLeft => "retleft".into(),
        St::Scan(w) => format!("scan.{}", window_name(w)),
        St::Up { win, sym, head } => format!(
            "up.{}.{sym}.{}",
            window_name(win),
            head.map_or("-".to_string(), |q| q.to_string())
        ),
        St::Below(w) => format!("below.{}", window_name(w)),
    }
}

struct Walker<'m> {
    lay: Layout<'m>,
    /// Input symbols as work-alphabet indices.
    input: Vec<usize>,
    blank: usize,
    initial: Vec<bool>,
    accepting: Vec<Vec<bool>>,
    delta: Delta,
}

/// `(q, a) -> [(q', b, move)]` over state and symbol indices.
type Delta = HashMap<(usize, usize), Vec<(usize, usize, Move)>>;

fn tree_level(l: Lab) -> Option<usize> {
    match l {
        Lab::Root => Some(0),
        Lab::Tree { level, .. } => Some(level),
        _ => None,
    }
}

impl Walker<'_> {
    fn depth(&self) -> usize {
        self.lay.depth()
    }

    /// Leftmost descent from a tree node, entering the grid in `then`.
    fn descend(&self, l: Lab, stay: St, then: St) -> Act {
        match tree_level(l) {
            Some(level) if level < self.depth() => Act::Move(stay, Dir::PlusL(level + 1)),
            Some(_) => Act::Move(then, Dir::PlusLeaf),
            None => Act::Reject,
        }
    }

    /// Move from a chain node one step towards its grid node.
    fn chain_up(index: usize, s: St) -> Act {
        if index == 1 {
            Act::Move(s, Dir::MinusChain)
        } else {
            Act::Move(s, Dir::MinusC(index - 1))
        }
    }

    /// Whether bit `p` lies in the block that `dir` changes, and how.
    fn compare(&self, dir: Dir, p: usize, mode: Mode, bv: u8, bu: u8) -> Option<Mode> {
        let row_bit = p <= self.lay.n;
        let varies = match dir {
            Dir::Right | Dir::Left => !row_bit,
            _ => row_bit,
        };
        if !varies {
            return (bv == bu).then_some(mode);
        }
        let increment = matches!(dir, Dir::Right | Dir::Up);
        let (flip_from, flip_to) = if increment { (0, 1) } else { (1, 0) };
        match mode {
            Mode::Eq if bv == bu => Some(Mode::Eq),
            Mode::Eq if (bv, bu) == (flip_from, flip_to) => Some(Mode::After),
            Mode::After if (bv, bu) == (flip_to, flip_from) => Some(Mode::After),
            _ => None,
        }
    }

    fn action(&self, s: St, l: Lab) -> Act {
        let depth = self.depth();
        let n = self.lay.n;
        match s {
            St::Start => self.descend(l, St::Start, St::Zero),
            St::Zero => match l {
                Lab::Grid { .. } => Act::Move(St::Zero, Dir::PlusChain),
                Lab::Chain { bit: 0, index } if index < depth => {
                    Act::Move(St::Zero, Dir::PlusC(index))
                }
                Lab::Chain { bit: 0, index } => Self::chain_up(index, St::Back(Stage::Pos)),
                _ => Act::Reject,
            },
            St::Back(stage) => match l {
                Lab::Chain { index, .. } => Self::chain_up(index, s),
                Lab::Grid { .. } => self.action(St::Next(stage), l),
                _ => Act::Reject,
            },
            St::Next(stage) => {
                let Lab::Grid { pos, .. } = l else {
                    return Act::Reject;
                };
                match stage {
                    Stage::Pos => Act::Move(
                        St::PosWalk {
                            pos,
                            p: 1,
                            seen0: false,
                            seen1: false,
                        },
                        Dir::PlusChain,
                    ),
                    Stage::Nb(dir) if pos.has(dir) => self.action(
                        St::NbVDown {
                            dir,
                            p: 1,
                            mode: Mode::Eq,
                        },
                        l,
                    ),
                    Stage::Nb(_) => self.action(St::Next(after(stage)), l),
                    Stage::Done => Act::Move(St::Ascend, Dir::MinusLeaf),
                }
            }
            St::PosWalk {
                pos,
                p,
                seen0,
                seen1,
            } => {
                let Lab::Chain { bit, index } = l else {
                    return Act::Reject;
                };
                if index != p {
                    return Act::Reject;
                }
                let (seen0, seen1) = (seen0 || bit == 0, seen1 || bit == 1);
                let class = match (seen0, seen1) {
                    (true, false) => 0,
                    (false, true) => 2,
                    _ => 1,
                };
                if p == n {
                    let want = match pos.row {
                        Row::D => 0,
                        Row::C => 1,
                        Row::U => 2,
                    };
                    if class != want {
                        return Act::Reject;
                    }
                }
                if p == depth {
                    let want = match pos.col {
                        Col::L => 0,
                        Col::C => 1,
                        Col::R => 2,
                    };
                    if class != want {
                        return Act::Reject;
                    }
                    return Self::chain_up(index, St::Back(after(Stage::Pos)));
                }
                let (seen0, seen1) = if p == n {
                    (false, false)
                } else {
                    (seen0, seen1)
                };
                Act::Move(
                    St::PosWalk {
                        pos,
                        p: p + 1,
                        seen0,
                        seen1,
                    },
                    Dir::PlusC(index),
                )
            }
            St::NbVDown { dir, p, mode } => match l {
                Lab::Grid { .. } => Act::Move(s, Dir::PlusChain),
                Lab::Chain { bit, index } if index == p => {
                    Self::chain_up(index, St::NbVUp { dir, p, mode, bit })
                }
                Lab::Chain { index, .. } if index < p => Act::Move(s, Dir::PlusC(index)),
                _ => Act::Reject,
            },
            St::NbVUp { dir, p, mode, bit } => match l {
                Lab::Chain { index, .. } => Self::chain_up(index, s),
                Lab::Grid { .. } => Act::Move(St::NbUDown { dir, p, mode, bit }, dir),
                _ => Act::Reject,
            },
            St::NbUDown { dir, p, mode, bit } => match l {
                Lab::Grid { .. } => Act::Move(s, Dir::PlusChain),
                Lab::Chain { bit: bu, index } if index == p => {
                    let Some(mode) = self.compare(dir, p, mode, bit, bu) else {
                        return Act::Reject;
                    };
                    let mode = if p == n || p == depth {
                        let varies = match dir {
                            Dir::Right | Dir::Left => p == depth,
                            _ => p == n,
                        };
                        if varies && mode != Mode::After {
                            return Act::Reject;
                        }
                        Mode::Eq
                    } else {
                        mode
                    };
                    Self::chain_up(index, St::NbUUp { dir, p, mode })
                }
                Lab::Chain { index, .. } if index < p => Act::Move(s, Dir::PlusC(index)),
                _ => Act::Reject,
            },
            St::NbUUp { dir, p, mode } => match l {
                Lab::Chain { index, .. } => Self::chain_up(index, s),
                Lab::Grid { .. } if p == depth => {
                    Act::Move(St::Next(after(Stage::Nb(dir))), dir.opposite())
                }
                Lab::Grid { .. } => Act::Move(
                    St::NbVDown {
                        dir,
                        p: p + 1,
                        mode,
                    },
                    dir.opposite(),
                ),
                _ => Act::Reject,
            },
            St::Ascend => match l {
                Lab::Tree { level, left: true } => Act::Move(St::FromLeft, Dir::MinusL(level)),
                Lab::Tree { level, left: false } => Act::Move(St::Ascend, Dir::MinusR(level)),
                Lab::Root => self.action(St::Home, l),
                _ => Act::Reject,
            },
            St::FromLeft => match tree_level(l) {
                Some(level) if level < depth => Act::Move(St::Down, Dir::PlusR(level + 1)),
                _ => Act::Reject,
            },
            St::Down => self.descend(l, St::Down, St::Next(Stage::Pos)),
            St::Home => self.descend(l, St::Home, St::Init(0)),
            St::Init(j) => {
                let Lab::Grid { pos, sym, head } = l else {
                    return Act::Reject;
                };
                let want = self.input.get(j).copied().unwrap_or(self.blank);
                let head_ok = match head {
                    None => j > 0,
                    Some(q) => j == 0 && self.initial[q],
                };
                if sym != want || !head_ok {
                    return Act::Reject;
                }
                if pos.has(Dir::Right) {
                    Act::Move(St::Init((j + 1).min(self.input.len())), Dir::Right)
                } else {
                    self.action(St::ToLeft, l)
                }
            }
            St::ToLeft => match l {
                Lab::Grid { pos, .. } if pos.has(Dir::Left) => Act::Move(St::ToLeft, Dir::Left),
                Lab::Grid { .. } => self.action(St::Find, l),
                _ => Act::Reject,
            },
            St::Find => match l {
                Lab::Grid {
                    sym, head: Some(q), ..
                } if self.accepting[q][sym] => Act::Accept,
                Lab::Grid { head: Some(_), .. } => self.action(St::RetLeft, l),
                Lab::Grid { pos, .. } if pos.has(Dir::Right) => Act::Move(St::Find, Dir::Right),
                _ => Act::Reject,
            },
            St::RetLeft => match l {
                Lab::Grid { pos, .. } if pos.has(Dir::Left) => Act::Move(St::RetLeft, Dir::Left),
                Lab::Grid { .. } => self.action(St::Scan(Window::Clean), l),
                _ => Act::Reject,
            },
            St::Scan(win) => match l {
                Lab::Grid { pos, sym, head } if pos.has(Dir::Up) => {
                    Act::Move(St::Up { win, sym, head }, Dir::Up)
                }
                _ => Act::Reject,
            },
            St::Up { win, sym, head } => {
                let Lab::Grid {
                    sym: above,
                    head: head_above,
                    ..
                } = l
                else {
                    return Act::Reject;
                };
                match self.window(win, sym, head, above, head_above) {
                    Some(next) => Act::Move(St::Below(next), Dir::Down),
                    None => Act::Reject,
                }
            }
            St::Below(win) => match l {
                Lab::Grid { pos, .. } if pos.has(Dir::Right) => {
                    Act::Move(St::Scan(win), Dir::Right)
                }
                Lab::Grid { pos, .. } if win == Window::Done && pos.has(Dir::Up) => {
                    Act::Move(St::ToLeft, Dir::Up)
                }
                _ => Act::Reject,
            },
        }
    }

    /// One cell of the row-to-row check: `(a, h)` below, `(b, g)` above.
    fn window(
        &self,
        win: Window,
        a: usize,
        h: Option<usize>,
        b: usize,
        g: Option<usize>,
    ) -> Option<Window> {
        let moves = |q: usize, a: usize| self.delta.get(&(q, a)).into_iter().flatten();
        match (win, h, g) {
            (Window::Clean, None, None) if a == b => Some(Window::Clean),
            (Window::Clean, None, Some(q2)) if a == b => Some(Window::NewLeft(q2)),
            (Window::Clean, Some(q), None) => Some(Window::Old(q, a, b)),
            (Window::NewLeft(q2), Some(q), None) => moves(q, a)
                .any(|&(p, w, m)| p == q2 && w == b && m == Move::L)
                .then_some(Window::Done),
            (Window::Old(q, a0, b0), None, Some(q2)) if a == b => moves(q, a0)
                .any(|&(p, w, m)| p == q2 && w == b0 && m == Move::R)
                .then_some(Window::Done),
            (Window::Done, None, None) if a == b => Some(Window::Done),
            _ => None,
        }
    }
}

/// The automaton accepting exactly the graphs over
/// `gen_grid_signature(n, machine)` that describe a correct `2^n x 2^n` grid
/// holding an accepting computation of `machine` on `w`.
///
/// The grid only has room for `2^n` configurations; the caller attests with
/// `fits` that the machine accepts `w` within that many, which the
/// generator cannot check. Inputs longer than `n` are refused.
pub fn gen_grid_automaton(
    n: usize,
    machine: &TuringMachine,
    w: &[String],
    fits: bool,
) -> Result<GraphWalkingAutomaton> {
    let lay = Layout::new(n, machine)?;
    if w.len() > n {
        return Err(Error::Precondition(format!(
            "the input has length {}, at most n = {n} is allowed",
            w.len()
        )));
    }
    if !fits {
        return Err(Error::Precondition(
            "the caller must attest that the machine accepts within 2^n configurations".into(),
        ));
    }
    let sym = |s: &str| machine.work_alphabet.iter().position(|x| x == s);
    let state = |s: &str| {
        machine
            .states
            .iter()
            .position(|x| x == s)
            .expect("validated machine")
    };
    let mut input = Vec::new();
    for a in w {
        match sym(a) {
            Some(i) if machine.input_alphabet.contains(a) => input.push(i),
            _ => {
                return Err(Error::Precondition(format!(
                    "{a} is not an input symbol of the machine"
                )))
            }
        }
    }
    let (nq, ng) = (machine.states.len(), machine.work_alphabet.len());
    let mut initial = vec![false; nq];
    for q in &machine.initial {
        initial[state(q)] = true;
    }
    let mut accepting = vec![vec![false; ng]; nq];
    for (q, a) in &machine.accept {
        accepting[state(q)][sym(a).expect("validated machine")] = true;
    }
    let mut delta = Delta::new();
    for t in &machine.delta {
        delta
            .entry((state(&t.from.0), sym(&t.from.1).expect("validated machine")))
            .or_default()
            .push((
                state(&t.to.0),
                sym(&t.to.1).expect("validated machine"),
                t.to.2,
            ));
    }
    let walker = Walker {
        input,
        blank: sym(&machine.blank).expect("validated machine"),
        initial,
        accepting,
        delta,
        lay,
    };

    let labels = walker.lay.labels();
    let label_names: Vec<String> = labels.iter().map(|&l| walker.lay.label_name(l)).collect();
    let mut index: HashMap<St, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(St::Start, 0);
    states.push(St::Start);
    queue.push_back(St::Start);
    let mut accept = Vec::new();
    let mut table = IndexMap::new();
    while let Some(s) = queue.pop_front() {
        for (l, name) in labels.iter().zip(&label_names) {
            match walker.action(s, *l) {
                Act::Reject => {}
                Act::Accept => accept.push((state_name(s), name.clone())),
                // Moving along a direction the label lacks is a rejection.
                Act::Move(_, d) if !walker.lay.label_dirs(*l).contains(&d) => {}
                Act::Move(t, d) => {
                    if let Entry::Vacant(e) = index.entry(t) {
                        e.insert(states.len());
                        states.push(t);
                        queue.push_back(t);
                    }
                    table.insert((state_name(s), name.clone()), (state_name(t), d.name()));
                }
            }
        }
    }
    Ok(GraphWalkingAutomaton {
        states: states.into_iter().map(state_name).collect(),
        initial: state_name(St::Start),
        accept,
        delta: table,
    })
}

#[cfg(test)]
mod tests {
    use super::super::grid::{canonical_grid_graph, gen_grid_signature, grid_mutations};
    use super::super::turing::find_accepting_computation;
    use super::super::turing::fixtures::*;
    use super::*;
    use crate::gwa::simulate;

    #[test]
    fn accepts_the_canonical_grid_and_rejects_mutants_n1() {
        let m = instant();
        let w = strings(&["x"]);
        let sig = gen_grid_signature(1, &m).unwrap();
        let a = gen_grid_automaton(1, &m, &w, true).unwrap();
        assert!(a.validate(&sig).ok, "{}", a.validate(&sig));
        let run = find_accepting_computation(&m, &w, 2, 2).unwrap().unwrap();
        let g = canonical_grid_graph(1, &m, &w, &run).unwrap();
        let r = simulate(&sig, &a, &g).unwrap();
        assert!(r.is_accept(), "{r:?}");
        for (name, mutant) in grid_mutations(1, &m, &w, &run).unwrap() {
            let r = simulate(&sig, &a, &mutant).unwrap();
            assert!(!r.is_accept(), "accepted mutant: {name}");
        }
    }

    #[test]
    fn checks_transitions_n2() {
        let m = right_left();
        let w = strings(&["x"]);
        let sig = gen_grid_signature(2, &m).unwrap();
        let a = gen_grid_automaton(2, &m, &w, true).unwrap();
        assert!(a.validate(&sig).ok, "{}", a.validate(&sig));
        let run = find_accepting_computation(&m, &w, 4, 4).unwrap().unwrap();
        let g = canonical_grid_graph(2, &m, &w, &run).unwrap();
        assert!(simulate(&sig, &a, &g).unwrap().is_accept());
        for (name, mutant) in grid_mutations(2, &m, &w, &run).unwrap() {
            let r = simulate(&sig, &a, &mutant).unwrap();
            assert!(!r.is_accept(), "accepted mutant: {name}");
        }
    }

    #[test]
    fn rejects_a_wrong_step() {
        let m = right_left();
        let w = strings(&["x"]);
        let sig = gen_grid_signature(2, &m).unwrap();
        let a = gen_grid_automaton(2, &m, &w, true).unwrap();
        let run = find_accepting_computation(&m, &w, 4, 4).unwrap().unwrap();
        let mut g = canonical_grid_graph(2, &m, &w, &run).unwrap();
        // Row 1 should read y,t:_ ; writing x instead of y breaks the step.
        g.labels.insert("g1_0".into(), r#"["LC","x",null]"#.into());
        assert!(!simulate(&sig, &a, &g).unwrap().is_accept());
    }

    #[test]
    fn preconditions() {
        let m = instant();
        assert!(gen_grid_automaton(1, &m, &strings(&["x", "x"]), true).is_err());
        assert!(gen_grid_automaton(1, &m, &strings(&["x"]), false).is_err());
        assert!(gen_grid_automaton(1, &m, &strings(&["_"]), true).is_err());
        assert!(gen_grid_automaton(0, &m, &[], true).is_err());
    }

    #[test]
    fn state_names_have_no_commas_and_stay_linear_in_n() {
        let m = instant();
        let w = strings(&["x"]);
        let sizes: Vec<usize> = (1..=4)
            .map(|n| gen_grid_automaton(n, &m, &w, true).unwrap().states.len())
            .collect();
        for n in 1..=4 {
            let a = gen_grid_automaton(n, &m, &w, true).unwrap();
            assert!(a.states.iter().all(|q| !q.contains(',')));
        }
        assert_eq!(sizes[3] - sizes[2], sizes[2] - sizes[1]);
    }
}
