//! Nondeterministic one-tape Turing machines, just enough to describe and
//! check the computations laid out on the grid.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::model::{ValidationReport, Violation};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TmTransition {
    /// `(state, read symbol)`
    pub from: (String, String),
    /// `(next state, written symbol, head move)`
    pub to: (String, String, Move),
}

/// A nondeterministic machine on a tape infinite to the right. It is
/// assumed, not checked, never to move left from the first cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuringMachine {
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    /// Contains the input alphabet and the blank.
    pub work_alphabet: Vec<String>,
    pub blank: String,
    pub initial: Vec<String>,
    /// Accepting (state, symbol) pairs.
    pub accept: Vec<(String, String)>,
    pub delta: Vec<TmTransition>,
}

/// A configuration restricted to a finite tape prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TmConfiguration {
    pub state: String,
    pub head: usize,
    pub tape: Vec<String>,
}

impl TuringMachine {
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let mut other = |message: String| out.push(Violation::Other { message });
        let states: HashSet<&str> = self.states.iter().map(String::as_str).collect();
        let work: HashSet<&str> = self.work_alphabet.iter().map(String::as_str).collect();
        if states.len() != self.states.len() {
            other("duplicate machine state".into());
        }
        if work.len() != self.work_alphabet.len() {
            other("duplicate work symbol".into());
        }
        for a in &self.input_alphabet {
            if !work.contains(a.as_str()) {
                other(format!("input symbol {a} is not a work symbol"));
            }
        }
        if !work.contains(self.blank.as_str()) {
            other(format!("blank {} is not a work symbol", self.blank));
        }
        if self.input_alphabet.contains(&self.blank) {
            other(format!("blank {} is an input symbol", self.blank));
        }
        if self.initial.is_empty() {
            other("no initial state".into());
        }
        for q in &self.initial {
            if !states.contains(q.as_str()) {
                other(format!("initial state {q} is not a state"));
            }
        }
        for (q, a) in &self.accept {
            if !states.contains(q.as_str()) || !work.contains(a.as_str()) {
                other(format!("accepting pair ({q},{a}) is not over the machine"));
            }
        }
        for t in &self.delta {
            let (q, a) = &t.from;
            let (p, b, _) = &t.to;
            if !states.contains(q.as_str())
                || !states.contains(p.as_str())
                || !work.contains(a.as_str())
                || !work.contains(b.as_str())
            {
                other(format!("transition from ({q},{a}) is not over the machine"));
            }
        }
        ValidationReport::from_violations(out)
    }

    pub fn is_accepting(&self, c: &TmConfiguration) -> bool {
        let a = &c.tape[c.head];
        self.accept.iter().any(|(q, b)| *q == c.state && b == a)
    }

    /// Successors of `c` that keep the head inside the tape prefix.
    pub fn successors(&self, c: &TmConfiguration) -> Vec<TmConfiguration> {
        let a = &c.tape[c.head];
        let mut out = Vec::new();
        for t in &self.delta {
            if t.from.0 != c.state || t.from.1 != *a {
                continue;
            }
            let (p, b, mv) = &t.to;
            let head = match mv {
                Move::L if c.head == 0 => continue,
                Move::L => c.head - 1,
                Move::R if c.head + 1 >= c.tape.len() => continue,
                Move::R => c.head + 1,
            };
            let mut tape = c.tape.clone();
            tape[c.head] = b.clone();
            out.push(TmConfiguration {
                state: p.clone(),
                head,
                tape,
            });
        }
        out
    }

    /// The initial configurations on `w` over a tape of `width` cells.
    pub fn initial_configurations(&self, w: &[String], width: usize) -> Vec<TmConfiguration> {
        let mut tape: Vec<String> = w.to_vec();
        tape.resize(width.max(w.len()), self.blank.clone());
        self.initial
            .iter()
            .map(|q| TmConfiguration {
                state: q.clone(),
                head: 0,
                tape: tape.clone(),
            })
            .collect()
    }
}

pub(crate) fn require_machine(m: &TuringMachine) -> Result<()> {
    let report = m.validate();
    if report.ok {
        Ok(())
    } else {
        Err(Error::invalid("Turing machine", report))
    }
}

/// Checks that `run` is an accepting computation of `m` on `w` over a tape
/// of `width` cells, with at most `max_configs` configurations.
pub fn check_computation(
    m: &TuringMachine,
    w: &[String],
    width: usize,
    max_configs: usize,
    run: &[TmConfiguration],
) -> Result<()> {
    require_machine(m)?;
    let bad = |msg: String| Err(Error::Precondition(format!("invalid computation: {msg}")));
    let Some(first) = run.first() else {
        return bad("no configurations".into());
    };
    if run.len() > max_configs {
        return bad(format!(
            "{} configurations, at most {max_configs} fit",
            run.len()
        ));
    }
    for (i, c) in run.iter().enumerate() {
        if c.tape.len() != width || c.head >= width {
            return bad(format!("configuration {i} does not fit {width} cells"));
        }
    }
    if !m.initial_configurations(w, width).contains(first) {
        return bad("the first configuration is not initial".into());
    }
    for (i, pair) in run.windows(2).enumerate() {
        if m.is_accepting(&pair[0]) {
            return bad(format!("configuration {i} already accepts"));
        }
        if !m.successors(&pair[0]).contains(&pair[1]) {
            return bad(format!("configuration {} does not follow from {i}", i + 1));
        }
    }
    if !m.is_accepting(run.last().expect("non-empty")) {
        return bad("the last configuration does not accept".into());
    }
    Ok(())
}

/// A shortest accepting computation of `m` on `w` within the limits, found
/// by breadth-first search over configurations.
pub fn find_accepting_computation(
    m: &TuringMachine,
    w: &[String],
    width: usize,
    max_configs: usize,
) -> Result<Option<Vec<TmConfiguration>>> {
    require_machine(m)?;
    if w.len() > width {
        return Ok(None);
    }
    let mut parent: HashMap<TmConfiguration, Option<TmConfiguration>> = HashMap::new();
    let mut queue = VecDeque::new();
    for c in m.initial_configurations(w, width) {
        if !parent.contains_key(&c) {
            parent.insert(c.clone(), None);
            queue.push_back((c, 1usize));
        }
    }
    while let Some((c, len)) = queue.pop_front() {
        if m.is_accepting(&c) {
            let mut run = vec![c.clone()];
            let mut cur = c;
            while let Some(Some(p)) = parent.get(&cur) {
                run.push(p.clone());
                cur = p.clone();
            }
            run.reverse();
            return Ok(Some(run));
        }
        if len >= max_configs {
            continue;
        }
        for s in m.successors(&c) {
            if !parent.contains_key(&s) {
                parent.insert(s.clone(), Some(c.clone()));
                queue.push_back((s, len + 1));
            }
        }
    }
    Ok(None)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn validation() {
        assert!(instant().validate().ok);
        assert!(right_left().validate().ok);
        let mut m = instant();
        m.blank = "x".into();
        assert!(!m.validate().ok);
    }

    #[test]
    fn search_and_check() {
        let m = right_left();
        let w = strings(&["x"]);
        let run = find_accepting_computation(&m, &w, 4, 4).unwrap().unwrap();
        assert_eq!(run.len(), 3);
        assert_eq!(run[2].head, 0);
        assert_eq!(run[2].tape, strings(&["y", "_", "_", "_"]));
        check_computation(&m, &w, 4, 4, &run).unwrap();
        assert!(check_computation(&m, &w, 4, 2, &run).is_err());
        let mut broken = run.clone();
        broken[1].tape[0] = "x".into();
        assert!(check_computation(&m, &w, 4, 4, &broken).is_err());
        assert_eq!(find_accepting_computation(&m, &w, 4, 2).unwrap(), None);
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&right_left()).unwrap();
        assert!(json.contains(r#""delta":[{"from":["s","x"],"to":["t","y","R"]}"#));
        let back: TuringMachine = serde_json::from_str(&json).unwrap();
        assert_eq!(back, right_left());
    }
}
