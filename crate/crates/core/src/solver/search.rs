//! Minimum balanced vector search.
//!
//! A multiset of labels is balanced when it holds exactly one initial label
//! and its contribution vectors sum to zero. The search adds labels one at a
//! time, breadth first, so the first layer containing a balanced multiset has
//! the minimum total. States are identified by the running imbalance alone:
//! two partial multisets with the same imbalance and size can be completed by
//! exactly the same remainders, and because count vectors compare the same
//! way after adding a common remainder, keeping the preferred one per state
//! preserves the tie-break.
//!
//! Before searching, the signature is simplified:
//! - labels with a coordinate no other live label can cancel are dropped,
//!   until a fixpoint;
//! - an exact linear relaxation rules out signatures with no rational
//!   solution at all;
//! - of several labels with the same contribution and initial status only
//!   the last one is kept (any solution using an earlier one becomes
//!   lexicographically smaller by switching), and non-initial labels with
//!   zero contribution are dropped (they never occur in a minimum vector).
//!
//! Branching is restricted to labels that cancel the first non-zero
//! coordinate of the imbalance; every balanced completion must contain one.

use std::collections::{HashMap, HashSet};

use crate::model::{SigIndex, Signature};
use crate::solver::{lp, node_count_bound, saturating_u64, SearchLimits};
use crate::{Error, Result};

type Imbalance = Vec<(u32, i32)>;

/// Above this many tableau entries the linear relaxation is skipped; it only
/// accelerates the search and is never needed for correctness.
const LP_MAX_CELLS: usize = 400_000;

struct Problem {
    /// Contribution vectors, one per label, as sorted `(pair, ±1)` lists.
    contrib: Vec<Vec<(u32, i8)>>,
    initial: Vec<bool>,
    pairs: usize,
}

impl Problem {
    fn new(sig: &Signature) -> Self {
        let six = SigIndex::new(sig);
        let mut pair_of = vec![None; six.dir_count()];
        let mut pairs = 0u32;
        for d in 0..six.dir_count() {
            let o = six.opposite[d];
            if d < o {
                pair_of[d] = Some((pairs, 1i8));
                pair_of[o] = Some((pairs, -1i8));
                pairs += 1;
            }
        }
        let mut contrib = Vec::with_capacity(six.label_count());
        for dirs in &six.label_dirs {
            let uses: HashSet<usize> = dirs.iter().copied().collect();
            let mut v: Vec<(u32, i8)> = Vec::new();
            for &d in dirs {
                let Some((p, s)) = pair_of[d] else { continue };
                if uses.contains(&six.opposite[d]) {
                    continue;
                }
                v.push((p, s));
            }
            v.sort_unstable();
            contrib.push(v);
        }
        Self {
            contrib,
            initial: six.initial,
            pairs: pairs as usize,
        }
    }

    /// Drops labels carrying a coordinate that no other live label cancels.
    fn trim(&self) -> Vec<bool> {
        let n = self.contrib.len();
        let mut alive = vec![true; n];
        loop {
            let mut plus = vec![0usize; self.pairs];
            let mut minus = vec![0usize; self.pairs];
            for (a, v) in self.contrib.iter().enumerate() {
                if !alive[a] {
                    continue;
                }
                for &(p, s) in v {
                    if s > 0 {
                        plus[p as usize] += 1;
                    } else {
                        minus[p as usize] += 1;
                    }
                }
            }
            let mut changed = false;
            for (a, v) in self.contrib.iter().enumerate() {
                if !alive[a] {
                    continue;
                }
                let stuck = v.iter().any(|&(p, s)| {
                    let other = if s > 0 {
                        minus[p as usize]
                    } else {
                        plus[p as usize]
                    };
                    other == 0
                });
                if stuck {
                    alive[a] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    /// Whether the rational relaxation restricted to live labels is feasible.
    fn relaxation_feasible(&self, alive: &[bool]) -> bool {
        let cols: Vec<usize> = (0..self.contrib.len()).filter(|&a| alive[a]).collect();
        let rows = self.pairs + 1;
        if rows.saturating_mul(cols.len() + rows) > LP_MAX_CELLS {
            return true;
        }
        let mut a = vec![vec![0i64; cols.len()]; rows];
        for (j, &l) in cols.iter().enumerate() {
            a[0][j] = i64::from(self.initial[l]);
            for &(p, s) in &self.contrib[l] {
                a[1 + p as usize][j] = i64::from(s);
            }
        }
        let mut b = vec![0i64; rows];
        b[0] = 1;
        lp::feasible(&a, &b)
    }
}

/// Counts per label (in signature order) of a minimum balanced vector, or
/// `None` if the signature admits no graph.
pub(crate) fn minimal_counts(sig: &Signature, limits: &SearchLimits) -> Result<Option<Vec<u64>>> {
    let problem = Problem::new(sig);
    let n = problem.contrib.len();

    let alive = problem.trim();
    if !(0..n).any(|a| alive[a] && problem.initial[a]) {
        return Ok(None);
    }
    if !problem.relaxation_feasible(&alive) {
        return Ok(None);
    }

    // Keep the last label of each (contribution, initial) class.
    let mut seen: HashSet<(&[(u32, i8)], bool)> = HashSet::new();
    let mut keep = vec![false; n];
    for a in (0..n).rev() {
        if !alive[a] {
            continue;
        }
        if !problem.initial[a] && problem.contrib[a].is_empty() {
            continue;
        }
        if seen.insert((problem.contrib[a].as_slice(), problem.initial[a])) {
            keep[a] = true;
        }
    }

    let initials: Vec<usize> = (0..n).filter(|&a| keep[a] && problem.initial[a]).collect();
    // cancel[p][0]: labels with -1 at p; cancel[p][1]: labels with +1 at p.
    let mut cancel: Vec<[Vec<u32>; 2]> = vec![[Vec::new(), Vec::new()]; problem.pairs];
    let mut kmax = 1usize;
    #[allow(clippy::needless_range_loop)]
    for a in 0..n {
        if !keep[a] || problem.initial[a] {
            continue;
        }
        kmax = kmax.max(problem.contrib[a].len());
        for &(p, s) in &problem.contrib[a] {
            cancel[p as usize][usize::from(s > 0)].push(a as u32);
        }
    }

    let bound = saturating_u64(&node_count_bound(sig));
    let within = |imb: &Imbalance, depth: u64| -> bool {
        let Some(rem) = bound.checked_sub(depth) else {
            return false;
        };
        let mut l1 = 0u64;
        for &(_, x) in imb {
            let x = u64::from(x.unsigned_abs());
            if x > rem {
                return false;
            }
            l1 += x;
        }
        l1 <= rem.saturating_mul(kmax as u64)
    };

    let mut visited: HashSet<Imbalance> = HashSet::new();
    let mut layer: HashMap<Imbalance, Vec<u32>> = HashMap::new();
    let offer = |layer: &mut HashMap<Imbalance, Vec<u32>>,
                 visited: &mut HashSet<Imbalance>,
                 imb: Imbalance,
                 seq: Vec<u32>|
     -> Result<()> {
        if let Some(cur) = layer.get_mut(&imb) {
            if seq > *cur {
                *cur = seq;
            }
            return Ok(());
        }
        if !visited.insert(imb.clone()) {
            return Ok(());
        }
        if visited.len() > limits.max_states {
            return Err(Error::ResourceLimit {
                resource: "search states",
                limit: limits.max_states,
            });
        }
        layer.insert(imb, seq);
        Ok(())
    };

    for &a in &initials {
        let imb: Imbalance = problem.contrib[a]
            .iter()
            .map(|&(p, s)| (p, i32::from(s)))
            .collect();
        if within(&imb, 1) {
            offer(&mut layer, &mut visited, imb, vec![a as u32])?;
        }
    }

    let mut depth = 1u64;
    loop {
        if let Some(seq) = layer.get(&Vec::new()) {
            let mut counts = vec![0u64; n];
            for &a in seq {
                counts[a as usize] += 1;
            }
            return Ok(Some(counts));
        }
        if layer.is_empty() {
            return Ok(None);
        }
        depth += 1;
        let mut next: HashMap<Imbalance, Vec<u32>> = HashMap::new();
        for (imb, seq) in layer {
            let (p, x) = imb[0];
            let options = &cancel[p as usize][usize::from(x < 0)];
            for &a in options {
                let child = add(&imb, &problem.contrib[a as usize]);
                if !within(&child, depth) {
                    continue;
                }
                let mut s = seq.clone();
                let at = s.partition_point(|&y| y <= a);
                s.insert(at, a);
                offer(&mut next, &mut visited, child, s)?;
            }
        }
        layer = next;
    }
}

fn add(imb: &Imbalance, v: &[(u32, i8)]) -> Imbalance {
    let mut out = Vec::with_capacity(imb.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < imb.len() || j < v.len() {
        match (imb.get(i), v.get(j)) {
            (Some(&(p, x)), Some(&(q, s))) if p == q => {
                let y = x + i32::from(s);
                if y != 0 {
                    out.push((p, y));
                }
                i += 1;
                j += 1;
            }
            (Some(&(p, x)), Some(&(q, _))) if p < q => {
                out.push((p, x));
                i += 1;
            }
            (Some(&(p, x)), None) => {
                out.push((p, x));
                i += 1;
            }
            (_, Some(&(q, s))) => {
                out.push((q, i32::from(s)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    #[test]
    fn sparse_addition() {
        assert_eq!(
            add(&vec![(0, 1), (3, -1)], &[(0, -1), (2, 1)]),
            vec![(2, 1), (3, -1)]
        );
        assert_eq!(add(&vec![], &[(1, -1)]), vec![(1, -1)]);
    }

    #[test]
    fn trimming_removes_uncancellable_labels() {
        let s = sig(
            &[("r", "l"), ("l", "r"), ("u", "d"), ("d", "u")],
            &["a0", "x", "e"],
            &["a0"],
            &[("a0", &["r"]), ("x", &["l", "u"]), ("e", &["l"])],
        );
        let p = Problem::new(&s);
        assert_eq!(p.trim(), vec![true, false, true]);
    }

    #[test]
    fn trimming_can_empty_the_initial_labels() {
        let s = sig(
            &[("r", "l"), ("l", "r"), ("u", "d"), ("d", "u")],
            &["a0", "b", "c"],
            &["a0"],
            &[("a0", &["r"]), ("b", &["r", "u"]), ("c", &["d"])],
        );
        assert!(!Problem::new(&s).trim()[0]);
        assert_eq!(minimal_counts(&s, &SearchLimits::default()).unwrap(), None);
    }

    #[test]
    fn relaxation_refutes_what_trimming_keeps() {
        // b and c cancel each other on u/d, so a0's r can never be answered
        let s = sig(
            &[("r", "l"), ("l", "r"), ("u", "d"), ("d", "u")],
            &["a0", "b", "c"],
            &["a0"],
            &[("a0", &["r"]), ("b", &["l", "u"]), ("c", &["r", "d"])],
        );
        let p = Problem::new(&s);
        let alive = p.trim();
        assert_eq!(alive, vec![true; 3]);
        assert!(!p.relaxation_feasible(&alive));
        assert_eq!(minimal_counts(&s, &SearchLimits::default()).unwrap(), None);
    }

    #[test]
    fn duplicates_resolve_to_the_later_label() {
        let s = sig(
            &[("r", "l"), ("l", "r")],
            &["a0", "b0", "e"],
            &["a0", "b0"],
            &[("a0", &["r"]), ("b0", &["r"]), ("e", &["l"])],
        );
        assert_eq!(
            minimal_counts(&s, &SearchLimits::default()).unwrap(),
            Some(vec![0, 1, 1])
        );
    }
}
