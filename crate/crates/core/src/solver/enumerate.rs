//! Brute-force enumeration of every graph up to a node budget.
//!
//! This is the reference the search is tested against, so it shares none of
//! the search's reasoning: label count vectors are generated exhaustively and
//! checked by counting edge endpoints directly, and every way of wiring the
//! endpoints is produced.

use crate::model::{require_signature, Graph, SigIndex, Signature};
use crate::solver::assemble;
use crate::Result;

/// Streams every graph over `sig` with at most `max_nodes` nodes.
///
/// Graphs come in order of node count, then by label count vector
/// (lexicographically ascending in label order), then by wiring. Node ids are
/// `1..N`, allocated label by label. For each direction pair `(d, -d)` every
/// bijection between the `d`-users and the `-d`-users is produced; for a
/// self-opposite direction every involution of its users (fixed points are
/// loops).
pub fn enumerate_graphs(sig: &Signature, max_nodes: usize) -> Result<GraphEnumerator> {
    require_signature(sig)?;
    let six = SigIndex::new(sig);
    Ok(GraphEnumerator {
        sig: sig.clone(),
        six,
        max_nodes,
        sum: 0,
        vectors: Vec::new(),
        next_vector: 0,
        wiring: None,
    })
}

pub struct GraphEnumerator {
    sig: Signature,
    six: SigIndex,
    max_nodes: usize,
    sum: usize,
    vectors: Vec<Vec<usize>>,
    next_vector: usize,
    wiring: Option<Wiring>,
}

impl Iterator for GraphEnumerator {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        loop {
            if let Some(w) = &mut self.wiring {
                if let Some(g) = w.current(&self.sig, &self.six) {
                    w.advance();
                    return Some(g);
                }
                self.wiring = None;
            }
            if self.next_vector < self.vectors.len() {
                let counts = &self.vectors[self.next_vector];
                self.next_vector += 1;
                self.wiring = Some(Wiring::new(&self.six, counts));
                continue;
            }
            if self.sum >= self.max_nodes {
                return None;
            }
            self.sum += 1;
            self.vectors = balanced_vectors(&self.six, self.sum);
            self.next_vector = 0;
        }
    }
}

/// All balanced count vectors with the given total, lexicographically ascending.
fn balanced_vectors(six: &SigIndex, total: usize) -> Vec<Vec<usize>> {
    let m = six.label_count();
    let ndir = six.dir_count();
    let uses: Vec<Vec<bool>> = six
        .label_dirs
        .iter()
        .map(|ds| {
            let mut u = vec![false; ndir];
            for &d in ds {
                u[d] = true;
            }
            u
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..ndir)
        .filter(|&d| d < six.opposite[d])
        .map(|d| (d, six.opposite[d]))
        .collect();

    // What the labels from position i on can still do, for pruning.
    let mut can_plus = vec![vec![false; pairs.len()]; m + 1];
    let mut can_minus = vec![vec![false; pairs.len()]; m + 1];
    let mut initial_later = vec![false; m + 1];
    let mut max_degree = vec![0usize; m + 1];
    for i in (0..m).rev() {
        for (p, &(d, o)) in pairs.iter().enumerate() {
            let net = i64::from(uses[i][d]) - i64::from(uses[i][o]);
            can_plus[i][p] = can_plus[i + 1][p] || net > 0;
            can_minus[i][p] = can_minus[i + 1][p] || net < 0;
        }
        initial_later[i] = initial_later[i + 1] || six.initial[i];
        max_degree[i] = max_degree[i + 1].max(six.label_dirs[i].len());
    }

    struct Ctx<'a> {
        six: &'a SigIndex,
        uses: Vec<Vec<bool>>,
        pairs: Vec<(usize, usize)>,
        can_plus: Vec<Vec<bool>>,
        can_minus: Vec<Vec<bool>>,
        initial_later: Vec<bool>,
        max_degree: Vec<usize>,
        out: Vec<Vec<usize>>,
    }

    fn dfs(
        ctx: &mut Ctx<'_>,
        i: usize,
        left: usize,
        initial: usize,
        plus: &mut [i64],
        minus: &mut [i64],
        counts: &mut Vec<usize>,
    ) {
        let m = ctx.six.label_count();
        if initial > 1 {
            return;
        }
        if initial == 0 && !ctx.initial_later[i] {
            return;
        }
        let mut l1 = 0i64;
        for p in 0..ctx.pairs.len() {
            let diff = plus[p] - minus[p];
            if (diff > 0 && !ctx.can_minus[i][p]) || (diff < 0 && !ctx.can_plus[i][p]) {
                return;
            }
            l1 += diff.abs();
        }
        if l1 > (left * ctx.max_degree[i]) as i64 {
            return;
        }
        if i == m {
            if left == 0 && initial == 1 && plus == minus {
                ctx.out.push(counts.clone());
            }
            return;
        }
        // The last label takes whatever is left.
        let start = if i + 1 == m { left } else { 0 };
        for c in start..=left {
            counts.push(c);
            let c64 = c as i64;
            for (p, &(d, o)) in ctx.pairs.iter().enumerate() {
                if ctx.uses[i][d] {
                    plus[p] += c64;
                }
                if ctx.uses[i][o] {
                    minus[p] += c64;
                }
            }
            let add_init = if ctx.six.initial[i] { c } else { 0 };
            dfs(
                ctx,
                i + 1,
                left - c,
                initial + add_init,
                plus,
                minus,
                counts,
            );
            for (p, &(d, o)) in ctx.pairs.iter().enumerate() {
                if ctx.uses[i][d] {
                    plus[p] -= c64;
                }
                if ctx.uses[i][o] {
                    minus[p] -= c64;
                }
            }
            counts.pop();
        }
    }

    let np = pairs.len();
    let mut ctx = Ctx {
        six,
        uses,
        pairs,
        can_plus,
        can_minus,
        initial_later,
        max_degree,
        out: Vec::new(),
    };
    if m == 0 {
        return Vec::new();
    }
    dfs(
        &mut ctx,
        0,
        total,
        0,
        &mut vec![0; np],
        &mut vec![0; np],
        &mut Vec::new(),
    );
    ctx.out
}

enum Group {
    /// `from[i] + d = to[perm[i]]`.
    Pair {
        d: usize,
        o: usize,
        from: Vec<usize>,
        to: Vec<usize>,
        perm: Vec<usize>,
    },
    /// `users[i] + d = users[inv[i]]` for an involution `inv`.
    Loop {
        d: usize,
        users: Vec<usize>,
        inv: Vec<usize>,
    },
}

impl Group {
    /// Steps to the next wiring; `false` (and reset) after the last one.
    fn advance(&mut self) -> bool {
        match self {
            Group::Pair { perm, .. } => {
                if next_permutation(perm) {
                    true
                } else {
                    perm.sort_unstable();
                    false
                }
            }
            Group::Loop { inv, .. } => {
                if next_involution(inv) {
                    true
                } else {
                    for (i, x) in inv.iter_mut().enumerate() {
                        *x = i;
                    }
                    false
                }
            }
        }
    }
}

struct Wiring {
    node_label: Vec<usize>,
    groups: Vec<Group>,
    done: bool,
}

impl Wiring {
    fn new(six: &SigIndex, counts: &[usize]) -> Self {
        let mut node_label = Vec::new();
        for (li, &c) in counts.iter().enumerate() {
            node_label.extend(std::iter::repeat_n(li, c));
        }
        let mut users = vec![Vec::new(); six.dir_count()];
        for (v, &li) in node_label.iter().enumerate() {
            for &d in &six.label_dirs[li] {
                users[d].push(v);
            }
        }
        let mut groups = Vec::new();
        for d in 0..six.dir_count() {
            let o = six.opposite[d];
            if d == o {
                let n = users[d].len();
                groups.push(Group::Loop {
                    d,
                    users: users[d].clone(),
                    inv: (0..n).collect(),
                });
            } else if d < o {
                let n = users[d].len();
                debug_assert_eq!(n, users[o].len());
                groups.push(Group::Pair {
                    d,
                    o,
                    from: users[d].clone(),
                    to: users[o].clone(),
                    perm: (0..n).collect(),
                });
            }
        }
        Self {
            node_label,
            groups,
            done: false,
        }
    }

    fn current(&self, sig: &Signature, six: &SigIndex) -> Option<Graph> {
        if self.done {
            return None;
        }
        let mut next = vec![vec![None; six.dir_count()]; self.node_label.len()];
        for g in &self.groups {
            match g {
                Group::Pair {
                    d,
                    o,
                    from,
                    to,
                    perm,
                } => {
                    for (i, &v) in from.iter().enumerate() {
                        let u = to[perm[i]];
                        next[v][*d] = Some(u);
                        next[u][*o] = Some(v);
                    }
                }
                Group::Loop { d, users, inv } => {
                    for (i, &v) in users.iter().enumerate() {
                        next[v][*d] = Some(users[inv[i]]);
                    }
                }
            }
        }
        Some(assemble(sig, six, &self.node_label, &next))
    }

    /// Odometer step with the last group turning fastest.
    fn advance(&mut self) {
        for g in self.groups.iter_mut().rev() {
            if g.advance() {
                return;
            }
        }
        self.done = true;
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Next involution in lexicographic order of the image sequence.
fn next_involution(inv: &mut [usize]) -> bool {
    let n = inv.len();
    // Try to raise position i, keeping positions before it; complete the
    // rest minimally (all remaining free elements fixed).
    for i in (0..n).rev() {
        // Positions < i stay; rebuild from scratch to find the free set.
        let mut partner = vec![None; n];
        let mut ok = true;
        for j in 0..i {
            let t = inv[j];
            if t < j {
                if partner[j] != Some(t) {
                    ok = false;
                    break;
                }
            } else {
                partner[j] = Some(t);
                partner[t] = Some(j);
            }
        }
        if !ok || partner[i].is_some() {
            continue;
        }
        // i is free: choose the smallest free target greater than inv[i].
        let cur = inv[i];
        let Some(t) = (cur + 1..n).find(|&t| t > i && partner[t].is_none()) else {
            continue;
        };
        partner[i] = Some(t);
        partner[t] = Some(i);
        for (j, p) in partner.iter().enumerate() {
            inv[j] = p.unwrap_or(j);
        }
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    fn all_involutions(n: usize) -> Vec<Vec<usize>> {
        let mut v: Vec<usize> = (0..n).collect();
        let mut out = vec![v.clone()];
        while next_involution(&mut v) {
            out.push(v.clone());
        }
        out
    }

    #[test]
    fn involution_counts() {
        let counts: Vec<usize> = (0..7).map(|n| all_involutions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10, 26, 76]);
        for inv in all_involutions(5) {
            for (i, &t) in inv.iter().enumerate() {
                assert_eq!(inv[t], i);
            }
        }
    }

    #[test]
    fn permutations_in_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    #[test]
    fn line_up_to_three_nodes() {
        let s = sig_line();
        let gs: Vec<Graph> = enumerate_graphs(&s, 3).unwrap().collect();
        assert_eq!(gs.len(), 3);
        assert_eq!(gs[0].nodes.len(), 2);
        // {1,1,1}: node 1 = a0, 2 = a, 3 = e; I_r = [1, 2], I_l = [2, 3]
        assert_eq!(gs[1].neighbour("1", "r"), Some("2"));
        assert_eq!(gs[1].neighbour("2", "r"), Some("3"));
        assert_eq!(gs[2].neighbour("1", "r"), Some("3"));
        assert_eq!(gs[2].neighbour("2", "r"), Some("2"));
        for g in &gs {
            assert!(g.validate(&s).ok);
        }
    }

    #[test]
    fn loops_include_pairings() {
        // two nodes can use a self-opposite direction either as loops or as one edge
        let s = sig(
            &[("s", "s")],
            &["a0", "b"],
            &["a0"],
            &[("a0", &["s"]), ("b", &["s"])],
        );
        let gs: Vec<Graph> = enumerate_graphs(&s, 2).unwrap().collect();
        assert_eq!(gs.len(), 3);
        assert!(gs.iter().all(|g| g.validate(&s).ok));
        assert_eq!(gs[2].neighbour("1", "s"), Some("2"));
    }

    #[test]
    fn empty_and_zero_budget() {
        assert_eq!(enumerate_graphs(&sig_odd(), 6).unwrap().count(), 0);
        assert_eq!(enumerate_graphs(&sig_line(), 0).unwrap().count(), 0);
    }
}
