//! Exact feasibility test for `A x = b, x >= 0` (phase one of the simplex
//! method over the rationals, Bland's pivoting rule).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Whether some non-negative rational `x` satisfies `a · x = b`.
///
/// `a` is given row by row; all rows have the same length.
pub(crate) fn feasible(a: &[Vec<i64>], b: &[i64]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m + 1;
    let rat = |v: i64| BigRational::from_integer(BigInt::from(v));

    // Tableau rows: [a | I | b] with b made non-negative; artificials start basic.
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i] < 0;
        let sign = if flip { -1 } else { 1 };
        let mut r: Vec<BigRational> = row.iter().map(|&v| rat(sign * v)).collect();
        r.extend((0..m).map(|j| rat(i64::from(i == j))));
        r.push(rat(sign * b[i]));
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of "minimize the sum of artificials".
    let mut cost: Vec<BigRational> = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                cost[j] -= &r[j];
            }
        }
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, r) in t.iter().enumerate() {
            if !r[enter].is_positive() {
                continue;
            }
            let ratio = &r[width - 1] / &r[enter];
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((p, _)) = leave else {
            // Unbounded below cannot happen for a sum of non-negative variables.
            unreachable!("phase-one objective is bounded");
        };
        let pivot = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[p].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i == p || r[enter].is_zero() {
                continue;
            }
            let f = r[enter].clone();
            for (x, y) in r.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (x, y) in cost.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        basis[p] = enter;
    }

    // The objective value is -cost[rhs].
    cost[width - 1].is_zero()
}

#[cfg(test)]
mod tests {
    use super::feasible;

    #[test]
    fn small_systems() {
        // x + y = 1, x - y = 0
        assert!(feasible(&[vec![1, 1], vec![1, -1]], &[1, 0]));
        // x = 1, x = 2
        assert!(!feasible(&[vec![1], vec![1]], &[1, 2]));
        // x - y = -1 needs y = x + 1
        assert!(feasible(&[vec![1, -1]], &[-1]));
        // x + y = -1 has no non-negative solution
        assert!(!feasible(&[vec![1, 1]], &[-1]));
        // x = 1, x = 0 for the pair balance
        assert!(!feasible(&[vec![1], vec![1]], &[1, 0]));
    }

    #[test]
    fn degenerate_rows_terminate() {
        let a = vec![vec![1, 1, 0], vec![1, 1, 0], vec![0, 1, -1], vec![0, 0, 0]];
        assert!(feasible(&a, &[1, 1, 0, 0]));
        assert!(!feasible(&a, &[1, 1, 0, 1]));
    }
}
