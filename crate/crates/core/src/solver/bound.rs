use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::model::Signature;

/// Upper bound `2·m·r·min{r^r, k^(2r-2)}` on the node count of the smallest
/// graph over a non-empty signature, with `m` labels, `2r` directions and
/// maximum label degree `k`.
///
/// When one-node graphs decide the question (at most one direction, or an
/// initial label without directions) the bound is 1. Non-initial labels
/// without directions never occur in a minimal graph and are left out of
/// `m` and `k`. An odd direction count is rounded up to the next pair.
pub fn node_count_bound(sig: &Signature) -> BigUint {
    if sig.directions.len() <= 1 {
        return BigUint::one();
    }
    if sig.initial_labels.iter().any(|a| sig.dirs_of(a).is_empty()) {
        return BigUint::one();
    }
    let degrees: Vec<usize> = sig
        .labels
        .iter()
        .map(|a| sig.dirs_of(a).len())
        .filter(|&k| k > 0)
        .collect();
    let m = degrees.len() as u64;
    let k = degrees.iter().copied().max().unwrap_or(0) as u64;
    let r = sig.directions.len().div_ceil(2) as u64;
    if m == 0 {
        return BigUint::one();
    }

    let r_pow = pow_u64(r, r);
    let k_pow = pow_u64(k, 2 * r - 2);
    let value = BigUint::from(2 * m * r) * r_pow.min(k_pow);
    value.max(BigUint::one())
}

/// `base^exp` in arbitrary precision; `0^0 = 1`.
pub fn pow_u64(base: u64, exp: u64) -> BigUint {
    let mut acc = BigUint::one();
    let b = BigUint::from(base);
    let mut e = exp;
    let mut sq = b;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    if base == 0 && exp > 0 {
        return BigUint::zero();
    }
    acc
}

pub fn saturating_u64(x: &BigUint) -> u64 {
    x.to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    #[test]
    fn line_signature() {
        assert_eq!(node_count_bound(&sig_line()), BigUint::from(6u32));
    }

    #[test]
    fn single_label_single_pair() {
        let s = sig(
            &[("r", "l"), ("l", "r")],
            &["a0"],
            &["a0"],
            &[("a0", &["r"])],
        );
        assert_eq!(node_count_bound(&s), BigUint::from(2u32));
    }

    #[test]
    fn degenerate_cases_are_one() {
        assert_eq!(node_count_bound(&sig_loop()), BigUint::one());
        let s = sig(
            &[("r", "l"), ("l", "r")],
            &["a0", "b0"],
            &["a0", "b0"],
            &[("a0", &["r"]), ("b0", &[])],
        );
        assert_eq!(node_count_bound(&s), BigUint::one());
    }

    #[test]
    fn non_initial_label_without_directions_is_dropped() {
        let s = sig(
            &[("r", "l"), ("l", "r")],
            &["a0", "e", "z"],
            &["a0"],
            &[("a0", &["r"]), ("e", &["l"]), ("z", &[])],
        );
        // m = 2, r = 1, k = 1
        assert_eq!(node_count_bound(&s), BigUint::from(4u32));
    }

    #[test]
    fn large_exponents_stay_exact() {
        // m = 1, |D| = 20 so r = 10, k = 20: min{10^10, 20^18} = 10^10
        let dirs: Vec<(String, String)> = (0..10)
            .flat_map(|i| {
                [
                    (format!("p{i}"), format!("m{i}")),
                    (format!("m{i}"), format!("p{i}")),
                ]
            })
            .collect();
        let dir_refs: Vec<(&str, &str)> =
            dirs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let all: Vec<&str> = dirs.iter().map(|(a, _)| a.as_str()).collect();
        let s = sig(&dir_refs, &["a0"], &["a0"], &[("a0", &all)]);
        assert_eq!(node_count_bound(&s), BigUint::from(20u32) * pow_u64(10, 10));
    }

    #[test]
    fn powers() {
        assert_eq!(pow_u64(0, 0), BigUint::one());
        assert_eq!(pow_u64(0, 3), BigUint::zero());
        assert_eq!(pow_u64(2, 70), BigUint::one() << 70usize);
        assert_eq!(pow_u64(3, 4), BigUint::from(81u32));
    }
}
