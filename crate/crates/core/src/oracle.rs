//! Exhaustive reference solver used to anchor correctness tests.

use crate::error::{Error, Result};
use crate::problem::{Permutation, ProblemInstance};

/// Largest size accepted by [`brute_force_optimum`].
pub const BRUTE_FORCE_MAX_N: usize = 9;

/// Advances `v` to the next permutation in lexicographic order. Returns
/// `false` once `v` is the last (descending) permutation.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Global minimum by enumerating all `n!` permutations in lexicographic order.
/// Ties keep the lexicographically smallest permutation.
pub fn brute_force_optimum(inst: &ProblemInstance) -> Result<(Permutation, f64)> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::SizeLimit {
            what: "brute-force instance",
            size: n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut best = Permutation::identity(n);
    let mut best_cost = inst.cost(&best)?;
    while next_permutation(&mut current) {
        let p = Permutation::new(current.clone())?;
        let c = inst.cost(&p)?;
        if c < best_cost {
            best_cost = c;
            best = p;
        }
    }
    Ok((best, best_cost))
}
