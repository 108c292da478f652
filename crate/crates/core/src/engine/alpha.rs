//! Level-count necessary conditions and the empty upper-cut bound.

use serde::Serialize;

use crate::binomial::binomial;
use crate::error::{Error, Result};
use crate::poset::SubsetPoset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaTest {
    pub k: usize,
    pub alpha: Vec<i128>,
    pub pass: bool,
}

/// Interval-start counts forced on any partition of `P_{<=k}` with all tops at
/// level `k`:
///
/// `α_0 = β_0`, `α_t = β_t - Σ_{j<t} C(k-j, t-j) α_j` for `t = 1..=k`.
///
/// A negative `α_t` proves `sdepth(P) < k`.
pub fn alpha_test(beta: &[u64], k: usize) -> Result<AlphaTest> {
    if beta.len() < k + 1 {
        return Err(Error::InvalidParameter(format!(
            "alpha test at k={k} needs {} level counts, got {}",
            k + 1,
            beta.len()
        )));
    }
    let mut alpha: Vec<i128> = Vec::with_capacity(k + 1);
    for t in 0..=k {
        let mut value = beta[t] as i128;
        for (j, &a) in alpha.iter().enumerate() {
            let c = binomial((k - j) as i64, (t - j) as i64);
            value = c
                .checked_mul(a)
                .and_then(|p| value.checked_sub(p))
                .expect("alpha recurrence overflows i128");
        }
        alpha.push(value);
    }
    let pass = alpha.iter().all(|&a| a >= 0);
    Ok(AlphaTest { k, alpha, pass })
}

/// One less than the smallest `k` refuted by the alpha test, or `n` if none is.
pub fn alpha_upper_bound(beta: &[u64]) -> usize {
    let n = beta.len().saturating_sub(1);
    (1..=n)
        .find(|&k| !alpha_test(beta, k).map(|a| a.pass).unwrap_or(true))
        .map(|k| k - 1)
        .unwrap_or(n)
}

/// If some `σ ∈ P` has no superset of size `d` in `P`, then `sdepth(P) < d`.
/// Every maximal member qualifies with `d = |σ| + 1`, so the depth is at most
/// the size of the smallest maximal member. `None` for the empty poset.
pub fn empty_cut_bound(poset: &SubsetPoset) -> Option<usize> {
    poset
        .maximal_members()
        .map(|s| s.count_ones() as usize)
        .min()
}
