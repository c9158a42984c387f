//! Exhaustive l0 oracle: least squares over every K-subset of columns.
//!
//! Exact solver for the cardinality-constrained sparse problem; its cost
//! is `C(G, K)` least-squares fits, so a combination guard rejects
//! instances beyond 10^6 subsets. Reference point for the polynomial-time
//! methods' property tests.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

use super::{RecoveryProblem, RecoveryResult};

const SUBSET_GUARD: u128 = 1_000_000;

/// Number of K-subsets of a G-set, saturating at the guard bound.
fn binomial_capped(g: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((g - i) as u128) / (i as u128 + 1);
        if acc > SUBSET_GUARD {
            return u128::MAX;
        }
    }
    acc
}

/// Enumerates all K-subsets in lexicographic order, fits each by least
/// squares, and returns the minimum-residual support (first encountered
/// wins ties, so the result is the lexicographically smallest optimum).
pub fn l0_oracle(problem: &RecoveryProblem) -> Result<RecoveryResult> {
    let (g, k) = (problem.g(), problem.k());
    if k > problem.mn() {
        return Err(Error::Config(format!(
            "oracle least squares needs K <= MN (K={k}, MN={})",
            problem.mn()
        )));
    }
    let count = binomial_capped(g, k);
    if count > SUBSET_GUARD {
        return Err(Error::Config(format!(
            "C({g},{k}) exceeds the {SUBSET_GUARD} subset guard"
        )));
    }

    let mut subset: Vec<usize> = (0..k).collect();
    let mut best_support = subset.clone();
    let mut best_residual = f64::INFINITY;
    let mut evaluated = 0usize;
    loop {
        let (_, residual) = problem.ls_on_support(&subset);
        evaluated += 1;
        if residual < best_residual {
            best_residual = residual;
            best_support = subset.clone();
        }
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(problem.finish(best_support, None, evaluated, "l0", None));
            }
            i -= 1;
            if subset[i] != i + g - k {
                break;
            }
        }
        subset[i] += 1;
        for j in (i + 1)..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}
