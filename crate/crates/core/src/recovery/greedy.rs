//! Greedy pursuits: OMP, OLS, RA-ORMP, and CoSaMP.
//!
//! OLS and RA-ORMP share one selection kernel: the candidate column is
//! projected onto the orthogonal complement of the selected columns and
//! scored by its normalized correlation with a target block (the raw
//! snapshots for OLS, an orthonormal basis of the projected snapshot span
//! for RA-ORMP). The multi-branch search reuses the same kernel, which is
//! what makes its single-branch reduction exact.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{dot, lstsq, orth_basis, vec_norm, CMat};

use super::{
    argmax, correlation_norms, top_k_indices, RecoveryProblem, RecoveryResult, RecoveryWarning,
};

/// Columns selected so far, kept as an incrementally grown orthonormal
/// basis.
#[derive(Debug, Clone)]
pub(crate) struct ProjectionState {
    basis: Vec<Vec<Complex64>>,
}

impl ProjectionState {
    pub(crate) fn new() -> Self {
        ProjectionState { basis: Vec::new() }
    }

    /// Removes the selected-column component from `v` (two MGS passes).
    pub(crate) fn project_out(&self, v: &mut [Complex64]) {
        for _ in 0..2 {
            for b in &self.basis {
                let w = dot(b, v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= bi * w;
                }
            }
        }
    }

    /// Adds a column to the selected set; false if it is numerically in
    /// the current span.
    pub(crate) fn extend(&mut self, col: &[Complex64]) -> bool {
        let mut v = col.to_vec();
        self.project_out(&mut v);
        let nv = vec_norm(&v);
        if nv <= 1e-10 {
            return false;
        }
        for vi in &mut v {
            *vi /= nv;
        }
        self.basis.push(v);
        true
    }

    /// The snapshots with the selected-column span projected out.
    pub(crate) fn project_block(&self, y: &CMat) -> CMat {
        let mut out = y.clone();
        for p in 0..out.cols() {
            self.project_out(out.col_mut(p));
        }
        out
    }
}

/// Normalized projected-correlation scores for every unselected column:
/// `||v_g^H T||_2 / ||v_g||` with `v_g` the candidate projected off the
/// selected span. Selected or span-degenerate columns score `-inf`.
pub(crate) fn rank_aware_scores(
    dict: &CMat,
    state: &ProjectionState,
    target: &CMat,
    selected: &[bool],
) -> Vec<f64> {
    let g = dict.cols();
    let mut scores = Vec::with_capacity(g);
    for j in 0..g {
        if selected[j] {
            scores.push(f64::NEG_INFINITY);
            continue;
        }
        let mut v = dict.col(j).to_vec();
        state.project_out(&mut v);
        let nv = vec_norm(&v);
        if nv <= 1e-10 {
            scores.push(f64::NEG_INFINITY);
            continue;
        }
        let mut acc = 0.0;
        for p in 0..target.cols() {
            acc += dot(&v, target.col(p)).norm_sqr();
        }
        scores.push(acc.sqrt() / nv);
    }
    scores
}

/// The selection target for the rank-aware criterion: the raw snapshots
/// in the single-snapshot case, an orthonormal basis of the projected
/// snapshot span otherwise.
pub(crate) fn selection_target(state: &ProjectionState, y: &CMat) -> CMat {
    if y.cols() == 1 {
        y.clone()
    } else {
        let projected = state.project_block(y);
        orth_basis(&projected, 1e-10 * y.frob_norm().max(f64::MIN_POSITIVE))
    }
}

/// Fills the support up to K with the lowest unselected indices; only
/// reached when the selectable columns are exhausted early.
fn pad_support(support: &mut Vec<usize>, selected: &mut [bool], k: usize) {
    let mut g = 0;
    while support.len() < k {
        if !selected[g] {
            selected[g] = true;
            support.push(g);
        }
        g += 1;
    }
}

/// Orthogonal Matching Pursuit: grow the support by the column most
/// correlated with the residual, refit by least squares, repeat K times.
pub fn omp(problem: &RecoveryProblem) -> Result<RecoveryResult> {
    check_greedy_feasible(problem, problem.k())?;
    let k = problem.k();
    let dict = problem.dict();
    let mut residual = problem.y().clone();
    let mut support: Vec<usize> = Vec::with_capacity(k);
    let mut selected = alloc::vec![false; problem.g()];
    for _ in 0..k {
        let mut scores = correlation_norms(dict, &residual);
        for (g, s) in scores.iter_mut().enumerate() {
            if selected[g] {
                *s = f64::NEG_INFINITY;
            }
        }
        let best = argmax(&scores);
        if scores[best] == f64::NEG_INFINITY {
            break;
        }
        selected[best] = true;
        support.push(best);
        let sub = dict.select_columns(&support);
        let coeffs = lstsq(&sub, problem.y());
        residual = problem.y().sub(&sub.mul_mat(&coeffs));
    }
    pad_support(&mut support, &mut selected, k);
    Ok(problem.finish(support, None, k, "omp", None))
}

/// Orthogonal Least Squares: grow the support by the column whose
/// inclusion reduces the residual norm the most.
pub fn ols(problem: &RecoveryProblem) -> Result<RecoveryResult> {
    check_greedy_feasible(problem, problem.k())?;
    let k = problem.k();
    let dict = problem.dict();
    let mut state = ProjectionState::new();
    let mut support: Vec<usize> = Vec::with_capacity(k);
    let mut selected = alloc::vec![false; problem.g()];
    for _ in 0..k {
        let scores = rank_aware_scores(dict, &state, problem.y(), &selected);
        let best = argmax(&scores);
        if scores[best] == f64::NEG_INFINITY {
            break;
        }
        selected[best] = true;
        support.push(best);
        state.extend(dict.col(best));
    }
    pad_support(&mut support, &mut selected, k);
    Ok(problem.finish(support, None, k, "ols", None))
}

/// Rank Aware-Orthogonal Recursive Matching Pursuit: OLS with the
/// correlation taken against an orthonormal basis of the projected
/// snapshot span, which preserves rank information in the MMV setting.
/// Coincides with OLS when P = 1.
pub fn ra_ormp(problem: &RecoveryProblem) -> Result<RecoveryResult> {
    check_greedy_feasible(problem, problem.k())?;
    let k = problem.k();
    let dict = problem.dict();
    let mut state = ProjectionState::new();
    let mut support: Vec<usize> = Vec::with_capacity(k);
    let mut selected = alloc::vec![false; problem.g()];
    for _ in 0..k {
        let target = selection_target(&state, problem.y());
        if target.cols() == 0 {
            break;
        }
        let scores = rank_aware_scores(dict, &state, &target, &selected);
        let best = argmax(&scores);
        if scores[best] == f64::NEG_INFINITY {
            break;
        }
        selected[best] = true;
        support.push(best);
        state.extend(dict.col(best));
    }
    pad_support(&mut support, &mut selected, k);
    Ok(problem.finish(support, None, k, "raormp", None))
}

/// CoSaMP: identify the 2K strongest residual correlations, merge with
/// the current support, least-squares on the merged set, prune back to K.
/// Stops when the residual stalls (relative change below `tol`); on
/// hitting `max_iter` the best iterate is returned with a stall flag.
pub fn cosamp(problem: &RecoveryProblem, max_iter: usize, tol: f64) -> Result<RecoveryResult> {
    if max_iter == 0 {
        return Err(Error::Config(String::from(
            "cosamp needs at least one iteration",
        )));
    }
    let k = problem.k();
    if 2 * k > problem.mn() {
        return Err(Error::Config(String::from("cosamp requires 2K <= MN")));
    }
    let dict = problem.dict();
    let y = problem.y();
    let y_norm = y.frob_norm().max(f64::MIN_POSITIVE);
    // Keep the merged set solvable: |support| + |identified| <= MN.
    let identify = (2 * k).min(problem.mn() - k);

    let mut support: Vec<usize> = Vec::new();
    let mut residual = y.clone();
    let mut prev_norm = f64::INFINITY;
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let scores = correlation_norms(dict, &residual);
        let omega = top_k_indices(&scores, identify);
        let mut merged = support.clone();
        merged.extend_from_slice(&omega);
        merged.sort_unstable();
        merged.dedup();
        let sub = dict.select_columns(&merged);
        let coeffs = lstsq(&sub, y);
        let row_norms: Vec<f64> = (0..merged.len()).map(|r| coeffs.row_norm(r)).collect();
        let keep = top_k_indices(&row_norms, k);
        support = keep.iter().map(|&r| merged[r]).collect();
        support.sort_unstable();
        let sub_k = dict.select_columns(&support);
        let coeffs_k = lstsq(&sub_k, y);
        residual = y.sub(&sub_k.mul_mat(&coeffs_k));
        let rn = residual.frob_norm();
        if best.as_ref().map_or(true, |(_, b)| rn < *b) {
            best = Some((support.clone(), rn));
        }
        if (prev_norm - rn).abs() <= tol * y_norm {
            converged = true;
            break;
        }
        prev_norm = rn;
    }
    let (support, _) = best.expect("at least one iteration ran");
    let warning = if converged {
        None
    } else {
        Some(RecoveryWarning::Stalled)
    };
    Ok(problem.finish(support, None, iterations, "cosamp", warning))
}

fn check_greedy_feasible(problem: &RecoveryProblem, k: usize) -> Result<()> {
    if k > problem.mn() {
        return Err(Error::Config(String::from(
            "greedy pursuit requires K <= MN",
        )));
    }
    Ok(())
}
