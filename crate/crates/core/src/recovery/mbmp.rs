//! Multi-branch matching pursuit: a depth-K tree search over greedy
//! selections.
//!
//! At level i every node expands its `d_i` best candidates under the same
//! rank-aware criterion the greedy pursuits use; the complete support
//! with the smallest least-squares residual wins. With `d = [1, ..., 1]`
//! exactly one path is explored and the search reduces to OLS (single
//! snapshot) or RA-ORMP (multiple snapshots).

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::CMat;

use super::greedy::{rank_aware_scores, selection_target, ProjectionState};
use super::{RecoveryProblem, RecoveryResult};

/// Per-level branching widths of the search tree; length K, all entries
/// at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchVector(Vec<usize>);

impl BranchVector {
    pub fn new(levels: Vec<usize>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Config(alloc::string::String::from(
                "branch vector must not be empty",
            )));
        }
        if levels.iter().any(|&d| d == 0) {
            return Err(Error::Config(alloc::string::String::from(
                "branch widths must be at least 1",
            )));
        }
        Ok(BranchVector(levels))
    }

    /// The all-ones vector: plain greedy search.
    pub fn ones(k: usize) -> Self {
        BranchVector(alloc::vec![1; k])
    }

    pub fn levels(&self) -> &[usize] {
        &self.0
    }

    /// Number of leaves the full tree would visit.
    pub fn leaf_count(&self) -> u128 {
        self.0
            .iter()
            .fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }
}

struct Search<'a> {
    problem: &'a RecoveryProblem,
    d: &'a [usize],
    best_support: Vec<usize>,
    best_residual: f64,
    leaves: usize,
}

impl Search<'_> {
    fn expand(
        &mut self,
        level: usize,
        state: &ProjectionState,
        support: &mut Vec<usize>,
        selected: &mut Vec<bool>,
    ) {
        if level == self.d.len() {
            let (_, residual) = self.problem.ls_on_support(support);
            self.leaves += 1;
            if residual < self.best_residual {
                self.best_residual = residual;
                self.best_support = support.clone();
            }
            return;
        }
        let target = selection_target(state, self.problem.y());
        if target.cols() == 0 {
            self.complete_with_lowest(level, state, support, selected);
            return;
        }
        let scores = rank_aware_scores(self.problem.dict(), state, &target, selected);
        let candidates = ranked_candidates(&scores, self.d[level]);
        if candidates.is_empty() {
            self.complete_with_lowest(level, state, support, selected);
            return;
        }
        for g in candidates {
            let mut next_state = state.clone();
            next_state.extend(self.problem.dict().col(g));
            support.push(g);
            selected[g] = true;
            self.expand(level + 1, &next_state, support, selected);
            selected[g] = false;
            support.pop();
        }
    }

    /// Degenerate fallback: the remaining columns are all in the selected
    /// span, so fill deterministically with the lowest unselected indices.
    fn complete_with_lowest(
        &mut self,
        level: usize,
        _state: &ProjectionState,
        support: &mut Vec<usize>,
        selected: &mut Vec<bool>,
    ) {
        let need = self.d.len() - level;
        let mut added = Vec::with_capacity(need);
        let mut g = 0;
        while added.len() < need {
            if !selected[g] {
                selected[g] = true;
                support.push(g);
                added.push(g);
            }
            g += 1;
        }
        let (_, residual) = self.problem.ls_on_support(support);
        self.leaves += 1;
        if residual < self.best_residual {
            self.best_residual = residual;
            self.best_support = support.clone();
        }
        for g in added.into_iter().rev() {
            selected[g] = false;
            support.pop();
        }
    }
}

/// Top `width` candidate indices by score, best first, ties to the lowest
/// index; non-finite scores are excluded.
fn ranked_candidates(scores: &[f64], width: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len())
        .filter(|&g| scores[g] > f64::NEG_INFINITY)
        .collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));
    order.truncate(width);
    order
}

/// Runs the multi-branch search. `cap` bounds the leaf count
/// (`prod d_i`); exceeding it is a configuration error raised before any
/// work happens.
pub fn mbmp(problem: &RecoveryProblem, d: &BranchVector, cap: usize) -> Result<RecoveryResult> {
    if d.levels().len() != problem.k() {
        return Err(Error::Config(format!(
            "branch vector has {} levels, sparsity is {}",
            d.levels().len(),
            problem.k()
        )));
    }
    if d.leaf_count() > cap as u128 {
        return Err(Error::Config(format!(
            "branch tree has {} leaves, exceeding the cap of {cap}",
            d.leaf_count()
        )));
    }
    if problem.k() > problem.mn() {
        return Err(Error::Config(alloc::string::String::from(
            "tree search requires K <= MN",
        )));
    }
    let mut search = Search {
        problem,
        d: d.levels(),
        best_support: Vec::new(),
        best_residual: f64::INFINITY,
        leaves: 0,
    };
    let mut support = Vec::with_capacity(problem.k());
    let mut selected = alloc::vec![false; problem.g()];
    let state = ProjectionState::new();
    search.expand(0, &state, &mut support, &mut selected);
    let leaves = search.leaves;
    let best = search.best_support;
    debug_assert_eq!(best.len(), problem.k());
    Ok(problem.finish(best, None, leaves, "mbmp", None))
}

/// Convenience used by tests and callers that only care about the
/// measurement span: an orthonormal basis of Y.
#[allow(dead_code)]
pub(crate) fn snapshot_basis(y: &CMat) -> CMat {
    crate::linalg::orth_basis(y, 1e-10 * y.frob_norm().max(f64::MIN_POSITIVE))
}
