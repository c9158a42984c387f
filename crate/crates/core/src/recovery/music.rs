//! MUSIC: noise-subspace pseudospectrum over the dictionary grid.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::eigh;

use super::{top_k_indices, RecoveryProblem, RecoveryResult, RecoveryWarning};

/// Sample covariance `(1/P) Y Y^H`, noise subspace from its `MN - K`
/// weakest eigenvectors, support from the K largest pseudospectrum values
/// `1 / ||E_n^H a_g||^2`. Needs at least two snapshots; with `P <= K` the
/// signal subspace is rank deficient and the result carries a warning.
pub fn music(problem: &RecoveryProblem) -> Result<RecoveryResult> {
    let p = problem.p();
    if p < 2 {
        return Err(Error::Config(String::from(
            "music needs at least two snapshots",
        )));
    }
    if problem.k() >= problem.mn() {
        return Err(Error::Config(String::from("music requires K < MN")));
    }
    let y = problem.y();
    let mut cov = y.mul_mat(&y.conj_transpose());
    cov.scale(1.0 / p as f64);
    let (_, vectors) = eigh(&cov);
    let noise_dim = problem.mn() - problem.k();
    let noise_basis: Vec<usize> = (0..noise_dim).collect();
    let e_n = vectors.select_columns(&noise_basis);

    let dict = problem.dict();
    let scores: Vec<f64> = (0..problem.g())
        .map(|g| {
            let proj = e_n.herm_mul_mat(&crate::linalg::CMat::column_vector(dict.col(g)));
            let denom = proj.frob_norm().max(1e-150);
            1.0 / (denom * denom)
        })
        .collect();
    let support = top_k_indices(&scores, problem.k());
    let warning = if p <= problem.k() {
        Some(RecoveryWarning::DeficientSubspace)
    } else {
        None
    };
    Ok(problem.finish(support, None, 1, "music", warning))
}
