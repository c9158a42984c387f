//! Support-recovery estimators behind one interface.
//!
//! Every method consumes a [`RecoveryProblem`] (column-normalized
//! dictionary, snapshots, known sparsity K and noise level) and returns a
//! [`RecoveryResult`] with exactly K support indices, the estimated gains
//! on that support, and the residual. A string-keyed registry
//! ([`Method::parse`]) is the contract the CLI and the experiment engine
//! program against.

mod focuss;
mod greedy;
mod lasso;
mod mbmp;
mod music;
mod oracle;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{dot, lstsq, vec_norm, CMat};
use crate::model::{MeasurementMatrix, SnapshotData};

pub use mbmp::BranchVector;

/// A sparse-recovery instance: normalized dictionary, observations, and
/// the side information (K, sigma) the estimators assume known.
#[derive(Debug, Clone)]
pub struct RecoveryProblem {
    dict: CMat,
    /// Original column norms; 1 when the input was already normalized.
    col_scale: Vec<f64>,
    y: CMat,
    k: usize,
    sigma: f64,
}

impl RecoveryProblem {
    /// Builds a problem from a measurement matrix and snapshots. Raw
    /// matrices are normalized internally; estimated gains are rescaled
    /// back to the input convention on output.
    pub fn new(matrix: &MeasurementMatrix, snapshots: &SnapshotData, k: usize) -> Result<Self> {
        RecoveryProblem::from_parts(
            matrix.entries().clone(),
            snapshots.y.clone(),
            k,
            snapshots.sigma,
        )
    }

    /// Same, from bare matrices (the dictionary may have arbitrary
    /// nonzero column norms).
    pub fn from_parts(a: CMat, y: CMat, k: usize, sigma: f64) -> Result<Self> {
        if y.rows() != a.rows() {
            return Err(Error::Config(format!(
                "snapshot rows {} do not match dictionary rows {}",
                y.rows(),
                a.rows()
            )));
        }
        if k == 0 || k > a.cols() {
            return Err(Error::Config(format!(
                "sparsity must be in 1..={} (got {k})",
                a.cols()
            )));
        }
        if sigma < 0.0 {
            return Err(Error::Config(String::from(
                "noise level must be nonnegative",
            )));
        }
        let mut dict = a;
        let mut col_scale = Vec::with_capacity(dict.cols());
        for j in 0..dict.cols() {
            let norm = vec_norm(dict.col(j));
            if norm == 0.0 {
                return Err(Error::Config(format!("dictionary column {j} is zero")));
            }
            col_scale.push(norm);
        }
        if col_scale.iter().any(|&s| (s - 1.0).abs() > 1e-9) {
            for j in 0..dict.cols() {
                let s = col_scale[j];
                for z in dict.col_mut(j) {
                    *z /= s;
                }
            }
        } else {
            col_scale.iter_mut().for_each(|s| *s = 1.0);
        }
        Ok(RecoveryProblem {
            dict,
            col_scale,
            y,
            k,
            sigma,
        })
    }

    pub fn dict(&self) -> &CMat {
        &self.dict
    }

    pub fn y(&self) -> &CMat {
        &self.y
    }

    pub fn g(&self) -> usize {
        self.dict.cols()
    }

    pub fn mn(&self) -> usize {
        self.dict.rows()
    }

    pub fn p(&self) -> usize {
        self.y.cols()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Least-squares gains on a fixed support, as a full G x P matrix
    /// (zero rows off support), plus the residual norm.
    pub(crate) fn ls_on_support(&self, support: &[usize]) -> (CMat, f64) {
        let sub = self.dict.select_columns(support);
        let coeffs = lstsq(&sub, &self.y);
        let mut xhat = CMat::zeros(self.g(), self.p());
        for (row, &g) in support.iter().enumerate() {
            for p in 0..self.p() {
                xhat.set(g, p, coeffs.at(row, p));
            }
        }
        let residual = self.y.sub(&sub.mul_mat(&coeffs)).frob_norm();
        (xhat, residual)
    }

    /// Assembles a result from an unsorted support. When `xhat` is absent
    /// the gains are refit by least squares on the sorted support; when
    /// present it must already be G x P in normalized-dictionary scale.
    pub(crate) fn finish(
        &self,
        mut support: Vec<usize>,
        xhat: Option<CMat>,
        iterations: usize,
        method: &'static str,
        warning: Option<RecoveryWarning>,
    ) -> RecoveryResult {
        support.sort_unstable();
        let (mut xhat, residual_norm) = match xhat {
            Some(x) => {
                let mut ax = CMat::zeros(self.mn(), self.p());
                for &g in &support {
                    for p in 0..self.p() {
                        let coeff = x.at(g, p);
                        if coeff != Complex64::new(0.0, 0.0) {
                            let col = self.dict.col(g);
                            let axc = ax.col_mut(p);
                            for (a, c) in axc.iter_mut().zip(col) {
                                *a += c * coeff;
                            }
                        }
                    }
                }
                let residual = self.y.sub(&ax).frob_norm();
                (x, residual)
            }
            None => self.ls_on_support(&support),
        };
        // Back to the caller's column scaling.
        for g in 0..self.g() {
            let s = self.col_scale[g];
            if s != 1.0 {
                for p in 0..self.p() {
                    let v = xhat.at(g, p) / s;
                    xhat.set(g, p, v);
                }
            }
        }
        RecoveryResult {
            support,
            xhat,
            residual_norm,
            iterations,
            method,
            warning,
        }
    }
}

/// Non-fatal conditions a solver can flag on its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryWarning {
    /// Iterative method stopped on its iteration cap without meeting its
    /// stall criterion; the best iterate is returned.
    Stalled,
    /// Subspace method ran with fewer snapshots than sources.
    DeficientSubspace,
    /// Solution returned without a passing optimality certificate.
    NotCertified,
}

/// Output of one estimator run.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    /// Sorted estimated support, exactly K indices (0-based).
    pub support: Vec<usize>,
    /// `G x P` gains, exactly zero off support, in the scale of the
    /// caller's dictionary.
    pub xhat: CMat,
    /// `||Y - A xhat||_F`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub method: &'static str,
    pub warning: Option<RecoveryWarning>,
}

/// Support-recovery error indicator: 1 when the index sets differ.
/// Order-insensitive.
pub fn support_error(estimated: &[usize], truth: &[usize]) -> bool {
    if estimated.len() != truth.len() {
        return true;
    }
    let mut a = estimated.to_vec();
    let mut b = truth.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a != b
}

/// `||a_g^H Y||_2` for every column; the beamforming spectrum.
pub(crate) fn correlation_norms(dict: &CMat, y: &CMat) -> Vec<f64> {
    (0..dict.cols())
        .map(|g| {
            let col = dict.col(g);
            let mut acc = 0.0;
            for p in 0..y.cols() {
                acc += dot(col, y.col(p)).norm_sqr();
            }
            acc.sqrt()
        })
        .collect()
}

/// Indices of the `k` largest scores, ties to the lowest index, returned
/// in score order.
pub(crate) fn top_k_indices(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // Stable sort by descending score keeps lower indices first on ties.
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));
    order.truncate(k);
    order
}

/// Index of the largest score; ties go to the lowest index.
pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Support = indices of the K largest `||a_g^H Y||_2`; gains are least
/// squares on that support. The classical matched-filter baseline.
pub fn beamform(problem: &RecoveryProblem) -> Result<RecoveryResult> {
    let scores = correlation_norms(problem.dict(), problem.y());
    let support = top_k_indices(&scores, problem.k());
    Ok(problem.finish(support, None, 1, "beamform", None))
}

pub use focuss::focuss;
pub use greedy::{cosamp, ols, omp, ra_ormp};
pub use lasso::lasso_bpdn;
pub use mbmp::mbmp;
pub use music::music;
pub use oracle::l0_oracle;

/// A named estimator with its parameters resolved; the registry the CLI
/// and experiment engine share.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Beamform,
    Omp,
    Ols,
    Cosamp {
        max_iter: usize,
        tol: f64,
    },
    Focuss {
        p_norm: f64,
        max_iter: usize,
        tol: f64,
    },
    Lasso {
        radius_mult: f64,
    },
    Music,
    RaOrmp,
    Mbmp {
        d: Option<BranchVector>,
        cap: usize,
    },
    L0Oracle,
}

impl Method {
    /// Looks up a method by registry name with a flat string parameter
    /// map. Unknown names or parameters are configuration errors.
    pub fn parse(name: &str, params: &BTreeMap<String, String>) -> Result<Method> {
        let mut allowed: &[&str] = &[];
        let method = match name {
            "beamform" => Method::Beamform,
            "omp" => Method::Omp,
            "ols" => Method::Ols,
            "cosamp" => {
                allowed = &["max_iter", "tol"];
                Method::Cosamp {
                    max_iter: parse_param(params, "max_iter", 50usize)?,
                    tol: parse_param(params, "tol", 1e-6f64)?,
                }
            }
            "focuss" => {
                allowed = &["p", "max_iter", "tol"];
                Method::Focuss {
                    p_norm: parse_param(params, "p", 0.8f64)?,
                    max_iter: parse_param(params, "max_iter", 100usize)?,
                    tol: parse_param(params, "tol", 1e-6f64)?,
                }
            }
            "lasso" => {
                allowed = &["radius_mult"];
                Method::Lasso { radius_mult: parse_param(params, "radius_mult", 1.0f64)? }
            }
            "music" => Method::Music,
            "raormp" => Method::RaOrmp,
            "mbmp" => {
                allowed = &["d", "cap"];
                let d = match params.get("d") {
                    Some(spec) => {
                        let entries: Result<Vec<usize>> = spec
                            .split(',')
                            .map(|tok| {
                                tok.trim().parse::<usize>().map_err(|_| {
                                    Error::Config(format!("invalid branch entry '{tok}'"))
                                })
                            })
                            .collect();
                        Some(BranchVector::new(entries?)?)
                    }
                    None => None,
                };
                Method::Mbmp { d, cap: parse_param(params, "cap", 10_000usize)? }
            }
            "l0" => Method::L0Oracle,
            other => {
                return Err(Error::Config(format!(
                    "unknown method '{other}' (expected beamform|omp|ols|cosamp|focuss|lasso|music|raormp|mbmp|l0)"
                )))
            }
        };
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config(format!(
                    "method '{name}' has no parameter '{key}'"
                )));
            }
        }
        Ok(method)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Beamform => "beamform",
            Method::Omp => "omp",
            Method::Ols => "ols",
            Method::Cosamp { .. } => "cosamp",
            Method::Focuss { .. } => "focuss",
            Method::Lasso { .. } => "lasso",
            Method::Music => "music",
            Method::RaOrmp => "raormp",
            Method::Mbmp { .. } => "mbmp",
            Method::L0Oracle => "l0",
        }
    }

    pub fn run(&self, problem: &RecoveryProblem) -> Result<RecoveryResult> {
        match self {
            Method::Beamform => beamform(problem),
            Method::Omp => omp(problem),
            Method::Ols => ols(problem),
            Method::Cosamp { max_iter, tol } => cosamp(problem, *max_iter, *tol),
            Method::Focuss {
                p_norm,
                max_iter,
                tol,
            } => focuss(problem, *p_norm, *max_iter, *tol),
            Method::Lasso { radius_mult } => lasso_bpdn(problem, *radius_mult),
            Method::Music => music(problem),
            Method::RaOrmp => ra_ormp(problem),
            Method::Mbmp { d, cap } => {
                let d = match d {
                    Some(d) => d.clone(),
                    None => BranchVector::ones(problem.k()),
                };
                mbmp(problem, &d, *cap)
            }
            Method::L0Oracle => l0_oracle(problem),
        }
    }
}

fn parse_param<T: core::str::FromStr>(
    params: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T> {
    match params.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .parse::<T>()
            .map_err(|_| Error::Config(format!("invalid value '{raw}' for parameter '{key}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{canonical_grid, nyquist_virtual_array, sample_positions, ArrayConfig};
    use crate::model::{build_matrix, observe, synthesize_scene};

    fn small_problem(seed: u64, k: usize, sigma: f64) -> (RecoveryProblem, Vec<usize>) {
        let cfg = ArrayConfig::independent_uniform(4, 5, 20.0).unwrap();
        let pos = sample_positions(&cfg, seed).unwrap();
        let grid = canonical_grid(20).unwrap();
        let a = build_matrix(&cfg, &pos, &grid, true);
        let scene = synthesize_scene(grid.g(), k, 1, seed ^ 0x5eed).unwrap();
        let snap = observe(&a, &scene, sigma, seed ^ 0xabcd).unwrap();
        (RecoveryProblem::new(&a, &snap, k).unwrap(), scene.support)
    }

    #[test]
    fn support_error_semantics() {
        assert!(!support_error(&[3, 7], &[3, 7]));
        assert!(support_error(&[3, 8], &[3, 7]));
        assert!(!support_error(&[7, 3], &[3, 7]));
        assert!(support_error(&[3], &[3, 7]));
    }

    #[test]
    fn beamform_exact_on_nyquist_array() {
        let (pos, grid) = nyquist_virtual_array(3, 4);
        let cfg = ArrayConfig::independent_uniform(3, 4, grid.z()).unwrap();
        let a = build_matrix(&cfg, &pos, &grid, true);
        for seed in 0..20 {
            let scene = synthesize_scene(grid.g(), 3, 1, seed).unwrap();
            let snap = observe(&a, &scene, 0.0, 0).unwrap();
            let prob = RecoveryProblem::new(&a, &snap, 3).unwrap();
            let res = beamform(&prob).unwrap();
            assert_eq!(res.support, scene.support);
            assert!(res.residual_norm < 1e-9);
        }
    }

    #[test]
    fn beamform_exact_for_single_target() {
        for seed in 0..30 {
            let (prob, truth) = small_problem(seed, 1, 0.0);
            let res = beamform(&prob).unwrap();
            assert_eq!(res.support, truth);
        }
    }

    #[test]
    fn results_have_k_rows_and_zero_off_support() {
        let (prob, _) = small_problem(3, 2, 0.05);
        for method in [
            Method::Beamform,
            Method::Omp,
            Method::Ols,
            Method::Cosamp {
                max_iter: 50,
                tol: 1e-6,
            },
            Method::Focuss {
                p_norm: 0.8,
                max_iter: 100,
                tol: 1e-6,
            },
            Method::Lasso { radius_mult: 1.0 },
            Method::RaOrmp,
            Method::Mbmp {
                d: None,
                cap: 10_000,
            },
            Method::L0Oracle,
        ] {
            let res = method.run(&prob).unwrap();
            assert_eq!(res.support.len(), 2, "{}", res.method);
            assert!(res.support.windows(2).all(|w| w[0] < w[1]));
            for g in 0..prob.g() {
                if !res.support.contains(&g) {
                    for p in 0..prob.p() {
                        assert_eq!(res.xhat.at(g, p), Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn raw_matrix_gains_are_rescaled() {
        let cfg = ArrayConfig::independent_uniform(3, 4, 16.0).unwrap();
        let pos = sample_positions(&cfg, 9).unwrap();
        let grid = canonical_grid(16).unwrap();
        let raw = build_matrix(&cfg, &pos, &grid, false);
        let norm = build_matrix(&cfg, &pos, &grid, true);
        let scene = synthesize_scene(grid.g(), 2, 1, 4).unwrap();
        let snap = observe(&raw, &scene, 0.0, 0).unwrap();
        let prob_raw = RecoveryProblem::new(&raw, &snap, 2).unwrap();
        let res = omp(&prob_raw).unwrap();
        assert_eq!(res.support, scene.support);
        // Gains in raw convention: xhat rows should equal the true gains.
        for (row, &g) in scene.support.iter().enumerate() {
            assert!((res.xhat.at(g, 0) - scene.gains.at(row, 0)).norm() < 1e-8);
        }
        // Same observation against the normalized dictionary scales up.
        let snap_norm = observe(&norm, &scene, 0.0, 0).unwrap();
        let prob_norm = RecoveryProblem::new(&norm, &snap_norm, 2).unwrap();
        let res_norm = omp(&prob_norm).unwrap();
        assert_eq!(res_norm.support, scene.support);
    }

    #[test]
    fn registry_parses_and_rejects() {
        let empty = BTreeMap::new();
        assert_eq!(Method::parse("omp", &empty).unwrap(), Method::Omp);
        let mut params = BTreeMap::new();
        params.insert(String::from("d"), String::from("3,3,1"));
        match Method::parse("mbmp", &params).unwrap() {
            Method::Mbmp { d: Some(d), .. } => assert_eq!(d.levels(), &[3, 3, 1]),
            m => panic!("unexpected {m:?}"),
        }
        assert!(Method::parse("nope", &empty).is_err());
        let mut bad = BTreeMap::new();
        bad.insert(String::from("p"), String::from("0.8"));
        assert!(Method::parse("omp", &bad).is_err());
        let mut badval = BTreeMap::new();
        badval.insert(String::from("max_iter"), String::from("many"));
        assert!(Method::parse("cosamp", &badval).is_err());
    }

    #[test]
    fn problem_validation() {
        let (prob, _) = small_problem(1, 2, 0.0);
        let y = prob.y().clone();
        let a = prob.dict().clone();
        assert!(RecoveryProblem::from_parts(a.clone(), y.clone(), 0, 0.0).is_err());
        assert!(RecoveryProblem::from_parts(a.clone(), y.clone(), 100, 0.0).is_err());
        assert!(RecoveryProblem::from_parts(a, y, 2, -0.1).is_err());
    }
}
