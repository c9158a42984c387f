//! Statistics of the random array pattern and of the Gram matrix
//! `Q = A^H A`.
//!
//! The pattern `beta(u) = (1/MN) sum_m sum_n exp(j u (zeta_n + xi_m))`
//! equals the normalized inner product between two dictionary columns at
//! argument `u = pi Z (phi_l - phi_i)`; its mean over position draws is
//! the characteristic function of `z = xi + zeta`, and its variances
//! shrink like `1/MN`. Coherence is the peak sidelobe: the largest
//! `|beta|` over distinct column pairs.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{ElementPositions, PositionDist};
use crate::linalg::{dot, CMat};
use crate::model::MeasurementMatrix;

/// Analytic moments of the array pattern at one argument `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternStats {
    pub u: f64,
    /// Mean pattern: the characteristic function of `z = xi + zeta`.
    pub mean: Complex64,
    /// Variance of `Re beta(u)`.
    pub var_re: f64,
    /// Variance of `Im beta(u)`.
    pub var_im: f64,
    /// Covariance of real and imaginary parts (zero for even densities).
    pub cov: f64,
}

/// Coherence of one matrix realization plus the normalized first Gram row
/// it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceSample {
    /// `max_{i != l} |a_i^H a_l| / (||a_i|| ||a_l||)`, in `[0, 1]`.
    pub mu: f64,
    /// Normalized inner products `beta(u_{1,i})`, `i = 2..G` (the first
    /// Toeplitz row, excluding the diagonal).
    pub offdiag: Vec<Complex64>,
}

/// The array pattern `(1/MN) sum_m sum_n exp(j u (zeta_n + xi_m))`,
/// evaluated as the full double sum.
pub fn array_pattern(positions: &ElementPositions, u: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &xi in &positions.xi {
        for &zeta in &positions.zeta {
            let (s, c) = (u * (xi + zeta)).sin_cos();
            acc += Complex64::new(c, s);
        }
    }
    acc / (positions.mn() as f64)
}

/// Transmit factor `(1/M) sum_m exp(j u xi_m)`.
pub fn tx_pattern(positions: &ElementPositions, u: f64) -> Complex64 {
    factor_pattern(&positions.xi, u)
}

/// Receive factor `(1/N) sum_n exp(j u zeta_n)`.
pub fn rx_pattern(positions: &ElementPositions, u: f64) -> Complex64 {
    factor_pattern(&positions.zeta, u)
}

fn factor_pattern(pos: &[f64], u: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &p in pos {
        let (s, c) = (u * p).sin_cos();
        acc += Complex64::new(c, s);
    }
    acc / (pos.len() as f64)
}

/// Analytic mean and variances of the pattern for independent arrays with
/// identically distributed, even element positions.
///
/// Mean: `psi_z(u) = psi_xi(u) psi_zeta(u)`. Variances (with
/// `psi = psi_xi = psi_zeta`, `psi_z = psi^2`):
///
/// ```text
/// var_re = (1+psi_z(2u))/(2MN) + psi_z(u) [ (M+N-2)(1+psi(2u))/(2MN)
///          - psi_z(u) (M+N-1)/(MN) ]
/// var_im = (1-psi_z(2u))/(2MN) + psi_z(u) (M+N-2)(1-psi(2u))/(2MN)
/// ```
///
/// The `var_im` cross term carries `(1 - psi(2u))`: that is what a direct
/// moment expansion of the product pattern gives, it vanishes at `u = 0`
/// where the pattern is deterministic, and Monte Carlo confirms it at
/// off-grid arguments.
pub fn analytic_stats(
    tx_dist: &PositionDist,
    rx_dist: &PositionDist,
    m: usize,
    n: usize,
    u: f64,
) -> Result<PatternStats> {
    if tx_dist != rx_dist {
        return Err(Error::Unsupported(String::from(
            "pattern variances require identically distributed transmit and receive positions",
        )));
    }
    if !tx_dist.is_even() {
        return Err(Error::Unsupported(String::from(
            "pattern variances require an even position density",
        )));
    }
    if m == 0 || n == 0 {
        return Err(Error::Config(String::from(
            "element counts must be at least 1",
        )));
    }
    let psi = tx_dist.char_fn(u).re;
    let psi2 = tx_dist.char_fn(2.0 * u).re;
    let psi_z = psi * psi;
    let psi_z2 = psi2 * psi2;
    let mn = (m * n) as f64;
    let cross = (m + n) as f64 - 2.0;
    let var_re = (1.0 + psi_z2) / (2.0 * mn)
        + psi_z * (cross * (1.0 + psi2) / (2.0 * mn) - psi_z * ((m + n) as f64 - 1.0) / mn);
    let var_im = (1.0 - psi_z2) / (2.0 * mn) + psi_z * cross * (1.0 - psi2) / (2.0 * mn);
    Ok(PatternStats {
        u,
        mean: Complex64::new(psi_z, 0.0),
        var_re: var_re.max(0.0),
        var_im: var_im.max(0.0),
        cov: 0.0,
    })
}

/// The full Gram matrix `Q = A^H A`.
pub fn gram(a: &MeasurementMatrix) -> CMat {
    a.entries().herm_mul_mat(a.entries())
}

/// Coherence of the dictionary.
///
/// On a uniform grid `Q` is Toeplitz, so only the first row
/// `a_1^H a_i`, `i = 2..G` is computed (`O(MN G)`); arbitrary grids fall
/// back to the full Gram scan. The reported off-diagonal row is always
/// the first one.
pub fn coherence(a: &MeasurementMatrix) -> Result<CoherenceSample> {
    let g = a.g();
    if g < 2 {
        return Err(Error::Config(String::from(
            "coherence needs at least two grid points",
        )));
    }
    let offdiag = normalized_first_row(a);
    if a.grid().is_uniform(1e-9) {
        let mu = offdiag
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .min(1.0);
        Ok(CoherenceSample { mu, offdiag })
    } else {
        let entries = a.entries();
        let norms: Vec<f64> = (0..g)
            .map(|j| crate::linalg::vec_norm(entries.col(j)))
            .collect();
        let mut mu = 0.0f64;
        for i in 0..g {
            for l in (i + 1)..g {
                let v = dot(entries.col(i), entries.col(l)).norm() / (norms[i] * norms[l]);
                mu = mu.max(v);
            }
        }
        Ok(CoherenceSample {
            mu: mu.min(1.0),
            offdiag,
        })
    }
}

fn normalized_first_row(a: &MeasurementMatrix) -> Vec<Complex64> {
    let entries = a.entries();
    let scale = if a.is_normalized() {
        1.0
    } else {
        1.0 / a.mn() as f64
    };
    (1..a.g())
        .map(|i| dot(entries.col(0), entries.col(i)) * scale)
        .collect()
}

/// Fraction of samples strictly exceeding each threshold in `q_grid`.
pub fn empirical_ccdf(samples: &[f64], q_grid: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::Config(String::from(
            "ccdf needs at least one sample",
        )));
    }
    let n = samples.len() as f64;
    Ok(q_grid
        .iter()
        .map(|&q| samples.iter().filter(|&&s| s > q).count() as f64 / n)
        .collect())
}

/// Phases of the first-row sidelobes `a_1^H a_i`, `i = 2..G`, in
/// `[0, 2 pi)`. Under the zero-mean-pattern conditions these are
/// uniformly distributed on the circle.
pub fn sidelobe_phase_samples(a: &MeasurementMatrix) -> Vec<f64> {
    normalized_first_row(a)
        .iter()
        .map(|z| {
            let phase = z.arg();
            if phase < 0.0 {
                phase + 2.0 * core::f64::consts::PI
            } else {
                phase
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        canonical_grid, nyquist_virtual_array, sample_positions, AngleGrid, ArrayConfig,
    };
    use crate::model::build_matrix;
    use core::f64::consts::PI;

    #[test]
    fn pattern_mainlobe_is_one() {
        let cfg = ArrayConfig::independent_uniform(4, 5, 10.0).unwrap();
        let pos = sample_positions(&cfg, 8).unwrap();
        let b = array_pattern(&pos, 0.0);
        assert!((b - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pattern_factorizes() {
        let cfg = ArrayConfig::independent_uniform(3, 4, 10.0).unwrap();
        for seed in 0..50 {
            let pos = sample_positions(&cfg, seed).unwrap();
            let u = 0.37 * (seed as f64 + 1.0);
            let full = array_pattern(&pos, u);
            let product = tx_pattern(&pos, u) * rx_pattern(&pos, u);
            assert!((full - product).norm() < 1e-13);
        }
    }

    #[test]
    fn pattern_matches_column_inner_products() {
        let cfg = ArrayConfig::independent_uniform(3, 3, 12.0).unwrap();
        let pos = sample_positions(&cfg, 5).unwrap();
        let grid = canonical_grid(12).unwrap();
        let a = build_matrix(&cfg, &pos, &grid, false);
        let q = gram(&a);
        for i in [0usize, 3, 7] {
            for l in [1usize, 5, 11] {
                let u = PI * 12.0 * (grid.phi()[l] - grid.phi()[i]);
                let beta = array_pattern(&pos, u);
                let direct = q.at(i, l) / 9.0;
                assert!((beta - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_single_element_pattern() {
        let pos = ElementPositions::new(alloc::vec![0.0], alloc::vec![0.0]);
        for u in [0.0, 1.0, 10.0, -4.0] {
            assert!((array_pattern(&pos, u) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn analytic_stats_known_values() {
        let d = PositionDist::symmetric_uniform();
        // u = 0: deterministic mainlobe.
        let s0 = analytic_stats(&d, &d, 10, 10, 0.0).unwrap();
        assert!((s0.mean.re - 1.0).abs() < 1e-14);
        assert!(s0.var_re.abs() < 1e-14);
        assert!(s0.var_im.abs() < 1e-14);
        // u = 2 pi: canonical grid neighbor, mean zero, var 1/(2MN).
        let s1 = analytic_stats(&d, &d, 10, 10, 2.0 * PI).unwrap();
        assert!(s1.mean.norm() < 1e-14);
        assert!((s1.var_re - 1.0 / 200.0).abs() < 1e-12);
        assert!((s1.var_im - 1.0 / 200.0).abs() < 1e-12);
        // u = pi: mean (2/pi)^2.
        let s2 = analytic_stats(&d, &d, 10, 10, PI).unwrap();
        assert!((s2.mean.re - 0.40528473456935109).abs() < 1e-12);
        assert!(s2.cov == 0.0);
    }

    #[test]
    fn analytic_stats_rejects_unsupported() {
        let u = PositionDist::symmetric_uniform();
        let p = PositionDist::PointMass { at: 0.0 };
        assert!(matches!(
            analytic_stats(&u, &p, 2, 2, 1.0),
            Err(Error::Unsupported(_))
        ));
        let shifted = PositionDist::Uniform { lo: 0.0, hi: 1.0 };
        assert!(matches!(
            analytic_stats(&shifted, &shifted, 2, 2, 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn analytic_stats_match_monte_carlo_off_grid() {
        // u = 2.0 is not a multiple of pi, which exercises the cross term.
        let d = PositionDist::symmetric_uniform();
        let stats = analytic_stats(&d, &d, 10, 10, 2.0).unwrap();
        let cfg = ArrayConfig::independent_uniform(10, 10, 20.0).unwrap();
        let trials = 40_000;
        let mut mean = Complex64::new(0.0, 0.0);
        let mut sum_re2 = 0.0;
        let mut sum_im2 = 0.0;
        let mut samples = Vec::with_capacity(trials);
        for seed in 0..trials {
            let pos = sample_positions(&cfg, seed as u64).unwrap();
            let b = array_pattern(&pos, 2.0);
            mean += b;
            samples.push(b);
        }
        mean /= trials as f64;
        for b in &samples {
            sum_re2 += (b.re - mean.re) * (b.re - mean.re);
            sum_im2 += (b.im - mean.im) * (b.im - mean.im);
        }
        let var_re = sum_re2 / trials as f64;
        let var_im = sum_im2 / trials as f64;
        assert!((mean.re - stats.mean.re).abs() < 4.0 * (stats.var_re / trials as f64).sqrt());
        assert!(
            (var_re - stats.var_re).abs() < 0.05 * stats.var_re,
            "{var_re} {}",
            stats.var_re
        );
        assert!(
            (var_im - stats.var_im).abs() < 0.05 * stats.var_im,
            "{var_im} {}",
            stats.var_im
        );
    }

    #[test]
    fn gram_is_toeplitz_on_uniform_grid() {
        let cfg = ArrayConfig::independent_uniform(4, 4, 20.0).unwrap();
        let pos = sample_positions(&cfg, 17).unwrap();
        let grid = canonical_grid(20).unwrap();
        let a = build_matrix(&cfg, &pos, &grid, false);
        let q = gram(&a);
        let g = grid.g();
        for offset in 1..g {
            let first = q.at(0, offset);
            for i in 1..(g - offset) {
                assert!((q.at(i, i + offset) - first).norm() < 1e-10);
            }
        }
        // Diagonal equals MN for raw matrices.
        for i in 0..g {
            assert!((q.at(i, i).re - 16.0).abs() < 1e-10);
        }
    }

    #[test]
    fn gram_not_toeplitz_on_squeezed_grid() {
        let cfg = ArrayConfig::independent_uniform(3, 3, 10.0).unwrap();
        let pos = sample_positions(&cfg, 23).unwrap();
        // Quadratically spaced points violate the uniform-grid hypothesis.
        let phi: Vec<f64> = (0..8)
            .map(|i| (i as f64 / 7.0).powi(2) * 2.0 - 1.0)
            .collect();
        let grid = AngleGrid::from_points(phi, 10.0).unwrap();
        let a = build_matrix(&cfg, &pos, &grid, false);
        let q = gram(&a);
        let mut max_spread = 0.0f64;
        for offset in 1..8 {
            for i in 1..(8 - offset) {
                max_spread = max_spread.max((q.at(i, i + offset) - q.at(0, offset)).norm());
            }
        }
        assert!(max_spread > 1e-3, "spread {max_spread}");
    }

    #[test]
    fn coherence_nyquist_is_zero_and_rank_one_is_one() {
        let (pos, grid) = nyquist_virtual_array(3, 3);
        let cfg = ArrayConfig::independent_uniform(3, 3, grid.z()).unwrap();
        let a = build_matrix(&cfg, &pos, &grid, false);
        let c = coherence(&a).unwrap();
        assert!(c.mu < 1e-10);

        // Single colocated element: all columns identical, mu = 1.
        let cfg1 = ArrayConfig::new(
            1,
            1,
            2.0,
            1.0,
            1.0,
            crate::geometry::ArrayMode::Independent,
            PositionDist::PointMass { at: 0.0 },
            PositionDist::PointMass { at: 0.0 },
        )
        .unwrap();
        let pos1 = sample_positions(&cfg1, 0).unwrap();
        let grid1 = canonical_grid(1).unwrap();
        let a1 = build_matrix(&cfg1, &pos1, &grid1, false);
        let c1 = coherence(&a1).unwrap();
        assert!((c1.mu - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherence_first_row_agrees_with_full_scan() {
        let cfg = ArrayConfig::independent_uniform(4, 3, 16.0).unwrap();
        let pos = sample_positions(&cfg, 3).unwrap();
        let grid = canonical_grid(16).unwrap();
        let a = build_matrix(&cfg, &pos, &grid, true);
        let fast = coherence(&a).unwrap();
        // Brute force over all pairs.
        let q = gram(&a);
        let mut mu = 0.0f64;
        for i in 0..grid.g() {
            for l in (i + 1)..grid.g() {
                mu = mu.max(q.at(i, l).norm());
            }
        }
        assert!((fast.mu - mu).abs() < 1e-12);
        assert_eq!(fast.offdiag.len(), grid.g() - 1);
    }

    #[test]
    fn empirical_ccdf_basics() {
        let samples = [1.0, 2.0, 3.0];
        let out = empirical_ccdf(&samples, &[2.0]).unwrap();
        assert!((out[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(empirical_ccdf(&samples, &[0.0]).unwrap()[0], 1.0);
        assert_eq!(empirical_ccdf(&samples, &[3.5]).unwrap()[0], 0.0);
        assert!(empirical_ccdf(&[], &[1.0]).is_err());
    }

    #[test]
    fn degenerate_sidelobe_phases_are_zero() {
        let cfg = ArrayConfig::new(
            1,
            1,
            2.0,
            1.0,
            1.0,
            crate::geometry::ArrayMode::Independent,
            PositionDist::PointMass { at: 0.0 },
            PositionDist::PointMass { at: 0.0 },
        )
        .unwrap();
        let pos = sample_positions(&cfg, 0).unwrap();
        let grid = canonical_grid(2).unwrap();
        let a = build_matrix(&cfg, &pos, &grid, false);
        for phase in sidelobe_phase_samples(&a) {
            assert!(phase.abs() < 1e-12);
        }
    }

    #[test]
    fn transceiver_phase_doubles_receive_phase() {
        let cfg = ArrayConfig::transceiver_uniform(4, 12.0).unwrap();
        let pos = sample_positions(&cfg, 31).unwrap();
        let grid = canonical_grid(12).unwrap();
        for i in 1..grid.g() {
            let u = PI * 12.0 * (grid.phi()[i] - grid.phi()[0]);
            let full = array_pattern(&pos, u);
            let rx = rx_pattern(&pos, u);
            let expected = rx * rx;
            assert!((full - expected).norm() < 1e-13);
            // phase(a1^H ai) = 2 phase(b1^H bi) mod 2 pi.
            let two_phase = (2.0 * rx.arg()).rem_euclid(2.0 * PI);
            let full_phase = full.arg().rem_euclid(2.0 * PI);
            let mut diff = (two_phase - full_phase).abs();
            diff = diff.min(2.0 * PI - diff);
            assert!(diff < 1e-10, "{two_phase} vs {full_phase}");
        }
    }
}
