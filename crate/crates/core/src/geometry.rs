//! Random array geometry: element-position distributions, angle grids,
//! and transmit/receive/virtual steering vectors.
//!
//! Positions are kept in the normalized coordinates of the system model:
//! the m-th transmitter sits at `Z*xi_m/2` on the axis with
//! `xi_m in [-Z_TX/Z, Z_TX/Z]`, and likewise `zeta_n` for receivers. The
//! aperture `Z` is dimensionless (wavelength-halves), and carries all
//! physical scaling. Directions are parameterized by `theta = sin(angle)`
//! in `[-1, 1]`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::random::seeded_rng;

/// Distribution of a normalized element position.
///
/// `Uniform` is the canonical choice; `PointMass` and `Discrete` exist to
/// build counterexamples for the isotropy and zero-mean-pattern conditions.
#[derive(Debug, Clone, PartialEq)]
pub enum PositionDist {
    /// Uniform on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// Deterministic position.
    PointMass { at: f64 },
    /// Finite set of `(position, probability)` atoms; probabilities must
    /// sum to 1.
    Discrete { atoms: Vec<(f64, f64)> },
}

impl PositionDist {
    /// Uniform on `[-1/2, 1/2]`, the equal-aperture convention.
    pub fn symmetric_uniform() -> Self {
        PositionDist::Uniform { lo: -0.5, hi: 0.5 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PositionDist::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::Config(format!(
                        "invalid uniform interval [{lo}, {hi}]"
                    )));
                }
            }
            PositionDist::PointMass { at } => {
                if !at.is_finite() {
                    return Err(Error::Config(String::from(
                        "point mass position must be finite",
                    )));
                }
            }
            PositionDist::Discrete { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::Config(String::from(
                        "discrete distribution needs atoms",
                    )));
                }
                let total: f64 = atoms.iter().map(|(_, p)| p).sum();
                if atoms.iter().any(|(x, p)| !x.is_finite() || *p < 0.0)
                    || (total - 1.0).abs() > 1e-9
                {
                    return Err(Error::Config(format!(
                        "discrete probabilities must be nonnegative and sum to 1 (got {total})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Support interval `(min, max)`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            PositionDist::Uniform { lo, hi } => (*lo, *hi),
            PositionDist::PointMass { at } => (*at, *at),
            PositionDist::Discrete { atoms } => {
                let lo = atoms.iter().map(|(x, _)| *x).fold(f64::INFINITY, f64::min);
                let hi = atoms
                    .iter()
                    .map(|(x, _)| *x)
                    .fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match self {
            PositionDist::Uniform { lo, hi } => lo + (hi - lo) * rng.gen::<f64>(),
            PositionDist::PointMass { at } => *at,
            PositionDist::Discrete { atoms } => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (x, p) in atoms {
                    acc += p;
                    if u < acc {
                        return *x;
                    }
                }
                atoms.last().expect("validated nonempty").0
            }
        }
    }

    /// Characteristic function `E[exp(j u x)]`.
    ///
    /// For the uniform distribution on a symmetric interval of width `w`
    /// this is `sin(u w / 2) / (u w / 2)`, whose zeros define the canonical
    /// grid spacing.
    pub fn char_fn(&self, u: f64) -> Complex64 {
        match self {
            PositionDist::Uniform { lo, hi } => {
                let mid = 0.5 * (lo + hi);
                let half_width = 0.5 * (hi - lo);
                let (s, c) = (u * mid).sin_cos();
                Complex64::new(c, s) * sinc(u * half_width)
            }
            PositionDist::PointMass { at } => {
                let (s, c) = (u * at).sin_cos();
                Complex64::new(c, s)
            }
            PositionDist::Discrete { atoms } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, p) in atoms {
                    let (s, c) = (u * x).sin_cos();
                    acc += Complex64::new(c * p, s * p);
                }
                acc
            }
        }
    }

    /// Whether the density is symmetric about zero, which makes the
    /// characteristic function real-valued.
    pub fn is_even(&self) -> bool {
        match self {
            PositionDist::Uniform { lo, hi } => (lo + hi).abs() < 1e-12,
            PositionDist::PointMass { at } => at.abs() < 1e-12,
            PositionDist::Discrete { atoms } => atoms.iter().all(|&(x, p)| {
                atoms
                    .iter()
                    .any(|&(x2, p2)| (x + x2).abs() < 1e-12 && (p - p2).abs() < 1e-12)
            }),
        }
    }
}

/// `sin(x)/x` with the removable singularity filled in.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Whether transmit and receive elements are separate or colocated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayMode {
    /// Transmit and receive positions drawn independently.
    Independent,
    /// N transceivers: `xi_n = zeta_n` elementwise (requires `M = N`).
    Transceiver,
}

/// Static description of a random MIMO array.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    /// Transmitter count.
    pub m: usize,
    /// Receiver count.
    pub n: usize,
    /// Total normalized aperture, `z = z_tx + z_rx`.
    pub z: f64,
    pub z_tx: f64,
    pub z_rx: f64,
    pub mode: ArrayMode,
    pub tx_dist: PositionDist,
    pub rx_dist: PositionDist,
}

impl ArrayConfig {
    pub fn new(
        m: usize,
        n: usize,
        z: f64,
        z_tx: f64,
        z_rx: f64,
        mode: ArrayMode,
        tx_dist: PositionDist,
        rx_dist: PositionDist,
    ) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Config(String::from(
                "element counts must be at least 1",
            )));
        }
        if !(z > 0.0) || z_tx < 0.0 || z_rx < 0.0 {
            return Err(Error::Config(format!(
                "invalid apertures z={z} z_tx={z_tx} z_rx={z_rx}"
            )));
        }
        if (z_tx + z_rx - z).abs() > 1e-9 * z {
            return Err(Error::Config(format!(
                "apertures must satisfy z_tx + z_rx = z (got {} + {} != {z})",
                z_tx, z_rx
            )));
        }
        tx_dist.validate()?;
        rx_dist.validate()?;
        let (tx_lo, tx_hi) = tx_dist.support();
        if tx_lo < -z_tx / z - 1e-12 || tx_hi > z_tx / z + 1e-12 {
            return Err(Error::Config(String::from(
                "transmit distribution support exceeds [-z_tx/z, z_tx/z]",
            )));
        }
        let (rx_lo, rx_hi) = rx_dist.support();
        if rx_lo < -z_rx / z - 1e-12 || rx_hi > z_rx / z + 1e-12 {
            return Err(Error::Config(String::from(
                "receive distribution support exceeds [-z_rx/z, z_rx/z]",
            )));
        }
        if mode == ArrayMode::Transceiver && (m != n || tx_dist != rx_dist) {
            return Err(Error::Config(String::from(
                "transceiver mode requires m = n and identical distributions",
            )));
        }
        Ok(ArrayConfig {
            m,
            n,
            z,
            z_tx,
            z_rx,
            mode,
            tx_dist,
            rx_dist,
        })
    }

    /// Independent arrays with equal apertures and uniform positions on
    /// `[-1/2, 1/2]`, the configuration used throughout the experiments.
    pub fn independent_uniform(m: usize, n: usize, z: f64) -> Result<Self> {
        ArrayConfig::new(
            m,
            n,
            z,
            z / 2.0,
            z / 2.0,
            ArrayMode::Independent,
            PositionDist::symmetric_uniform(),
            PositionDist::symmetric_uniform(),
        )
    }

    /// N colocated transceivers with uniform positions on `[-1/2, 1/2]`.
    pub fn transceiver_uniform(n: usize, z: f64) -> Result<Self> {
        ArrayConfig::new(
            n,
            n,
            z,
            z / 2.0,
            z / 2.0,
            ArrayMode::Transceiver,
            PositionDist::symmetric_uniform(),
            PositionDist::symmetric_uniform(),
        )
    }

    /// Virtual element count `M * N`.
    pub fn mn(&self) -> usize {
        self.m * self.n
    }

    /// Characteristic function of the virtual position `z = xi + zeta`.
    ///
    /// Independent arrays factor into the product of the per-array
    /// characteristic functions; transceivers give `psi_zeta(2u)`.
    pub fn virtual_char_fn(&self, u: f64) -> Complex64 {
        match self.mode {
            ArrayMode::Independent => self.tx_dist.char_fn(u) * self.rx_dist.char_fn(u),
            ArrayMode::Transceiver => self.rx_dist.char_fn(2.0 * u),
        }
    }
}

/// One sampled realization of the element positions.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementPositions {
    /// Transmit positions `xi_1..xi_M` (normalized units).
    pub xi: Vec<f64>,
    /// Receive positions `zeta_1..zeta_N` (normalized units).
    pub zeta: Vec<f64>,
}

impl ElementPositions {
    pub fn new(xi: Vec<f64>, zeta: Vec<f64>) -> Self {
        ElementPositions { xi, zeta }
    }

    pub fn m(&self) -> usize {
        self.xi.len()
    }

    pub fn n(&self) -> usize {
        self.zeta.len()
    }

    pub fn mn(&self) -> usize {
        self.xi.len() * self.zeta.len()
    }
}

/// Draws i.i.d. element positions. The receive draw happens first so that
/// transceiver mode copies it into the transmit slots; a fixed seed gives
/// identical positions on every call.
pub fn sample_positions(cfg: &ArrayConfig, seed: u64) -> Result<ElementPositions> {
    cfg.tx_dist.validate()?;
    cfg.rx_dist.validate()?;
    let mut rng = seeded_rng(seed);
    let zeta: Vec<f64> = (0..cfg.n).map(|_| cfg.rx_dist.sample(&mut rng)).collect();
    let xi: Vec<f64> = match cfg.mode {
        ArrayMode::Transceiver => zeta.clone(),
        ArrayMode::Independent => (0..cfg.m).map(|_| cfg.tx_dist.sample(&mut rng)).collect(),
    };
    Ok(ElementPositions { xi, zeta })
}

/// Grid of candidate directions `phi_1..phi_G` in sine-of-angle units.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    phi: Vec<f64>,
    z: f64,
    spacing: f64,
}

impl AngleGrid {
    /// Builds a grid from explicit points; must be strictly increasing,
    /// within `[-1, 1]`, with at least two points.
    pub fn from_points(phi: Vec<f64>, z: f64) -> Result<Self> {
        if phi.len() < 2 {
            return Err(Error::Config(String::from(
                "grid needs at least two points",
            )));
        }
        if !(z > 0.0) {
            return Err(Error::Config(format!(
                "aperture must be positive (got {z})"
            )));
        }
        if phi.iter().any(|p| !p.is_finite() || p.abs() > 1.0 + 1e-12) {
            return Err(Error::Config(String::from(
                "grid points must lie in [-1, 1]",
            )));
        }
        if phi.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(String::from(
                "grid points must be strictly increasing",
            )));
        }
        let spacing = phi[1] - phi[0];
        Ok(AngleGrid { phi, z, spacing })
    }

    pub fn g(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Whether the grid is uniformly spaced (relative tolerance on the
    /// nominal spacing). Uniform spacing is what makes the Gram matrix
    /// Toeplitz.
    pub fn is_uniform(&self, rel_tol: f64) -> bool {
        self.phi
            .windows(2)
            .all(|w| ((w[1] - w[0]) - self.spacing).abs() <= rel_tol * self.spacing.abs())
    }

    /// Pattern arguments `u_{1,i} = pi * Z * (phi_i - phi_1)` for all i.
    pub fn u_offsets(&self) -> Vec<f64> {
        self.phi
            .iter()
            .map(|p| PI * self.z * (p - self.phi[0]))
            .collect()
    }
}

/// The canonical grid: `2/Z`-spaced points spanning `[-1, 1]`, so
/// `G = Z + 1`. These are exactly the zeros of the uniform-position
/// characteristic function, which is what the recovery guarantees require.
pub fn canonical_grid(z: u32) -> Result<AngleGrid> {
    if z == 0 {
        return Err(Error::Config(String::from(
            "aperture must be a positive integer",
        )));
    }
    let zf = z as f64;
    let phi: Vec<f64> = (0..=z).map(|i| 2.0 * i as f64 / zf - 1.0).collect();
    Ok(AngleGrid {
        phi,
        z: zf,
        spacing: 2.0 / zf,
    })
}

/// Receive steering vector `b(theta)`: `n`-th entry `exp(j pi Z theta zeta_n)`.
pub fn steering_rx(positions: &ElementPositions, z: f64, theta: f64) -> Vec<Complex64> {
    debug_assert!(theta.abs() <= 1.0 + 1e-12);
    phase_vector(&positions.zeta, z, theta)
}

/// Transmit steering vector `c(theta)`: `m`-th entry `exp(j pi Z theta xi_m)`.
pub fn steering_tx(positions: &ElementPositions, z: f64, theta: f64) -> Vec<Complex64> {
    debug_assert!(theta.abs() <= 1.0 + 1e-12);
    phase_vector(&positions.xi, z, theta)
}

/// Virtual steering vector `a(theta) = c(theta) (x) b(theta)` of length
/// `M*N`; entry `t = N*(m-1) + n` equals `exp(j pi Z theta (xi_m + zeta_n))`.
pub fn steering_virtual(positions: &ElementPositions, z: f64, theta: f64) -> Vec<Complex64> {
    let b = steering_rx(positions, z, theta);
    let c = steering_tx(positions, z, theta);
    let mut a = Vec::with_capacity(b.len() * c.len());
    for cm in &c {
        for bn in &b {
            a.push(cm * bn);
        }
    }
    a
}

fn phase_vector(pos: &[f64], z: f64, theta: f64) -> Vec<Complex64> {
    let w = PI * z * theta;
    pos.iter()
        .map(|&p| {
            let (s, c) = (w * p).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

/// Deterministic Nyquist (filled) virtual array: receivers at
/// half-wavelength steps and transmitters at `N` half-wavelength steps,
/// with the matching `G = MN` uniform grid. The resulting dictionary has
/// orthogonal columns (`A^H A = MN I`), the baseline the random arrays are
/// compared against.
pub fn nyquist_virtual_array(m: usize, n: usize) -> (ElementPositions, AngleGrid) {
    let mn = m * n;
    let z = mn as f64;
    let zeta: Vec<f64> = (0..n)
        .map(|i| (i as f64 - (n as f64 - 1.0) / 2.0) / z)
        .collect();
    let xi: Vec<f64> = (0..m)
        .map(|i| (i as f64 - (m as f64 - 1.0) / 2.0) * n as f64 / z)
        .collect();
    let phi: Vec<f64> = (0..mn).map(|g| 2.0 * g as f64 / mn as f64 - 1.0).collect();
    let spacing = 2.0 / mn as f64;
    (ElementPositions { xi, zeta }, AngleGrid { phi, z, spacing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;

    #[test]
    fn canonical_grid_paper_scale() {
        let grid = canonical_grid(250).unwrap();
        assert_eq!(grid.g(), 251);
        assert!((grid.spacing() - 0.008).abs() < 1e-15);
        assert_eq!(grid.phi()[0], -1.0);
        assert_eq!(*grid.phi().last().unwrap(), 1.0);
    }

    #[test]
    fn canonical_grid_small_cases() {
        let g1 = canonical_grid(1).unwrap();
        assert_eq!(g1.phi(), &[-1.0, 1.0]);
        let g50 = canonical_grid(50).unwrap();
        assert_eq!(g50.g(), 51);
        assert!(g50.phi()[25].abs() < 1e-15);
        assert!(canonical_grid(0).is_err());
    }

    #[test]
    fn canonical_grid_offsets_hit_multiples_of_two_pi() {
        let grid = canonical_grid(50).unwrap();
        for (i, u) in grid.u_offsets().iter().enumerate() {
            let expect = 2.0 * PI * i as f64;
            assert!((u - expect).abs() <= 1e-9, "i={i}: {u} vs {expect}");
        }
    }

    #[test]
    fn sample_positions_within_support_and_reproducible() {
        let cfg = ArrayConfig::independent_uniform(4, 4, 10.0).unwrap();
        let p1 = sample_positions(&cfg, 99).unwrap();
        let p2 = sample_positions(&cfg, 99).unwrap();
        assert_eq!(p1, p2);
        assert!(p1.xi.iter().chain(&p1.zeta).all(|x| x.abs() <= 0.5));
        assert_eq!(p1.m(), 4);
        assert_eq!(p1.n(), 4);
    }

    #[test]
    fn transceiver_copies_receive_draw() {
        let cfg = ArrayConfig::transceiver_uniform(3, 8.0).unwrap();
        let p = sample_positions(&cfg, 5).unwrap();
        assert_eq!(p.xi, p.zeta);
    }

    #[test]
    fn transceiver_requires_matching_shape() {
        let err = ArrayConfig::new(
            2,
            3,
            8.0,
            4.0,
            4.0,
            ArrayMode::Transceiver,
            PositionDist::symmetric_uniform(),
            PositionDist::symmetric_uniform(),
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn config_rejects_support_violation() {
        // Uniform on [-1/2, 1/2] does not fit a z_tx = z/4 slot.
        let err = ArrayConfig::new(
            2,
            2,
            8.0,
            2.0,
            6.0,
            ArrayMode::Independent,
            PositionDist::symmetric_uniform(),
            PositionDist::symmetric_uniform(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn large_sample_mean_near_zero() {
        // CLT check: mean of 2000 uniforms within 3 sigma / sqrt(n).
        let cfg = ArrayConfig::independent_uniform(2000, 2000, 100.0).unwrap();
        let p = sample_positions(&cfg, 12345).unwrap();
        let mean: f64 = p.xi.iter().sum::<f64>() / 2000.0;
        let bound = 3.0 * (1.0 / 12f64.sqrt()) / (2000f64).sqrt();
        assert!(mean.abs() < bound, "{mean} vs {bound}");
    }

    #[test]
    fn steering_basics() {
        let pos = ElementPositions::new(alloc::vec![0.25], alloc::vec![-0.5, 0.5]);
        // theta = 0 gives all ones.
        assert!(steering_virtual(&pos, 4.0, 0.0)
            .iter()
            .all(|z| (z - 1.0).norm() < 1e-15));
        // Analytic values: Z=2, theta=0.5, zeta = -+1/2 -> exp(-+j pi/2).
        let b = steering_rx(&pos, 2.0, 0.5);
        assert!((b[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((b[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        // M=1, xi=0.25, Z=4, theta=1 -> exp(j pi) = -1.
        let c = steering_tx(&pos, 4.0, 1.0);
        assert!((c[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn steering_unit_modulus_and_norm() {
        let cfg = ArrayConfig::independent_uniform(5, 3, 12.0).unwrap();
        let pos = sample_positions(&cfg, 2).unwrap();
        let a = steering_virtual(&pos, 12.0, 0.37);
        assert_eq!(a.len(), 15);
        for z in &a {
            assert!((z.norm() - 1.0).abs() < 1e-14);
        }
        let norm = vec_norm(&a);
        assert!((norm * norm - 15.0).abs() < 1e-12);
    }

    #[test]
    fn kronecker_ordering_and_identity() {
        let cfg = ArrayConfig::independent_uniform(2, 2, 6.0).unwrap();
        for seed in 0..100u64 {
            let pos = sample_positions(&cfg, seed).unwrap();
            let theta = ((seed as f64) / 50.0) - 1.0;
            let a = steering_virtual(&pos, 6.0, theta);
            let b = steering_rx(&pos, 6.0, theta);
            let c = steering_tx(&pos, 6.0, theta);
            for m in 0..2 {
                for n in 0..2 {
                    // t = N*(m-1) + n in 1-based indexing.
                    let t = 2 * m + n;
                    assert!((a[t] - c[m] * b[n]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn transceiver_steering_matches() {
        let cfg = ArrayConfig::transceiver_uniform(3, 9.0).unwrap();
        let pos = sample_positions(&cfg, 77).unwrap();
        let b = steering_rx(&pos, 9.0, 0.4);
        let c = steering_tx(&pos, 9.0, 0.4);
        assert_eq!(b, c);
    }

    #[test]
    fn char_fn_uniform_is_sinc() {
        let d = PositionDist::symmetric_uniform();
        // psi(2 pi) = sin(pi)/pi = 0.
        assert!(d.char_fn(2.0 * PI).norm() < 1e-15);
        assert!((d.char_fn(0.0).re - 1.0).abs() < 1e-15);
        // psi(pi) = 2/pi.
        assert!((d.char_fn(PI).re - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn nyquist_array_positions_fit_intervals() {
        let (pos, grid) = nyquist_virtual_array(3, 4);
        assert_eq!(grid.g(), 12);
        assert!(pos.xi.iter().all(|x| x.abs() <= 0.5));
        assert!(pos.zeta.iter().all(|x| x.abs() <= 0.5));
    }
}
