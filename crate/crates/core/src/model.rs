//! Measurement model: dictionary matrix, sparse scenes, noisy snapshots
//! `Y = A X + E`, and a waveform-domain consistency check of the
//! matched-filter front end.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{steering_virtual, AngleGrid, ArrayConfig, ElementPositions};
use crate::linalg::CMat;
use crate::random::{complex_normal, sample_distinct, seeded_rng};

/// Where a measurement matrix came from; absent for matrices read back
/// from files.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProvenance {
    pub config: ArrayConfig,
    pub positions: ElementPositions,
}

/// The `MN x G` dictionary whose g-th column is the virtual steering
/// vector at grid point `phi_g`. Raw columns have squared norm `MN`;
/// normalized columns have unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementMatrix {
    entries: CMat,
    m: usize,
    n: usize,
    normalized: bool,
    grid: AngleGrid,
    provenance: Option<MatrixProvenance>,
}

impl MeasurementMatrix {
    /// Reassembles a matrix from its parts (deserialization path).
    pub fn from_parts(
        entries: CMat,
        m: usize,
        n: usize,
        normalized: bool,
        grid: AngleGrid,
    ) -> Result<Self> {
        if entries.rows() != m * n || entries.cols() != grid.g() {
            return Err(Error::Config(format!(
                "matrix is {}x{}, expected {}x{}",
                entries.rows(),
                entries.cols(),
                m * n,
                grid.g()
            )));
        }
        Ok(MeasurementMatrix {
            entries,
            m,
            n,
            normalized,
            grid,
            provenance: None,
        })
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mn(&self) -> usize {
        self.m * self.n
    }

    pub fn g(&self) -> usize {
        self.grid.g()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn provenance(&self) -> Option<&MatrixProvenance> {
        self.provenance.as_ref()
    }

    pub fn column(&self, g: usize) -> &[Complex64] {
        self.entries.col(g)
    }

    /// Returns a column-normalized copy (no-op if already normalized).
    pub fn normalized_copy(&self) -> MeasurementMatrix {
        if self.normalized {
            return self.clone();
        }
        let mut entries = self.entries.clone();
        let scale = 1.0 / (self.mn() as f64).sqrt();
        entries.scale(scale);
        MeasurementMatrix {
            entries,
            m: self.m,
            n: self.n,
            normalized: true,
            grid: self.grid.clone(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Builds the dictionary from a position realization and a grid. With
/// `normalized` the columns are scaled by `1/sqrt(MN)` to unit norm, the
/// convention the solvers consume.
pub fn build_matrix(
    cfg: &ArrayConfig,
    positions: &ElementPositions,
    grid: &AngleGrid,
    normalized: bool,
) -> MeasurementMatrix {
    debug_assert_eq!(positions.m(), cfg.m);
    debug_assert_eq!(positions.n(), cfg.n);
    let scale = if normalized {
        1.0 / (cfg.mn() as f64).sqrt()
    } else {
        1.0
    };
    let cols: Vec<Vec<Complex64>> = grid
        .phi()
        .iter()
        .map(|&phi| {
            let mut col = steering_virtual(positions, cfg.z, phi);
            if normalized {
                for z in &mut col {
                    *z *= scale;
                }
            }
            col
        })
        .collect();
    MeasurementMatrix {
        entries: CMat::from_columns(&cols),
        m: cfg.m,
        n: cfg.n,
        normalized,
        grid: grid.clone(),
        provenance: Some(MatrixProvenance {
            config: cfg.clone(),
            positions: positions.clone(),
        }),
    }
}

/// A K-sparse scene: which grid cells hold targets and their per-pulse
/// gains. Gains follow a Swerling II model: unit modulus with phases
/// i.i.d. uniform, drawn independently for every pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    /// Sorted, distinct grid indices (0-based).
    pub support: Vec<usize>,
    /// `K x P` gains, row k belonging to `support[k]`.
    pub gains: CMat,
}

impl Scene {
    pub fn new(support: Vec<usize>, gains: CMat) -> Result<Self> {
        if support.len() != gains.rows() {
            return Err(Error::Config(String::from(
                "support/gain row count mismatch",
            )));
        }
        if support.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(String::from(
                "support must be sorted and distinct",
            )));
        }
        Ok(Scene { support, gains })
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn p(&self) -> usize {
        self.gains.cols()
    }

    /// Expands to the full `G x P` gain matrix with zero rows off support.
    pub fn full_gains(&self, g: usize) -> CMat {
        let mut x = CMat::zeros(g, self.gains.cols());
        for (k, &row) in self.support.iter().enumerate() {
            for p in 0..self.gains.cols() {
                x.set(row, p, self.gains.at(k, p));
            }
        }
        x
    }
}

/// Draws a scene: support uniform without replacement from `0..g`, gains
/// `exp(-j phase)` with phases i.i.d. uniform over `[0, 2 pi)` per target
/// and pulse.
pub fn synthesize_scene(g: usize, k: usize, p: usize, seed: u64) -> Result<Scene> {
    if k > g {
        return Err(Error::Config(format!("sparsity {k} exceeds grid size {g}")));
    }
    if p == 0 {
        return Err(Error::Config(String::from(
            "pulse count must be at least 1",
        )));
    }
    let mut rng = seeded_rng(seed);
    let support = sample_distinct(&mut rng, g, k);
    let gains = CMat::from_fn(k, p, |_, _| {
        let phase = 2.0 * PI * rng.gen::<f64>();
        let (s, c) = phase.sin_cos();
        Complex64::new(c, -s)
    });
    Ok(Scene { support, gains })
}

/// Noise standard deviation per complex entry from the SNR convention
/// `SNR = -10 log10(sigma^2)`.
pub fn sigma_from_snr(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 20.0)
}

/// Observed snapshots together with the noise level that generated them.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotData {
    /// `MN x P` observations.
    pub y: CMat,
    /// Per-entry complex noise standard deviation.
    pub sigma: f64,
    /// `-20 log10(sigma)`; infinite when sigma = 0.
    pub snr_db: f64,
}

/// Generates `Y = A X + E` with `E` i.i.d. circular complex Gaussian of
/// per-entry variance `sigma^2`. Noise is drawn column by column, so the
/// stream is a pure function of the seed.
pub fn observe(
    a: &MeasurementMatrix,
    scene: &Scene,
    sigma: f64,
    seed: u64,
) -> Result<SnapshotData> {
    if scene.support.iter().any(|&s| s >= a.g()) {
        return Err(Error::Config(String::from(
            "scene support outside the grid",
        )));
    }
    if sigma < 0.0 {
        return Err(Error::Config(String::from(
            "noise level must be nonnegative",
        )));
    }
    let mn = a.mn();
    let p = scene.p();
    let mut y = CMat::zeros(mn, p);
    for (k, &g) in scene.support.iter().enumerate() {
        let col = a.column(g);
        for pulse in 0..p {
            let gain = scene.gains.at(k, pulse);
            let yc = y.col_mut(pulse);
            for (yi, ai) in yc.iter_mut().zip(col) {
                *yi += ai * gain;
            }
        }
    }
    if sigma > 0.0 {
        let mut rng = seeded_rng(seed);
        for pulse in 0..p {
            let yc = y.col_mut(pulse);
            for yi in yc.iter_mut() {
                *yi += complex_normal(&mut rng, sigma);
            }
        }
    }
    let snr_db = if sigma > 0.0 {
        -20.0 * sigma.log10()
    } else {
        f64::INFINITY
    };
    Ok(SnapshotData { y, sigma, snr_db })
}

/// The `M x M` code matrix whose rows are the probing waveforms, one
/// symbol per column. Rows of the Fourier matrix; with `normalized` they
/// are scaled by `1/sqrt(M)` so the waveform Gram is exactly the identity.
pub fn fourier_codes(m: usize, normalized: bool) -> CMat {
    let scale = if normalized {
        1.0 / (m as f64).sqrt()
    } else {
        1.0
    };
    CMat::from_fn(m, m, |row, col| {
        let phase = -2.0 * PI * (row as f64) * (col as f64) / m as f64;
        let (s, c) = phase.sin_cos();
        Complex64::new(c * scale, s * scale)
    })
}

/// Synthesizes the received pulse train sample by sample, pushes it
/// through the matched-filter bank, and returns the maximum deviation
/// from the direct product `A X`. Checks that the code Gram is the
/// identity first and reports the offending deviation if not.
pub fn waveform_roundtrip_check(
    codes: &CMat,
    scene: &Scene,
    positions: &ElementPositions,
    z: f64,
    grid: &AngleGrid,
) -> Result<f64> {
    let m = positions.m();
    if codes.rows() != m || codes.cols() != m {
        return Err(Error::Config(format!(
            "code matrix is {}x{}, expected {m}x{m}",
            codes.rows(),
            codes.cols()
        )));
    }
    // W = S S^H must be the identity for the matched filter to hand back AX.
    let gram = codes.mul_mat(&codes.conj_transpose());
    let mut dev = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let expect = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            dev = dev.max((gram.at(i, j) - expect).norm());
        }
    }
    if dev > 1e-10 {
        return Err(Error::Numerical(format!(
            "waveform gram deviates from identity by {dev:.6e}; codes must be orthonormal"
        )));
    }

    let n = positions.n();
    let p = scene.p();
    let mut worst = 0.0f64;
    for pulse in 0..p {
        // Received block R: N sensors x M symbols, noise free, zero delay.
        let mut received = CMat::zeros(n, m);
        for (k, &gidx) in scene.support.iter().enumerate() {
            let theta = grid.phi()[gidx];
            let b = crate::geometry::steering_rx(positions, z, theta);
            let c = crate::geometry::steering_tx(positions, z, theta);
            let gain = scene.gains.at(k, pulse);
            for j in 0..m {
                // (c^T s)(j): transmit mix of symbol j across waveforms.
                let mut mix = Complex64::new(0.0, 0.0);
                for (cm, srow) in c.iter().zip(0..m) {
                    mix += cm * codes.at(srow, j);
                }
                for i in 0..n {
                    let v = received.at(i, j) + gain * b[i] * mix;
                    received.set(i, j, v);
                }
            }
        }
        // Matched filter: Y_p = R S^H, then stack columns (t = N(m-1)+n).
        let filtered = received.mul_mat(&codes.conj_transpose());
        // Reference: the model product A X restricted to this pulse.
        let mut reference = alloc::vec![Complex64::new(0.0, 0.0); m * n];
        for (k, &gidx) in scene.support.iter().enumerate() {
            let a = steering_virtual(positions, z, grid.phi()[gidx]);
            let gain = scene.gains.at(k, pulse);
            for (r, av) in reference.iter_mut().zip(&a) {
                *r += av * gain;
            }
        }
        for wf in 0..m {
            for sensor in 0..n {
                let t = wf * n + sensor;
                let d = (filtered.at(sensor, wf) - reference[t]).norm();
                worst = worst.max(d);
            }
        }
    }
    Ok(worst)
}
