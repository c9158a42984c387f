//! Seeded randomness helpers.
//!
//! Everything downstream takes a `u64` seed; the generator is ChaCha8 so
//! streams are identical across platforms and builds.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard normal pair via Box-Muller. Consumes exactly two uniforms.
pub fn standard_normal_pair(rng: &mut impl Rng) -> (f64, f64) {
    // gen::<f64>() is in [0,1); flip so the log argument is in (0,1].
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * core::f64::consts::PI * u2).sin_cos();
    (r * c, r * s)
}

/// Circular complex Gaussian with per-sample variance `sigma^2`
/// (real and imaginary parts each have variance `sigma^2 / 2`).
pub fn complex_normal(rng: &mut impl Rng, sigma: f64) -> Complex64 {
    let (a, b) = standard_normal_pair(rng);
    let s = sigma / core::f64::consts::SQRT_2;
    Complex64::new(a * s, b * s)
}

/// `k` distinct indices drawn uniformly from `0..g`, returned sorted.
/// Floyd's algorithm, so the draw count is exactly `k`.
pub fn sample_distinct(rng: &mut impl Rng, g: usize, k: usize) -> Vec<usize> {
    debug_assert!(k <= g);
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for j in (g - k)..g {
        let t = rng.gen_range(0..=j);
        if chosen.contains(&t) {
            chosen.push(j);
        } else {
            chosen.push(t);
        }
    }
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_streams() {
        let a: Vec<f64> = {
            let mut rng = seeded_rng(42);
            (0..8).map(|_| rng.gen()).collect()
        };
        let b: Vec<f64> = {
            let mut rng = seeded_rng(42);
            (0..8).map(|_| rng.gen()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn complex_normal_moments() {
        let mut rng = seeded_rng(7);
        let sigma = 0.3;
        let n = 200_000;
        let mut p = 0.0;
        for _ in 0..n {
            p += complex_normal(&mut rng, sigma).norm_sqr();
        }
        let mean_power = p / n as f64;
        assert!((mean_power - sigma * sigma).abs() < 0.02 * sigma * sigma);
    }

    #[test]
    fn distinct_sample_properties() {
        let mut rng = seeded_rng(3);
        for _ in 0..200 {
            let s = sample_distinct(&mut rng, 17, 5);
            assert_eq!(s.len(), 5);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&i| i < 17));
        }
        assert!(sample_distinct(&mut rng, 4, 4) == alloc::vec![0, 1, 2, 3]);
        assert!(sample_distinct(&mut rng, 9, 0).is_empty());
    }
}
