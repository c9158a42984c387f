//! Spatial compressive sensing for MIMO radar direction-of-arrival estimation.
//!
//! A colocated MIMO radar with `M` transmitters and `N` receivers placed at
//! random over a fixed aperture synthesizes an `MN`-element virtual array.
//! Targets on a sine-of-angle grid of `G` points turn direction finding into
//! recovery of a `K`-sparse gain matrix `X` from snapshots `Y = AX + E`,
//! where `A` is the `MN x G` dictionary of virtual steering vectors.
//!
//! The crate provides:
//!
//! - [`geometry`]: random element placement, angle grids, steering vectors;
//! - [`model`]: dictionary construction, scene synthesis, noisy snapshots,
//!   and a waveform-domain consistency check of the matched-filter model;
//! - [`pattern_stats`]: the random array pattern, its analytic mean and
//!   variances, Gram/coherence statistics;
//! - [`bounds`]: coherence ccdf bounds, element-count guarantees, and the
//!   isotropy test, with the special functions they need;
//! - [`recovery`]: beamforming, greedy pursuits, CoSaMP, FOCUSS, LASSO,
//!   MUSIC, RA-ORMP, multi-branch matching pursuit, and an exhaustive
//!   l0 oracle behind a common interface;
//! - [`linalg`]: the dense complex kernels the above are built on.
//!
//! The crate is `no_std` (with `alloc`); all randomness is seeded and every
//! operation is a pure function of its inputs.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod model;
pub mod pattern_stats;
pub mod random;
pub mod recovery;

pub use error::{Error, Result};
