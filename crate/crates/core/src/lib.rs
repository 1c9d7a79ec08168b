//! Universal lossy compression of discrete sequences by simulated-annealing
//! Gibbs sampling.
//!
//! A source block `x` is quantized to a reconstruction `y` that minimizes the
//! fixed-slope energy `n * (H_k(y) + alpha * d_n(x, y))`, where `H_k` is the
//! conditional empirical entropy of order `k`. The reconstruction is then
//! described losslessly (LZ78 or an enumerative code). The same machinery
//! searches over sliding-block codes and drives a compression-based
//! universal denoiser.
//!
//! Module map:
//!
//! - [`context`]: count matrices and incremental conditional entropy.
//! - [`energy`]: distortion measures and the annealing energy.
//! - [`anneal`]: cooling schedules, the block Gibbs sampler and the
//!   exhaustive-search oracle.
//! - [`sliding`]: sliding-block codes and their annealer.
//! - [`lossless`]: LZ78 codec and the enumerative code length.
//! - [`denoise`]: difference distortion, slope search, de-randomization and
//!   the forward-backward Bayes reference.
//! - [`sources`]: synthetic sources, channels and analytic reference curves.
//! - [`pbm`], [`config`], [`archive`], [`harness`]: file formats and the
//!   experiment harness behind the `mcmc-lossy` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anneal;
pub mod archive;
pub mod config;
pub mod context;
pub mod denoise;
pub mod energy;
pub mod error;
pub mod harness;
pub mod lossless;
pub mod pbm;
pub mod rng;
pub mod sliding;
pub mod sources;

pub use error::{Error, Result};

/// A symbol of a finite alphabet `{0, .., alphabet_size - 1}`.
pub type Symbol = u8;
