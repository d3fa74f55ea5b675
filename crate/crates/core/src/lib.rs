//! Pseudo-marginal random walk Metropolis: the sampler, its limiting
//! efficiency theory, and an importance-sampling GP logistic regression
//! simulation study.
//!
//! The crate is organized around the additive noise `W` in the log-target
//! estimate:
//!
//! * [`noise`] — distributions of the proposal-time noise `W*` under the
//!   unbiasedness convention `E[e^{W*}] = 1`, the stationary noise `W`, and
//!   the difference `B = W* - W`.
//! * [`theory`] — the limiting expected squared jumping distance
//!   `J(ℓ) = 2ℓ²E[Φ(B/ℓ - ℓ/2)]`, optimal scalings, and numerical
//!   certificates for the insensitivity theorem and its supporting lemma.
//! * [`sampler`] — a generic pseudo-marginal RWM chain over any stochastic
//!   log-target estimator.
//! * [`gp`] — binomial observations of a latent Gaussian process and the
//!   importance-sampling log-posterior estimator used in the study.
//! * [`diagnostics`] — ESS (Geyer initial-sequence), empirical ESJD,
//!   noise-distribution studies and relative-efficiency tables.
//! * [`experiment`] — the configuration-driven (m, λ) grid harness and the
//!   CSV artifact writers behind the CLI.
//!
//! Grid scans run data-parallel via rayon by default; build with
//! `--no-default-features` for a fully sequential library.

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod gp;
pub mod math;
pub mod noise;
pub mod parallel;
pub mod sampler;
pub mod theory;

pub use error::{Error, Result};
pub use noise::NoiseModel;
