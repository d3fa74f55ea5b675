//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by noise models, quadrature, the sampler and diagnostics.
#[derive(Error, Debug)]
pub enum Error {
    /// A parameter was outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Density requested for a variant that has no Lebesgue density.
    #[error("no density: {0} is a point-mass / discrete noise model")]
    NoDensity(&'static str),

    /// Continuous-density operation called on a discrete variant.
    #[error("use mass function: {0} is discrete")]
    UseMassFunction(&'static str),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: residual estimate {residual:.3e}")]
    QuadratureNonConvergence { residual: f64 },

    /// Optimizer maximum landed on a range boundary.
    #[error("boundary optimum at ell = {ell:.6}: widen the search range")]
    BoundaryOptimum { ell: f64 },

    /// Cholesky factorization failed even after jitter repair.
    #[error("Cholesky factorization failed: {0}")]
    Cholesky(String),

    /// The target estimator returned NaN.
    #[error("estimator returned NaN at iteration {iter}")]
    NanEstimate { iter: usize },

    /// Chain initialization saw a -inf estimate at the starting point.
    #[error("initial log-target estimate is -inf; choose a different starting point")]
    BadInitialPoint,

    /// Series too short / constant for ESS estimation.
    #[error("degenerate series: {0}")]
    DegenerateSeries(&'static str),

    /// Efficiency table input was empty or inconsistent.
    #[error("invalid table input: {0}")]
    InvalidTable(String),

    /// Theorem-certificate assertion failed.
    #[error("certificate violation for {noise}: ratio J({ell1:.4})/J({ell2:.4}) = {ratio:.4}")]
    CertificateViolation {
        noise: String,
        ell1: f64,
        ell2: f64,
        ratio: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// Malformed input file (empirical-noise CSV, config, ...).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
