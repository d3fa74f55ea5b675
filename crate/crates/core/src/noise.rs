//! Distributions of the additive noise `W*` in the log-target estimate.
//!
//! Every model obeys the unbiasedness convention `E[e^{W*}] = 1` (the
//! constant `c` is normalized away). Besides the proposal-time noise `W*`
//! with density `g(w)`, the module exposes the stationary-chain noise `W`
//! with density `e^w g(w)` and the difference `B = W* - W`, whose density
//! `ρ(b)` and symmetrized tilt `h(b) = e^{b/2} ρ(b)` drive the efficiency
//! theory.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::math::{integrate_segmented, std_exp, std_normal, uniform01, LN_SQRT_2PI};

/// Absolute tolerance for the adaptive quadratures in this module.
const QUAD_TOL: f64 = 1e-10;
const QUAD_SEGMENTS: usize = 24;

/// User-supplied continuous log-density with finite declared support.
pub struct CustomDensity {
    log_g: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    support: (f64, f64),
    sup_g: f64,
    sup_tilted: f64,
}

impl CustomDensity {
    fn log_g(&self, w: f64) -> f64 {
        if w < self.support.0 || w > self.support.1 {
            f64::NEG_INFINITY
        } else {
            (self.log_g)(w)
        }
    }
}

/// A distribution for the additive log-noise `W*` with `E[e^{W*}] = 1`.
#[derive(Clone)]
pub enum NoiseModel {
    /// Exact target evaluations: `W* ≡ 0`.
    NoNoise,
    /// `W* ~ N(-σ²/2, σ²)`; the location is forced by unbiasedness.
    Gaussian { sigma: f64 },
    /// Laplace with scale in (0,1) and location `log(1 - scale²)`, forced by
    /// its moment generating function at 1.
    Laplace { scale: f64 },
    /// Discrete multiplicative noise `e^{W*} ∈ {ε, a}` with `P(ε) = p*` and
    /// `a = (1 - p*ε)/(1 - p*)` chosen for unbiasedness.
    TwoPoint { epsilon: f64, p_star: f64 },
    /// A recorded sample of `W*` draws; stationary draws use self-normalized
    /// `e^{w_i}` resampling so the unknown constant cancels.
    Empirical {
        samples: Arc<Vec<f64>>,
        stationary_cdf: Arc<Vec<f64>>,
    },
    /// Arbitrary continuous log-density on a finite declared support.
    Custom(Arc<CustomDensity>),
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseModel::NoNoise => write!(f, "nonoise"),
            NoiseModel::Gaussian { sigma } => write!(f, "gaussian(sigma={sigma})"),
            NoiseModel::Laplace { scale } => write!(f, "laplace(scale={scale})"),
            NoiseModel::TwoPoint { epsilon, p_star } => {
                write!(f, "twopoint(eps={epsilon},pstar={p_star})")
            }
            NoiseModel::Empirical { samples, .. } => write!(f, "empirical(n={})", samples.len()),
            NoiseModel::Custom(_) => write!(f, "custom"),
        }
    }
}

impl fmt::Debug for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NoiseModel({self})")
    }
}

impl NoiseModel {
    /// Gaussian noise with std-dev `sigma >= 0`; `sigma = 0` collapses to
    /// [`NoiseModel::NoNoise`].
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::Domain(format!("gaussian sigma must be >= 0, got {sigma}")));
        }
        if sigma == 0.0 {
            return Ok(NoiseModel::NoNoise);
        }
        Ok(NoiseModel::Gaussian { sigma })
    }

    /// Laplace noise; `scale` must lie in (0,1) or `E[e^{W*}]` diverges.
    pub fn laplace(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale < 1.0) {
            return Err(Error::Domain(format!(
                "laplace scale must be in (0,1), got {scale}"
            )));
        }
        Ok(NoiseModel::Laplace { scale })
    }

    pub fn two_point(epsilon: f64, p_star: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) || !(p_star > 0.0 && p_star < 1.0) {
            return Err(Error::Domain(format!(
                "two-point parameters must be in (0,1), got eps={epsilon}, pstar={p_star}"
            )));
        }
        Ok(NoiseModel::TwoPoint { epsilon, p_star })
    }

    /// Empirical model from recorded `W*` draws.
    pub fn empirical(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("empirical noise needs at least one sample".into()));
        }
        if samples.iter().any(|w| !w.is_finite()) {
            return Err(Error::Domain("empirical samples must be finite".into()));
        }
        // Self-normalized cumulative e^{w_i} weights for stationary resampling.
        let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut cdf = Vec::with_capacity(samples.len());
        let mut acc = 0.0;
        for &w in &samples {
            acc += (w - max).exp();
            cdf.push(acc);
        }
        let total = acc;
        for c in &mut cdf {
            *c /= total;
        }
        Ok(NoiseModel::Empirical {
            samples: Arc::new(samples),
            stationary_cdf: Arc::new(cdf),
        })
    }

    /// Empirical model from a one-column CSV of `W*` draws (header `w_star`).
    pub fn empirical_from_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "w_star" => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected header 'w_star', got {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut samples = Vec::new();
        for (i, line) in lines.enumerate() {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let w: f64 = t
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad value {t:?}", i + 2)))?;
            samples.push(w);
        }
        Self::empirical(samples)
    }

    /// Custom continuous log-density on `[lo, hi]`. The density is checked
    /// for the unbiasedness normalization at construction.
    pub fn custom<F>(log_g: F, lo: f64, hi: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(
                "custom noise needs finite support bounds lo < hi".into(),
            ));
        }
        // Scan for density suprema; these bound the rejection sampler.
        let n = 4096;
        let step = (hi - lo) / n as f64;
        let mut sup_g = 0.0f64;
        let mut sup_tilted = 0.0f64;
        for i in 0..=n {
            let w = lo + i as f64 * step;
            let g = log_g(w).exp();
            sup_g = sup_g.max(g);
            sup_tilted = sup_tilted.max(g * w.exp());
        }
        if sup_g == 0.0 {
            return Err(Error::Domain("custom log-density is -inf everywhere".into()));
        }
        let model = NoiseModel::Custom(Arc::new(CustomDensity {
            log_g: Box::new(log_g),
            support: (lo, hi),
            sup_g,
            sup_tilted,
        }));
        let resid = model.unbiasedness_residual()?;
        if resid > 1e-8 {
            return Err(Error::Domain(format!(
                "custom density violates E[e^W*] = 1 by {resid:.3e}"
            )));
        }
        Ok(model)
    }

    /// `a = (1 - p*ε)/(1 - p*)`, the large multiplicative outcome.
    pub fn two_point_a(epsilon: f64, p_star: f64) -> f64 {
        (1.0 - p_star * epsilon) / (1.0 - p_star)
    }

    /// `k = log a - log ε > 0`, the log-gap of the two-point model.
    pub fn two_point_k(epsilon: f64, p_star: f64) -> f64 {
        Self::two_point_a(epsilon, p_star).ln() - epsilon.ln()
    }

    pub fn is_continuous(&self) -> bool {
        matches!(
            self,
            NoiseModel::Gaussian { .. } | NoiseModel::Laplace { .. } | NoiseModel::Custom(_)
        )
    }

    /// Whether `g` is log-concave: `Some(true)` for Gaussian, Laplace and the
    /// degenerate no-noise case, `Some(false)` for the discrete two-point
    /// model, `None` (unknown) for empirical and custom densities.
    pub fn log_concave(&self) -> Option<bool> {
        match self {
            NoiseModel::NoNoise | NoiseModel::Gaussian { .. } | NoiseModel::Laplace { .. } => {
                Some(true)
            }
            NoiseModel::TwoPoint { .. } => Some(false),
            NoiseModel::Empirical { .. } | NoiseModel::Custom(_) => None,
        }
    }

    fn variant_name(&self) -> &'static str {
        match self {
            NoiseModel::NoNoise => "NoNoise",
            NoiseModel::Gaussian { .. } => "Gaussian",
            NoiseModel::Laplace { .. } => "Laplace",
            NoiseModel::TwoPoint { .. } => "TwoPoint",
            NoiseModel::Empirical { .. } => "Empirical",
            NoiseModel::Custom(_) => "Custom",
        }
    }

    /// Laplace location `log(1 - scale²)`.
    fn laplace_location(scale: f64) -> f64 {
        (1.0 - scale * scale).ln()
    }

    /// Log-density of `W*` for continuous variants; `-inf` outside support.
    fn log_g_raw(&self, w: f64) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => {
                let z = (w + 0.5 * sigma * sigma) / sigma;
                -0.5 * z * z - LN_SQRT_2PI - sigma.ln()
            }
            NoiseModel::Laplace { scale } => {
                let m = Self::laplace_location(*scale);
                -(w - m).abs() / scale - (2.0 * scale).ln()
            }
            NoiseModel::Custom(c) => c.log_g(w),
            _ => f64::NEG_INFINITY,
        }
    }

    /// Log of the proposal-noise density `g(w)`.
    ///
    /// Errors for point-mass / discrete variants; `w` outside a declared
    /// support returns `-inf` by convention.
    pub fn log_g(&self, w: f64) -> Result<f64> {
        if !self.is_continuous() {
            return Err(Error::NoDensity(self.variant_name()));
        }
        Ok(self.log_g_raw(w))
    }

    /// Interval outside which both `g(w)` and `e^w g(w)` are negligible
    /// (far below 1e-14 of their peaks); quadratures truncate here.
    pub fn support_hint(&self) -> Result<(f64, f64)> {
        match self {
            NoiseModel::Gaussian { sigma } => {
                let half = 0.5 * sigma * sigma;
                Ok((-half - 12.0 * sigma, half + 12.0 * sigma))
            }
            NoiseModel::Laplace { scale } => {
                let m = Self::laplace_location(*scale);
                // Tilted density decays at rate 1/scale - 1 on the right.
                Ok((m - 40.0 * scale, m + 40.0 * scale / (1.0 - scale)))
            }
            NoiseModel::Custom(c) => Ok(c.support),
            _ => Err(Error::NoDensity(self.variant_name())),
        }
    }

    /// Supremum of the proposal-noise density `g`.
    pub fn density_sup(&self) -> Result<f64> {
        match self {
            NoiseModel::Gaussian { sigma } => Ok(1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt())),
            NoiseModel::Laplace { scale } => Ok(1.0 / (2.0 * scale)),
            NoiseModel::Custom(c) => Ok(c.sup_g),
            _ => Err(Error::NoDensity(self.variant_name())),
        }
    }

    /// `|∫ e^w g(w) dw - 1|` by quadrature for continuous variants; exact
    /// algebra for the no-noise and two-point variants.
    pub fn unbiasedness_residual(&self) -> Result<f64> {
        match self {
            NoiseModel::NoNoise => Ok(0.0),
            NoiseModel::TwoPoint { epsilon, p_star } => {
                let a = Self::two_point_a(*epsilon, *p_star);
                Ok((epsilon * p_star + a * (1.0 - p_star) - 1.0).abs())
            }
            NoiseModel::Empirical { .. } => Err(Error::Domain(
                "empirical samples carry an unknown constant; unbiasedness is not checkable".into(),
            )),
            _ => {
                let (lo, hi) = self.support_hint()?;
                let mass = integrate_segmented(
                    &|w| (w + self.log_g_raw(w)).exp(),
                    lo,
                    hi,
                    QUAD_TOL,
                    QUAD_SEGMENTS,
                )?;
                Ok((mass - 1.0).abs())
            }
        }
    }

    /// Draw the proposal-time noise `W* ~ g` (`stationary = false`) or the
    /// stationary-chain noise `W ~ e^w g(w)` (`stationary = true`).
    pub fn sample_noise(&self, rng: &mut dyn RngCore, stationary: bool) -> f64 {
        match self {
            NoiseModel::NoNoise => 0.0,
            NoiseModel::Gaussian { sigma } => {
                let loc = if stationary { 0.5 } else { -0.5 } * sigma * sigma;
                loc + sigma * std_normal(rng)
            }
            NoiseModel::Laplace { scale } => {
                let m = Self::laplace_location(*scale);
                if stationary {
                    // e^w g(w) is a two-piece exponential around m with
                    // left rate (1 + scale)/scale, right rate (1 - scale)/scale
                    // and left mass (1 - scale)/2.
                    let left_mass = 0.5 * (1.0 - scale);
                    if uniform01(rng) < left_mass {
                        m - std_exp(rng) * scale / (1.0 + scale)
                    } else {
                        m + std_exp(rng) * scale / (1.0 - scale)
                    }
                } else {
                    let u = uniform01(rng);
                    if u < 0.5 {
                        m + scale * (2.0 * u).ln()
                    } else {
                        m - scale * (2.0 * (1.0 - u)).ln()
                    }
                }
            }
            NoiseModel::TwoPoint { epsilon, p_star } => {
                let a = Self::two_point_a(*epsilon, *p_star);
                // Stationary mass on log ε is p = p*ε.
                let p_low = if stationary { p_star * epsilon } else { *p_star };
                if uniform01(rng) < p_low {
                    epsilon.ln()
                } else {
                    a.ln()
                }
            }
            NoiseModel::Empirical {
                samples,
                stationary_cdf,
            } => {
                if stationary {
                    let u = uniform01(rng);
                    let idx = stationary_cdf.partition_point(|&c| c < u);
                    samples[idx.min(samples.len() - 1)]
                } else {
                    let idx = (uniform01(rng) * samples.len() as f64) as usize;
                    samples[idx.min(samples.len() - 1)]
                }
            }
            NoiseModel::Custom(c) => {
                // Uniform rejection against the scanned supremum. The 1.5
                // head-room covers peaks the 4096-point scan may straddle.
                let (lo, hi) = c.support;
                let bound = 1.5 * if stationary { c.sup_tilted } else { c.sup_g };
                loop {
                    let w = lo + (hi - lo) * uniform01(rng);
                    let dens = if stationary {
                        (c.log_g(w) + w).exp()
                    } else {
                        c.log_g(w).exp()
                    };
                    if uniform01(rng) * bound <= dens {
                        return w;
                    }
                }
            }
        }
    }

    /// Density `ρ(b)` of `B = W* - W`, by quadrature of
    /// `∫ g(w) e^w g(w+b) dw` over the truncated support.
    pub fn rho(&self, b: f64) -> Result<f64> {
        match self {
            NoiseModel::NoNoise => Err(Error::NoDensity("NoNoise")),
            NoiseModel::TwoPoint { .. } | NoiseModel::Empirical { .. } => {
                Err(Error::UseMassFunction(self.variant_name()))
            }
            _ => {
                let (lo, hi) = self.support_hint()?;
                let a = lo.max(lo - b);
                let c = hi.min(hi - b);
                if a >= c {
                    return Ok(0.0);
                }
                integrate_segmented(
                    &|w| (self.log_g_raw(w) + w + self.log_g_raw(w + b)).exp(),
                    a,
                    c,
                    QUAD_TOL,
                    QUAD_SEGMENTS,
                )
            }
        }
    }

    /// `h(b) = e^{b/2} ρ(b)` by quadrature of the symmetric form
    /// `∫ g(w + b/2) g(w - b/2) e^w dw`; symmetric in `b` by construction.
    pub fn h_value(&self, b: f64) -> Result<f64> {
        match self {
            NoiseModel::NoNoise => Err(Error::NoDensity("NoNoise")),
            NoiseModel::TwoPoint { .. } | NoiseModel::Empirical { .. } => {
                Err(Error::UseMassFunction(self.variant_name()))
            }
            _ => {
                let (lo, hi) = self.support_hint()?;
                let half = 0.5 * b.abs();
                let a = lo + half;
                let c = hi - half;
                if a >= c {
                    return Ok(0.0);
                }
                integrate_segmented(
                    &|w| (self.log_g_raw(w + 0.5 * b) + self.log_g_raw(w - 0.5 * b) + w).exp(),
                    a,
                    c,
                    QUAD_TOL,
                    QUAD_SEGMENTS,
                )
            }
        }
    }

    /// The difference `B = W* - W` for this model.
    pub fn difference(&self) -> NoiseDifference {
        NoiseDifference {
            model: self.clone(),
        }
    }
}

/// The noise difference `B = W* - W` between a fresh proposal-time draw and
/// an independent stationary draw.
#[derive(Clone, Debug)]
pub struct NoiseDifference {
    model: NoiseModel,
}

impl NoiseDifference {
    /// Density of `B` (continuous variants only).
    pub fn density(&self, b: f64) -> Result<f64> {
        self.model.rho(b)
    }

    /// One draw of `B`.
    pub fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.model.sample_noise(rng, false) - self.model.sample_noise(rng, true)
    }

    /// Mean and variance of `B` where closed forms exist.
    pub fn mean_variance(&self) -> Option<(f64, f64)> {
        match &self.model {
            NoiseModel::NoNoise => Some((0.0, 0.0)),
            NoiseModel::Gaussian { sigma } => {
                let s2 = sigma * sigma;
                Some((-s2, 2.0 * s2))
            }
            NoiseModel::TwoPoint { epsilon, p_star } => {
                let k = NoiseModel::two_point_k(*epsilon, *p_star);
                let p = p_star * epsilon;
                let mean = -(p_star - p) * k;
                let second = k * k * (p_star * (1.0 - p) + (1.0 - p_star) * p);
                Some((mean, second - mean * mean))
            }
            _ => None,
        }
    }

    /// Point masses of `B` for the discrete variants: `{-k, 0, k}` for the
    /// two-point model, `{0}` for no noise.
    pub fn mass(&self) -> Option<Vec<(f64, f64)>> {
        match &self.model {
            NoiseModel::NoNoise => Some(vec![(0.0, 1.0)]),
            NoiseModel::TwoPoint { epsilon, p_star } => {
                let k = NoiseModel::two_point_k(*epsilon, *p_star);
                let p = p_star * epsilon;
                Some(vec![
                    (-k, p_star * (1.0 - p)),
                    (0.0, p_star * p + (1.0 - p_star) * (1.0 - p)),
                    (k, (1.0 - p_star) * p),
                ])
            }
            _ => None,
        }
    }
}
