//! Scalar numerics shared by the noise models and the efficiency theory:
//! stable normal CDF / log-CDF, adaptive Simpson quadrature, golden-section
//! search, log-sum-exp and seed derivation.

use crate::error::{Error, Result};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Standard normal density.
#[inline]
pub fn norm_pdf(z: f64) -> f64 {
    (-0.5 * z * z - LN_SQRT_2PI).exp()
}

/// Standard normal CDF via the complementary error function.
///
/// Relative accuracy is that of `erfc` (~1e-14) down to z ≈ -37, below which
/// the result underflows to zero; use [`log_norm_cdf`] there.
#[inline]
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

// Below this point `erfc` is still far from underflow, so the direct log is
// exact; past it we switch to the Mills-ratio asymptotic series.
const LOG_CDF_SERIES_CUTOFF: f64 = -30.0;

/// log Φ(z), finite for every finite `z`.
///
/// For z >= -30 the direct `erfc` route keeps full relative precision; for
/// z < -30 a six-term Mills-ratio expansion is used, so the branch switch
/// agrees to ~1e-13. This is what keeps terms like e^{b/2}·Φ(-b/ℓ-ℓ/2)
/// computable when both factors overflow/underflow individually.
pub fn log_norm_cdf(z: f64) -> f64 {
    if z >= 0.0 {
        // ln(1 - Φ(-z)) without cancellation.
        (-norm_cdf(-z)).ln_1p()
    } else if z >= LOG_CDF_SERIES_CUTOFF {
        norm_cdf(z).ln()
    } else {
        // Φ(-x) = φ(x)/x · [1 - 1/x² + 3/x⁴ - 15/x⁶ + 105/x⁸ - 945/x¹⁰ + ...]
        let inv2 = 1.0 / (z * z);
        let series = inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * (105.0 - 945.0 * inv2))));
        -0.5 * z * z - LN_SQRT_2PI - (-z).ln() + series.ln_1p()
    }
}

#[inline]
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// ln(1 + e^x) without overflow.
#[inline]
pub fn log1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Log-sum-exp over a slice; -inf for an empty slice or all -inf entries.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

const MAX_SIMPSON_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature of `f` over `[lo, hi]` to absolute tolerance
/// `tol`. Errors with the residual estimate when panel subdivision bottoms
/// out before the tolerance is met.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain("quadrature limits must be finite".into()));
    }
    if hi <= lo {
        return Ok(0.0);
    }
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    let mut residual = 0.0;
    let value = adapt(
        f,
        lo,
        flo,
        mid,
        fmid,
        hi,
        fhi,
        whole,
        tol,
        MAX_SIMPSON_DEPTH,
        &mut residual,
    );
    if residual > tol {
        return Err(Error::QuadratureNonConvergence { residual });
    }
    Ok(value)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    residual: &mut f64,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Panels shorter than a few ulps cannot be refined further.
    if delta.abs() <= 15.0 * tol || depth == 0 || (m - a) < f64::EPSILON * a.abs().max(1.0) {
        if delta.abs() > 15.0 * tol {
            *residual += delta.abs() / 15.0;
        }
        return left + right + delta / 15.0;
    }
    let half = 0.5 * tol;
    adapt(f, a, fa, lm, flm, m, fm, left, half, depth - 1, residual)
        + adapt(f, m, fm, rm, frm, b, fb, right, half, depth - 1, residual)
}

/// Adaptive Simpson over `[lo, hi]` pre-split into `segments` uniform panels,
/// each integrated to `tol / segments`. The pre-split keeps narrow bumps from
/// being skipped when the integrand vanishes at the initial sample points.
pub fn integrate_segmented<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
    segments: usize,
) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let n = segments.max(1);
    let step = (hi - lo) / n as f64;
    let seg_tol = tol / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let a = lo + i as f64 * step;
        let b = if i + 1 == n { hi } else { a + step };
        total += integrate(f, a, b, seg_tol)?;
    }
    Ok(total)
}

pub(crate) fn std_normal(rng: &mut dyn rand::RngCore) -> f64 {
    use rand::Rng;
    (&mut *rng).sample::<f64, _>(rand_distr::StandardNormal)
}

pub(crate) fn uniform01(rng: &mut dyn rand::RngCore) -> f64 {
    use rand::Rng;
    (&mut *rng).random()
}

/// Standard exponential draw.
pub(crate) fn std_exp(rng: &mut dyn rand::RngCore) -> f64 {
    use rand::Rng;
    (&mut *rng).sample::<f64, _>(rand_distr::Exp1)
}

const INV_GOLDEN: f64 = 0.381_966_011_250_105_1; // 2 - golden ratio

/// Golden-section search for the maximum of `f` on `[a, b]`, refined until
/// the bracketing interval is shorter than `tol_x`. Returns `(x_max, f_max)`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol_x: f64) -> (f64, f64) {
    let mut x1 = a + INV_GOLDEN * (b - a);
    let mut x2 = b - INV_GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    while (b - a).abs() > tol_x {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + INV_GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - INV_GOLDEN * (b - a);
            f2 = f(x2);
        }
    }

    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Central difference with one step of Richardson extrapolation.
pub fn richardson_diff<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// SplitMix64 mix function; used to derive independent per-cell seeds.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for grid cell `index` derived from `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    base ^ splitmix64(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn norm_cdf_reference_values() {
        // mpmath: Phi(0), Phi(-1), Phi(-1.19), Phi(-20)
        assert_relative_eq!(norm_cdf(0.0), 0.5, max_relative = 1e-15);
        assert_relative_eq!(norm_cdf(-1.0), 0.15865525393145705, max_relative = 1e-13);
        assert_relative_eq!(norm_cdf(-1.19), 0.11702319602310872, max_relative = 1e-13);
        assert_relative_eq!(norm_cdf(-20.0), 2.7536241186062337e-89, max_relative = 1e-12);
    }

    #[test]
    fn log_norm_cdf_matches_direct_and_series() {
        // mpmath log(Phi(z)) references spanning both branches.
        assert_relative_eq!(log_norm_cdf(-1.0), -1.8410216450092635, max_relative = 1e-13);
        assert_relative_eq!(log_norm_cdf(-8.0), -35.013437159914550, max_relative = 1e-13);
        assert_relative_eq!(log_norm_cdf(-29.9), -451.32291245852868, max_relative = 1e-12);
        assert_relative_eq!(log_norm_cdf(-30.1), -457.32956441638222, max_relative = 1e-12);
        assert_relative_eq!(log_norm_cdf(-100.0), -5005.5242086942051, max_relative = 1e-12);
        // Upper tail: ln Phi(3) = ln(1 - 1.349898e-3).
        assert_relative_eq!(log_norm_cdf(3.0), -1.3508099647481938e-3, max_relative = 1e-12);
    }

    #[test]
    fn branch_switch_is_continuous() {
        let below = log_norm_cdf(LOG_CDF_SERIES_CUTOFF - 1e-9);
        let above = log_norm_cdf(LOG_CDF_SERIES_CUTOFF + 1e-9);
        assert!((below - above).abs() < 1e-9, "jump: {}", (below - above).abs());
    }

    #[test]
    fn simpson_polynomial_and_gaussian() {
        let cube = integrate(&|x: f64| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(cube, 1.0 / 3.0, max_relative = 1e-12);
        let gauss = integrate(&norm_pdf, -9.0, 9.0, 1e-12).unwrap();
        assert_relative_eq!(gauss, 1.0, max_relative = 1e-10);
        let sine = integrate(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert_relative_eq!(sine, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn simpson_empty_interval_is_zero() {
        assert_eq!(integrate(&|x: f64| x, 1.0, 1.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(&|x: f64| -(x - 2.0) * (x - 2.0) + 3.0, 0.0, 5.0, 1e-8);
        assert_relative_eq!(x, 2.0, epsilon = 1e-6);
        assert_relative_eq!(fx, 3.0, epsilon = 1e-10);
    }

    #[test]
    fn logsumexp_matches_naive_and_survives_overflow() {
        let xs = [0.5, 2.0, -1.0];
        let naive = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert_relative_eq!(logsumexp(&xs), naive, max_relative = 1e-14);
        let big = [1234.0, 1232.0];
        assert_relative_eq!(logsumexp(&big), 1234.0 + (1.0 + (-2.0f64).exp()).ln(), max_relative = 1e-14);
        assert_eq!(logsumexp(&[]), f64::NEG_INFINITY);
        assert_eq!(logsumexp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
    }

    #[test]
    fn richardson_diff_is_fourth_order() {
        let d = richardson_diff(&|x: f64| x.exp(), 1.0, 1e-3);
        assert_relative_eq!(d, 1.0f64.exp(), max_relative = 1e-12);
    }

    #[test]
    fn derived_seeds_differ_across_cells() {
        let s0 = derive_seed(42, 0);
        let s1 = derive_seed(42, 1);
        assert_ne!(s0, s1);
        assert_eq!(s0, derive_seed(42, 0));
    }
}
