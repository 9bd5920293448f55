//! Noncentral t log density.
//!
//! With `w = ν + t²` and `μ = λt/√w`, the density is
//!
//! ```text
//! f(t) = ν^{ν/2} e^{−νλ²/(2w)} / (√π Γ(ν/2) 2^{(ν−1)/2} w^{(ν+1)/2})
//!        · ∫_0^∞ y^ν exp(−(y − μ)²/2) dy.
//! ```
//!
//! The integrand peaks at `y* = (μ + √(μ² + 4ν))/2`. Writing `y = y* + d`,
//! `q = y*²/ν = 1 + ε` and `ε = μy*/ν`, the large pieces cancel analytically
//! against Stirling's formula for `Γ(ν/2)` and leave
//!
//! ```text
//! ln f = −½ ln(2π²) − R(ν/2) − ((ν+1)/2) ln(1 + t²/ν) − νλ²/(2w)
//!        + (ν/2)(ln(1 + ε) + ε/(1 + ε)) + ln J,
//! J    = ∫ exp(ν[ln(1 + d/y*) − d/y*] − d²/2) dy,
//! ```
//!
//! where `R` is the Stirling remainder. The exponent of `J` is at most
//! `−d²/2` and vanishes at the peak, so `J` is O(1) and is integrated over
//! `d ∈ [−min(y*, 40), 40]`.

use std::f64::consts::LN_2;

use super::gamma::{stirling_remainder, LN_PI};
use super::student_t::ln1p_sq_over;
use super::{check_df, LogDensity, SpecFunError};
use crate::quadrature::{integrate_log_with_points, Interval, QuadratureError, QuadratureSettings};

const HALF_WIDTH: f64 = 40.0;

const INNER: QuadratureSettings = QuadratureSettings {
    rel_tol: 1e-12,
    abs_tol: 0.0,
    max_subdivisions: 400,
};

/// Log density without argument validation; `df > 0` and finite `ncp`
/// are the caller's responsibility.
pub(crate) fn nct_logpdf_unchecked(t: f64, df: f64, ncp: f64) -> Result<f64, QuadratureError> {
    if t.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    let nu = df;
    let r = t / nu.sqrt();
    // ν/w and t/√w, kept finite for huge |t|
    let nu_over_w = 1.0 / (1.0 + r * r);
    let t_over_sqrt_w = if r.abs() > 1e150 {
        t.signum()
    } else {
        r / (1.0 + r * r).sqrt()
    };
    let mu = ncp * t_over_sqrt_w;
    let s = (mu * mu + 4.0 * nu).sqrt();
    let y_star = if mu >= 0.0 { 0.5 * (mu + s) } else { 2.0 * nu / (s - mu) };

    let eps = mu * y_star / nu;
    let (ln_q, one_minus_inv_q) = if eps.abs() < 0.5 {
        (eps.ln_1p(), eps / (1.0 + eps))
    } else {
        let ln_q = 2.0 * y_star.ln() - nu.ln();
        (ln_q, -(-ln_q).exp_m1())
    };

    let inv_y = 1.0 / y_star;
    let log_kernel = |y: f64| -> f64 {
        if y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let d = y - y_star;
        let ratio = y * inv_y;
        let shape = if ratio < 0.5 {
            ratio.ln() - (ratio - 1.0)
        } else {
            let x = d * inv_y;
            x.ln_1p() - x
        };
        nu * shape - 0.5 * d * d
    };

    let q = 1.0 + eps;
    let sigma = 1.0 / (1.0 + 1.0 / q).sqrt();
    let lower = (y_star - HALF_WIDTH).max(0.0);
    let upper = y_star + HALF_WIDTH;
    let mut points = [y_star; 7];
    for (i, k) in [2.0, 6.0, 14.0].iter().enumerate() {
        points[2 * i + 1] = y_star - k * sigma;
        points[2 * i + 2] = y_star + k * sigma;
    }
    let region = Interval::new(lower, upper)?;
    let ln_j = integrate_log_with_points(log_kernel, region, &points, &INNER)?;

    let ln_f = -(0.5 * LN_2 + LN_PI) - stirling_remainder(0.5 * nu)
        - 0.5 * (nu + 1.0) * ln1p_sq_over(t, nu)
        - 0.5 * ncp * ncp * nu_over_w
        + 0.5 * nu * (ln_q + one_minus_inv_q)
        + ln_j;
    Ok(ln_f)
}

/// Log density of the noncentral t with `df` degrees of freedom and
/// noncentrality `ncp`.
pub fn noncentral_t_logpdf(t: f64, df: f64, ncp: f64) -> Result<LogDensity, SpecFunError> {
    check_df("noncentral_t_logpdf", df)?;
    if t.is_nan() {
        return Err(SpecFunError::domain("noncentral_t_logpdf", "t", t, "not NaN"));
    }
    if !ncp.is_finite() {
        return Err(SpecFunError::domain(
            "noncentral_t_logpdf",
            "ncp",
            ncp,
            "finite",
        ));
    }
    Ok(LogDensity::new(nct_logpdf_unchecked(t, df, ncp)?))
}
