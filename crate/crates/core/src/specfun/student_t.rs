//! Central Student t: log density, distribution function, quantile.

use super::beta::{ln_regularized_beta, regularized_beta};
use super::gamma::{ln_gamma_ratio, LN_PI};
use super::{check_df, LogDensity, SpecFunError};

/// `ln(1 + t²/ν)` without overflow for huge `|t|`.
pub(crate) fn ln1p_sq_over(t: f64, df: f64) -> f64 {
    let r = t / df.sqrt();
    if r.abs() > 1e150 {
        2.0 * r.abs().ln()
    } else {
        (r * r).ln_1p()
    }
}

pub(crate) fn central_t_logpdf_unchecked(t: f64, df: f64) -> f64 {
    -ln_gamma_ratio(0.5 * df, 0.5) - 0.5 * (df.ln() + LN_PI) - 0.5 * (df + 1.0) * ln1p_sq_over(t, df)
}

/// Log density of Student's t with `df` degrees of freedom.
pub fn central_t_logpdf(t: f64, df: f64) -> Result<LogDensity, SpecFunError> {
    check_df("central_t_logpdf", df)?;
    if t.is_nan() {
        return Err(SpecFunError::domain("central_t_logpdf", "t", t, "not NaN"));
    }
    if t.is_infinite() {
        return Ok(LogDensity::new(f64::NEG_INFINITY));
    }
    Ok(LogDensity::new(central_t_logpdf_unchecked(t, df)))
}

/// `(x, 1 − x)` for `x = ν / (ν + s²)`.
fn beta_args(s: f64, df: f64) -> (f64, f64) {
    let r = s * s / df;
    if r.is_infinite() {
        return (0.0, 1.0);
    }
    (1.0 / (1.0 + r), r / (1.0 + r))
}

/// `P(T > s)` for `s ≥ 0`.
fn upper_tail(s: f64, df: f64) -> f64 {
    let (x, y) = beta_args(s, df);
    0.5 * regularized_beta(x, y, 0.5 * df, 0.5)
}

fn ln_upper_tail(s: f64, df: f64) -> f64 {
    let (x, y) = beta_args(s, df);
    ln_regularized_beta(x, y, 0.5 * df, 0.5) - std::f64::consts::LN_2
}

fn validate(function: &'static str, t: f64, df: f64) -> Result<(), SpecFunError> {
    check_df(function, df)?;
    if t.is_nan() {
        return Err(SpecFunError::domain(function, "t", t, "not NaN"));
    }
    Ok(())
}

/// `P(T ≤ t)`.
pub fn student_t_cdf(t: f64, df: f64) -> Result<f64, SpecFunError> {
    validate("student_t_cdf", t, df)?;
    Ok(if t < 0.0 {
        upper_tail(-t, df)
    } else {
        1.0 - upper_tail(t, df)
    })
}

/// `P(T > t)`.
pub fn student_t_sf(t: f64, df: f64) -> Result<f64, SpecFunError> {
    validate("student_t_sf", t, df)?;
    Ok(if t > 0.0 {
        upper_tail(t, df)
    } else {
        1.0 - upper_tail(-t, df)
    })
}

/// Quantile of Student's t: the `q` with `P(T ≤ q) = p`.
///
/// Solves `ln P(T > s) = ln min(p, 1 − p)` for `s > 0` by Newton's method in
/// `ln s`, safeguarded by a bracket that is widened geometrically until it
/// contains the root.
pub fn student_t_quantile(p: f64, df: f64) -> Result<f64, SpecFunError> {
    check_df("student_t_quantile", df)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(SpecFunError::domain("student_t_quantile", "p", p, "0 < p < 1"));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let tail = if p < 0.5 { p } else { 1.0 - p };
    let target = tail.ln();
    let g = |u: f64| ln_upper_tail(u.exp(), df) - target;

    // g is decreasing in u; bracket the root.
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut g_lo = g(lo);
    let mut g_hi = g_lo;
    let step = 4f64.ln();
    for _ in 0..2000 {
        if g_lo > 0.0 {
            break;
        }
        lo -= step;
        g_lo = g(lo);
    }
    for _ in 0..2000 {
        if g_hi < 0.0 {
            break;
        }
        hi += step;
        g_hi = g(hi);
    }

    let mut u = 0.5 * (lo + hi);
    for _ in 0..200 {
        let s = u.exp();
        let gu = g(u);
        if gu == 0.0 {
            break;
        }
        if gu > 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        // d/du ln P(T > e^u) = −f(s)·s / P(T > s)
        let slope = -(central_t_logpdf_unchecked(s, df) + u - ln_upper_tail(s, df)).exp();
        let mut next = u - gu / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let done = (next - u).abs() <= 4.0 * f64::EPSILON * u.abs().max(1.0);
        u = next;
        if done || hi - lo <= 4.0 * f64::EPSILON * u.abs().max(1.0) {
            break;
        }
    }
    let q = u.exp();
    Ok(if p < 0.5 { -q } else { q })
}
