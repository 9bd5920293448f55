//! Zero-centred Cauchy distribution.

use std::f64::consts::{FRAC_1_PI, PI};

use super::gamma::LN_PI;
use super::{check_scale, LogDensity, SpecFunError};

pub(crate) fn cauchy_logpdf_unchecked(x: f64, scale: f64) -> f64 {
    let z = x / scale;
    let tail = if z.abs() > 1e100 {
        2.0 * (x.abs().ln() - scale.ln())
    } else {
        (z * z).ln_1p()
    };
    -LN_PI - scale.ln() - tail
}

/// `ln[1 / (π s (1 + (x/s)^2))]`.
pub fn cauchy_logpdf(x: f64, scale: f64) -> Result<LogDensity, SpecFunError> {
    check_scale("cauchy_logpdf", scale)?;
    if x.is_nan() {
        return Err(SpecFunError::domain("cauchy_logpdf", "x", x, "not NaN"));
    }
    if x.is_infinite() {
        return Ok(LogDensity::new(f64::NEG_INFINITY));
    }
    Ok(LogDensity::new(cauchy_logpdf_unchecked(x, scale)))
}

fn lower_tail(x: f64, scale: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x < 0.0 {
        // arctan(s/|x|)/π keeps full relative accuracy deep in the tail.
        scale.atan2(-x) * FRAC_1_PI
    } else {
        0.5 + (x / scale).atan() * FRAC_1_PI
    }
}

/// `P(X ≤ x)`.
pub fn cauchy_cdf(x: f64, scale: f64) -> Result<f64, SpecFunError> {
    check_scale("cauchy_cdf", scale)?;
    if x.is_nan() {
        return Err(SpecFunError::domain("cauchy_cdf", "x", x, "not NaN"));
    }
    Ok(lower_tail(x, scale))
}

/// `P(X > x)`.
pub fn cauchy_sf(x: f64, scale: f64) -> Result<f64, SpecFunError> {
    check_scale("cauchy_sf", scale)?;
    if x.is_nan() {
        return Err(SpecFunError::domain("cauchy_sf", "x", x, "not NaN"));
    }
    Ok(lower_tail(-x, scale))
}

/// `P(a < X < b)` without forming a difference of two CDFs near 1.
pub fn cauchy_interval_mass(a: f64, b: f64, scale: f64) -> Result<f64, SpecFunError> {
    check_scale("cauchy_interval_mass", scale)?;
    if a.is_nan() || b.is_nan() || a > b {
        return Err(SpecFunError::domain(
            "cauchy_interval_mass",
            "lower",
            a,
            "lower <= upper",
        ));
    }
    if a == b {
        return Ok(0.0);
    }
    let mass = if a == f64::NEG_INFINITY {
        lower_tail(b, scale)
    } else if b == f64::INFINITY {
        lower_tail(-a, scale)
    } else if a >= 0.0 || b <= 0.0 {
        // atan(b/s) − atan(a/s) for same-sign endpoints
        ((b - a) * scale / (scale * scale + a * b)).atan() * FRAC_1_PI
    } else {
        ((b / scale).atan() - (a / scale).atan()) / PI
    };
    Ok(mass)
}
