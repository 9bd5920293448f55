//! Special functions and log densities.
//!
//! Every density is returned on the log scale; exponentiate only at the
//! point of use.

mod beta;
mod cauchy;
mod gamma;
mod noncentral_t;
mod student_t;

use thiserror::Error;

use crate::quadrature::QuadratureError;

pub use cauchy::{cauchy_cdf, cauchy_interval_mass, cauchy_logpdf, cauchy_sf};
pub use gamma::log_gamma;
pub use noncentral_t::noncentral_t_logpdf;
pub use student_t::{central_t_logpdf, student_t_cdf, student_t_quantile, student_t_sf};

pub(crate) use cauchy::cauchy_logpdf_unchecked;
pub(crate) use noncentral_t::nct_logpdf_unchecked;
pub(crate) use student_t::central_t_logpdf_unchecked;

/// A natural-log density value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogDensity(f64);

impl LogDensity {
    pub fn new(value: f64) -> Self {
        Self(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Linear-scale density.
    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

impl From<LogDensity> for f64 {
    fn from(d: LogDensity) -> f64 {
        d.0
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("{function}: {name} = {value} is outside the domain {expected}")]
    Domain {
        function: &'static str,
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("noncentral t density: {0}")]
    Quadrature(#[from] QuadratureError),
}

impl SpecFunError {
    pub(crate) fn domain(
        function: &'static str,
        name: &'static str,
        value: f64,
        expected: &'static str,
    ) -> Self {
        Self::Domain {
            function,
            name,
            value,
            expected,
        }
    }
}

pub(crate) fn check_df(function: &'static str, df: f64) -> Result<(), SpecFunError> {
    if df > 0.0 && df.is_finite() {
        Ok(())
    } else {
        Err(SpecFunError::domain(function, "df", df, "0 < df < inf"))
    }
}

pub(crate) fn check_scale(function: &'static str, scale: f64) -> Result<(), SpecFunError> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(SpecFunError::domain(function, "scale", scale, "0 < scale < inf"))
    }
}
