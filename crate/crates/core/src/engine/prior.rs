use crate::quadrature::Interval;
use crate::specfun::{cauchy_interval_mass, cauchy_logpdf_unchecked};

use super::EngineError;

/// Smallest prior mass accepted for a truncation interval or hypothesis region.
pub const MIN_REGION_MASS: f64 = 1e-15;

/// Default Cauchy scale, `1/√2`.
pub const DEFAULT_PRIOR_SCALE: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Zero-centred Cauchy prior on δ, optionally truncated and renormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyPrior {
    scale: f64,
    truncation: Interval,
    ln_mass: f64,
}

pub(crate) fn check_prior_scale(scale: f64) -> Result<f64, EngineError> {
    if scale > 0.0 && scale.is_finite() {
        Ok(scale)
    } else {
        Err(EngineError::InvalidSpec(format!(
            "prior scale must be finite and > 0, got {scale}"
        )))
    }
}

pub(crate) fn region_mass(region: &Interval, scale: f64) -> Result<f64, EngineError> {
    let mass = cauchy_interval_mass(region.lower(), region.upper(), scale)?;
    if mass < MIN_REGION_MASS {
        return Err(EngineError::DegenerateRegion {
            lower: region.lower(),
            upper: region.upper(),
            mass,
        });
    }
    Ok(mass)
}

impl CauchyPrior {
    pub fn new(scale: f64) -> Result<Self, EngineError> {
        Self::truncated(scale, Interval::real_line())
    }

    pub fn truncated(scale: f64, truncation: Interval) -> Result<Self, EngineError> {
        let scale = check_prior_scale(scale)?;
        let mass = region_mass(&truncation, scale)?;
        Ok(Self {
            scale,
            truncation,
            ln_mass: mass.ln(),
        })
    }

    /// Half-Cauchy on `δ > 0`.
    pub fn positive(scale: f64) -> Result<Self, EngineError> {
        Self::truncated(scale, Interval::above(0.0)?)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn truncation(&self) -> Interval {
        self.truncation
    }

    /// Prior mass of the untruncated Cauchy on the truncation interval.
    pub fn ln_mass(&self) -> f64 {
        self.ln_mass
    }

    /// Renormalized log density; `-inf` outside the truncation interval.
    pub fn log_density(&self, delta: f64) -> f64 {
        if self.truncation.contains(delta) {
            cauchy_logpdf_unchecked(delta, self.scale) - self.ln_mass
        } else {
            f64::NEG_INFINITY
        }
    }

    /// The same prior reflected through zero.
    pub fn mirrored(&self) -> Self {
        Self {
            truncation: Interval::new(-self.truncation.upper(), -self.truncation.lower())
                .expect("reflection preserves ordering"),
            ..*self
        }
    }
}
