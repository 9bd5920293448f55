//! Integrals of likelihood × Cauchy prior over regions of δ.

use std::cell::RefCell;

use crate::datamodel::DerivedStats;
use crate::quadrature::{
    integrate_log_with_points, locate_mode, Interval, QuadratureError, QuadratureSettings,
};
use crate::specfun::{cauchy_logpdf_unchecked, nct_logpdf_unchecked};

use super::prior::CauchyPrior;
use super::EngineError;

/// `δ ↦ ln f_NCT(t_obs; df, δ√n_eff) + ln Cauchy(δ; r)` with the
/// breakpoints used to seed every region integral.
pub(crate) struct Joint {
    t: f64,
    df: f64,
    sqrt_n: f64,
    scale: f64,
    mode: f64,
    width: f64,
    seeds: Vec<f64>,
    settings: QuadratureSettings,
    failure: RefCell<Option<QuadratureError>>,
}

impl Joint {
    pub(crate) fn new(
        stats: &DerivedStats,
        scale: f64,
        settings: QuadratureSettings,
    ) -> Result<Self, EngineError> {
        settings.validate()?;
        let mut joint = Self {
            t: stats.t_obs,
            df: stats.df,
            sqrt_n: stats.n_eff.sqrt(),
            scale,
            mode: 0.0,
            width: 1.0,
            seeds: Vec::new(),
            settings,
            failure: RefCell::new(None),
        };
        joint.place_seeds();
        joint.take_failure()?;
        Ok(joint)
    }

    pub(crate) fn log_likelihood(&self, delta: f64) -> f64 {
        match nct_logpdf_unchecked(self.t, self.df, delta * self.sqrt_n) {
            Ok(v) => v,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    pub(crate) fn log_value(&self, delta: f64) -> f64 {
        if delta.is_infinite() {
            return f64::NEG_INFINITY;
        }
        self.log_likelihood(delta) + cauchy_logpdf_unchecked(delta, self.scale)
    }

    pub(crate) fn take_failure(&self) -> Result<(), EngineError> {
        match self.failure.borrow_mut().take() {
            Some(e) => Err(EngineError::Quadrature(e)),
            None => Ok(()),
        }
    }

    fn place_seeds(&mut self) {
        // Likelihood centre and an approximate likelihood sd in δ.
        let centre = self.t / self.sqrt_n;
        let lik_width = (1.0 + self.t * self.t / (2.0 * self.df)).sqrt() / self.sqrt_n;
        let lo = centre.min(0.0) - 6.0 * lik_width;
        let hi = centre.max(0.0) + 6.0 * lik_width;
        let mode = locate_mode(|d| self.log_value(d), lo, hi);
        let width = curvature_width(|d| self.log_value(d), mode, lik_width).unwrap_or(lik_width);

        let mut seeds = vec![0.0, self.scale, -self.scale, 4.0 * self.scale, -4.0 * self.scale];
        for k in [-16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0] {
            seeds.push(centre + k * lik_width);
        }
        for k in [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0] {
            seeds.push(mode + k * width);
        }
        seeds.retain(|s| s.is_finite());
        self.mode = mode;
        self.width = width;
        self.seeds = seeds;
    }

    /// `ln ∫_region exp(log_value)`.
    pub(crate) fn ln_integral(&self, region: Interval) -> Result<f64, EngineError> {
        let result =
            integrate_log_with_points(|d| self.log_value(d), region, &self.seeds, &self.settings);
        self.take_failure()?;
        Ok(result?)
    }

    pub(crate) fn mode(&self) -> f64 {
        self.mode
    }

    pub(crate) fn width(&self) -> f64 {
        self.width
    }
}

/// `1/√(−f'')` at `x` by central differences.
fn curvature_width<F: Fn(f64) -> f64>(f: F, x: f64, scale: f64) -> Option<f64> {
    let h = 1e-3 * scale;
    let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (d2 < 0.0 && d2.is_finite()).then(|| 1.0 / (-d2).sqrt())
}

/// Normalized posterior of δ under a (possibly truncated) Cauchy prior.
pub struct Posterior {
    joint: Joint,
    prior: CauchyPrior,
    /// `ln ∫_trunc likelihood × renormalized prior`
    ln_evidence: f64,
}

impl Posterior {
    pub fn new(
        stats: &DerivedStats,
        prior: &CauchyPrior,
        settings: QuadratureSettings,
    ) -> Result<Self, EngineError> {
        let joint = Joint::new(stats, prior.scale(), settings)?;
        let ln_evidence = joint.ln_integral(prior.truncation())? - prior.ln_mass();
        Ok(Self {
            joint,
            prior: *prior,
            ln_evidence,
        })
    }

    /// Log marginal likelihood of `t_obs` under the prior.
    pub fn ln_evidence(&self) -> f64 {
        self.ln_evidence
    }

    pub fn prior(&self) -> &CauchyPrior {
        &self.prior
    }

    /// Log posterior density; `-inf` outside the prior's support.
    pub fn log_density(&self, delta: f64) -> Result<f64, EngineError> {
        let lp = self.prior.log_density(delta);
        if lp == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let ll = self.joint.log_likelihood(delta);
        self.joint.take_failure()?;
        Ok(ll + lp - self.ln_evidence)
    }

    /// Posterior mode within the prior's support.
    pub fn mode(&self) -> Result<f64, EngineError> {
        let support = self.prior.truncation();
        let w = self.joint.width();
        let guess = self.joint.mode();
        let lo = (guess - 4.0 * w).max(support.lower());
        let hi = (guess + 4.0 * w).min(support.upper());
        let (lo, hi) = if lo < hi {
            (lo, hi)
        } else {
            // global mode lies outside the support; the boundary nearest it wins
            let b = if guess < support.lower() { support.lower() } else { support.upper() };
            return Ok(b);
        };
        let m = locate_mode(|d| self.joint.log_value(d), lo, hi);
        self.joint.take_failure()?;
        Ok(m)
    }

    /// Log posterior mass of `region ∩ support`.
    pub fn ln_mass(&self, region: Interval) -> Result<f64, EngineError> {
        match region.intersect(&self.prior.truncation()) {
            Some(r) => Ok(self.joint.ln_integral(r)? - self.prior.ln_mass() - self.ln_evidence),
            None => Ok(f64::NEG_INFINITY),
        }
    }
}
