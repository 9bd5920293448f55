//! Bayes factors for the three designs.
//!
//! Every design is evaluated on the benefit-oriented effect: for
//! `Direction::Low` the observed t is negated, so "higher is better" holds
//! internally and margins keep their magnitude.
//!
//! * Superiority: `BF10 = m1/m0` with `m0` the central t density at `t_obs`
//!   and `m1` the likelihood averaged over the full Cauchy (two-sided) or
//!   the half-Cauchy on `δ > 0` (one-sided).
//! * Non-inferiority: region odds with the full Cauchy split at `b = −nim`,
//!   `BF10 = [P(δ > b | D)/P(δ > b)] / [P(δ < b | D)/P(δ < b)]`.
//! * Equivalence: region odds for `(Δ_L, Δ_U)` against its complement
//!   (`BF01`), or the Savage–Dickey ratio at 0 for the point null.
//!
//! Posterior masses of both regions are integrated separately, so a ratio
//! involving a region with posterior mass far below 1e-16 is still exact.

use crate::datamodel::{
    derive_stats, standardize_margin, unstandardize_margin, DerivedStats, InputMode, StudyInput,
};
use crate::quadrature::{log_add_exp, Interval, QuadratureSettings};
use crate::specfun::{central_t_logpdf_unchecked, LogDensity};

use super::marginal::{Joint, Posterior};
use super::prior::{region_mass, CauchyPrior};
use super::result::{BfResult, IntervalValues, MarginValues, Orientation};
use super::spec::{Design, DesignKind, Direction, TestSpec};
use super::EngineError;

/// Quadrature settings used by the convenience entry points.
pub fn default_settings() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn expect_design(spec: &TestSpec, kind: DesignKind) -> Result<(), EngineError> {
    if spec.design.kind() == kind {
        Ok(())
    } else {
        Err(EngineError::WrongDesign {
            expected: kind,
            found: spec.design.kind(),
        })
    }
}

/// Superiority test (`BF10`).
pub fn super_bf(input: &StudyInput, spec: &TestSpec) -> Result<BfResult, EngineError> {
    expect_design(spec, DesignKind::Superiority)?;
    compute_bf(input, spec)
}

/// Non-inferiority test (`BF10`).
pub fn infer_bf(input: &StudyInput, spec: &TestSpec) -> Result<BfResult, EngineError> {
    expect_design(spec, DesignKind::NonInferiority)?;
    compute_bf(input, spec)
}

/// Equivalence test (`BF01`).
pub fn equiv_bf(input: &StudyInput, spec: &TestSpec) -> Result<BfResult, EngineError> {
    expect_design(spec, DesignKind::Equivalence)?;
    compute_bf(input, spec)
}

/// Any design, with default quadrature settings.
pub fn compute_bf(input: &StudyInput, spec: &TestSpec) -> Result<BfResult, EngineError> {
    spec.validate()?;
    let stats = derive_stats(input)?;
    bf_from_stats(&stats, spec, input.mode(), &default_settings())
}

/// Any design from precomputed statistics.
pub fn bf_from_stats(
    stats: &DerivedStats,
    spec: &TestSpec,
    mode: InputMode,
    settings: &QuadratureSettings,
) -> Result<BfResult, EngineError> {
    spec.validate()?;
    let canon = match spec.direction {
        Direction::High => *stats,
        Direction::Low => stats.mirrored(),
    };
    let r = spec.prior_scale;
    let joint = Joint::new(&canon, r, *settings)?;
    let real = Interval::real_line();

    let mut result = BfResult {
        log_bf: 0.0,
        orientation: Orientation::Bf10,
        design: spec.design.kind(),
        direction: spec.direction,
        alternative: None,
        prior_scale: r,
        ni_margin: None,
        interval: None,
        input_mode: mode,
        stats: *stats,
    };

    match spec.design {
        Design::Superiority { alternative } => {
            let ln_m0 = central_t_logpdf_unchecked(canon.t_obs, canon.df);
            let ln_m1 = match alternative {
                super::Alternative::TwoSided => joint.ln_integral(real)?,
                super::Alternative::OneSided => {
                    let half = Interval::above(0.0)?;
                    joint.ln_integral(half)? - region_mass(&half, r)?.ln()
                }
            };
            result.alternative = Some(alternative);
            result.log_bf = ln_m1 - ln_m0;
        }
        Design::NonInferiority { margin } => {
            let nim = standardize_margin(margin.value, margin.standardized, stats);
            let b = -nim;
            let h1 = Interval::above(b)?;
            let h0 = Interval::below(b)?;
            let (p1, p0) = (region_mass(&h1, r)?, region_mass(&h0, r)?);
            let odds1 = joint.ln_integral(h1)? - p1.ln();
            let odds0 = joint.ln_integral(h0)? - p0.ln();
            result.ni_margin = Some(MarginValues {
                standardized: nim,
                unstandardized: unstandardize_margin(nim, stats),
            });
            result.log_bf = odds1 - odds0;
        }
        Design::Equivalence {
            lower,
            upper,
            standardized,
        } => {
            let lo = standardize_margin(lower, standardized, stats);
            let hi = standardize_margin(upper, standardized, stats);
            result.orientation = Orientation::Bf01;
            result.interval = Some(IntervalValues {
                lower: MarginValues {
                    standardized: lo,
                    unstandardized: unstandardize_margin(lo, stats),
                },
                upper: MarginValues {
                    standardized: hi,
                    unstandardized: unstandardize_margin(hi, stats),
                },
            });
            result.log_bf = if lo == 0.0 && hi == 0.0 {
                let prior = CauchyPrior::new(r)?;
                savage_dickey_from_joint(&joint, &prior, 0.0)?
            } else {
                interval_log_bf01(&joint, r, lo, hi)?
            };
        }
    }

    if !result.log_bf.is_finite() {
        return Err(EngineError::NonFinite(result.log_bf));
    }
    Ok(result)
}

fn interval_log_bf01(joint: &Joint, r: f64, lo: f64, hi: f64) -> Result<f64, EngineError> {
    if lo == hi {
        return Err(EngineError::DegenerateRegion {
            lower: lo,
            upper: hi,
            mass: 0.0,
        });
    }
    let inside = Interval::new(lo, hi)?;
    let below = Interval::below(lo)?;
    let above = Interval::above(hi)?;
    let p_in = region_mass(&inside, r)?;
    let p_out = region_mass(&below, r)? + region_mass(&above, r)?;
    let ln_in = joint.ln_integral(inside)?;
    let ln_out = log_add_exp(joint.ln_integral(below)?, joint.ln_integral(above)?);
    Ok((ln_in - p_in.ln()) - (ln_out - p_out.ln()))
}

fn savage_dickey_from_joint(
    joint: &Joint,
    prior: &CauchyPrior,
    delta0: f64,
) -> Result<f64, EngineError> {
    let support = prior.truncation();
    if !support.contains(delta0) || !delta0.is_finite() {
        return Err(EngineError::OutsideSupport {
            delta0,
            lower: support.lower(),
            upper: support.upper(),
        });
    }
    let ln_evidence = joint.ln_integral(support)? - prior.ln_mass();
    // posterior(δ0)/prior(δ0) = likelihood(δ0) / evidence
    let ll = joint.log_likelihood(delta0);
    joint.take_failure()?;
    Ok(ll - ln_evidence)
}

/// Savage–Dickey `BF01` for `H0: δ = δ0` nested in the prior.
pub fn savage_dickey_bf(
    stats: &DerivedStats,
    prior: &CauchyPrior,
    delta0: f64,
) -> Result<f64, EngineError> {
    Ok(savage_dickey_log_bf(stats, prior, delta0, &default_settings())?.exp())
}

/// Natural log of [`savage_dickey_bf`].
pub fn savage_dickey_log_bf(
    stats: &DerivedStats,
    prior: &CauchyPrior,
    delta0: f64,
    settings: &QuadratureSettings,
) -> Result<f64, EngineError> {
    let joint = Joint::new(stats, prior.scale(), *settings)?;
    savage_dickey_from_joint(&joint, prior, delta0)
}

/// Normalized log posterior density of δ at `delta`.
pub fn posterior_log_density(
    delta: f64,
    stats: &DerivedStats,
    prior: &CauchyPrior,
) -> Result<LogDensity, EngineError> {
    let post = Posterior::new(stats, prior, default_settings())?;
    Ok(LogDensity::new(post.log_density(delta)?))
}
