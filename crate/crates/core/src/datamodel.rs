//! Study inputs and the sufficient statistics derived from them.
//!
//! Group `x` is the control condition and group `y` the experimental one.
//! Effects are oriented as `y − x` and scaled by the pooled (equal-variance)
//! standard deviation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::{student_t_quantile, SpecFunError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("group {group} has {n} observation(s); at least 2 are required")]
    GroupTooSmall { group: char, n: usize },
    #[error("group {group} has zero sample variance")]
    ZeroVariance { group: char },
    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },
    #[error("{field} = {value} is invalid: {expected}")]
    Invalid {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("confidence interval inversion failed: {0}")]
    Quantile(#[from] SpecFunError),
}

fn finite(field: &'static str, value: f64) -> Result<f64, DataError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(DataError::NonFinite { field, value })
    }
}

fn positive(field: &'static str, value: f64) -> Result<f64, DataError> {
    finite(field, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(DataError::Invalid {
            field,
            value,
            expected: "must be > 0",
        })
    }
}

fn group_size(group: char, n: usize) -> Result<usize, DataError> {
    if n < 2 {
        Err(DataError::GroupTooSmall { group, n })
    } else {
        Ok(n)
    }
}

/// How the evidence was supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputMode {
    Raw,
    SummaryMoments,
    SummaryCi,
}

/// Raw observations for the control (`x`) and experimental (`y`) groups.
#[derive(Debug, Clone, PartialEq)]
pub struct RawGroups {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl RawGroups {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, DataError> {
        group_size('x', x.len())?;
        group_size('y', y.len())?;
        for v in x.iter().chain(y.iter()) {
            finite("observation", *v)?;
        }
        let groups = Self { x, y };
        groups.moments()?;
        Ok(groups)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Sample sizes, means and (n − 1)-denominator standard deviations.
    pub fn moments(&self) -> Result<SummaryMoments, DataError> {
        let (mean_x, sd_x) = mean_sd('x', &self.x)?;
        let (mean_y, sd_y) = mean_sd('y', &self.y)?;
        SummaryMoments::new(self.x.len(), self.y.len(), mean_x, mean_y, sd_x, sd_y)
    }
}

/// Two-pass mean and sample standard deviation.
fn mean_sd(group: char, values: &[f64]) -> Result<(f64, f64), DataError> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (n - 1.0)).sqrt();
    if !(sd > 0.0) {
        return Err(DataError::ZeroVariance { group });
    }
    Ok((mean, sd))
}

/// Group sizes, means and standard deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryMoments {
    pub n_x: usize,
    pub n_y: usize,
    pub mean_x: f64,
    pub mean_y: f64,
    pub sd_x: f64,
    pub sd_y: f64,
}

impl SummaryMoments {
    pub fn new(
        n_x: usize,
        n_y: usize,
        mean_x: f64,
        mean_y: f64,
        sd_x: f64,
        sd_y: f64,
    ) -> Result<Self, DataError> {
        let s = Self {
            n_x,
            n_y,
            mean_x,
            mean_y,
            sd_x,
            sd_y,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        group_size('x', self.n_x)?;
        group_size('y', self.n_y)?;
        finite("mean_x", self.mean_x)?;
        finite("mean_y", self.mean_y)?;
        positive("sd_x", self.sd_x)?;
        positive("sd_y", self.sd_y)?;
        Ok(())
    }
}

/// Group sizes, means, and the half-width of a confidence interval for the
/// mean difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryCi {
    pub n_x: usize,
    pub n_y: usize,
    pub mean_x: f64,
    pub mean_y: f64,
    pub ci_margin: f64,
    pub ci_level: f64,
}

impl SummaryCi {
    pub const DEFAULT_LEVEL: f64 = 0.95;

    pub fn new(
        n_x: usize,
        n_y: usize,
        mean_x: f64,
        mean_y: f64,
        ci_margin: f64,
        ci_level: f64,
    ) -> Result<Self, DataError> {
        let s = Self {
            n_x,
            n_y,
            mean_x,
            mean_y,
            ci_margin,
            ci_level,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        for (group, n) in [('x', self.n_x), ('y', self.n_y)] {
            if n < 1 {
                return Err(DataError::GroupTooSmall { group, n });
            }
        }
        if self.n_x + self.n_y < 5 {
            return Err(DataError::Invalid {
                field: "n_x + n_y",
                value: (self.n_x + self.n_y) as f64,
                expected: "must be >= 5 when the spread comes from a confidence interval",
            });
        }
        finite("mean_x", self.mean_x)?;
        finite("mean_y", self.mean_y)?;
        positive("ci_margin", self.ci_margin)?;
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(DataError::Invalid {
                field: "ci_level",
                value: self.ci_level,
                expected: "must lie strictly between 0 and 1",
            });
        }
        Ok(())
    }
}

/// Evidence about two groups in one of the three supported forms.
#[derive(Debug, Clone, PartialEq)]
pub enum StudyInput {
    Raw(RawGroups),
    Moments(SummaryMoments),
    Ci(SummaryCi),
}

impl StudyInput {
    pub fn mode(&self) -> InputMode {
        match self {
            StudyInput::Raw(_) => InputMode::Raw,
            StudyInput::Moments(_) => InputMode::SummaryMoments,
            StudyInput::Ci(_) => InputMode::SummaryCi,
        }
    }
}

impl From<RawGroups> for StudyInput {
    fn from(g: RawGroups) -> Self {
        StudyInput::Raw(g)
    }
}

impl From<SummaryMoments> for StudyInput {
    fn from(s: SummaryMoments) -> Self {
        StudyInput::Moments(s)
    }
}

impl From<SummaryCi> for StudyInput {
    fn from(s: SummaryCi) -> Self {
        StudyInput::Ci(s)
    }
}

/// Sufficient statistics for the pooled two-sample t model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedStats {
    pub n_x: f64,
    pub n_y: f64,
    /// `n_x + n_y − 2`
    pub df: f64,
    pub sd_pooled: f64,
    /// `n_x n_y / (n_x + n_y)`; the noncentrality is `δ √n_eff`.
    pub n_eff: f64,
    /// `(mean_y − mean_x) / (sd_pooled √(1/n_x + 1/n_y))`
    pub t_obs: f64,
}

impl DerivedStats {
    /// Statistics from group sizes, pooled SD and an observed t.
    pub fn new(n_x: f64, n_y: f64, sd_pooled: f64, t_obs: f64) -> Result<Self, DataError> {
        positive("n_x", n_x)?;
        positive("n_y", n_y)?;
        positive("sd_pooled", sd_pooled)?;
        finite("t_obs", t_obs)?;
        let df = n_x + n_y - 2.0;
        if !(df > 0.0) {
            return Err(DataError::Invalid {
                field: "n_x + n_y",
                value: n_x + n_y,
                expected: "must exceed 2",
            });
        }
        Ok(Self {
            n_x,
            n_y,
            df,
            sd_pooled,
            n_eff: n_x * n_y / (n_x + n_y),
            t_obs,
        })
    }

    fn from_difference(n_x: usize, n_y: usize, diff: f64, sd_pooled: f64) -> Result<Self, DataError> {
        let (nx, ny) = (n_x as f64, n_y as f64);
        let se = sd_pooled * (1.0 / nx + 1.0 / ny).sqrt();
        Self::new(nx, ny, sd_pooled, diff / se)
    }

    /// Observed standardized mean difference `t_obs / √n_eff`.
    pub fn effect_size(&self) -> f64 {
        self.t_obs / self.n_eff.sqrt()
    }

    /// The same statistics with the effect direction reversed.
    pub fn mirrored(&self) -> Self {
        Self {
            t_obs: -self.t_obs,
            ..*self
        }
    }
}

/// `√(((n_x − 1) sd_x² + (n_y − 1) sd_y²) / (n_x + n_y − 2))`
pub fn pooled_sd(s: &SummaryMoments) -> Result<f64, DataError> {
    s.validate()?;
    let (nx, ny) = (s.n_x as f64, s.n_y as f64);
    let ss = (nx - 1.0) * s.sd_x * s.sd_x + (ny - 1.0) * s.sd_y * s.sd_y;
    let sd = (ss / (nx + ny - 2.0)).sqrt();
    if sd > 0.0 && sd.is_finite() {
        Ok(sd)
    } else {
        Err(DataError::Invalid {
            field: "pooled sd",
            value: sd,
            expected: "must be finite and > 0",
        })
    }
}

/// Pooled SD implied by a symmetric CI for the mean difference under the
/// pooled-variance t model with `n_x + n_y − 2` degrees of freedom.
pub fn sd_from_ci(s: &SummaryCi) -> Result<f64, DataError> {
    s.validate()?;
    let (nx, ny) = (s.n_x as f64, s.n_y as f64);
    let q = student_t_quantile(0.5 * (1.0 + s.ci_level), nx + ny - 2.0)?;
    let se = s.ci_margin / q;
    Ok(se / (1.0 / nx + 1.0 / ny).sqrt())
}

/// Reduce any input form to [`DerivedStats`].
pub fn derive_stats(input: &StudyInput) -> Result<DerivedStats, DataError> {
    match input {
        StudyInput::Raw(g) => derive_stats(&StudyInput::Moments(g.moments()?)),
        StudyInput::Moments(m) => {
            let sd = pooled_sd(m)?;
            DerivedStats::from_difference(m.n_x, m.n_y, m.mean_y - m.mean_x, sd)
        }
        StudyInput::Ci(c) => {
            let sd = sd_from_ci(c)?;
            DerivedStats::from_difference(c.n_x, c.n_y, c.mean_y - c.mean_x, sd)
        }
    }
}

/// Convert a margin to standardized units (identity when already standardized).
pub fn standardize_margin(value: f64, is_standardized: bool, stats: &DerivedStats) -> f64 {
    if is_standardized {
        value
    } else {
        value / stats.sd_pooled
    }
}

/// Convert a standardized margin back to outcome units.
pub fn unstandardize_margin(value: f64, stats: &DerivedStats) -> f64 {
    value * stats.sd_pooled
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn pooled_sd_examples() {
        let eq = SummaryMoments::new(40, 40, 0.0, 1.0, 2.5, 2.5).unwrap();
        assert!(close(pooled_sd(&eq).unwrap(), 2.5, 1e-15));
        let unit = SummaryMoments::new(100, 100, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(pooled_sd(&unit).unwrap(), 1.0);
        let mixed = SummaryMoments::new(3, 2, 0.0, 0.0, 2.0, 1.0).unwrap();
        assert!(close(pooled_sd(&mixed).unwrap(), 3f64.sqrt(), 1e-15));
    }

    #[test]
    fn ci_inversion() {
        let c = SummaryCi::new(193, 205, 4.7, 4.8, 0.19, 0.95).unwrap();
        let sd = sd_from_ci(&c).unwrap();
        assert!(close(sd, 0.963_585_347_408_492_2, 1e-12), "{sd}");
        assert_eq!(format!("{:.2}", 1.0 / sd), "1.04");

        let doubled = SummaryCi { ci_margin: 0.38, ..c };
        assert!(close(sd_from_ci(&doubled).unwrap(), 2.0 * sd, 1e-14));
    }

    #[test]
    fn ci_round_trip() {
        let sd = 0.2;
        let (n_x, n_y) = (51usize, 51usize);
        let q = student_t_quantile(0.975, 100.0).unwrap();
        let margin = q * sd * (2.0 / 51.0f64).sqrt();
        let c = SummaryCi::new(n_x, n_y, 0.0, 0.1, margin, 0.95).unwrap();
        assert!((sd_from_ci(&c).unwrap() - sd).abs() < 1e-10);
    }

    #[test]
    fn moments_path() {
        let m = SummaryMoments::new(100, 100, 0.0, 0.5, 1.0, 1.0).unwrap();
        let s = derive_stats(&m.into()).unwrap();
        assert!(close(s.t_obs, 0.5 / (0.02f64).sqrt(), 1e-14));
        assert_eq!(s.df, 198.0);
        assert_eq!(s.n_eff, 50.0);
    }

    #[test]
    fn raw_path_matches_moments() {
        let x = vec![1.0, 2.0, 4.0, 7.0];
        let y = vec![3.0, 5.5, 6.0, 9.5, 10.0];
        let g = RawGroups::new(x, y).unwrap();
        let m = g.moments().unwrap();
        assert!(close(m.mean_x, 3.5, 1e-15));
        assert!(close(m.sd_x, 7f64.sqrt(), 1e-15));
        let a = derive_stats(&g.into()).unwrap();
        let b = derive_stats(&m.into()).unwrap();
        assert!(close(a.t_obs, b.t_obs, 1e-12));
        assert!(close(a.sd_pooled, b.sd_pooled, 1e-12));
    }

    #[test]
    fn sleep_study_ci_path() {
        let c = SummaryCi::new(193, 205, 4.7, 4.8, 0.19, 0.95).unwrap();
        let s = derive_stats(&c.into()).unwrap();
        assert!(close(s.t_obs, 1.034_722_425_510_249_8, 1e-11), "{}", s.t_obs);
        assert_eq!(s.df, 396.0);
    }

    #[test]
    fn margin_standardization() {
        let c = SummaryCi::new(193, 205, 4.7, 4.8, 0.19, 0.95).unwrap();
        let s = derive_stats(&c.into()).unwrap();
        let m = standardize_margin(1.0, false, &s);
        assert!(close(m, 1.037_790_791_121_35, 1e-12));
        assert_eq!(standardize_margin(0.3, true, &s), 0.3);
        assert_eq!(standardize_margin(0.0, false, &s), 0.0);
        assert!(close(unstandardize_margin(m, &s), 1.0, 1e-15));
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(
            RawGroups::new(vec![1.0], vec![1.0, 2.0]).unwrap_err(),
            DataError::GroupTooSmall { group: 'x', n: 1 }
        );
        assert_eq!(
            RawGroups::new(vec![1.0, 2.0], vec![3.0, 3.0]).unwrap_err(),
            DataError::ZeroVariance { group: 'y' }
        );
        assert!(SummaryMoments::new(5, 5, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(SummaryMoments::new(5, 5, f64::NAN, 0.0, 1.0, 1.0).is_err());
        assert!(SummaryCi::new(2, 2, 0.0, 0.0, 1.0, 0.95).is_err());
        assert!(SummaryCi::new(3, 3, 0.0, 0.0, 1.0, 1.0).is_err());
        assert!(SummaryCi::new(3, 3, 0.0, 0.0, -1.0, 0.9).is_err());
    }
}
