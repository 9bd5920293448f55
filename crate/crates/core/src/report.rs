//! Console, JSON and CSV renderings of Bayes factor results.
//!
//! Bayes factors with `|log10 BF| ≥ 4` are printed in scientific notation
//! with `significant_digits` digits (`4.41e+09`); smaller ones in fixed
//! point with two decimals (`51.58`).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datamodel::{DerivedStats, InputMode};
use crate::engine::{
    BfResult, CauchyPrior, DesignKind, Direction, EngineError, Posterior, SweepResult,
};
use crate::quadrature::{Interval, QuadratureSettings};

pub const SCHEMA_VERSION: u32 = 1;

const RULE: &str = "******************************";
const LABEL_WIDTH: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("significant_digits must lie in [2, 10], got {0}")]
    SignificantDigits(usize),
    #[error("curve_points must be at least 2, got {0}")]
    CurvePoints(usize),
    #[error("curve range must be finite, got ({0}, {1})")]
    CurveRange(f64, f64),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub format: Format,
    pub significant_digits: usize,
    pub curve_points: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            format: Format::Text,
            significant_digits: 3,
            curve_points: 512,
        }
    }
}

impl ReportOptions {
    pub fn validate(&self) -> Result<(), ReportError> {
        if !(2..=10).contains(&self.significant_digits) {
            return Err(ReportError::SignificantDigits(self.significant_digits));
        }
        if self.curve_points < 2 {
            return Err(ReportError::CurvePoints(self.curve_points));
        }
        Ok(())
    }
}

/// Format a Bayes factor given its natural log.
pub fn format_bf(log_bf: f64, significant_digits: usize) -> String {
    let log10 = log_bf / std::f64::consts::LN_10;
    if log10.abs() < 4.0 {
        return fixed2(log_bf.exp());
    }
    let decimals = significant_digits.saturating_sub(1);
    let mut exponent = log10.floor();
    let mut mantissa = format!("{:.*}", decimals, 10f64.powf(log10 - exponent));
    if mantissa.starts_with("10") {
        exponent += 1.0;
        mantissa = format!("{:.*}", decimals, 10f64.powf(log10 - exponent));
    }
    let sign = if exponent < 0.0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs() as i64)
}

fn fixed2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn row(out: &mut String, label: &str, value: &str) {
    let _ = writeln!(out, "{label:<LABEL_WIDTH$}{value}");
}

fn title(design: DesignKind) -> &'static str {
    match design {
        DesignKind::Superiority => "Superiority analysis",
        DesignKind::NonInferiority => "Non-inferiority analysis",
        DesignKind::Equivalence => "Equivalence analysis",
    }
}

fn design_word(design: DesignKind) -> &'static str {
    match design {
        DesignKind::Superiority => "superiority",
        DesignKind::NonInferiority => "non-inferiority",
        DesignKind::Equivalence => "equivalence",
    }
}

fn data_label(mode: InputMode) -> &'static str {
    match mode {
        InputMode::Raw => "raw data",
        InputMode::SummaryMoments | InputMode::SummaryCi => "summary data",
    }
}

/// Hypothesis rows `(label, statement)` for H0 and H1.
fn hypotheses(result: &BfResult) -> [(String, String); 2] {
    let low = result.direction == Direction::Low;
    match result.design {
        DesignKind::Superiority => {
            let h1 = match (result.alternative, low) {
                (Some(crate::engine::Alternative::TwoSided), _) => "mu_y != mu_x",
                (_, false) => "mu_y > mu_x",
                (_, true) => "mu_y < mu_x",
            };
            [
                ("H0 (non-superiority):".into(), "mu_y == mu_x".into()),
                ("H1 (superiority):".into(), h1.into()),
            ]
        }
        DesignKind::NonInferiority => {
            let (h0, h1) = if low {
                ("mu_y - mu_x > ni_margin", "mu_y - mu_x < ni_margin")
            } else {
                ("mu_y - mu_x < -ni_margin", "mu_y - mu_x > -ni_margin")
            };
            [
                ("H0 (inferiority):".into(), h0.into()),
                ("H1 (non-inferiority):".into(), h1.into()),
            ]
        }
        DesignKind::Equivalence => match result.interval {
            Some(iv) if !iv.is_point() => {
                let o = iv.oriented(result.direction);
                let bounds = format!(
                    "({}, {})",
                    fixed2(o.lower.standardized),
                    fixed2(o.upper.standardized)
                );
                [
                    ("H0 (equivalence):".into(), format!("delta in {bounds}")),
                    ("H1 (non-equivalence):".into(), format!("delta not in {bounds}")),
                ]
            }
            _ => [
                ("H0 (equivalence):".into(), "mu_y == mu_x".into()),
                ("H1 (non-equivalence):".into(), "mu_y != mu_x".into()),
            ],
        },
    }
}

fn margin_rows(out: &mut String, result: &BfResult) {
    if let Some(m) = result.ni_margin {
        row(
            out,
            "Non-inferiority margin:",
            &format!("{} (standardised)", fixed2(m.standardized)),
        );
        row(out, "", &format!("{} (unstandardised)", fixed2(m.unstandardized)));
    }
    if let Some(iv) = result.interval {
        if iv.is_point() {
            row(out, "Equivalence interval:", "point null (0)");
        } else {
            let o = iv.oriented(result.direction);
            for (label, b) in [("Lower bound:", o.lower), ("Upper bound:", o.upper)] {
                row(out, label, &format!("{} (standardised)", fixed2(b.standardized)));
                row(out, "", &format!("{} (unstandardised)", fixed2(b.unstandardized)));
            }
        }
    }
}

fn header(out: &mut String, result: &BfResult) {
    let t = title(result.design);
    let _ = writeln!(out, "{RULE}");
    let _ = writeln!(out, "{t}");
    let _ = writeln!(out, "{}", "-".repeat(t.len()));
    row(out, "Data:", data_label(result.input_mode));
    for (label, text) in hypotheses(result) {
        row(out, &label, &text);
    }
}

/// Console report with three significant digits.
pub fn render_text(result: &BfResult) -> String {
    render_text_with(result, &ReportOptions::default())
}

pub fn render_text_with(result: &BfResult, options: &ReportOptions) -> String {
    let mut out = String::new();
    header(&mut out, result);
    margin_rows(&mut out, result);
    row(&mut out, "Cauchy prior scale:", &format!("{:.3}", result.prior_scale));
    out.push('\n');
    let _ = writeln!(
        out,
        "    {} ({}) = {}",
        result.orientation.label(),
        design_word(result.design),
        format_bf(result.log_bf, options.significant_digits)
    );
    let _ = writeln!(out, "{RULE}");
    out
}

/// Machine-readable record of one result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub schema_version: u32,
    /// Linear-scale Bayes factor; absent when it overflows f64.
    pub bf: Option<f64>,
    /// Degrees-of-freedom convention used to turn a CI margin into a pooled SD.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_convention: Option<String>,
    #[serde(flatten)]
    pub result: BfResult,
}

const CI_CONVENTION: &str = "pooled-variance t, df = n_x + n_y - 2";

impl JsonReport {
    pub fn new(result: &BfResult) -> Self {
        let bf = result.log_bf.exp();
        Self {
            schema_version: SCHEMA_VERSION,
            bf: bf.is_finite().then_some(bf),
            ci_convention: (result.input_mode == InputMode::SummaryCi)
                .then(|| CI_CONVENTION.to_string()),
            result: result.clone(),
        }
    }
}

pub fn render_json(result: &BfResult) -> String {
    serde_json::to_string_pretty(&JsonReport::new(result)).expect("report serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonSweepEntry {
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<JsonReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonExtreme {
    pub scale: f64,
    pub log_bf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonSweep {
    pub schema_version: u32,
    pub sweep: Vec<JsonSweepEntry>,
    pub min: Option<JsonExtreme>,
    pub max: Option<JsonExtreme>,
}

impl JsonSweep {
    pub fn new(sweep: &SweepResult) -> Self {
        let extreme = |r: Option<&BfResult>| {
            r.map(|r| JsonExtreme {
                scale: r.prior_scale,
                log_bf: r.log_bf,
            })
        };
        Self {
            schema_version: SCHEMA_VERSION,
            sweep: sweep
                .entries
                .iter()
                .map(|e| match &e.outcome {
                    Ok(r) => JsonSweepEntry {
                        scale: e.scale,
                        report: Some(JsonReport::new(r)),
                        error: None,
                    },
                    Err(err) => JsonSweepEntry {
                        scale: e.scale,
                        report: None,
                        error: Some(err.to_string()),
                    },
                })
                .collect(),
            min: extreme(sweep.min()),
            max: extreme(sweep.max()),
        }
    }
}

pub fn render_sweep_json(sweep: &SweepResult) -> String {
    serde_json::to_string_pretty(&JsonSweep::new(sweep)).expect("sweep serializes")
}

/// Console table of a prior-scale sweep.
pub fn render_sweep_text(sweep: &SweepResult, options: &ReportOptions) -> String {
    let mut out = String::new();
    let Some(first) = sweep.entries.iter().find_map(|e| e.outcome.as_ref().ok()) else {
        let _ = writeln!(out, "{RULE}");
        for e in &sweep.entries {
            if let Err(err) = &e.outcome {
                row(&mut out, &format!("{:.3}", e.scale), &format!("error: {err}"));
            }
        }
        let _ = writeln!(out, "{RULE}");
        return out;
    };
    header(&mut out, first);
    margin_rows(&mut out, first);
    out.push('\n');
    row(
        &mut out,
        "Cauchy prior scale",
        &format!("{} ({})", first.orientation.label(), design_word(first.design)),
    );
    let digits = options.significant_digits;
    for e in &sweep.entries {
        let value = match &e.outcome {
            Ok(r) => format_bf(r.log_bf, digits),
            Err(err) => format!("error: {err}"),
        };
        row(&mut out, &format!("{:.3}", e.scale), &value);
    }
    out.push('\n');
    for (label, r) in [("Minimum:", sweep.min()), ("Maximum:", sweep.max())] {
        if let Some(r) = r {
            row(
                &mut out,
                label,
                &format!("{} (scale {:.3})", format_bf(r.log_bf, digits), r.prior_scale),
            );
        }
    }
    let _ = writeln!(out, "{RULE}");
    out
}

/// Prior and posterior density of δ at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub delta: f64,
    pub prior: f64,
    pub posterior: f64,
}

/// Prior and posterior densities on `points` evenly spaced values of δ.
pub fn emit_density_curves(
    stats: &DerivedStats,
    prior: &CauchyPrior,
    range: Interval,
    points: usize,
) -> Result<Vec<CurvePoint>, ReportError> {
    if points < 2 {
        return Err(ReportError::CurvePoints(points));
    }
    let (a, b) = (range.lower(), range.upper());
    if !a.is_finite() || !b.is_finite() {
        return Err(ReportError::CurveRange(a, b));
    }
    let post = Posterior::new(stats, prior, QuadratureSettings::default())?;
    let step = (b - a) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let delta = if i + 1 == points { b } else { a + step * i as f64 };
            Ok(CurvePoint {
                delta,
                prior: prior.log_density(delta).exp(),
                posterior: post.log_density(delta)?.exp(),
            })
        })
        .collect()
}

/// A plotting window covering the bulk of both prior and posterior.
pub fn default_curve_range(stats: &DerivedStats, prior: &CauchyPrior) -> Interval {
    let centre = stats.effect_size();
    let width = 6.0 / stats.n_eff.sqrt();
    let r = 4.0 * prior.scale();
    let t = prior.truncation();
    let lo = (centre - width).min(-r).max(t.lower());
    let hi = (centre + width).max(r).min(t.upper());
    Interval::new(lo, hi).unwrap_or_else(|_| Interval::new(lo, lo + 1.0).expect("finite"))
}

/// CSV with header `delta,prior,posterior`.
/// Values use the shortest representation that parses back to the same `f64`.
pub fn curves_to_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("delta,prior,posterior\n");
    for p in curve {
        let _ = writeln!(out, "{:?},{:?},{:?}", p.delta, p.prior, p.posterior);
    }
    out
}
