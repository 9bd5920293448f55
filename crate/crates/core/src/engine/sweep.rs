use rayon::prelude::*;

use crate::datamodel::{derive_stats, StudyInput};

use super::bf::{bf_from_stats, default_settings};
use super::result::BfResult;
use super::spec::TestSpec;
use super::EngineError;

/// One prior scale of a sweep and its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub scale: f64,
    pub outcome: Result<BfResult, EngineError>,
}

/// Bayes factors across prior scales, in the order the scales were given.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
}

impl SweepResult {
    fn successes(&self) -> impl Iterator<Item = &BfResult> {
        self.entries.iter().filter_map(|e| e.outcome.as_ref().ok())
    }

    /// Result with the smallest `log_bf` among successful entries.
    pub fn min(&self) -> Option<&BfResult> {
        self.successes().min_by(|a, b| a.log_bf.total_cmp(&b.log_bf))
    }

    /// Result with the largest `log_bf` among successful entries.
    pub fn max(&self) -> Option<&BfResult> {
        self.successes().max_by(|a, b| a.log_bf.total_cmp(&b.log_bf))
    }

    pub fn min_log_bf(&self) -> Option<f64> {
        self.min().map(|r| r.log_bf)
    }

    pub fn max_log_bf(&self) -> Option<f64> {
        self.max().map(|r| r.log_bf)
    }
}

/// Repeat one test for each prior scale in `scales`.
///
/// Input errors abort the sweep; failures at an individual scale are
/// recorded in that entry and the remaining scales still run.
pub fn prior_sweep(
    input: &StudyInput,
    spec: &TestSpec,
    scales: &[f64],
) -> Result<SweepResult, EngineError> {
    if scales.is_empty() {
        return Err(EngineError::InvalidSpec(
            "a prior sweep needs at least one scale".into(),
        ));
    }
    let stats = derive_stats(input)?;
    let mode = input.mode();
    let settings = default_settings();
    let entries = scales
        .par_iter()
        .map(|&scale| SweepEntry {
            scale,
            outcome: bf_from_stats(&stats, &spec.with_prior_scale(scale), mode, &settings),
        })
        .collect();
    Ok(SweepResult { entries })
}
