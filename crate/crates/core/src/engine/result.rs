use serde::{Deserialize, Serialize};

use crate::datamodel::{DerivedStats, InputMode};

use super::spec::{Alternative, DesignKind, Direction};

/// Which hypothesis the Bayes factor favours when it exceeds one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Evidence for H1 over H0.
    Bf10,
    /// Evidence for H0 over H1.
    Bf01,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Bf10 => Orientation::Bf01,
            Orientation::Bf01 => Orientation::Bf10,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Orientation::Bf10 => "BF10",
            Orientation::Bf01 => "BF01",
        }
    }
}

/// A margin expressed in both unit systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginValues {
    pub standardized: f64,
    pub unstandardized: f64,
}

/// Equivalence bounds as supplied, on the benefit-oriented effect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalValues {
    pub lower: MarginValues,
    pub upper: MarginValues,
}

impl IntervalValues {
    pub fn is_point(&self) -> bool {
        self.lower.standardized == 0.0 && self.upper.standardized == 0.0
    }

    /// Bounds on `δ = (μ_y − μ_x)/σ` for the given direction of benefit.
    pub fn oriented(&self, direction: Direction) -> IntervalValues {
        match direction {
            Direction::High => *self,
            Direction::Low => IntervalValues {
                lower: negate(self.upper),
                upper: negate(self.lower),
            },
        }
    }
}

fn negate(m: MarginValues) -> MarginValues {
    MarginValues {
        standardized: -m.standardized,
        unstandardized: -m.unstandardized,
    }
}

/// Outcome of one Bayes factor computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfResult {
    /// Natural log of the Bayes factor in `orientation`.
    pub log_bf: f64,
    pub orientation: Orientation,
    pub design: DesignKind,
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternative: Option<Alternative>,
    pub prior_scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ni_margin: Option<MarginValues>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalValues>,
    pub input_mode: InputMode,
    pub stats: DerivedStats,
}

impl BfResult {
    /// The reciprocal Bayes factor.
    pub fn flipped(&self) -> Self {
        Self {
            log_bf: -self.log_bf,
            orientation: self.orientation.flipped(),
            ..self.clone()
        }
    }

    /// `log10` of the Bayes factor.
    pub fn log10_bf(&self) -> f64 {
        self.log_bf / std::f64::consts::LN_10
    }
}

/// The Bayes factor on the linear scale, in the result's orientation.
pub fn get_bf(result: &BfResult) -> f64 {
    result.log_bf.exp()
}
