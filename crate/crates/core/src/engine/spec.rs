use serde::{Deserialize, Serialize};

use super::prior::{check_prior_scale, DEFAULT_PRIOR_SCALE};
use super::EngineError;

/// Which pole of the outcome scale is beneficial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    High,
    Low,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::High => Direction::Low,
            Direction::Low => Direction::High,
        }
    }

    /// `+1` for high, `−1` for low.
    pub fn sign(self) -> f64 {
        match self {
            Direction::High => 1.0,
            Direction::Low => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    OneSided,
    #[default]
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    Superiority,
    NonInferiority,
    Equivalence,
}

/// A margin or bound with its unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub value: f64,
    pub standardized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Design {
    Superiority {
        alternative: Alternative,
    },
    /// `margin` is the magnitude of the tolerated disadvantage.
    NonInferiority {
        margin: Margin,
    },
    /// Equivalence region `(lower, upper)` on the benefit-oriented effect;
    /// `(0, 0)` is the point null.
    Equivalence {
        lower: f64,
        upper: f64,
        standardized: bool,
    },
}

impl Design {
    pub fn kind(&self) -> DesignKind {
        match self {
            Design::Superiority { .. } => DesignKind::Superiority,
            Design::NonInferiority { .. } => DesignKind::NonInferiority,
            Design::Equivalence { .. } => DesignKind::Equivalence,
        }
    }
}

/// Design, direction of benefit and prior scale for one test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestSpec {
    pub design: Design,
    pub direction: Direction,
    pub prior_scale: f64,
}

impl TestSpec {
    pub fn superiority(alternative: Alternative) -> Self {
        Self::from_design(Design::Superiority { alternative })
    }

    pub fn non_inferiority(margin: f64, standardized: bool) -> Self {
        Self::from_design(Design::NonInferiority {
            margin: Margin {
                value: margin,
                standardized,
            },
        })
    }

    pub fn equivalence(lower: f64, upper: f64, standardized: bool) -> Self {
        Self::from_design(Design::Equivalence {
            lower,
            upper,
            standardized,
        })
    }

    /// Symmetric interval `(−|v|, |v|)`; `v = 0` gives the point null.
    pub fn equivalence_symmetric(v: f64, standardized: bool) -> Self {
        Self::equivalence(-v.abs(), v.abs(), standardized)
    }

    pub fn point_equivalence() -> Self {
        Self::equivalence(0.0, 0.0, true)
    }

    fn from_design(design: Design) -> Self {
        Self {
            design,
            direction: Direction::High,
            prior_scale: DEFAULT_PRIOR_SCALE,
        }
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_prior_scale(mut self, scale: f64) -> Self {
        self.prior_scale = scale;
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        check_prior_scale(self.prior_scale)?;
        match self.design {
            Design::Superiority { .. } => Ok(()),
            Design::NonInferiority { margin } => {
                if margin.value.is_finite() && margin.value >= 0.0 {
                    Ok(())
                } else {
                    Err(EngineError::InvalidSpec(format!(
                        "non-inferiority margin must be finite and >= 0, got {}",
                        margin.value
                    )))
                }
            }
            Design::Equivalence { lower, upper, .. } => {
                if !lower.is_finite() || !upper.is_finite() {
                    Err(EngineError::InvalidSpec(format!(
                        "equivalence bounds must be finite, got ({lower}, {upper})"
                    )))
                } else if lower > upper {
                    Err(EngineError::InvalidSpec(format!(
                        "equivalence interval lower bound {lower} exceeds upper bound {upper}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn is_point_null(&self) -> bool {
        matches!(self.design, Design::Equivalence { lower, upper, .. } if lower == 0.0 && upper == 0.0)
    }
}
