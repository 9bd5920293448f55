//! Bayes factors for superiority, non-inferiority and equivalence designs.
//!
//! The likelihood of the observed pooled two-sample t statistic given the
//! standardized effect δ is noncentral t with `df = n_x + n_y − 2` and
//! noncentrality `δ √n_eff`. The prior on δ is a zero-centred Cauchy.

mod bf;
mod marginal;
mod prior;
mod result;
mod spec;
mod sweep;

use thiserror::Error;

use crate::datamodel::DataError;
use crate::quadrature::QuadratureError;
use crate::specfun::SpecFunError;

pub use bf::{
    bf_from_stats, compute_bf, default_settings, equiv_bf, infer_bf, posterior_log_density,
    savage_dickey_bf, savage_dickey_log_bf, super_bf,
};
pub use marginal::Posterior;
pub use prior::{CauchyPrior, DEFAULT_PRIOR_SCALE, MIN_REGION_MASS};
pub use result::{get_bf, BfResult, IntervalValues, MarginValues, Orientation};
pub use spec::{Alternative, Design, DesignKind, Direction, Margin, TestSpec};
pub use sweep::{prior_sweep, SweepEntry, SweepResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("invalid test specification: {0}")]
    InvalidSpec(String),
    #[error("{expected:?} test requested for a {found:?} specification")]
    WrongDesign {
        expected: DesignKind,
        found: DesignKind,
    },
    #[error(
        "region ({lower}, {upper}) has prior mass {mass:e}; at least 1e-15 is required"
    )]
    DegenerateRegion { lower: f64, upper: f64, mass: f64 },
    #[error("delta0 = {delta0} lies outside the prior support ({lower}, {upper})")]
    OutsideSupport { delta0: f64, lower: f64, upper: f64 },
    #[error("numerical integration failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("Bayes factor evaluated to a non-finite log value ({0})")]
    NonFinite(f64),
}

impl EngineError {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            EngineError::Quadrature(q) | EngineError::SpecFun(SpecFunError::Quadrature(q)) => {
                !matches!(
                    q,
                    QuadratureError::InvalidInterval { .. } | QuadratureError::InvalidSettings(_)
                )
            }
            EngineError::NonFinite(_) => true,
            _ => false,
        }
    }
}
