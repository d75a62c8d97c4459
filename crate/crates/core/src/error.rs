use thiserror::Error;

/// Errors raised by the depth machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DepthError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need more points than dimensions (n = {n}, d = {d})")]
    TooFewPoints { n: usize, d: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point {0} projects to zero on the direction")]
    ZeroProjection(usize),

    #[error("could not draw a direction with strict, distinct projections after {0} tries")]
    ExhaustedRetries(usize),

    #[error("anchor point {0} is the zero vector")]
    ZeroAnchor(usize),

    #[error("degenerate configuration: {0}")]
    DegeneracyDetected(String),

    #[error("degeneracy persisted after {0} perturbation restarts")]
    DegeneracyUnresolved(usize),

    #[error("linear program is numerically ambiguous (phase-1 objective {objective:e})")]
    NumericallyAmbiguous { objective: f64 },

    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),

    #[error("cone code is not realizable by any direction")]
    Unrealizable,

    #[error("all depths are zero; the weighted mean is undefined")]
    AllZeroDepths,
}

impl DepthError {
    /// Errors that the perturbation path is allowed to absorb.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            DepthError::ZeroProjection(_)
                | DepthError::ExhaustedRetries(_)
                | DepthError::ZeroAnchor(_)
                | DepthError::DegeneracyDetected(_)
                | DepthError::NumericallyAmbiguous { .. }
                | DepthError::Unrealizable
        )
    }
}

pub type Result<T, E = DepthError> = std::result::Result<T, E>;
