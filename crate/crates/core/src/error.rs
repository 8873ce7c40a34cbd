use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("critical point encountered at step {step} (|Df(v)| = {norm:e}, base = {base:?})")]
    CriticalPointEncountered {
        step: usize,
        base: Vec<f64>,
        norm: f64,
        cell: Option<usize>,
    },

    #[error("dimension {dim} is not supported by this operation")]
    DimensionUnsupported { dim: usize },

    #[error("graph has no cycle")]
    AcyclicGraph,

    #[error("unsupported system: {0}")]
    UnsupportedSystem(String),

    #[error("splitting rejected: invariance defect {defect:e}, separation {separation:e}")]
    SplittingInvalid { defect: f64, separation: f64 },

    #[error("basis is not orthonormal (deviation {deviation:e})")]
    DegenerateBasis { deviation: f64 },

    #[error("measures live on different spaces")]
    SpaceMismatch,

    #[error("sample left the declared domain at {point:?}")]
    LeftDomain { point: Vec<f64> },

    #[error("iteration did not converge: {0}")]
    NotConverged(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Self {
        match self {
            Error::CriticalPointEncountered { base, norm, cell, .. } => {
                Error::CriticalPointEncountered { step, base, norm, cell }
            }
            other => other,
        }
    }

    pub(crate) fn in_cell(self, cell: usize) -> Self {
        match self {
            Error::CriticalPointEncountered { step, base, norm, .. } => {
                Error::CriticalPointEncountered { step, base, norm, cell: Some(cell) }
            }
            other => other,
        }
    }
}
