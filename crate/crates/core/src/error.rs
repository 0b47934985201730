use thiserror::Error;

use crate::element::BlockKey;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VaError {
    /// A block outside the configured cutoffs was needed. Carries the
    /// smallest cutoffs that would contain it.
    #[error("cutoff exceeded: {what} needs max_degree >= {needed_degree} and max_weight_len >= {needed_weight_len}")]
    CutoffExceeded { what: String, needed_degree: i64, needed_weight_len: usize },

    #[error("degenerate lattice: the form <a,b> = -N(a,b) has determinant 0")]
    DegenerateLattice,

    #[error("invalid locality matrix: {0}")]
    InvalidLocality(String),

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("operation undefined on the zero element")]
    ZeroElement,

    #[error("functional does not vanish on D*A_1 in block {0:?}")]
    InvalidFunctional(BlockKey),

    #[error("element is not in the span of the block basis {0:?}")]
    NotInSpan(BlockKey),

    #[error("{0}")]
    Config(String),
}

impl VaError {
    /// Process exit status: 3 for cutoff errors, 2 for invalid input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            VaError::CutoffExceeded { .. } => 3,
            VaError::Config(_)
            | VaError::InvalidLocality(_)
            | VaError::DegenerateLattice
            | VaError::InvalidFunctional(_) => 2,
            _ => 1,
        }
    }

    pub fn cutoff(what: impl Into<String>, key: &BlockKey) -> Self {
        VaError::CutoffExceeded {
            what: what.into(),
            needed_degree: key.degree,
            needed_weight_len: key.weight.len(),
        }
    }
}

pub type Result<T, E = VaError> = std::result::Result<T, E>;
