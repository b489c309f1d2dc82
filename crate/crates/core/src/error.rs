use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("covariance matrix is not physical (min eigenvalue of cov + iΩ is {min_eigenvalue:.3e})")]
    NonPhysical { min_eigenvalue: f64 },

    #[error("channel is not completely positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Fock cutoff {cutoff} leaves trace deficit {deficit:.3e}; use cutoff >= {suggested}")]
    Cutoff {
        cutoff: usize,
        deficit: f64,
        suggested: usize,
    },

    #[error("oracle needs a {required}-dimensional space, above the limit of {limit}")]
    OracleTooLarge { required: usize, limit: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for the errors that mean "the Fock oracle cannot run at these parameters".
    pub fn is_cutoff_infeasible(&self) -> bool {
        matches!(self, Error::Cutoff { .. } | Error::OracleTooLarge { .. })
    }
}
