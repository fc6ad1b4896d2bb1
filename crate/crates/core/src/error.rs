use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma function pole at z = {0}")]
    Pole(f64),

    #[error("kernel singularity: {0}")]
    Singularity(String),

    #[error("quadrature failed: estimated error {estimate:e} exceeds tolerance {tol:e} after {nodes} nodes")]
    Quadrature { estimate: f64, tol: f64, nodes: usize },

    #[error("integral does not converge: {0}")]
    NonConvergent(String),

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("radial structure violation: {0}")]
    StructureViolation(String),

    #[error("time step collapsed below {dt:e}")]
    StepCollapse { dt: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for this error class.
    ///
    /// 0 success, 2 usage, 3 quadrature, 4 bracketing and 5 acceptance failure
    /// are fixed; the remaining classes take the codes from 6 upward.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Quadrature { .. } | Error::NonConvergent(_) => 3,
            Error::Bracketing(_) => 4,
            Error::InvalidMeasure(_) | Error::Domain(_) | Error::Pole(_) => 6,
            Error::Singularity(_) => 7,
            Error::StructureViolation(_) => 8,
            Error::StepCollapse { .. } => 9,
            Error::Unsupported(_) => 10,
            Error::Io(_) | Error::Json(_) => 11,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
