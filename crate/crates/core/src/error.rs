use thiserror::Error;

/// Errors raised by numerical routines and the command-line layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge after {levels} levels (estimated error {estimate})")]
    NonConvergence { levels: u32, estimate: String },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("Hankel pivot {index} is not positive")]
    Positivity { index: usize },
    #[error("evaluation point {x} lies within {distance} of a pole")]
    PoleProximity { x: String, distance: String },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("case check failed: {0}")]
    CaseCheckFailed(String),
    #[error("flow hit a pole near t = {t}")]
    FlowPole { t: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("tolerance {tol} cannot be met at {digits} digits")]
    Tolerance { tol: String, digits: u32 },
    #[error("invalid number {0:?}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Consistency(_) => "consistency",
            Error::Positivity { .. } => "positivity",
            Error::PoleProximity { .. } => "pole_proximity",
            Error::InvalidFamily(_) => "invalid_family",
            Error::CaseCheckFailed(_) => "case_check_failed",
            Error::FlowPole { .. } => "flow_pole",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::Tolerance { .. } => "tolerance",
            Error::Parse(_) => "parse",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
