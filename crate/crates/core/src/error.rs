use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model at `{path}`: {reason}")]
    InvalidModel { path: String, reason: String },

    #[error("unknown unit system `{0}`")]
    UnknownUnits(String),

    #[error("quantum number {n} outside the valid range [{min}, {max}]")]
    OutOfRange { n: i64, min: i64, max: i64 },

    #[error("operation not supported for {kind} models: {what}")]
    Unsupported { kind: &'static str, what: &'static str },

    #[error("no bound motion at energy {energy}: allowed window is ({lower}, {upper})")]
    NoBoundMotion { energy: f64, lower: f64, upper: f64 },

    #[error(
        "turning point not bracketed at energy {energy} after {steps} expansion steps (last probe x = {last_probe})"
    )]
    RootNotBracketed { energy: f64, steps: u32, last_probe: f64 },

    #[error("quadrature did not converge: achieved relative change {achieved:e} with {panels} panels")]
    QuadratureFailure { achieved: f64, panels: usize },

    #[error("period self-check failed at energy {energy}: |tau - dI/dE| / tau = {residual:e}")]
    PeriodSelfCheck { energy: f64, residual: f64 },

    #[error("target action for n = {n} lies outside the bound-motion action range")]
    ActionOutOfRange { n: i64 },

    #[error("classical period is energy independent; the criterion is inconclusive by period measurement")]
    DegeneratePeriod,

    #[error("threshold scan exceeded the limit of {limit} levels")]
    ScanLimitExceeded { limit: u64 },

    #[error("invalid count {0}: at least 2 outcomes are required")]
    InvalidCount(usize),

    #[error("invalid standard deviation {0}")]
    InvalidSigma(f64),

    #[error("{quantity} ensemble has zero sample variance but declared sigma {sigma}")]
    DegenerateEnsemble { quantity: &'static str, sigma: f64 },

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("invalid superposition: {0}")]
    InvalidSuperposition(String),

    #[error("parse error at {location}: {reason}")]
    Parse { location: String, reason: String },
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidModel { path: path.into(), reason: reason.into() }
    }

    /// Short machine-readable identifier for the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidModel { .. } => "invalid_model",
            Error::UnknownUnits(_) => "unknown_units",
            Error::OutOfRange { .. } => "out_of_range",
            Error::Unsupported { .. } => "unsupported",
            Error::NoBoundMotion { .. } => "no_bound_motion",
            Error::RootNotBracketed { .. } => "root_not_bracketed",
            Error::QuadratureFailure { .. } => "quadrature_failure",
            Error::PeriodSelfCheck { .. } => "period_self_check",
            Error::ActionOutOfRange { .. } => "action_out_of_range",
            Error::DegeneratePeriod => "degenerate_period",
            Error::ScanLimitExceeded { .. } => "scan_limit_exceeded",
            Error::InvalidCount(_) => "invalid_count",
            Error::InvalidSigma(_) => "invalid_sigma",
            Error::DegenerateEnsemble { .. } => "degenerate_ensemble",
            Error::InvalidProtocol(_) => "invalid_protocol",
            Error::InvalidSuperposition(_) => "invalid_superposition",
            Error::Parse { .. } => "parse",
        }
    }

    /// True for errors caused by malformed input rather than by the computation.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidModel { .. } | Error::UnknownUnits(_) | Error::Parse { .. } | Error::InvalidProtocol(_)
        )
    }
}
