use thiserror::Error;

/// Errors produced by instance validation, simulation, metrics and experiment configuration.
///
/// Arm indices carried in variants are zero-based; messages print them 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("an instance needs at least 2 arms, got {0}")]
    TooFewArms(usize),

    #[error("mean of arm {} is {mean}, expected a value in [0, 1]", .arm + 1)]
    MeanOutOfRange { arm: usize, mean: f64 },

    #[error("fairness quota of arm {} is {quota}, expected a value in [0, {limit})", .arm + 1)]
    QuotaOutOfRange { arm: usize, quota: f64, limit: f64 },

    #[error("fairness quotas sum to {sum}, expected a sum below 1")]
    QuotaSumExceeded { sum: f64 },

    #[error("unfairness tolerance must be a finite nonnegative number, got {0}")]
    NegativeAlpha(f64),

    #[error("{what}: expected {expected} entries, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("arm index {index} out of range for {k} arms")]
    IndexOutOfRange { index: usize, k: usize },

    #[error("confidence index needs at least one pull")]
    InvalidCount,

    #[error("quota phase needs {required} rounds but the horizon is {horizon}")]
    HorizonTooShort { required: u64, horizon: u64 },

    #[error("horizon must be at least {min}, got {got}")]
    InvalidHorizon { min: u64, got: u64 },

    #[error("arm {arm} ties the best mean; gap-dependent bounds need distinct means")]
    DegenerateGaps { arm: usize },

    #[error("round {t} is beyond the recorded trace")]
    CheckpointMissing { t: u64 },

    #[error("corrupt trace: {0}")]
    TraceCorrupt(String),

    #[error("unknown learner {0:?}; expected \"ucb1\", \"uniform\" or \"fixed:<arm>\"")]
    UnknownLearner(String),

    #[error(
        "unknown algorithm {0:?}; expected \"fair-learn\", \"t-fair-ucb\" or \"bare-learner\""
    )]
    UnknownAlgorithm(String),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("config parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        message: String,
    },

    #[error("invalid config field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("metric series do not share a checkpoint grid")]
    GridMismatch,

    #[error("audit failed: {0}")]
    AuditFailed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
