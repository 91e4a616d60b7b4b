use crate::intervals::Method;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("confidence level must lie strictly between 0 and 1, got {0}")]
    LevelOutOfRange(f64),

    #[error("probability argument must lie strictly inside (0, 1), got {0}")]
    ProbabilityNotInOpenUnit(f64),

    #[error("probability argument must lie in [0, 1], got {0}")]
    ProbabilityOutOfRange(f64),

    #[error("chi-square statistic argument must be nonnegative, got {0}")]
    NegativeStatistic(f64),

    #[error("success count {k} exceeds trial count {n}")]
    SuccessesExceedTrials { n: u64, k: u64 },

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("empty observation sequence")]
    EmptySequence,

    #[error("replication count must be at least 1")]
    ZeroReplications,

    #[error("unsupported regime for the quadratic interval: n + kappa - 2 = {0} is not positive")]
    UnsupportedRegime(f64),

    #[error("unknown method identifier `{0}`")]
    UnknownMethod(String),

    #[error("margin profile is not a function of phat*(1-phat) alone for method `{0}`")]
    UnsupportedProfileMethod(Method),

    #[error("no records match the subgroup filter")]
    EmptySubgroup,

    #[error("dataset schema error: {0}")]
    Schema(String),

    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error("unknown filter column `{0}`")]
    UnknownColumn(String),

    #[error("unknown figure identifier `{0}`")]
    UnknownFigure(String),

    #[error("figure data is published at levels 0.90, 0.95, and 0.99 only, got {0}")]
    UnsupportedFigureLevel(f64),

    #[error("{0}")]
    Usage(String),

    #[error("internal numerical error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv parse error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
