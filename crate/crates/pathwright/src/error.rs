use thiserror::Error;

/// Error type shared by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate variable name '{0}'")]
    DuplicateName(String),
    #[error("invalid variable name '{0}'")]
    InvalidName(String),
    #[error("fewer than 3 complete rows after listwise deletion ({0} remain)")]
    TooFewRows(usize),
    #[error("row {0} has {1} cells, expected {2}")]
    NonRectangular(usize, usize, usize),
    #[error("variable '{0}' is constant (zero variance)")]
    ConstantVariable(String),
    #[error("correlation entry ({0},{1}) = {2} outside [-1,1]")]
    EntryOutOfRange(usize, usize, f64),
    #[error("correlation matrix asymmetric at ({0},{1}): {2} vs {3}")]
    Asymmetric(usize, usize, f64, f64),
    #[error("correlation diagonal entry {0} is {1}, expected 1")]
    BadDiagonal(usize, f64),
    #[error("correlation file is missing the sample size line 'n <count>'")]
    MissingSampleSize,
    #[error("correlation matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPositiveSemiDefinite(f64),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("cycle detected through variable '{0}'")]
    CycleDetected(String),
    #[error("self-loop on variable '{0}'")]
    SelfLoop(String),
    #[error("duplicate path {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("covary arc touches endogenous variable '{0}'")]
    CovaryOnEndogenous(String),
    #[error("predictor submatrix is singular for outcome '{0}'")]
    SingularPredictors(String),
    #[error("predictor correlation submatrix is singular")]
    SingularSubmatrix,
    #[error("sample covariance is singular (collinear columns)")]
    CollinearColumns,
    #[error("sample size {n} too small: need more than {required}")]
    InsufficientN { n: usize, required: usize },
    #[error("too few observations: {0} (need at least {1})")]
    TooFewObservations(usize, usize),
    #[error("no coefficient supplied for edge {0} -> {1}")]
    MissingCoefficient(String, String),
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
