use thiserror::Error;

/// Rejections raised while validating the operator order and skewness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("alpha = {0} is outside (0, 2]")]
    OutOfRangeAlpha(f64),
    #[error("alpha = {alpha} lies within {guard} of 1, where the operator is undefined")]
    AlphaNearOne { alpha: f64, guard: f64 },
    #[error("|theta| = {theta_abs} exceeds min(alpha, 2 - alpha) = {limit}")]
    SkewnessTooLarge { theta_abs: f64, limit: f64 },
    #[error("alpha-one guard {0} must be finite and non-negative")]
    InvalidGuard(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("weight window [{k_min}, {k_max}] must contain 0")]
    InvalidWindow { k_min: i64, k_max: i64 },
    #[error("tail sums are defined for j >= 1 only")]
    TailIndexZero,
    #[error("kernel index requires h > 0, got {0}")]
    NonPositiveSpacing(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("degenerate domain: left = {left}, right = {right}, n_cells = {n_cells}")]
    DegenerateDomain {
        left: f64,
        right: f64,
        n_cells: usize,
    },
    #[error("a delta initial condition needs an even number of cells, got {0}")]
    DeltaNeedsEvenN(usize),
    #[error("box [{from}, {to}] does not lie inside the domain [{left}, {right}]")]
    BoxOutOfDomain {
        from: f64,
        to: f64,
        left: f64,
        right: f64,
    },
    #[error("tabulated data is invalid: {0}")]
    InvalidTable(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular (pivot {pivot:e} in column {column})")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("time step {dt} is not below the explicit stability limit {limit}")]
    UnstableTimestep { dt: f64, limit: f64 },
    #[error("weight window covers |k| <= {available}, but {required} is needed")]
    WindowTooSmall { required: usize, available: usize },
    #[error("tail sums cover j <= {available}, but {required} is needed")]
    TailsTooShort { required: usize, available: usize },
    #[error("field has {found} values, grid needs {expected}")]
    FieldLength { expected: usize, found: usize },
    #[error("invalid scheme setting: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("no snapshot within one step of t = {0}")]
    NoSuchSnapshot(f64),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{path}`: {message}")]
    Validation { path: String, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("time must be positive, got {0}")]
    NonpositiveTime(f64),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}
