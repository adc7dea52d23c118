//! Error types, one enum per module.
//!
//! The variants distinguish argument errors (caller passed something outside
//! the documented domain), data errors (inputs contain non-finite values),
//! and numerical errors (an iteration failed to converge or diverged).
//! Diagnostic payloads are stored as `f64` regardless of the working scalar.

use thiserror::Error;

/// Errors from the dense linear-algebra kernels.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("requested rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("matrix must have at least {min} rows/columns, got {rows}x{cols}")]
    TooSmall { min: usize, rows: usize, cols: usize },
    #[error("{context}: dimension mismatch ({left} vs {right})")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("SVD did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

/// Errors from full-order model setup and time integration.
#[derive(Debug, Error)]
pub enum FomError {
    #[error("grid needs at least {min} points per axis, got {n}")]
    GridTooSmall { min: usize, n: usize },
    #[error("invalid time span [{t0}, {t1}]")]
    BadTimeSpan { t0: f64, t1: f64 },
    #[error("need at least {min} save points, got {n}")]
    TooFewSavePoints { min: usize, n: usize },
    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step limit {max_steps} reached at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("initial state has {got} entries, problem has {expected} unknowns")]
    StateSizeMismatch { expected: usize, got: usize },
    #[error("invalid problem parameter: {0}")]
    BadParameter(&'static str),
}

/// Errors from the offline decomposition algorithms.
#[derive(Debug, Error)]
pub enum DecompError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("snapshot matrix is empty")]
    EmptyData,
    #[error("reference matrix has zero norm, relative error undefined")]
    ZeroNorm,
    #[error("shapes differ: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("requested rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("step size and penalty parameters must be positive")]
    BadParameter,
    #[error("snapshot entries must lie in [0, 1], found range [{min}, {max}]")]
    DataOutOfRange { min: f64, max: f64 },
    #[error("basis columns are not orthonormal (max deviation {dev:e})")]
    NotOrthonormal { dev: f64 },
    #[error(
        "residual diverged at iteration {iteration}: {residual:e} is more than \
         10x the minimum {min_residual:e}; try a smaller step"
    )]
    Diverged {
        iteration: usize,
        residual: f64,
        min_residual: f64,
    },
    #[error("residual stagnated: no decrease over {window} iterations (residual {residual:e})")]
    Stagnated { window: usize, residual: f64 },
    #[error("decay fit needs at least 3 usable error points, got {points}")]
    TooFewFitPoints { points: usize },
}

/// Errors from reduced-order model construction and evaluation.
#[derive(Debug, Error)]
pub enum RomError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Fom(#[from] FomError),
    #[error("sample count {m_p} exceeds grid size {m}")]
    TooManySamples { m_p: usize, m: usize },
    #[error("sample count {m_p} below the well-posedness guard 10*r = {min}")]
    TooFewSamples { m_p: usize, min: usize },
    #[error("sample fraction {fraction} outside (0, 1]")]
    BadSampleFraction { fraction: f64 },
    #[error("amplitude vector has {got} entries, map has rank {expected}")]
    AmplitudeSizeMismatch { expected: usize, got: usize },
    #[error("state vector has {got} entries, map decodes to {expected}")]
    StateSizeMismatch { expected: usize, got: usize },
    #[error("no front crossing of level {level} found in the trajectory")]
    NoFrontCrossing { level: f64 },
    #[error("front displacement is zero within tolerance, speed undefined")]
    StationaryFront,
}

/// Errors from Fourier-Koopman fitting.
#[derive(Debug, Error)]
pub enum KoopmanError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("number of modes p must be even and positive, got {p}")]
    OddModeCount { p: usize },
    #[error("p/2 = {half_p} frequencies need at least {min} samples, got {n}")]
    TooFewSamples { half_p: usize, min: usize, n: usize },
    #[error("sample times must be equispaced (spacing varies by {max_dev:e})")]
    NonEquispacedTimes { max_dev: f64 },
    #[error("times and samples disagree: {times} vs {samples} rows")]
    LengthMismatch { times: usize, samples: usize },
}

/// Errors from the benchmark harness, persistence, and configuration.
#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}: bad snapshot file at byte {offset}: {what}")]
    Format {
        path: String,
        offset: u64,
        what: String,
    },
    #[error("snapshot header claims {rows}x{cols} entries, refusing to allocate")]
    DimensionSanity { rows: u64, cols: u64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown scenario id '{0}'")]
    UnknownScenario(String),
    #[error("trajectory needs at least {min} columns, got {n}")]
    TooFewColumns { min: usize, n: usize },
    #[error("speedup measurement needs at least 3 repeats, got {0}")]
    TooFewRepeats(usize),
    #[error("scenario stage '{stage}' failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

impl BenchError {
    /// Wraps a stage failure with the stage name for partial-report records.
    pub fn stage<E>(stage: &'static str, err: E) -> Self
    where
        E: std::error::Error + Send + Sync + 'static,
    {
        BenchError::Stage {
            stage,
            source: Box::new(err),
        }
    }
}
