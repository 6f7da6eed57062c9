use thiserror::Error;

/// Errors raised by the numerical routines and report builders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the dense storage cap of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("basis is not Hilbert-Schmidt orthonormal (max Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("trace is not 1 (got {trace})")]
    InvalidTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("eigensolver did not converge (residual {residual:e})")]
    EigenNonConvergence { residual: f64 },

    #[error("site {site} out of range for {num_sites} sites")]
    SiteOutOfRange { site: usize, num_sites: usize },

    #[error("site subset must be nonempty")]
    EmptySubset,

    #[error("site {site} appears more than once in the subset")]
    DuplicateSite { site: usize },

    #[error("local dimension must be at least 2 (got {0})")]
    InvalidLocalDimension(usize),

    #[error("effect P_{n}^({b}) is not positive (min eigenvalue {min_eigenvalue:e})")]
    EffectNotPositive { b: usize, n: usize, min_eigenvalue: f64 },

    #[error("parameter t = {0} must be positive and finite")]
    InvalidT(f64),

    #[error("kappa = {kappa} outside (1/{d}, 1]")]
    KappaOutOfRange { kappa: f64, d: usize },

    #[error("invalid s parameter: {0}")]
    InvalidSParameter(String),

    #[error("generalized mean requires nonnegative inputs (got {0})")]
    NegativeInput(f64),

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },

    #[error("k = {k} outside [{min}, {max}]")]
    KOutOfRange { k: usize, min: usize, max: usize },

    #[error("noise parameter p = {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid state specifier: {0}")]
    InvalidStateSpec(String),

    #[error("dimension {dim} is not a power of the local dimension {local_dim}")]
    NotAPower { dim: usize, local_dim: usize },

    #[error("bound violated: lhs {lhs} > bound {bound}")]
    BoundViolated { lhs: f64, bound: f64 },

    #[error("threshold function is not monotone on the sampling grid: {grid:?}")]
    NotMonotone { grid: Vec<(f64, f64)> },

    #[error("solver tolerance must be positive (got {0})")]
    InvalidTolerance(f64),

    #[error("unknown table id: {0}")]
    UnknownTable(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
