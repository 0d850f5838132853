use thiserror::Error;

/// Errors produced by graph construction, the linear algebra kernels and the
/// walk applications.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CtqwError {
    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("{family} graph needs at least {min} vertices, got {n}")]
    GraphTooSmall {
        family: &'static str,
        n: usize,
        min: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} is not fully connected")]
    NotFullyConnected { vertex: usize },

    #[error("graph has no fully connected vertex")]
    MissingHub,

    #[error("graph orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("initial vertex {0} is one of the traps")]
    StartInTraps(usize),

    #[error("marked vertex {vertex} has complex oracle strength; a Hermitian Hamiltonian is required")]
    ComplexOracle { vertex: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    EigenNotConverged { sweeps: usize, off_norm: f64 },

    #[error("singular Padé denominator")]
    SingularPade,

    #[error("quadrature did not converge: error estimate {estimate:.3e} > {requested:.3e} after {evaluations} evaluations")]
    QuadratureNotConverged {
        estimate: f64,
        requested: f64,
        evaluations: usize,
    },

    #[error("transport did not converge by t = {t_max}: trappable weight {remaining:.3e} exceeds {tol:.3e}")]
    TransportNotConverged { t_max: f64, remaining: f64, tol: f64 },

    #[error("time grid invalid: {0}")]
    InvalidGrid(String),

    #[error("{what} deviates from closed form by {deviation:.3e} (tolerance {tolerance:.1e})")]
    ClosedFormMismatch {
        what: &'static str,
        deviation: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, CtqwError>;
