use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NonHermitianInput { asymmetry: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid qubit level '{0}' (expected 'a' or 'b')")]
    InvalidLevel(String),

    #[error("invalid ion index {0} (expected 1 or 2)")]
    InvalidIon(u32),

    #[error("detuning must be nonzero")]
    ZeroDetuning,

    #[error("Kraus series did not converge after {terms} terms (last term norm {last_norm:.3e})")]
    SeriesNotConverged { terms: usize, last_norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("the subspace oracle only supports the vacuum initial state (n0 = {0})")]
    UnsupportedInitialState(usize),

    #[error("series is empty")]
    EmptySeries,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    #[error("unknown preset '{0}' (expected fig1, fig2a, fig2b or fig3)")]
    UnknownPreset(String),

    #[error("at grid point {index} ({point}): {source}")]
    AtGridPoint {
        index: usize,
        point: String,
        #[source]
        source: Box<Error>,
    },
}
