use thiserror::Error;

/// Failure modes shared by every computation in the crate.
///
/// The variant names are part of the report format: the CLI writes
/// [`Error::name`] into the `error.name` field of a failed report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame has numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("plane is not Lagrangian: isotropy residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotLagrangian { residual: f64, tolerance: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("planes are not transversal")]
    NotTransversal,

    #[error("quadratic form is degenerate (smallest |eigenvalue| ratio {ratio:.3e})")]
    DegenerateForm { ratio: f64 },

    #[error("loop is undersampled: phase increment {increment:.4} at segment {segment} is not below pi/2")]
    Undersampled { segment: usize, increment: f64 },

    #[error("loop is not closed: largest principal angle between endpoints is {angle:.3e}")]
    NotClosed { angle: f64 },

    #[error("no transversal plane found for arc {arc} after {attempts} candidates")]
    RetryExhausted { arc: usize, attempts: usize },

    #[error("cocycle value on edge ({from}, {to}) varies across the overlap")]
    InconsistentOverlap { from: usize, to: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable identifier used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::RankDeficient { .. } => "RankDeficient",
            Error::NotLagrangian { .. } => "NotLagrangian",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotTransversal => "NotTransversal",
            Error::DegenerateForm { .. } => "DegenerateForm",
            Error::Undersampled { .. } => "Undersampled",
            Error::NotClosed { .. } => "NotClosed",
            Error::RetryExhausted { .. } => "RetryExhausted",
            Error::InconsistentOverlap { .. } => "InconsistentOverlap",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
