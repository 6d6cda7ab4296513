use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter outside its admissible domain.
    #[error("{field} {reason}")]
    Domain { field: String, reason: String },

    #[error("argument ({re}, {im}) sits on a branch point of the self-energy")]
    BranchPoint { re: f64, im: f64 },

    #[error("second sheet requested for channel {channel} at ({re}, {im}), outside the continuation window")]
    OutsideContinuation { channel: i32, re: f64, im: f64 },

    #[error("continued fraction not converged at depth {depth} (tail doubling changed the fold by {change:e})")]
    FoldNotConverged { depth: usize, change: f64 },

    #[error("{stage}: singular denominator at ({re}, {im})")]
    Singular { stage: &'static str, re: f64, im: f64 },

    #[error("{stage}: no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        stage: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("pole found in the upper half plane at ({re}, {im}); sheet selection is inconsistent")]
    SheetFault { re: f64, im: f64 },

    #[error("coefficient window {window} too small: edge ratio {edge_ratio:e}")]
    WindowTooSmall { window: usize, edge_ratio: f64 },

    #[error("biorthogonal norm vanishes ({norm:e}); exceptional point")]
    ExceptionalPoint { norm: f64 },

    #[error("mode window {window} not converged: doubling changed the result by {change:e}")]
    ModeWindow { window: usize, change: f64 },

    #[error("norm drift {drift:e} exceeds tolerance {tolerance:e}; reduce dt")]
    NormDrift { drift: f64, tolerance: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(field: &str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }

    /// True for failures of a numerical procedure, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::Domain { .. } | Error::GridMismatch(_) | Error::Config(_) | Error::Io(_)
        )
    }
}
