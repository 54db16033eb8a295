use thiserror::Error;

/// Errors produced by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-range input (bad site index, wrong dimension, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Parameters outside the regime where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A formula was evaluated outside its stated validity window.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The Krylov propagator could not reach the requested tolerance.
    #[error("Krylov propagation did not converge: residual {residual:e} at dimension {dim}{}", .context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    Convergence {
        residual: f64,
        dim: usize,
        context: Option<String>,
    },

    /// No distance row of a field ever reached the threshold.
    #[error("no distance reaches threshold {epsilon:e} (field maximum {max_abs:e}); try a smaller epsilon")]
    EmptyFront { epsilon: f64, max_abs: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Attaches a context string (e.g. the simulation time) to convergence errors.
    pub fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::Convergence { residual, dim, .. } => Error::Convergence {
                residual,
                dim,
                context: Some(ctx.into()),
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
