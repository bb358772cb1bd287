use thiserror::Error;

/// Errors raised by the solver, the diagram sweeps and the eigensolver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// Two roots of the extremum polynomial could not be separated. Raised
    /// close to the turning point; a finer scan may resolve it.
    #[error("degenerate bracket near photon fraction x = {x:.3e} (|p| = {residual:.3e}); increase scan_points")]
    DegenerateBracket { x: f64, residual: f64 },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    /// Wraps an error with the parameter point at which it occurred.
    #[error("at g = {g}, zeta = {zeta}: {source}")]
    AtPoint {
        g: f64,
        zeta: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// Attaches the parameter point; an existing point is kept.
    pub fn at(self, g: f64, zeta: f64) -> Self {
        match self {
            e @ Error::AtPoint { .. } => e,
            e => Error::AtPoint {
                g,
                zeta,
                source: Box::new(e),
            },
        }
    }

    /// The innermost error, with any parameter-point wrapper removed.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root_cause(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
