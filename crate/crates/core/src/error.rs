use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error for `{parameter}`: {message}")]
    Config { parameter: String, message: String },

    #[error("no convergence{}: residual {residual:e} after {iterations} iterations", fmt_step(.step))]
    Convergence {
        residual: f64,
        iterations: usize,
        step: Option<usize>,
    },

    #[error("singular action Hessian (conjugate point), pivot ratio {pivot_ratio:e}")]
    ConjugatePoint { pivot_ratio: f64 },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("unsupported method: {0}")]
    UnsupportedMethod(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

fn fmt_step(step: &Option<usize>) -> String {
    match step {
        Some(i) => format!(" at step {i}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Attach a step index to a convergence failure.
    pub(crate) fn at_step(self, index: usize) -> Self {
        match self {
            Error::Convergence {
                residual,
                iterations,
                ..
            } => Error::Convergence {
                residual,
                iterations,
                step: Some(index),
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
