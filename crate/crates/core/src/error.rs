use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value outside the domain of a mathematical function.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument to {op}: {detail}")]
    Argument { op: &'static str, detail: String },

    /// A numerical procedure produced a non-finite value or failed to converge.
    #[error("numeric failure in {module}: {detail}")]
    Numeric {
        module: &'static str,
        detail: String,
        point: Option<Complex64>,
    },

    /// The requested resolution cannot deliver the guaranteed accuracy.
    #[error("insufficient resolution in {op}: {detail}")]
    Resolution { op: &'static str, detail: String },
}

impl Error {
    pub(crate) fn argument(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Argument {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn numeric(module: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric {
            module,
            detail: detail.into(),
            point: None,
        }
    }

    pub(crate) fn numeric_at(
        module: &'static str,
        detail: impl Into<String>,
        point: Complex64,
    ) -> Self {
        Error::Numeric {
            module,
            detail: detail.into(),
            point: Some(point),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
