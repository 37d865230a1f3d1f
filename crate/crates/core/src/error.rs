use thiserror::Error;

/// Errors raised by the numerical kernels, group instances and the normal-families engine.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate element: {0}")]
    DegenerateElement(String),

    #[error("exponent magnitude {magnitude} exceeds the representable range (limit {limit})")]
    Range { magnitude: f64, limit: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("frame is not orthonormal (Gram residual {residual:e})")]
    InvalidFrame { residual: f64 },

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("scan failed: {failed} of {total} grid nodes could not be evaluated")]
    Scan { failed: usize, total: usize },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    /// Domain-type failures: the request left the region where the objects are defined.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Range { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
