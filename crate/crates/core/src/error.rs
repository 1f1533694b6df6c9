use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwdpError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series did not converge within {terms_used} terms")]
    SeriesDivergence { terms_used: usize },

    /// Partial sums of an alternating series grew so far beyond the final
    /// value that the working precision no longer resolves it.
    #[error("cancellation loss after {terms_used} terms (partial sums reached {ratio:.3e} x result)")]
    CancellationLoss { ratio: f64, terms_used: usize },

    #[error("quadrature did not reach tolerance (achieved error {achieved:.3e})")]
    Quadrature { achieved: f64 },

    #[error("result out of representable range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, TwdpError>;

pub(crate) fn invalid_param(msg: impl Into<String>) -> TwdpError {
    TwdpError::InvalidParameter(msg.into())
}
