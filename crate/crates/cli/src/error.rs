use std::path::PathBuf;

use thiserror::Error;
use twdp_core::TwdpError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] TwdpError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit status: 2 usage, 3 series convergence, 4 quadrature,
    /// 5 I/O, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                TwdpError::InvalidParameter(_) | TwdpError::InvalidArgument(_) => 2,
                TwdpError::SeriesDivergence { .. } | TwdpError::CancellationLoss { .. } | TwdpError::Range(_) => 3,
                TwdpError::Quadrature { .. } => 4,
            },
            CliError::Io { .. } | CliError::Output(_) => 5,
            CliError::Json(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
