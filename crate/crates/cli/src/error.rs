use std::io;
use std::path::PathBuf;

use chebdyn::dyn1d::Dyn1dError;
use chebdyn::ergodic::ErgodicError;
use chebdyn::exactpoly::PolyError;
use chebdyn::planemap::MapError;
use chebdyn::render::RenderError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ergodic(#[from] ErgodicError),
    #[error(transparent)]
    Dyn1d(#[from] Dyn1dError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for misuse of the tool, 2 when the computation itself failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Ergodic(
                ErgodicError::ParameterOutOfRange(_)
                | ErgodicError::TooShort { .. }
                | ErgodicError::InvalidSymbol(_),
            ) => 1,
            _ => 2,
        }
    }
}
