use std::path::PathBuf;

use thiserror::Error;
use triscore::EvalError;

/// Process exit codes. The numeric values are a stable contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitCode {
    Success = 0,
    Parse = 2,
    Degenerate = 3,
    Usage = 64,
    OutputIo = 73,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("{0}")]
    Usage(String),

    #[error("cannot write {}: {source}", path.display())]
    OutputIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Parse { .. } => ExitCode::Parse,
            CliError::Degenerate(_) => ExitCode::Degenerate,
            CliError::Usage(_) => ExitCode::Usage,
            CliError::OutputIo { .. } => ExitCode::OutputIo,
            CliError::Eval(EvalError::MissingClass { .. } | EvalError::EmptyDataset) => ExitCode::Degenerate,
            CliError::Eval(EvalError::Config(_)) => ExitCode::Usage,
            CliError::Eval(_) => ExitCode::Degenerate,
        }
    }
}
