//! Command implementations behind the `lapdiag` binary.
//!
//! Each `cmd_*` function returns a serializable result; the binary only
//! parses arguments, writes the result and maps errors to exit codes.

mod commands;
mod output;
mod source;

pub use commands::{
    cmd_approx, cmd_compare, cmd_exact, cmd_generate, ApproxArgs, ApproxOutput, CompareOutput,
    ExactArgs, ExactOutput, GeneratedFiles, RunManifest,
};
pub use output::{emit, to_json};
pub use source::{load, InputDescriptor, Loaded, Source};

use thiserror::Error;

/// Environment variable overriding the dense oracle node cap.
pub const DENSE_CAP_ENV: &str = "LAPDIAG_DENSE_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid result file: {0}")]
    Schema(String),

    #[error(transparent)]
    Core(#[from] lapdiag::Error),
}

impl CliError {
    /// 2 for bad input or usage, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}
