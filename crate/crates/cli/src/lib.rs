//! Configuration, check suites and machine-readable reports for the
//! `todactl` command line tool.

pub mod config;
pub mod explain;
pub mod report;
pub mod suites;

pub use config::RunConfig;
pub use explain::explain;
pub use report::{CheckStatus, Record, Report, SCHEMA_VERSION};
pub use suites::{run_suite, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("unknown suite {0} (expected paper-verify, paper-eigen, paper-degenerate or all)")]
    UnknownSuite(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Kernel(#[from] kernels::KernelError),
    #[error(transparent)]
    Verify(#[from] verify::VerifyError),
    #[error(transparent)]
    Numeric(#[from] numeric::NumericError),
    #[error(transparent)]
    Toda(#[from] toda::TodaError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// `2` for bad input (config, names), `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnknownSuite(_) => 2,
            CliError::Kernel(kernels::KernelError::UnknownPair(_) | kernels::KernelError::OutOfRange { .. } | kernels::KernelError::UnexpectedParam(_)) => 2,
            CliError::Numeric(numeric::NumericError::Config(_)) => 2,
            _ => 1,
        }
    }
}
