use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const CERTIFIED: i32 = 0;
    pub const SELFTEST_FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const REFUTED: i32 = 3;
    pub const UNKNOWN: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Io(_) => exit::IO,
        }
    }
}
