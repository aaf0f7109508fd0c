//! Command-line front end: run specifications, the state grammar, CSV
//! emission, figure presets, and the four subcommand implementations.

pub mod commands;
pub mod config;
pub mod csvout;
pub mod plot;
pub mod presets;
pub mod spec;
pub mod statespec;

/// CLI-level failures mapped onto process exit codes: usage errors exit
/// with 2, I/O errors with 3; verification failures exit with 1 but are
/// not errors (the report is the output).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> CliError {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<collihom_core::Error> for CliError {
    fn from(err: collihom_core::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
