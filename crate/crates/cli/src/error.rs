use std::fmt;

/// A command failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input, invalid settings or failed preconditions (exit 2).
    Input(String),
    /// The solver failed (exit 3).
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::Solver(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) | Self::Solver(m) => f.write_str(m),
        }
    }
}

impl From<twinreg::Error> for CliError {
    fn from(e: twinreg::Error) -> Self {
        match e {
            twinreg::Error::Divergence(_) => Self::Solver(e.to_string()),
            other => Self::Input(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Input(format!("csv output: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}
