use thiserror::Error;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_VERDICT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: JSON syntax, missing fields, bad flags.
    #[error("{0}")]
    Input(String),
    /// A spec value that parses but is invalid, addressed by field path.
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Math(#[from] reebvol_core::Error),
}

impl CliError {
    pub fn field(path: impl Into<String>, message: impl ToString) -> CliError {
        CliError::Field { path: path.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Field { .. } => EXIT_PARSE,
            CliError::Math(_) => EXIT_MATH,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
