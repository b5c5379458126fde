//! Exit codes and the JSON error printed on stderr.

use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;

use polychromatic::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// A verifier ran and said no.
    CheckFailed = 1,
    Usage = 2,
    Io = 3,
    /// Malformed JSON or a format version we do not read.
    Schema = 4,
    /// Inputs parsed but violate a precondition of the requested operation.
    Precondition = 5,
}

#[derive(Debug, Serialize)]
pub struct Failure {
    pub error: Kind,
    pub exit_code: u8,
    pub message: String,
}

impl Failure {
    fn new(kind: Kind, message: impl Into<String>) -> Self {
        Self {
            error: kind,
            exit_code: kind as u8,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Kind::Usage, message)
    }

    pub fn check(message: impl Into<String>) -> Self {
        Self::new(Kind::CheckFailed, message)
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(Kind::Io, format!("{}: {e}", path.display()))
    }

    pub fn report(&self) -> ExitCode {
        eprintln!("{}", serde_json::to_string(self).expect("failure serializes"));
        ExitCode::from(self.exit_code)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Io(_) => Kind::Io,
            Error::Json(_) | Error::FormatVersion { .. } => Kind::Schema,
            _ => Kind::Precondition,
        };
        Self::new(kind, e.to_string())
    }
}
