use hodge_core::HodgeError;

pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn io(message: impl Into<String>) -> Self {
        Self { code: EXIT_IO, message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: message.into() }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &HodgeError) -> i32 {
    match e {
        HodgeError::Parse(_) => EXIT_IO,
        HodgeError::NoConvergence(_) | HodgeError::ZeroBottomPairing(_) | HodgeError::ConstructionFailed(_) => {
            EXIT_NUMERICAL
        }
        HodgeError::PathPoint { source, .. } => exit_code(source),
        _ => EXIT_INVALID,
    }
}

impl From<HodgeError> for CliError {
    fn from(e: HodgeError) -> Self {
        Self { code: exit_code(&e), message: e.to_string() }
    }
}
