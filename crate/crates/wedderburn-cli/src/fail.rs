//! Process-level failure carrying the exit code contract:
//! 0 success, 2 verification failure, 3 budget exhausted or undecided,
//! 4 malformed or rejected input.

pub const EXIT_VERIFICATION: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_INPUT: u8 = 4;

/// A failure with its process exit code and a one-line explanation.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_BUDGET,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VERIFICATION,
            message: message.into(),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;
