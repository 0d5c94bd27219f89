use thiserror::Error;

/// Errors shared by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke a documented precondition (shape mismatch, asymmetric input, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Input file could not be parsed; line 0 stands for the whole file.
    #[error("parse error{}: {msg}", at_line(*line))]
    Parse { line: usize, msg: String },

    /// Exhaustive oracle or lift guard refused an instance.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// The ellipsoid ran out of iterations before certifying an answer.
    #[error("solver budget exhausted after {iterations} iterations")]
    BudgetExhausted { iterations: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at_line(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" at line {line}")
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
