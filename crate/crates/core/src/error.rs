use std::fmt;

use thiserror::Error;

/// A syntax error with the 1-based location of the offending token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.token.is_empty() {
            write!(
                f,
                "{}:{}: {} at end of input",
                self.line, self.column, self.message
            )
        } else {
            write!(
                f,
                "{}:{}: {} at `{}`",
                self.line, self.column, self.message, self.token
            )
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("polyadic instruction in plain PGA extraction: `{0}`")]
    PolyadicInPlainExtraction(String),

    #[error("supplementary instruction `{0}` not allowed here")]
    SupplementaryInstruction(String),

    #[error("unanchored backward jump at position {position}")]
    UnanchoredBackwardJump { position: usize },

    #[error("fragment index {index} out of range 1..={len}")]
    FragmentIndex { index: usize, len: usize },

    #[error("unsupported program notation index `{0}` (only C and D are supported)")]
    UnsupportedNotation(String),

    #[error("register file state {0} is outside the configured state set")]
    OutsideIrfs(String),

    #[error("register file state space too large ({0})")]
    StateSpaceTooLarge(String),

    #[error("split point {h} out of range for a program of length {len}")]
    SplitPoint { h: usize, len: usize },

    #[error("invalid thread graph: {0}")]
    InvalidGraph(String),

    #[error("empty instruction sequence")]
    EmptySequence,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
