use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("position {pos} out of range for domain of size {len}")]
    OutOfRange { pos: usize, len: usize },

    #[error("illegal change at position {pos}: {reason}")]
    IllegalChange { pos: usize, reason: &'static str },

    #[error("monoid is not group-free")]
    NotGroupFree,

    #[error("no Krohn-Rhodes decomposition found for monoid of size {size}")]
    DecompositionNotFound { size: usize },

    #[error("transition monoid exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("position {pos} does not hold an opening bracket")]
    NotAnOpening { pos: usize },

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("invalid automaton: {0}")]
    InvalidDfa(String),

    #[error("regex parse error at offset {offset}: {message}")]
    Regex { offset: usize, message: String },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unsupported operation `{op}` for problem {problem}")]
    Unsupported { op: String, problem: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_pos(pos: usize, len: usize) -> Result<()> {
    if pos < len {
        Ok(())
    } else {
        Err(Error::OutOfRange { pos, len })
    }
}
