use alloc::string::String;

/// Errors raised by constructors and operations of this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("point does not belong to the space")]
    PointMismatch,

    #[error("operands live in different spaces")]
    SpaceMismatch,

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    #[error("{what} of size {size} exceeds the bound {bound}")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("exact family evaluation needs a periodicity certificate")]
    MissingCertificate,

    #[error("postcondition violated: {0}")]
    Postcondition(String),
}

impl Error {
    pub fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
