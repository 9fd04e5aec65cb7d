use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid range [{start}, {end}): {reason}")]
    InvalidRange {
        start: usize,
        end: usize,
        reason: String,
    },

    #[error("invalid edit plan: {0}")]
    InvalidPlan(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid pipeline config: {0}")]
    Config(String),

    #[error("unknown {kind} resource '{id}'")]
    UnknownResource { kind: &'static str, id: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: multiword tokens and empty nodes are not supported ({id})")]
    UnsupportedMwt { line: usize, id: String },

    #[error("invalid keyboard layout: {0}")]
    InvalidLayout(String),

    #[error("invalid resource: {0}")]
    InvalidResource(String),

    #[error("line {line}: expected {expected} vector components, found {found}")]
    DimMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: zero vector for '{word}'")]
    ZeroVector { line: usize, word: String },

    #[error("word '{0}' is not in the vocabulary")]
    Oov(String),

    #[error("document {ordinal}: {source}")]
    Document {
        ordinal: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "INVALID_INPUT",
            Error::InvalidRange { .. } => "INVALID_RANGE",
            Error::InvalidPlan(_) => "INVALID_PLAN",
            Error::InvalidParam(_) => "INVALID_PARAM",
            Error::Config(_) => "INVALID_CONFIG",
            Error::UnknownResource { .. } => "UNKNOWN_RESOURCE",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::UnsupportedMwt { .. } => "UNSUPPORTED_MWT",
            Error::InvalidLayout(_) => "INVALID_LAYOUT",
            Error::InvalidResource(_) => "INVALID_RESOURCE",
            Error::DimMismatch { .. } => "DIM_MISMATCH",
            Error::ZeroVector { .. } => "ZERO_VECTOR",
            Error::Oov(_) => "OOV",
            Error::Document { source, .. } => source.code(),
            Error::Io(_) => "IO_ERROR",
        }
    }

    /// True for errors that stem from loading or resolving external resources.
    pub fn is_resource_error(&self) -> bool {
        match self {
            Error::UnknownResource { .. }
            | Error::InvalidLayout(_)
            | Error::InvalidResource(_)
            | Error::DimMismatch { .. }
            | Error::ZeroVector { .. } => true,
            Error::Document { source, .. } => source.is_resource_error(),
            _ => false,
        }
    }

    pub(crate) fn in_document(self, ordinal: usize) -> Error {
        Error::Document {
            ordinal,
            source: Box::new(self),
        }
    }
}
