use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("entity surface is empty")]
    EmptySurface,
    #[error("duplicate entity: {0:?}")]
    DuplicateEntity(String),
    #[error("entity not found: {0:?}")]
    NotFound(String),
    #[error("candidate is not pending: {0:?}")]
    UnknownCandidate(String),
    #[error("more than one decision for candidate {0:?}")]
    DuplicateDecision(String),
    #[error("invalid entry {surface:?}: {reason}")]
    InvalidEntry { surface: String, reason: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no valid vector line in embedding file")]
    EmptyVocabulary,
    #[error("knowledge base contains no is-a pairs")]
    EmptyIndex,
    #[error("no seed entity resolves to a vector")]
    NoResolvableSeed,
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("invalid span {start}..{end}: {reason}")]
    InvalidSpan {
        start: usize,
        end: usize,
        reason: &'static str,
    },
    #[error("session not found: {0}")]
    SessionNotFound(String),
    #[error("storage error: {0}")]
    Storage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
