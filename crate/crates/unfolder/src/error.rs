use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("catamorphism did not reach a term for {0}")]
    CataDiverged(String),
    #[error("goal has no defined value within {0} steps")]
    GoalUndefined(usize),
    #[error("node {0} was already answered")]
    AlreadyAnswered(usize),
    #[error("debugging session is closed")]
    SessionClosed,
    #[error("no such node: {0}")]
    UnknownNode(usize),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
