use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("substituted value `{0}` is not closed")]
    OpenSubstitution(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("invalid enumeration bounds: {0}")]
    InvalidConfig(String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

/// Failures of the bounded enumerators and membership checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("enumeration exceeded its work budget ({0} elements)")]
    Budget(usize),
    #[error("demand fixpoint did not settle within {0} rounds")]
    Rounds(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("ill-formed type environment: `{0}` defined under {1} binders, only {2} in scope")]
    IllFormedEnv(String, usize, usize),
    #[error("ill-typed: {0}")]
    IllTyped(String),
    #[error("negative type index produced by shift")]
    NegativeIndex,
}
