use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid token {0:?}")]
    InvalidToken(String),
    #[error("symbol {0} is not declared")]
    UndeclaredSymbol(String),
    #[error("initial nonterminal {0} is not declared")]
    InitialNotDeclared(String),
    #[error("name {0} is declared twice")]
    NameCollision(String),
    #[error("left-hand side has no nonterminal")]
    NoNonterminalOnLhs,
    #[error("rule {rule} does not match at position {position}")]
    InvalidMatch { rule: usize, position: usize },
    #[error("trace does not replay at step {0}")]
    InvalidTrace(usize),
    #[error("trace {index} does not derive its word")]
    TraceMismatch { index: usize },
    #[error("rule {0} is not context-free")]
    NotContextFree(usize),
    #[error("word sets were bounded at different lengths ({0} and {1})")]
    BoundMismatch(usize, usize),
    #[error("input bounded at length {have} cannot support output bound {need}")]
    InsufficientInputBound { have: usize, need: usize },
}
