use std::fmt;

use thiserror::Error;

/// Counters reported when a computation is cut off by its [`crate::groebner::Budget`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub elapsed_ms: u128,
    pub reductions: u64,
    pub pairs_left: usize,
    pub basis_len: usize,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ms, {} reduction steps, basis size {}, {} pairs pending",
            self.elapsed_ms, self.reductions, self.basis_len, self.pairs_left
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("resource limit reached ({0})")]
    Timeout(Stats),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undeclared name `{name}`; declared: {}", candidates.join(", "))]
    Undeclared { name: String, candidates: Vec<String> },
    #[error("input not irreducible/coprime: the resultant vanishes identically")]
    NotCoprime,
    #[error("no rational consistent jet found; supply one explicitly ({0})")]
    NoJet(String),
    #[error("no nontrivial elimination up to level j = {last_j}")]
    MaxLevel { last_j: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
