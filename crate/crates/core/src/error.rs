use thiserror::Error;

use crate::arena::Violation;
use crate::costfn::CostFnError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Syntax(String),

    #[error("invalid cost function: {0}")]
    CostFn(#[from] CostFnError),

    #[error("invalid arena: {}", join_violations(.0))]
    InvalidArena(Vec<Violation>),

    #[error("cost functions are only charged on loads >= 1 (got load 0)")]
    ZeroLoad,

    #[error("game needs at least one player")]
    NoPlayers,

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow while accumulating costs")]
    Overflow,

    #[error("search budget exhausted after {0} states")]
    Budget(usize),

    #[error("internal error (a proven bound was violated): {0}")]
    Internal(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}
