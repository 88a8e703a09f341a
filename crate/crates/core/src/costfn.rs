//! Non-decreasing piecewise-affine edge cost functions.
//!
//! A function is a list of pieces `(from_load, slope, intercept)`; a piece
//! applies to every load from its `from_load` up to the next piece's
//! `from_load - 1`, and the last piece extends to infinity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub from_load: u64,
    pub slope: u64,
    pub intercept: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostFnError {
    #[error("cost function has no pieces")]
    Empty,
    #[error("first piece must start at load 1 (starts at {0})")]
    FirstPieceNotAtOne(u64),
    #[error("pieces overlap or are unsorted at from_load {0}")]
    Unsorted(u64),
    #[error("decreasing at load {load}: {before} then {after}")]
    Decreasing { load: u64, before: u64, after: u64 },
    #[error("value overflows at load {0}")]
    Overflow(u64),
}

/// A validated cost function. Values are natural numbers and non-decreasing in
/// the load.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CostFunction {
    pieces: Vec<Piece>,
}

impl CostFunction {
    pub fn new(pieces: Vec<Piece>) -> Result<Self, CostFnError> {
        validate_costfn(&pieces)?;
        Ok(Self { pieces })
    }

    /// `x ↦ slope·x + intercept`.
    pub fn affine(slope: u64, intercept: u64) -> Self {
        Self {
            pieces: vec![Piece {
                from_load: 1,
                slope,
                intercept,
            }],
        }
    }

    pub fn constant(c: u64) -> Self {
        Self::affine(0, c)
    }

    pub fn zero() -> Self {
        Self::constant(0)
    }

    /// `low` for loads up to `limit`, `high` above.
    pub fn threshold(limit: u64, low: u64, high: u64) -> Result<Self, CostFnError> {
        if limit == 0 {
            return Self::new(vec![Piece {
                from_load: 1,
                slope: 0,
                intercept: high,
            }]);
        }
        Self::new(vec![
            Piece {
                from_load: 1,
                slope: 0,
                intercept: low,
            },
            Piece {
                from_load: limit + 1,
                slope: 0,
                intercept: high,
            },
        ])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.slope == 0 && p.intercept == 0)
    }

    pub fn eval(&self, load: u64) -> Result<u64> {
        if load == 0 {
            return Err(Error::ZeroLoad);
        }
        let piece = self.piece_for(load);
        eval_piece(piece, load).ok_or(Error::Overflow)
    }

    fn piece_for(&self, load: u64) -> &Piece {
        let idx = self.pieces.partition_point(|p| p.from_load <= load);
        &self.pieces[idx - 1]
    }
}

fn eval_piece(p: &Piece, load: u64) -> Option<u64> {
    p.slope.checked_mul(load)?.checked_add(p.intercept)
}

/// Checks every invariant of a piece list. Within a piece monotonicity follows
/// from the slope being natural, so only piece boundaries are inspected.
pub fn validate_costfn(pieces: &[Piece]) -> Result<(), CostFnError> {
    let first = pieces.first().ok_or(CostFnError::Empty)?;
    if first.from_load != 1 {
        return Err(CostFnError::FirstPieceNotAtOne(first.from_load));
    }
    for pair in pieces.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        if next.from_load <= prev.from_load {
            return Err(CostFnError::Unsorted(next.from_load));
        }
        let x = next.from_load;
        let before = eval_piece(prev, x - 1).ok_or(CostFnError::Overflow(x - 1))?;
        let after = eval_piece(next, x).ok_or(CostFnError::Overflow(x))?;
        if after < before {
            return Err(CostFnError::Decreasing {
                load: x,
                before,
                after,
            });
        }
    }
    Ok(())
}

impl<'de> Deserialize<'de> for CostFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            pieces: Vec<Piece>,
        }
        let raw = Raw::deserialize(d)?;
        CostFunction::new(raw.pieces).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for CostFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| match (p.slope, p.intercept) {
                (0, b) => format!("[{}..] {}", p.from_load, b),
                (a, 0) => format!("[{}..] {}x", p.from_load, a),
                (a, b) => format!("[{}..] {}x+{}", p.from_load, a, b),
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}
