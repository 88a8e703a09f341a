//! Naturals extended with infinities.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// A natural number or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(x) => Some(x),
            ExtNat::Inf => None,
        }
    }

    /// `self - w`, or `None` when the result would be negative. `∞ - w = ∞`.
    pub fn checked_sub(self, w: u64) -> Option<ExtNat> {
        match self {
            ExtNat::Fin(x) => x.checked_sub(w).map(ExtNat::Fin),
            ExtNat::Inf => Some(ExtNat::Inf),
        }
    }

    pub fn saturating_add(self, w: u64) -> ExtNat {
        match self {
            ExtNat::Fin(x) => x.checked_add(w).map_or(ExtNat::Inf, ExtNat::Fin),
            ExtNat::Inf => ExtNat::Inf,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(x: u64) -> Self {
        ExtNat::Fin(x)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(x) => write!(f, "{x}"),
            ExtNat::Inf => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(x) => s.serialize_u64(*x),
            ExtNat::Inf => s.serialize_str("+inf"),
        }
    }
}

/// An edge label of the subgame-perfect fixpoint: a natural or `±∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    NegInf,
    Fin(u64),
    PosInf,
}

impl Label {
    fn rank(self) -> (u8, u64) {
        match self {
            Label::NegInf => (0, 0),
            Label::Fin(x) => (1, x),
            Label::PosInf => (2, 0),
        }
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<ExtNat> for Label {
    fn from(x: ExtNat) -> Self {
        match x {
            ExtNat::Fin(v) => Label::Fin(v),
            ExtNat::Inf => Label::PosInf,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::NegInf => f.write_str("-inf"),
            Label::Fin(x) => write!(f, "{x}"),
            Label::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Fin(x) => s.serialize_u64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}
