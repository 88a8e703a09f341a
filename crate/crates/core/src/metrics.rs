//! Price of anarchy and price of stability.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::arena::Game;
use crate::error::{Error, Result};
use crate::ne::{compute_values, gamma_min_ne_with, NeOptimum};
use crate::socopt::social_optimum;

/// Ratio of an equilibrium cost to the social optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Price {
    Finite(Ratio<u64>),
    /// The optimum costs nothing but the equilibrium does not.
    Infinite,
}

impl Price {
    pub fn new(cost: u64, optimum: u64) -> Self {
        match (cost, optimum) {
            (0, 0) => Price::Finite(Ratio::from_integer(1)),
            (_, 0) => Price::Infinite,
            (c, o) => Price::Finite(Ratio::new(c, o)),
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Price::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Price::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for Price {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Price {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Price::Finite(a), Price::Finite(b)) => {
                // cross-multiply in u128 to avoid overflow
                let l = *a.numer() as u128 * *b.denom() as u128;
                let r = *b.numer() as u128 * *a.denom() as u128;
                l.cmp(&r)
            }
            (Price::Finite(_), Price::Infinite) => Less,
            (Price::Infinite, Price::Finite(_)) => Greater,
            (Price::Infinite, Price::Infinite) => Equal,
        }
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Price::Finite(r) => write!(f, "{r}"),
            Price::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Price {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Prices {
    pub optimum: u64,
    pub best: NeOptimum,
    /// Witness of the worst equilibrium; its `cost` field is negated.
    pub worst: NeOptimum,
    pub best_cost: u64,
    pub worst_cost: u64,
    pub poa: Price,
    pub pos: Price,
}

/// Social optimum, best and worst equilibrium costs, and both prices.
pub fn prices(game: &Game) -> Result<Prices> {
    let so = social_optimum(game)?;
    let values = compute_values(game)?;
    let n = game.players();
    let best = gamma_min_ne_with(game, &values, &vec![1; n])?;
    let worst = gamma_min_ne_with(game, &values, &vec![-1; n])?;
    let best_cost = u64::try_from(best.cost).map_err(|_| Error::Overflow)?;
    let worst_cost = u64::try_from(-worst.cost).map_err(|_| Error::Overflow)?;
    Ok(Prices {
        optimum: so.cost,
        poa: Price::new(worst_cost, so.cost),
        pos: Price::new(best_cost, so.cost),
        best,
        worst,
        best_cost,
        worst_cost,
    })
}

pub fn poa(game: &Game) -> Result<Price> {
    Ok(prices(game)?.poa)
}

pub fn pos(game: &Game) -> Result<Price> {
    Ok(prices(game)?.pos)
}
