//! General Nash equilibria: deviation values, the outcome test, optimal
//! equilibria through the bound-augmented graph, and punishment-based
//! strategy profiles.

mod graph;
mod profile;
mod values;

pub use graph::{constrained_ne, gamma_min_ne, gamma_min_ne_with, NeOptimum};
pub use profile::{synthesize_ne_profile, NeProfile};
pub use values::{compute_values, ValueState, ValueTable};

use crate::arena::Game;
use crate::error::{self, Result};
use crate::graphs::{dev_set, OutcomePath};

/// Whether a complete play is the outcome of some Nash equilibrium: at
/// every step, no player's remaining cost exceeds what it could secure by
/// deviating right there and then facing the worst the others can do.
pub fn check_ne_outcome(game: &Game, path: &OutcomePath) -> Result<bool> {
    let values = compute_values(game)?;
    check_ne_outcome_with(game, &values, path)
}

pub fn check_ne_outcome_with(game: &Game, values: &ValueTable, path: &OutcomePath) -> Result<bool> {
    path.require_complete(game)?;
    Ok(first_violation(game, values, path)?.is_none())
}

/// A profitable deviation: at step `step` player `player` could switch and
/// be guaranteed `secured` instead of paying `suffix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeViolation {
    pub step: usize,
    pub player: usize,
    pub suffix: u64,
    pub secured: u64,
}

pub fn first_violation(
    game: &Game,
    values: &ValueTable,
    path: &OutcomePath,
) -> Result<Option<NeViolation>> {
    for l in 0..path.len() {
        let (c, next) = (path.config(l), path.config(l + 1));
        for i in 0..game.players() {
            let suffix = path.suffix_cost(i, l)?;
            for d in dev_set(game, c, next, i)? {
                let secured = error::add(d.cost, values.value_at(game, &d.config, i)?)?;
                if suffix > secured {
                    return Ok(Some(NeViolation {
                        step: l,
                        player: i,
                        suffix,
                        secured,
                    }));
                }
            }
        }
    }
    Ok(None)
}
