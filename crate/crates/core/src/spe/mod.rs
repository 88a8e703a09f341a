//! Subgame-perfect equilibria through edge labels: a play is the outcome of
//! a subgame-perfect equilibrium exactly when, at every step, each player's
//! remaining cost stays within the label of the transition taken.

mod counter;
mod labels;

pub use counter::{counter_step, initial_counters, Labels};
pub use labels::{compute_lambda, compute_lambda_with, IterationEvent, LambdaTable};

use crate::arena::Game;
use crate::error::{Error, Result};
use crate::ext::{ExtNat, Label};
use crate::graphs::{Configuration, OutcomePath};
use counter::counter_graph;

/// A play from `c` that respects `table`'s labels all the way to the
/// target configuration, if there is one.
pub fn lambda_consistent_exists(
    game: &Game,
    table: &LambdaTable,
    c: &Configuration,
) -> Result<Option<OutcomePath>> {
    Ok(optimal_consistent(game, table, c, &vec![0; game.players()])?.map(|(_, p)| p))
}

/// Supremum of player `i`'s cost over plays from `c` consistent with
/// `table`; `None` when there is no such play.
pub fn sup_cost(
    game: &Game,
    table: &LambdaTable,
    c: &Configuration,
    i: usize,
) -> Result<Option<ExtNat>> {
    let cg = table.graph();
    let start = node(table, c)?;
    let a = counter_graph(game, cg, table.labels(), start)?;
    a.max_weight(|u, pos| {
        let c = a.explored.states[u].0;
        let k = a.explored.succ[u][pos].1;
        cg.transitions(c)[k].weights[i]
    })
}

fn node(table: &LambdaTable, c: &Configuration) -> Result<usize> {
    table
        .graph()
        .id(c)
        .ok_or_else(|| Error::Precondition("configuration is not reachable from the source".into()))
}

fn optimal_consistent(
    game: &Game,
    table: &LambdaTable,
    c: &Configuration,
    gamma: &[i64],
) -> Result<Option<(i64, OutcomePath)>> {
    let cg = table.graph();
    let start = node(table, c)?;
    let a = counter_graph(game, cg, table.labels(), start)?;
    let weight = |u: usize, pos: usize| -> i64 {
        let c = a.explored.states[u].0;
        let k = a.explored.succ[u][pos].1;
        let w = &cg.transitions(c)[k].weights;
        gamma.iter().zip(w).map(|(&g, &x)| g * x as i64).sum()
    };
    let Some((cost, route)) = a.min_path(weight)? else {
        return Ok(None);
    };
    let mut path = OutcomePath::empty(c.clone());
    for (u, pos) in route {
        let from = a.explored.states[u].0;
        let k = a.explored.succ[u][pos].1;
        path.push(game, cg.transitions(from)[k].moves.clone())?;
    }
    Ok(Some((cost, path)))
}

/// Whether the game has a subgame-perfect equilibrium, with the outcome of
/// one.
pub fn spe_exists(game: &Game) -> Result<Option<OutcomePath>> {
    let table = compute_lambda(game)?;
    lambda_consistent_exists(game, &table, &Configuration::source(game))
}

#[derive(Debug, Clone)]
pub struct SpeOptimum {
    pub cost: i64,
    pub witness: OutcomePath,
}

/// Least `γ`-weighted cost over subgame-perfect equilibrium outcomes, or
/// `None` if there are none.
pub fn gamma_min_spe(game: &Game, gamma: &[i64]) -> Result<Option<SpeOptimum>> {
    let table = compute_lambda(game)?;
    gamma_min_spe_with(game, &table, gamma)
}

pub fn gamma_min_spe_with(
    game: &Game,
    table: &LambdaTable,
    gamma: &[i64],
) -> Result<Option<SpeOptimum>> {
    if gamma.len() != game.players() {
        return Err(Error::Precondition(format!(
            "gamma has {} entries, game has {} players",
            gamma.len(),
            game.players()
        )));
    }
    gamma
        .iter()
        .try_fold(0i64, |acc, &g| {
            g.checked_abs()
                .and_then(|a| a.checked_mul(game.kappa() as i64))
                .and_then(|x| acc.checked_add(x))
        })
        .ok_or(Error::Overflow)?;
    Ok(
        optimal_consistent(game, table, &Configuration::source(game), gamma)?
            .map(|(cost, witness)| SpeOptimum { cost, witness }),
    )
}

/// Whether some subgame-perfect equilibrium has `γ`-weighted cost at most
/// `bound`.
pub fn constrained_spe(
    game: &Game,
    gamma: &[i64],
    bound: i64,
) -> Result<(bool, Option<SpeOptimum>)> {
    let best = gamma_min_spe(game, gamma)?;
    Ok((best.as_ref().is_some_and(|b| b.cost <= bound), best))
}

pub fn check_spe_outcome(game: &Game, path: &OutcomePath) -> Result<bool> {
    let table = compute_lambda(game)?;
    check_spe_outcome_with(game, &table, path)
}

/// Direct check that every suffix cost is within the label of the
/// transition it starts with.
pub fn check_spe_outcome_with(
    game: &Game,
    table: &LambdaTable,
    path: &OutcomePath,
) -> Result<bool> {
    path.require_complete(game)?;
    for k in 0..path.len() {
        let labels = table
            .label(path.config(k), path.config(k + 1))
            .ok_or_else(|| Error::Internal("play leaves the reachable graph".into()))?;
        for (i, &l) in labels.iter().enumerate() {
            let suffix = path.suffix_cost(i, k)?;
            let ok = match l {
                Label::NegInf => false,
                Label::Fin(x) => suffix <= x,
                Label::PosInf => true,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
