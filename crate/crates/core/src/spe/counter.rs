//! Counter graphs: the configuration graph where every player carries the
//! most it may still pay before some edge label is violated.

use crate::arena::Game;
use crate::error::Result;
use crate::ext::{ExtNat, Label};
use crate::graphs::{ConfigGraph, ConfigId, Configuration};
use crate::search::{explore, Analysis};

/// Labels indexed by configuration, transition position, then player.
pub type Labels = Vec<Vec<Vec<Label>>>;

pub(crate) type CounterState = (ConfigId, Vec<ExtNat>);

/// Initial counters at `c`: zero for players already at the target,
/// unbounded otherwise.
pub fn initial_counters(game: &Game, c: &Configuration) -> Vec<ExtNat> {
    let tgt = game.arena().target();
    c.positions()
        .iter()
        .map(|&s| {
            if s == tgt {
                ExtNat::Fin(0)
            } else {
                ExtNat::Inf
            }
        })
        .collect()
}

/// Counters after taking a transition out of `from` with the given weights
/// and labels; `None` when some counter would go negative or a label is
/// `-∞`.
pub fn counter_step(
    game: &Game,
    from: &Configuration,
    counters: &[ExtNat],
    weights: &[u64],
    labels: &[Label],
) -> Option<Vec<ExtNat>> {
    let tgt = game.arena().target();
    let mut next = Vec::with_capacity(counters.len());
    for i in 0..counters.len() {
        if from.get(i) == tgt {
            next.push(ExtNat::Fin(0));
            continue;
        }
        let w = weights[i];
        let cap = match labels[i] {
            Label::NegInf => return None,
            Label::Fin(x) => ExtNat::Fin(x.checked_sub(w)?),
            Label::PosInf => ExtNat::Inf,
        };
        next.push(counters[i].checked_sub(w)?.min(cap));
    }
    Some(next)
}

/// The counter graph from `start`, restricted to what is reachable, with
/// coaccessibility to the target configuration precomputed.
pub(crate) fn counter_graph(
    game: &Game,
    cg: &ConfigGraph,
    labels: &Labels,
    start: ConfigId,
) -> Result<Analysis<CounterState>> {
    let init = (start, initial_counters(game, cg.config(start)));
    let explored = explore(init, game.node_budget(), |(c, b): &CounterState, out| {
        let from = cg.config(*c);
        for (k, t) in cg.transitions(*c).iter().enumerate() {
            if let Some(nb) = counter_step(game, from, b, &t.weights, &labels[*c][k]) {
                out.push(((t.to, nb), k));
            }
        }
        Ok(())
    })?;
    Ok(Analysis::new(explored, |(c, _)| cg.is_target(*c)))
}

/// What the counter graph from one configuration says: whether any
/// consistent path exists, and each player's supremum cost over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Summary {
    pub sup: Option<Vec<ExtNat>>,
}

pub(crate) fn summarize(
    game: &Game,
    cg: &ConfigGraph,
    labels: &Labels,
    start: ConfigId,
) -> Result<Summary> {
    let a = counter_graph(game, cg, labels, start)?;
    if !a.start_coaccessible() {
        return Ok(Summary { sup: None });
    }
    let mut sup = Vec::with_capacity(game.players());
    for i in 0..game.players() {
        let s = a
            .max_weight(|u, pos| {
                let c = a.explored.states[u].0;
                let k = a.explored.succ[u][pos].1;
                cg.transitions(c)[k].weights[i]
            })?
            .expect("start is coaccessible");
        sup.push(s);
    }
    Ok(Summary { sup: Some(sup) })
}
