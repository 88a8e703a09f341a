//! Optimal Nash equilibria as shortest paths in the configuration graph
//! augmented with per-player cost bounds.

use super::values::{compute_values, ValueTable};
use crate::arena::Game;
use crate::error::{self, Error, Result};
use crate::ext::ExtNat;
use crate::graphs::{ConfigGraph, ConfigId, Configuration, OutcomePath};
use crate::search::{explore, Analysis};

#[derive(Debug, Clone)]
pub struct NeOptimum {
    /// `Σ γ_i·cost_i` of the witness.
    pub cost: i64,
    pub witness: OutcomePath,
}

/// Least `γ`-weighted cost over all Nash equilibrium outcomes.
///
/// A state pairs a configuration with the most each player may still pay
/// along the rest of the play. Taking a transition lowers player `i`'s
/// bound by what it pays, and caps it by what `i` could secure by
/// deviating there instead; a negative bound kills the transition.
pub fn gamma_min_ne(game: &Game, gamma: &[i64]) -> Result<NeOptimum> {
    let values = compute_values(game)?;
    gamma_min_ne_with(game, &values, gamma)
}

pub fn gamma_min_ne_with(game: &Game, values: &ValueTable, gamma: &[i64]) -> Result<NeOptimum> {
    if gamma.len() != game.players() {
        return Err(Error::Precondition(format!(
            "gamma has {} entries, game has {} players",
            gamma.len(),
            game.players()
        )));
    }
    let n = game.players();
    // every single step weight must fit, path totals are checked as they grow
    gamma
        .iter()
        .try_fold(0i64, |acc, &g| {
            g.checked_abs()
                .and_then(|a| a.checked_mul(game.kappa() as i64))
                .and_then(|x| acc.checked_add(x))
        })
        .ok_or(Error::Overflow)?;
    let tgt = game.arena().target();
    let cg = ConfigGraph::build(game)?;
    let y = game.cost_ceiling();

    // secured[c][t][i]: least cost player i can guarantee by deviating from t
    let mut secured: Vec<Vec<Vec<u64>>> = Vec::with_capacity(cg.len());
    for c in cg.ids() {
        let ts = cg.transitions(c);
        let mut per = Vec::with_capacity(ts.len());
        for t in ts {
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let mut best = u64::MAX;
                for &k in &t.devs[i] {
                    let u = &ts[k];
                    let v = values.value_at(game, cg.config(u.to), i)?;
                    best = best.min(error::add(u.weights[i], v)?);
                }
                row.push(best);
            }
            per.push(row);
        }
        secured.push(per);
    }

    let start = (cg.source(), vec![ExtNat::Inf; n]);
    let explored = explore(
        start,
        game.node_budget(),
        |(c, b): &(ConfigId, Vec<ExtNat>), out| {
            'next: for (k, t) in cg.transitions(*c).iter().enumerate() {
                let mut nb = Vec::with_capacity(n);
                for i in 0..n {
                    let w = t.weights[i];
                    let Some(left) = b[i].checked_sub(w) else {
                        continue 'next;
                    };
                    let Some(cap) = secured[*c][k][i].checked_sub(w) else {
                        continue 'next;
                    };
                    let mut v = left.min(ExtNat::Fin(cap)).min(ExtNat::Fin(y));
                    if cg.config(t.to).get(i) == tgt {
                        v = ExtNat::Fin(0);
                    }
                    nb.push(v);
                }
                out.push(((t.to, nb), k));
            }
            Ok(())
        },
    )?;
    let analysis = Analysis::new(explored, |(c, _)| cg.is_target(*c));
    let weight = |u: usize, pos: usize| -> i64 {
        let c = analysis.explored.states[u].0;
        let k = analysis.explored.succ[u][pos].1;
        let w = &cg.transitions(c)[k].weights;
        gamma.iter().zip(w).map(|(&g, &x)| g * x as i64).sum()
    };
    let Some((cost, route)) = analysis.min_path(weight)? else {
        return Err(Error::Internal(
            "no Nash equilibrium outcome found, yet one always exists".into(),
        ));
    };
    let mut witness = OutcomePath::empty(Configuration::source(game));
    for (u, pos) in route {
        let c = analysis.explored.states[u].0;
        let k = analysis.explored.succ[u][pos].1;
        witness.push(game, cg.transitions(c)[k].moves.clone())?;
    }
    Ok(NeOptimum { cost, witness })
}

/// Whether some Nash equilibrium has `γ`-weighted cost at most `bound`.
pub fn constrained_ne(game: &Game, gamma: &[i64], bound: i64) -> Result<(bool, NeOptimum)> {
    let best = gamma_min_ne(game, gamma)?;
    Ok((best.cost <= bound, best))
}
