//! Solver-versus-oracle comparisons. Each returns a description of the
//! first disagreement.

use std::collections::HashSet;

use dyncong::dynamics::{best_response, potential, BlindProfile, BlindStrategy};
use dyncong::ext::{ExtNat, Label};
use dyncong::graphs::{ConfigGraph, OutcomePath};
use dyncong::metrics::{prices, Price};
use dyncong::ne::{check_ne_outcome_with, compute_values};
use dyncong::oracle::{
    brute_best_response, brute_ne_outcomes, brute_social_optimum, brute_spe_outcomes,
    complete_paths, value_horizon, BruteValues,
};
use dyncong::socopt::social_optimum;
use dyncong::spe::{
    check_spe_outcome_with, compute_lambda, compute_lambda_with, gamma_min_spe_with,
};
use dyncong::{Arena, EdgeId, Game, StateId};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fail(e: dyncong::Error) -> String {
    format!("solver error: {e}")
}

pub fn social_optimum_matches(game: &Game) -> Check {
    let so = social_optimum(game).map_err(fail)?;
    let steps = game.players() * game.arena().num_states();
    let brute = brute_social_optimum(game, steps).map_err(fail)?;
    ensure!(
        brute == ExtNat::Fin(so.cost),
        "social optimum {} vs brute force {brute}",
        so.cost
    );
    let replay = so.witness.social_cost().map_err(fail)?;
    ensure!(
        replay == so.cost,
        "witness costs {replay}, claimed {}",
        so.cost
    );
    ensure!(so.witness.len() <= steps, "witness longer than n·|V|");
    Ok(())
}

/// A path from the source: a random walk of bounded length, completed by a
/// fewest-edges route to the target.
pub fn random_path(arena: &Arena, rng: &mut impl Rng) -> BlindStrategy {
    let tgt = arena.target();
    let mut states = vec![arena.source()];
    let walk = rng.gen_range(0..=arena.num_states());
    while states.len() <= walk && *states.last().unwrap() != tgt {
        let out = arena.out_edges(*states.last().unwrap());
        let e = *out.choose(rng).unwrap();
        states.push(arena.edge(e).to);
    }
    let hops = hops_to_target(arena);
    while *states.last().unwrap() != tgt {
        let v = *states.last().unwrap();
        let e = arena
            .out_edges(v)
            .iter()
            .copied()
            .find(|&e| hops[arena.edge(e).to.index()] + 1 == hops[v.index()])
            .unwrap();
        states.push(arena.edge(e).to);
    }
    BlindStrategy::from_states(arena, &states).unwrap()
}

fn hops_to_target(arena: &Arena) -> Vec<usize> {
    let mut d = vec![usize::MAX; arena.num_states()];
    d[arena.target().index()] = 0;
    for _ in 0..arena.num_states() {
        for e in arena.edge_ids() {
            let edge = arena.edge(e);
            let via = d[edge.to.index()].saturating_add(1);
            if via < d[edge.from.index()] {
                d[edge.from.index()] = via;
            }
        }
    }
    d
}

pub fn random_profile(game: &Game, rng: &mut impl Rng) -> BlindProfile {
    BlindProfile::new(
        (0..game.players())
            .map(|_| random_path(game.arena(), rng))
            .collect(),
    )
}

pub fn best_response_matches(game: &Game, rng: &mut impl Rng, rounds: usize) -> Check {
    for _ in 0..rounds {
        let profile = random_profile(game, rng);
        let costs = profile.costs(game).map_err(fail)?;
        for i in 0..game.players() {
            let (br, c) = best_response(game, &profile, i).map_err(fail)?;
            let max_len = profile.horizon() + game.arena().num_states();
            let brute = brute_best_response(game, &profile, i, max_len).map_err(fail)?;
            ensure!(
                brute == ExtNat::Fin(c),
                "best response {c} vs brute force {brute}"
            );
            ensure!(
                c <= costs[i],
                "best response {c} worse than current {}",
                costs[i]
            );
            ensure!(br.len() <= max_len, "best response too long");
            let realized = profile.with(i, br).costs(game).map_err(fail)?[i];
            ensure!(
                realized == c,
                "best response realizes {realized}, claimed {c}"
            );
        }
    }
    Ok(())
}

pub fn values_match(game: &Game) -> Check {
    let table = compute_values(game).map_err(fail)?;
    ensure!(table.is_fixpoint(game), "value table is not a fixpoint");
    let cg = ConfigGraph::build(game).map_err(fail)?;
    let mut brute = BruteValues::new(game, value_horizon(game));
    for c in cg.ids() {
        let conf = cg.config(c);
        for i in 0..game.players() {
            let v = table.value_at(game, conf, i).map_err(fail)?;
            let b = brute.value(conf, i).map_err(fail)?;
            ensure!(
                b == ExtNat::Fin(v),
                "value of {} for player {i}: {v} vs brute force {b}",
                conf.display(game.arena())
            );
        }
    }
    Ok(())
}

fn moves_of(p: &OutcomePath) -> Vec<Vec<EdgeId>> {
    p.steps().iter().map(|s| s.moves.edges().to_vec()).collect()
}

pub fn ne_outcomes_match(game: &Game, depth: usize) -> Check {
    let table = compute_values(game).map_err(fail)?;
    let brute: HashSet<_> = brute_ne_outcomes(game, depth)
        .map_err(fail)?
        .iter()
        .map(moves_of)
        .collect();
    let mut accepted = HashSet::new();
    for p in complete_paths(game, depth).map_err(fail)? {
        if check_ne_outcome_with(game, &table, &p).map_err(fail)? {
            accepted.insert(moves_of(&p));
        }
    }
    ensure!(
        brute == accepted,
        "{} outcomes by brute force, {} accepted by the checker, {} in common",
        brute.len(),
        accepted.len(),
        brute.intersection(&accepted).count()
    );
    Ok(())
}

pub fn is_acyclic_outside_target(arena: &Arena) -> bool {
    // states ordered so every non-loop edge goes forward, found by DFS
    fn visit(arena: &Arena, v: StateId, mark: &mut [u8]) -> bool {
        match mark[v.index()] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        mark[v.index()] = 1;
        for &e in arena.out_edges(v) {
            if e != arena.target_loop() && !visit(arena, arena.edge(e).to, mark) {
                return false;
            }
        }
        mark[v.index()] = 2;
        true
    }
    let mut mark = vec![0u8; arena.num_states()];
    arena.states().all(|v| visit(arena, v, &mut mark))
}

pub fn spe_outcomes_match(game: &Game) -> Check {
    let table = compute_lambda(game).map_err(fail)?;
    let brute: HashSet<_> = brute_spe_outcomes(game)
        .map_err(fail)?
        .iter()
        .map(moves_of)
        .collect();
    let mut accepted = HashSet::new();
    let values = compute_values(game).map_err(fail)?;
    for p in complete_paths(game, game.arena().num_states()).map_err(fail)? {
        if check_spe_outcome_with(game, &table, &p).map_err(fail)? {
            ensure!(
                check_ne_outcome_with(game, &values, &p).map_err(fail)?,
                "an accepted subgame-perfect outcome fails the Nash test"
            );
            accepted.insert(moves_of(&p));
        }
    }
    ensure!(
        brute == accepted,
        "{} outcomes by backward induction, {} accepted by the labels, {} in common",
        brute.len(),
        accepted.len(),
        brute.intersection(&accepted).count()
    );
    Ok(())
}

/// Monotone labels, stabilization within the a-priori bound, and final
/// labels at most `|V|·κ`.
pub fn lambda_sane(game: &Game) -> Check {
    let arena = game.arena();
    let n = game.players() as u32;
    let v = arena.num_states() as u128;
    let bound = v.saturating_mul(
        1 + (n as u128)
            .saturating_mul(game.kappa() as u128)
            .saturating_mul((arena.num_edges() as u128).saturating_pow(n)),
    );
    let mut problem: Option<String> = None;
    let table = compute_lambda_with(game, |ev| {
        if problem.is_some() || ev.k == 0 {
            return;
        }
        if ev.k as u128 > bound {
            problem = Some(format!(
                "region {} still iterating at k = {}",
                ev.region, ev.k
            ));
        }
        for c in ev.graph.ids().filter(|&c| ev.graph.region(c) == ev.region) {
            for (old, new) in ev.before[c].iter().zip(&ev.after[c]) {
                if old.iter().zip(new).any(|(a, b)| b > a) {
                    problem = Some(format!(
                        "label increased in region {} at k = {}",
                        ev.region, ev.k
                    ));
                }
            }
        }
    })
    .map_err(fail)?;
    if let Some(p) = problem {
        return Err(p);
    }
    let y = game.cost_ceiling();
    for l in table.labels().iter().flatten().flatten() {
        if let Label::Fin(x) = *l {
            ensure!(x <= y, "final label {x} above |V|·κ = {y}");
        }
    }
    for (j, &k) in table.iterations().iter().enumerate() {
        ensure!((k as u128) <= bound, "region {j} took {k} rounds");
    }
    Ok(())
}

pub fn metric_sandwich(game: &Game) -> Check {
    let p = prices(game).map_err(fail)?;
    ensure!(
        p.optimum <= p.best_cost && p.best_cost <= p.worst_cost,
        "SO {} best {} worst {}",
        p.optimum,
        p.best_cost,
        p.worst_cost
    );
    let one = Price::new(1, 1);
    ensure!(
        one <= p.pos && p.pos <= p.poa,
        "PoS {} PoA {}",
        p.pos,
        p.poa
    );
    let values = compute_values(game).map_err(fail)?;
    for w in [&p.best.witness, &p.worst.witness] {
        ensure!(
            check_ne_outcome_with(game, &values, w).map_err(fail)?,
            "equilibrium witness fails its own check"
        );
    }
    let table = compute_lambda(game).map_err(fail)?;
    if let Some(spe) = gamma_min_spe_with(game, &table, &vec![1; game.players()]).map_err(fail)? {
        let social = spe.witness.social_cost().map_err(fail)?;
        ensure!(
            p.best_cost <= social && social <= p.worst_cost,
            "best subgame-perfect cost {social} outside the Nash range"
        );
    }
    Ok(())
}

/// `ψ(π) - ψ(π') = cost_k(π) - cost_k(π')` for a single-player switch.
pub fn potential_identity(game: &Game, rng: &mut impl Rng) -> Check {
    let before = random_profile(game, rng);
    let k = rng.gen_range(0..game.players());
    let after = before.with(k, random_path(game.arena(), rng));
    let dpsi = potential(game, &before).map_err(fail)? as i128
        - potential(game, &after).map_err(fail)? as i128;
    let dcost =
        before.costs(game).map_err(fail)?[k] as i128 - after.costs(game).map_err(fail)?[k] as i128;
    ensure!(dpsi == dcost, "potential moved by {dpsi}, cost by {dcost}");
    Ok(())
}
