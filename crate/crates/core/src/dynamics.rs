//! Blind strategies (fixed paths), the potential function, best responses
//! and best-response dynamics.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Deserialize;

use crate::arena::{Arena, EdgeId, Game, StateId};
use crate::error::{self, Error, Result};
use crate::graphs::{Configuration, MoveVector, OutcomePath};

/// A path from the source to the first visit of the target. Afterwards the
/// player idles on the target loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlindStrategy(Vec<EdgeId>);

impl BlindStrategy {
    pub fn from_edges(arena: &Arena, edges: Vec<EdgeId>) -> Result<Self> {
        let mut at = arena.source();
        for (k, &e) in edges.iter().enumerate() {
            if at == arena.target() {
                return Err(Error::InvalidProfile(format!(
                    "path continues after reaching the target at step {k}"
                )));
            }
            let edge = arena
                .edges_checked(e)
                .map_err(|err| Error::InvalidProfile(err.to_string()))?;
            if edge.from != at {
                return Err(Error::InvalidProfile(format!(
                    "edge {} does not start at {}",
                    arena.edge_label(e),
                    arena.name(at)
                )));
            }
            at = edge.to;
        }
        if at != arena.target() {
            return Err(Error::InvalidProfile(format!(
                "path ends at {} instead of the target",
                arena.name(at)
            )));
        }
        Ok(BlindStrategy(edges))
    }

    pub fn from_states(arena: &Arena, states: &[StateId]) -> Result<Self> {
        if states.first() != Some(&arena.source()) {
            return Err(Error::InvalidProfile(
                "path must start at the source".into(),
            ));
        }
        let edges = states
            .windows(2)
            .map(|w| {
                arena.edge_between(w[0], w[1]).ok_or_else(|| {
                    Error::InvalidProfile(format!(
                        "no edge {} -> {}",
                        arena.name(w[0]),
                        arena.name(w[1])
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Self::from_edges(arena, edges)
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Edge taken at zero-based step `k`.
    pub fn edge_at(&self, arena: &Arena, k: usize) -> EdgeId {
        self.0
            .get(k)
            .copied()
            .unwrap_or_else(|| arena.target_loop())
    }

    pub fn names(&self, arena: &Arena) -> Vec<(String, String)> {
        self.0
            .iter()
            .map(|&e| {
                let edge = arena.edge(e);
                (arena.name(edge.from).into(), arena.name(edge.to).into())
            })
            .collect()
    }
}

/// One blind strategy per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlindProfile(Vec<BlindStrategy>);

impl BlindProfile {
    pub fn new(strategies: Vec<BlindStrategy>) -> Self {
        BlindProfile(strategies)
    }

    pub fn strategies(&self) -> &[BlindStrategy] {
        &self.0
    }

    pub fn players(&self) -> usize {
        self.0.len()
    }

    /// Length of the longest path, `N_π`.
    pub fn horizon(&self) -> usize {
        self.0.iter().map(BlindStrategy::len).max().unwrap_or(0)
    }

    pub fn with(&self, i: usize, s: BlindStrategy) -> Self {
        let mut p = self.clone();
        p.0[i] = s;
        p
    }

    /// The joint moves of the first `N_π` steps.
    pub fn move_vectors(&self, arena: &Arena) -> Vec<MoveVector> {
        (0..self.horizon())
            .map(|k| MoveVector(self.0.iter().map(|s| s.edge_at(arena, k)).collect()))
            .collect()
    }

    pub fn outcome(&self, game: &Game) -> Result<OutcomePath> {
        self.check_players(game)?;
        OutcomePath::from_moves(
            game,
            Configuration::source(game),
            &self.move_vectors(game.arena()),
        )
    }

    pub fn costs(&self, game: &Game) -> Result<Vec<u64>> {
        self.outcome(game)?.costs()
    }

    pub fn social_cost(&self, game: &Game) -> Result<u64> {
        self.outcome(game)?.social_cost()
    }

    /// Number of players whose zero-based `k`-th edge is `e`.
    pub fn load(&self, arena: &Arena, e: EdgeId, k: usize) -> usize {
        self.0.iter().filter(|s| s.edge_at(arena, k) == e).count()
    }

    fn check_players(&self, game: &Game) -> Result<()> {
        if self.players() != game.players() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} strategies, game has {} players",
                self.players(),
                game.players()
            )));
        }
        Ok(())
    }

    pub fn to_json_value(&self, arena: &Arena) -> serde_json::Value {
        let paths: Vec<_> = self.0.iter().map(|s| s.names(arena)).collect();
        serde_json::json!({ "profile": paths })
    }
}

#[derive(Deserialize)]
struct ProfileFile {
    profile: Vec<Vec<(String, String)>>,
}

/// Parses `{"profile": [[["src","v1"], ...], ...]}`. Other top-level keys
/// are ignored so the output of `blind-ne` can be fed back in.
pub fn parse_profile(arena: &Arena, text: &str) -> Result<BlindProfile> {
    let file: ProfileFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    let strategies = file
        .profile
        .iter()
        .enumerate()
        .map(|(i, path)| {
            let edges = path
                .iter()
                .map(|(a, b)| {
                    let (Some(a), Some(b)) = (arena.state(a), arena.state(b)) else {
                        return Err(Error::InvalidProfile(format!(
                            "player {i}: unknown state in {a} -> {b}"
                        )));
                    };
                    arena.edge_between(a, b).ok_or_else(|| {
                        Error::InvalidProfile(format!(
                            "player {i}: no edge {} -> {}",
                            arena.name(a),
                            arena.name(b)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            BlindStrategy::from_edges(arena, edges)
                .map_err(|e| Error::InvalidProfile(format!("player {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if strategies.is_empty() {
        return Err(Error::InvalidProfile("profile is empty".into()));
    }
    Ok(BlindProfile(strategies))
}

/// Rosenthal-style potential summed over the steps of the profile.
pub fn potential(game: &Game, profile: &BlindProfile) -> Result<u64> {
    let arena = game.arena();
    let mut total = 0u64;
    for k in 0..profile.horizon() {
        for e in arena.edge_ids() {
            for l in 1..=profile.load(arena, e, k) {
                total = error::add(total, game.load_cost(e, l))?;
            }
        }
    }
    Ok(total)
}

/// Cheapest path for player `i` when everybody else sticks to `profile`.
///
/// Works on `N_π + 1` copies of the arena: in copy `k ≤ N_π` an edge costs
/// what it would with the other players' `k`-th moves, and in the last copy
/// the player is alone. Ties go to fewer edges, then to the smallest edge
/// ids in order.
pub fn best_response(
    game: &Game,
    profile: &BlindProfile,
    i: usize,
) -> Result<(BlindStrategy, u64)> {
    profile.check_players(game)?;
    let arena = game.arena();
    let horizon = profile.horizon();
    let others = |k: usize, e: EdgeId| {
        let own = usize::from(profile.0[i].edge_at(arena, k) == e);
        profile.load(arena, e, k) - own
    };
    let layer_cost = |k: usize, e: EdgeId| -> u64 {
        if k < horizon {
            game.load_cost(e, others(k, e) + 1)
        } else {
            game.load_cost(e, 1)
        }
    };
    let tgt = arena.target();
    let states = arena.num_states();

    let last = alone_to_go(game);
    // to_go[k][v]: (cost, edges) from state v at step k
    let mut to_go = vec![last.clone()];
    for k in (0..horizon).rev() {
        let next = to_go.last().expect("non-empty");
        let mut cur = vec![(u64::MAX, usize::MAX); states];
        for v in arena.states() {
            if v == tgt {
                cur[v.index()] = (0, 0);
                continue;
            }
            for &e in arena.out_edges(v) {
                let (c, h) = next[arena.edge(e).to.index()];
                if c == u64::MAX {
                    continue;
                }
                let cand = (error::add(c, layer_cost(k, e))?, h + 1);
                cur[v.index()] = cur[v.index()].min(cand);
            }
        }
        to_go.push(cur);
    }
    to_go.reverse();

    let (cost, _) = to_go[0][arena.source().index()];
    let mut edges = Vec::new();
    let mut at = arena.source();
    let mut k = 0;
    while at != tgt {
        let layer = k.min(horizon);
        let here = to_go[layer][at.index()];
        let next_layer = (k + 1).min(horizon);
        let e = *arena
            .out_edges(at)
            .iter()
            .find(|&&e| {
                let (c, h) = to_go[next_layer][arena.edge(e).to.index()];
                c != u64::MAX && (c + layer_cost(k, e), h + 1) == here
            })
            .expect("an optimal edge exists");
        edges.push(e);
        at = arena.edge(e).to;
        k += 1;
    }
    Ok((BlindStrategy(edges), cost))
}

/// Single-player (cost, edges) distances to the target.
fn alone_to_go(game: &Game) -> Vec<(u64, usize)> {
    let arena = game.arena();
    let mut rev = vec![Vec::new(); arena.num_states()];
    for e in arena.edge_ids() {
        let edge = arena.edge(e);
        if edge.from != edge.to {
            rev[edge.to.index()].push(e);
        }
    }
    let mut dist = vec![(u64::MAX, usize::MAX); arena.num_states()];
    let tgt = arena.target();
    dist[tgt.index()] = (0, 0);
    let mut heap = BinaryHeap::from([Reverse(((0u64, 0usize), tgt))]);
    while let Some(Reverse((d, v))) = heap.pop() {
        if d != dist[v.index()] {
            continue;
        }
        for &e in &rev[v.index()] {
            let u = arena.edge(e).from;
            // d_e(1) <= κ and paths are short, so no overflow here
            let cand = (d.0 + game.load_cost(e, 1), d.1 + 1);
            if cand < dist[u.index()] {
                dist[u.index()] = cand;
                heap.push(Reverse((cand, u)));
            }
        }
    }
    dist
}

/// Every player on the same lexicographically least cheapest single-player
/// path.
pub fn initial_profile(game: &Game) -> Result<BlindProfile> {
    // with nobody moving the layered graph is just the lone-player copy
    let idle = BlindProfile(vec![BlindStrategy(Vec::new()); game.players()]);
    let (path, _) = best_response(game, &idle, 0)?;
    Ok(BlindProfile(vec![path; game.players()]))
}

#[derive(Debug, Clone)]
pub struct BlindNe {
    pub profile: BlindProfile,
    pub iterations: u64,
    pub initial_potential: u64,
}

/// Best-response dynamics. Each sweep scans players in order and lets the
/// first one with a strictly cheaper best response switch to it.
pub fn blind_ne(game: &Game, initial: Option<BlindProfile>) -> Result<BlindNe> {
    let mut profile = match initial {
        Some(p) => p,
        None => initial_profile(game)?,
    };
    profile.check_players(game)?;
    let initial_potential = potential(game, &profile)?;
    let mut iterations = 0u64;
    'sweep: loop {
        let costs = profile.costs(game)?;
        for i in 0..game.players() {
            let (br, c) = best_response(game, &profile, i)?;
            if c < costs[i] {
                profile = profile.with(i, br);
                iterations += 1;
                if iterations > initial_potential {
                    return Err(Error::Internal(
                        "best-response dynamics exceeded the potential bound".into(),
                    ));
                }
                continue 'sweep;
            }
        }
        return Ok(BlindNe {
            profile,
            iterations,
            initial_potential,
        });
    }
}

/// No player can lower its cost by switching to another path. Such a
/// profile is also an equilibrium against arbitrary strategies.
pub fn is_blind_ne(game: &Game, profile: &BlindProfile) -> Result<bool> {
    let costs = profile.costs(game)?;
    for (i, &c) in costs.iter().enumerate() {
        if best_response(game, profile, i)?.1 < c {
            return Ok(false);
        }
    }
    Ok(true)
}
