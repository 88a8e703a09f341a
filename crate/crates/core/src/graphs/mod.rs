//! Configurations, joint moves, and the two graphs every solver walks: the
//! concrete configuration graph and its Parikh abstraction.

mod outcome;
mod space;

pub use outcome::{outcome_players, parse_outcome, OutcomeFile, OutcomePath, Step, StepFile};
pub use space::{ConfigGraph, ConfigId, Transition};

use std::collections::BTreeMap;

use crate::arena::{Arena, EdgeId, Game, StateId};
use crate::error::{self, Error, Result};
use crate::ext::ExtNat;

/// Position of every player, indexed from zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(pub Vec<StateId>);

impl Configuration {
    pub fn uniform(state: StateId, players: usize) -> Self {
        Configuration(vec![state; players])
    }

    pub fn source(game: &Game) -> Self {
        Self::uniform(game.arena().source(), game.players())
    }

    pub fn target(game: &Game) -> Self {
        Self::uniform(game.arena().target(), game.players())
    }

    pub fn from_names(arena: &Arena, names: &[&str]) -> Result<Self> {
        names
            .iter()
            .map(|n| {
                arena
                    .state(n)
                    .ok_or_else(|| Error::InvalidPath(format!("unknown state {n:?}")))
            })
            .collect::<Result<_>>()
            .map(Configuration)
    }

    pub fn players(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> StateId {
        self.0[i]
    }

    pub fn positions(&self) -> &[StateId] {
        &self.0
    }

    /// Number of players already at the target.
    pub fn region(&self, arena: &Arena) -> usize {
        self.0.iter().filter(|&&s| s == arena.target()).count()
    }

    pub fn all_at(&self, s: StateId) -> bool {
        self.0.iter().all(|&p| p == s)
    }

    pub fn names<'a>(&self, arena: &'a Arena) -> Vec<&'a str> {
        self.0.iter().map(|&s| arena.name(s)).collect()
    }

    pub fn display(&self, arena: &Arena) -> String {
        format!("({})", self.names(arena).join(","))
    }
}

/// Parikh image of a configuration: how many players sit on each state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractConfiguration(pub Vec<u32>);

impl AbstractConfiguration {
    pub fn uniform(arena: &Arena, state: StateId, players: usize) -> Self {
        let mut counts = vec![0; arena.num_states()];
        counts[state.index()] = players as u32;
        AbstractConfiguration(counts)
    }

    pub fn count(&self, s: StateId) -> u32 {
        self.0[s.index()]
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// Non-zero counts keyed by state name.
    pub fn to_map(&self, arena: &Arena) -> BTreeMap<String, u32> {
        arena
            .states()
            .filter(|&s| self.count(s) > 0)
            .map(|s| (arena.name(s).to_string(), self.count(s)))
            .collect()
    }
}

pub fn parikh(arena: &Arena, c: &Configuration) -> AbstractConfiguration {
    let mut counts = vec![0; arena.num_states()];
    for s in c.positions() {
        counts[s.index()] += 1;
    }
    AbstractConfiguration(counts)
}

/// One edge per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveVector(pub Vec<EdgeId>);

impl MoveVector {
    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    /// Number of players using the same edge as player `i`.
    pub fn load(&self, i: usize) -> usize {
        let e = self.0[i];
        self.0.iter().filter(|&&f| f == e).count()
    }

    /// The unique joint move leading from `c` to `next`, if any.
    pub fn between(arena: &Arena, c: &Configuration, next: &Configuration) -> Result<Self> {
        if c.players() != next.players() {
            return Err(Error::InvalidMove("configurations differ in length".into()));
        }
        c.positions()
            .iter()
            .zip(next.positions())
            .map(|(&a, &b)| {
                arena.edge_between(a, b).ok_or_else(|| {
                    Error::InvalidMove(format!("no edge {} -> {}", arena.name(a), arena.name(b)))
                })
            })
            .collect::<Result<_>>()
            .map(MoveVector)
    }
}

/// Per-player weights of a joint move: each player pays its edge's cost at
/// the edge's load.
pub fn step_weights(game: &Game, m: &MoveVector) -> Vec<u64> {
    (0..m.0.len())
        .map(|i| game.load_cost(m.0[i], m.load(i)))
        .collect()
}

/// Plays `m` from `c`, returning the weights and the next configuration.
pub fn step(game: &Game, c: &Configuration, m: &MoveVector) -> Result<(Vec<u64>, Configuration)> {
    let arena = game.arena();
    if c.players() != game.players() || m.0.len() != game.players() {
        return Err(Error::InvalidMove(format!(
            "expected {} players, got configuration of {} and {} moves",
            game.players(),
            c.players(),
            m.0.len()
        )));
    }
    let mut next = Vec::with_capacity(c.players());
    for (i, (&s, &e)) in c.positions().iter().zip(m.edges()).enumerate() {
        let edge = arena.edges_checked(e)?;
        if edge.from != s {
            return Err(Error::InvalidMove(format!(
                "player {i} is at {} but moves along {}",
                arena.name(s),
                arena.edge_label(e)
            )));
        }
        next.push(edge.to);
    }
    Ok((step_weights(game, m), Configuration(next)))
}

/// All joint moves available from `c`, in lexicographic order of the
/// players' edge choices (player 0 most significant).
pub fn move_vectors(arena: &Arena, c: &Configuration) -> Vec<MoveVector> {
    let choices: Vec<&[EdgeId]> = c.positions().iter().map(|&s| arena.out_edges(s)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        out.push(MoveVector(
            idx.iter().zip(&choices).map(|(&k, ch)| ch[k]).collect(),
        ));
        // odometer increment, last player fastest
        let mut p = choices.len();
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < choices[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// A unilateral deviation of one player from a joint move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub edge: EdgeId,
    pub cost: u64,
    pub config: Configuration,
}

/// Configurations reachable from `c` when everybody but player `i` plays
/// the move leading to `next`, with the cost player `i` pays for the step.
/// The non-deviating choice itself is included.
pub fn dev_set(
    game: &Game,
    c: &Configuration,
    next: &Configuration,
    i: usize,
) -> Result<Vec<Deviation>> {
    let m = MoveVector::between(game.arena(), c, next)?;
    Ok(deviations(game, &m, next, i))
}

pub(crate) fn deviations(
    game: &Game,
    m: &MoveVector,
    next: &Configuration,
    i: usize,
) -> Vec<Deviation> {
    let arena = game.arena();
    let from = arena.edge(m.0[i]).from;
    arena
        .out_edges(from)
        .iter()
        .map(|&e| {
            let others =
                m.0.iter()
                    .enumerate()
                    .filter(|&(j, &f)| j != i && f == e)
                    .count();
            let mut config = next.clone();
            config.0[i] = arena.edge(e).to;
            Deviation {
                edge: e,
                cost: game.load_cost(e, others + 1),
                config,
            }
        })
        .collect()
}

/// One step of the abstract graph: how many players take each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractStep {
    /// Players per edge, indexed by edge id.
    pub distribution: Vec<u32>,
    pub weight: u64,
    pub to: AbstractConfiguration,
}

/// Every distribution of the players of `a` over outgoing edges, with its
/// total weight `Σ b(e)·d_e(b(e))`. Duplicates are not merged.
pub fn abstract_successors(game: &Game, a: &AbstractConfiguration) -> Result<Vec<AbstractStep>> {
    let arena = game.arena();
    let mut out = Vec::new();
    let mut dist = vec![0u32; arena.num_edges()];
    let occupied: Vec<StateId> = arena.states().filter(|&s| a.count(s) > 0).collect();
    fill_states(game, a, &occupied, &mut dist, &mut out)?;
    Ok(out)
}

fn fill_states(
    game: &Game,
    a: &AbstractConfiguration,
    states: &[StateId],
    dist: &mut Vec<u32>,
    out: &mut Vec<AbstractStep>,
) -> Result<()> {
    let Some((&s, rest)) = states.split_first() else {
        out.push(finish_step(game, dist)?);
        return Ok(());
    };
    let edges = game.arena().out_edges(s);
    compose(game, a, edges, a.count(s), rest, dist, out)
}

fn compose(
    game: &Game,
    a: &AbstractConfiguration,
    edges: &[EdgeId],
    left: u32,
    rest: &[StateId],
    dist: &mut Vec<u32>,
    out: &mut Vec<AbstractStep>,
) -> Result<()> {
    let (&e, tail) = edges
        .split_first()
        .expect("every state has an outgoing edge");
    if tail.is_empty() {
        dist[e.index()] = left;
        fill_states(game, a, rest, dist, out)?;
        dist[e.index()] = 0;
        return Ok(());
    }
    for k in (0..=left).rev() {
        dist[e.index()] = k;
        compose(game, a, tail, left - k, rest, dist, out)?;
    }
    dist[e.index()] = 0;
    Ok(())
}

fn finish_step(game: &Game, dist: &[u32]) -> Result<AbstractStep> {
    let arena = game.arena();
    let mut to = vec![0u32; arena.num_states()];
    let mut weight = 0u64;
    for (k, &b) in dist.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let e = EdgeId(k as u32);
        to[arena.edge(e).to.index()] += b;
        weight = error::add(weight, error::mul(b as u64, game.load_cost(e, b as usize))?)?;
    }
    Ok(AbstractStep {
        distribution: dist.to_vec(),
        weight,
        to: AbstractConfiguration(to),
    })
}

/// Assigns players to the edge slots of `distribution`: at every state the
/// players there, in ascending index order, fill the outgoing edges in edge
/// order.
pub fn lift_distribution(arena: &Arena, c: &Configuration, distribution: &[u32]) -> MoveVector {
    let mut left = distribution.to_vec();
    let moves = c
        .positions()
        .iter()
        .map(|&s| {
            let e = *arena
                .out_edges(s)
                .iter()
                .find(|e| left[e.index()] > 0)
                .expect("distribution matches configuration");
            left[e.index()] -= 1;
            e
        })
        .collect();
    MoveVector(moves)
}

/// Costs of a finite play from the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    /// `+∞` for players that never reach the target.
    pub costs: Vec<ExtNat>,
    pub social: ExtNat,
    pub path: OutcomePath,
}

/// Plays `moves` from the source configuration.
pub fn eval_path(game: &Game, moves: &[MoveVector]) -> Result<Evaluation> {
    let path = OutcomePath::from_moves(game, Configuration::source(game), moves)?;
    let last = path.last();
    let tgt = game.arena().target();
    let mut costs = Vec::with_capacity(game.players());
    let mut social = ExtNat::Fin(0);
    for i in 0..game.players() {
        let c = if last.get(i) == tgt {
            ExtNat::Fin(path.cost(i)?)
        } else {
            ExtNat::Inf
        };
        social = match (social, c) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(error::add(a, b)?),
            _ => ExtNat::Inf,
        };
        costs.push(c);
    }
    Ok(Evaluation {
        costs,
        social,
        path,
    })
}
