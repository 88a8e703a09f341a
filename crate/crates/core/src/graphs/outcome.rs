//! Finite plays and their JSON form.

use serde::{Deserialize, Serialize};

use super::{step, Configuration, MoveVector};
use crate::arena::{Arena, Game};
use crate::error::{self, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub moves: MoveVector,
    pub weights: Vec<u64>,
    pub config: Configuration,
}

/// A finite play: a start configuration and the joint steps taken from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomePath {
    start: Configuration,
    steps: Vec<Step>,
}

impl OutcomePath {
    pub fn empty(start: Configuration) -> Self {
        OutcomePath {
            start,
            steps: Vec::new(),
        }
    }

    /// Replays `moves` from `start`, computing weights and configurations.
    pub fn from_moves(game: &Game, start: Configuration, moves: &[MoveVector]) -> Result<Self> {
        let mut path = OutcomePath::empty(start);
        for m in moves {
            path.push(game, m.clone())?;
        }
        Ok(path)
    }

    /// Replays a configuration sequence; consecutive entries must be linked
    /// by edges.
    pub fn from_configs(game: &Game, configs: &[Configuration]) -> Result<Self> {
        let (first, rest) = configs
            .split_first()
            .ok_or_else(|| Error::InvalidPath("no configurations".into()))?;
        let mut path = OutcomePath::empty(first.clone());
        for next in rest {
            let m = MoveVector::between(game.arena(), path.last(), next)?;
            path.push(game, m)?;
        }
        Ok(path)
    }

    pub fn push(&mut self, game: &Game, moves: MoveVector) -> Result<()> {
        let (weights, config) = step(game, self.last(), &moves)?;
        self.steps.push(Step {
            moves,
            weights,
            config,
        });
        Ok(())
    }

    pub fn start(&self) -> &Configuration {
        &self.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn players(&self) -> usize {
        self.start.players()
    }

    /// Configuration after `l` steps.
    pub fn config(&self, l: usize) -> &Configuration {
        if l == 0 {
            &self.start
        } else {
            &self.steps[l - 1].config
        }
    }

    pub fn last(&self) -> &Configuration {
        self.config(self.steps.len())
    }

    pub fn configs(&self) -> impl Iterator<Item = &Configuration> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.config))
    }

    /// Total weight paid by player `i` from step `l` on.
    pub fn suffix_cost(&self, i: usize, l: usize) -> Result<u64> {
        self.steps[l..]
            .iter()
            .try_fold(0, |acc, s| error::add(acc, s.weights[i]))
    }

    pub fn cost(&self, i: usize) -> Result<u64> {
        self.suffix_cost(i, 0)
    }

    pub fn costs(&self) -> Result<Vec<u64>> {
        (0..self.players()).map(|i| self.cost(i)).collect()
    }

    pub fn social_cost(&self) -> Result<u64> {
        self.costs()?.into_iter().try_fold(0, error::add)
    }

    /// `Σ_i γ_i·cost_i`.
    pub fn weighted_cost(&self, gamma: &[i64]) -> Result<i64> {
        let mut total: i64 = 0;
        for (i, &g) in gamma.iter().enumerate() {
            let c = i64::try_from(self.cost(i)?).map_err(|_| Error::Overflow)?;
            total = g
                .checked_mul(c)
                .and_then(|x| total.checked_add(x))
                .ok_or(Error::Overflow)?;
        }
        Ok(total)
    }

    /// Checks the play starts at the source and ends with everyone at the
    /// target.
    pub fn require_complete(&self, game: &Game) -> Result<()> {
        let arena = game.arena();
        if self.players() != game.players() {
            return Err(Error::InvalidPath(format!(
                "path has {} players, game has {}",
                self.players(),
                game.players()
            )));
        }
        if !self.start.all_at(arena.source()) {
            return Err(Error::InvalidPath(
                "path does not start at the source".into(),
            ));
        }
        if !self.last().all_at(arena.target()) {
            return Err(Error::InvalidPath(
                "path does not end with every player at the target".into(),
            ));
        }
        Ok(())
    }

    /// Drops trailing steps taken entirely inside the target configuration.
    pub fn trimmed(mut self, game: &Game) -> Self {
        let tgt = game.arena().target();
        while !self.steps.is_empty() && self.config(self.steps.len() - 1).all_at(tgt) {
            self.steps.pop();
        }
        self
    }

    pub fn to_file(&self, arena: &Arena) -> OutcomeFile {
        let names = |c: &Configuration| c.names(arena).iter().map(|s| s.to_string()).collect();
        OutcomeFile {
            start: Some(names(&self.start)),
            steps: self
                .steps
                .iter()
                .map(|s| StepFile {
                    moves: s
                        .moves
                        .edges()
                        .iter()
                        .map(|&e| {
                            let edge = arena.edge(e);
                            (
                                arena.name(edge.from).to_string(),
                                arena.name(edge.to).to_string(),
                            )
                        })
                        .collect(),
                    weights: s.weights.clone(),
                    config: names(&s.config),
                })
                .collect(),
        }
    }

    pub fn to_json_value(&self, arena: &Arena) -> serde_json::Value {
        serde_json::to_value(self.to_file(arena)).expect("outcome serializes")
    }

    /// Rebuilds a play from its document, recomputing every weight and
    /// configuration and rejecting any mismatch.
    pub fn from_file(game: &Game, file: &OutcomeFile) -> Result<Self> {
        let arena = game.arena();
        let start = match &file.start {
            Some(names) => {
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                Configuration::from_names(arena, &names)?
            }
            None => Configuration::source(game),
        };
        if start.players() != game.players() {
            return Err(Error::InvalidPath(format!(
                "start has {} players, game has {}",
                start.players(),
                game.players()
            )));
        }
        let mut path = OutcomePath::empty(start);
        for (k, s) in file.steps.iter().enumerate() {
            let moves = s
                .moves
                .iter()
                .map(|(a, b)| {
                    let (Some(a), Some(b)) = (arena.state(a), arena.state(b)) else {
                        return Err(Error::InvalidPath(format!(
                            "step {k}: unknown state in move {a} -> {b}"
                        )));
                    };
                    arena.edge_between(a, b).ok_or_else(|| {
                        Error::InvalidPath(format!(
                            "step {k}: no edge {} -> {}",
                            arena.name(a),
                            arena.name(b)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            path.push(game, MoveVector(moves))
                .map_err(|e| Error::InvalidPath(format!("step {k}: {e}")))?;
            let got = path.steps.last().expect("just pushed");
            if got.weights != s.weights {
                return Err(Error::InvalidPath(format!(
                    "step {k}: weights {:?} do not match recomputed {:?}",
                    s.weights, got.weights
                )));
            }
            let expected: Vec<&str> = got.config.names(arena);
            if expected != s.config.iter().map(String::as_str).collect::<Vec<_>>() {
                return Err(Error::InvalidPath(format!(
                    "step {k}: configuration {:?} does not match recomputed {:?}",
                    s.config, expected
                )));
            }
        }
        Ok(path)
    }
}

/// JSON form of [`OutcomePath`]; `start` defaults to the source
/// configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<String>>,
    pub steps: Vec<StepFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub moves: Vec<(String, String)>,
    pub weights: Vec<u64>,
    pub config: Vec<String>,
}

/// Number of players an outcome document talks about, if it says.
pub fn outcome_players(file: &OutcomeFile) -> Option<usize> {
    file.start
        .as_ref()
        .map(Vec::len)
        .or_else(|| file.steps.first().map(|s| s.moves.len()))
}

/// Parses and validates an outcome document against `game`.
pub fn parse_outcome(game: &Game, text: &str) -> Result<OutcomePath> {
    let file: OutcomeFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    OutcomePath::from_file(game, &file)
}
