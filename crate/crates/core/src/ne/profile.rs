//! Turning a Nash equilibrium outcome into a strategy profile: follow the
//! outcome, and once somebody leaves it, everybody else holds that player
//! to its value.

use std::collections::VecDeque;

use super::check_ne_outcome_with;
use super::values::{compute_values, ValueState, ValueTable};
use crate::arena::{EdgeId, Game};
use crate::dynamics::BlindStrategy;
use crate::error::{Error, Result};
use crate::graphs::{Configuration, MoveVector, OutcomePath};

/// The main outcome plus the memoryless punishments read off the value
/// table.
#[derive(Debug, Clone)]
pub struct NeProfile {
    main: OutcomePath,
    values: ValueTable,
    /// Edge from each state on a fewest-edges route to the target.
    homeward: Vec<EdgeId>,
}

pub fn synthesize_ne_profile(game: &Game, outcome: &OutcomePath) -> Result<NeProfile> {
    let values = compute_values(game)?;
    if !check_ne_outcome_with(game, &values, outcome)? {
        return Err(Error::Precondition(
            "outcome is not a Nash equilibrium outcome".into(),
        ));
    }
    Ok(NeProfile {
        main: outcome.clone(),
        values,
        homeward: homeward_edges(game),
    })
}

fn homeward_edges(game: &Game) -> Vec<EdgeId> {
    let arena = game.arena();
    let tgt = arena.target();
    let mut next = vec![arena.target_loop(); arena.num_states()];
    let mut seen = vec![false; arena.num_states()];
    seen[tgt.index()] = true;
    let mut queue = VecDeque::from([tgt]);
    while let Some(v) = queue.pop_front() {
        for e in arena.edge_ids() {
            let edge = arena.edge(e);
            if edge.to == v && !seen[edge.from.index()] {
                seen[edge.from.index()] = true;
                next[edge.from.index()] = e;
                queue.push_back(edge.from);
            }
        }
    }
    next
}

impl NeProfile {
    pub fn main(&self) -> &OutcomePath {
        &self.main
    }

    /// Plays the profile while each listed player follows its own fixed
    /// path instead. The first step at which some listed player departs
    /// from the main outcome selects the least such player for punishment.
    pub fn play(&self, game: &Game, deviators: &[(usize, BlindStrategy)]) -> Result<OutcomePath> {
        let arena = game.arena();
        let n = game.players();
        let tgt = arena.target();
        let own = |i: usize| deviators.iter().find(|(j, _)| *j == i).map(|(_, s)| s);
        let longest = deviators.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
        let limit = self.main.len().max(longest) + arena.num_states() + 1;

        let mut path = OutcomePath::empty(Configuration::source(game));
        let mut punished: Option<usize> = None;
        let mut k = 0;
        while !path.last().all_at(tgt) {
            if k > limit {
                return Err(Error::Internal("punishment play does not terminate".into()));
            }
            let c = path.last().clone();
            let mut moves: Vec<Option<EdgeId>> = (0..n)
                .map(|i| own(i).map(|s| s.edge_at(arena, k)))
                .collect();
            if punished.is_none() {
                let planned = self.planned(game, k);
                let first = (0..n).find(|&i| moves[i].is_some_and(|e| e != planned.0[i]));
                // the others only notice a departure after it happened
                punished = first;
                let m = MoveVector((0..n).map(|i| moves[i].unwrap_or(planned.0[i])).collect());
                path.push(game, m)?;
                k += 1;
                continue;
            }
            let j = punished.expect("set above");
            self.fill_punishers(game, &c, j, &mut moves);
            let m = MoveVector(moves.into_iter().map(|e| e.expect("filled")).collect());
            path.push(game, m)?;
            k += 1;
        }
        Ok(path)
    }

    fn planned(&self, game: &Game, k: usize) -> MoveVector {
        match self.main.steps().get(k) {
            Some(s) => s.moves.clone(),
            None => MoveVector(vec![game.arena().target_loop(); game.players()]),
        }
    }

    /// Assigns edges to the players without a fixed path so that, together
    /// with the deviators' moves, the coalition against `j` matches the
    /// punishing distribution as closely as it can.
    fn fill_punishers(
        &self,
        game: &Game,
        c: &Configuration,
        j: usize,
        moves: &mut [Option<EdgeId>],
    ) {
        let arena = game.arena();
        if c.get(j) == arena.target() {
            for (i, m) in moves.iter_mut().enumerate() {
                if m.is_none() {
                    *m = Some(self.homeward[c.get(i).index()]);
                }
            }
            return;
        }
        let state = ValueState::of(game, c, j);
        let mut slots = self
            .values
            .punishment(&state)
            .expect("reachable configuration has a value")
            .to_vec();
        for (i, m) in moves.iter().enumerate() {
            if let (true, Some(e)) = (i != j, m) {
                slots[e.index()] = slots[e.index()].saturating_sub(1);
            }
        }
        for (i, m) in moves.iter_mut().enumerate() {
            if m.is_some() {
                continue;
            }
            let out = arena.out_edges(c.get(i));
            let e = out
                .iter()
                .copied()
                .find(|e| slots[e.index()] > 0)
                .unwrap_or(out[0]);
            if slots[e.index()] > 0 {
                slots[e.index()] -= 1;
            }
            *m = Some(e);
        }
    }
}
