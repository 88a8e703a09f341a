//! The value a player can secure against a hostile coalition, computed on
//! the symmetric abstraction (own position, Parikh image of the others).

use std::collections::HashMap;

use crate::arena::{EdgeId, Game, StateId};
use crate::error::{self, Error, Result};
use crate::graphs::{abstract_successors, AbstractConfiguration, Configuration};
use crate::search::explore;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueState {
    pub me: StateId,
    pub others: AbstractConfiguration,
}

impl ValueState {
    /// View of `c` from player `i`.
    pub fn of(game: &Game, c: &Configuration, i: usize) -> Self {
        let mut counts = vec![0u32; game.arena().num_states()];
        for (j, s) in c.positions().iter().enumerate() {
            if j != i {
                counts[s.index()] += 1;
            }
        }
        ValueState {
            me: c.get(i),
            others: AbstractConfiguration(counts),
        }
    }
}

/// One coalition choice: a distribution of the others over edges, and for
/// each edge the player may take, its cost and the resulting state.
#[derive(Debug, Clone)]
struct Choice {
    distribution: Vec<u32>,
    replies: Vec<(EdgeId, u64, usize)>,
}

#[derive(Debug, Clone)]
pub struct ValueTable {
    states: Vec<ValueState>,
    index: HashMap<ValueState, usize>,
    values: Vec<u64>,
    choices: Vec<Vec<Choice>>,
    /// For each state, the coalition choice attaining the value.
    punish: Vec<usize>,
    iterations: usize,
}

/// Iterates `F(val)(s) = max_coalition min_edge [d_e(1 + m(e)) + val(s')]`
/// from `+∞` (zero at the target) until nothing changes.
pub fn compute_values(game: &Game) -> Result<ValueTable> {
    let arena = game.arena();
    let tgt = arena.target();
    let start = ValueState {
        me: arena.source(),
        others: AbstractConfiguration::uniform(arena, arena.source(), game.players() - 1),
    };
    let mut coalition_cache: HashMap<
        AbstractConfiguration,
        Vec<(Vec<u32>, AbstractConfiguration)>,
    > = HashMap::new();
    let explored = explore(start, game.node_budget(), |s: &ValueState, out| {
        let options = match coalition_cache.get(&s.others) {
            Some(o) => o.clone(),
            None => {
                let o: Vec<_> = abstract_successors(game, &s.others)?
                    .into_iter()
                    .map(|st| (st.distribution, st.to))
                    .collect();
                coalition_cache.insert(s.others.clone(), o.clone());
                o
            }
        };
        for (k, (_, others)) in options.iter().enumerate() {
            for &e in arena.out_edges(s.me) {
                out.push((
                    ValueState {
                        me: arena.edge(e).to,
                        others: others.clone(),
                    },
                    k,
                ));
            }
        }
        Ok(())
    })?;

    // regroup the flat successor lists into coalition choices
    let mut choices = Vec::with_capacity(explored.states.len());
    for (u, s) in explored.states.iter().enumerate() {
        let options = &coalition_cache[&s.others];
        let out_edges = arena.out_edges(s.me);
        let succ = &explored.succ[u];
        let mut list = Vec::with_capacity(options.len());
        for (k, (dist, _)) in options.iter().enumerate() {
            let replies = out_edges
                .iter()
                .enumerate()
                .map(|(r, &e)| {
                    let (v, label) = succ[k * out_edges.len() + r];
                    debug_assert_eq!(label, k);
                    let load = dist[e.index()] as usize + 1;
                    (e, game.load_cost(e, load), v)
                })
                .collect();
            list.push(Choice {
                distribution: dist.clone(),
                replies,
            });
        }
        choices.push(list);
    }

    let y = game.cost_ceiling();
    let len = explored.states.len();
    let cap = (arena.num_states() as u128) + (len as u128) * (y as u128).max(1);
    const INF: u64 = u64::MAX;
    let mut values: Vec<u64> = explored
        .states
        .iter()
        .map(|s| if s.me == tgt { 0 } else { INF })
        .collect();
    let mut punish = vec![0usize; len];
    let mut iterations = 0usize;
    loop {
        let mut next = values.clone();
        for u in 0..len {
            if explored.states[u].me == tgt {
                continue;
            }
            let mut best: Option<(u64, usize)> = None;
            for (k, ch) in choices[u].iter().enumerate() {
                let mut worst = INF;
                for &(_, cost, v) in &ch.replies {
                    if values[v] != INF {
                        worst = worst.min(error::add(cost, values[v])?);
                    }
                }
                if best.is_none_or(|(b, _)| worst > b) {
                    best = Some((worst, k));
                }
            }
            let (val, k) = best.expect("coalition always has a choice");
            next[u] = val;
            punish[u] = k;
        }
        iterations += 1;
        if next == values {
            break;
        }
        if iterations as u128 > cap {
            return Err(Error::Internal("value iteration did not stabilise".into()));
        }
        values = next;
    }
    if let Some(u) = values.iter().position(|&v| v == INF || v > y) {
        return Err(Error::Internal(format!(
            "value {} exceeds |V|·κ = {y} at state {u}",
            values[u]
        )));
    }
    let index = explored
        .states
        .iter()
        .enumerate()
        .map(|(k, s)| (s.clone(), k))
        .collect();
    Ok(ValueTable {
        states: explored.states,
        index,
        values,
        choices,
        punish,
        iterations,
    })
}

impl ValueTable {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn value(&self, s: &ValueState) -> Option<u64> {
        self.index.get(s).map(|&k| self.values[k])
    }

    /// Value of configuration `c` for player `i`.
    pub fn value_at(&self, game: &Game, c: &Configuration, i: usize) -> Result<u64> {
        if c.get(i) == game.arena().target() {
            return Ok(0);
        }
        self.value(&ValueState::of(game, c, i)).ok_or_else(|| {
            Error::Precondition(format!(
                "configuration {} is not reachable from the source",
                c.display(game.arena())
            ))
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ValueState, u64)> {
        self.states.iter().zip(self.values.iter().copied())
    }

    /// How the coalition distributes itself over edges to hold the player
    /// to its value from `s`.
    pub fn punishment(&self, s: &ValueState) -> Option<&[u32]> {
        let k = *self.index.get(s)?;
        Some(&self.choices[k][self.punish[k]].distribution)
    }

    /// Applies one round of the value operator and reports whether the
    /// table is a fixpoint of it.
    pub fn is_fixpoint(&self, game: &Game) -> bool {
        let tgt = game.arena().target();
        (0..self.states.len()).all(|u| {
            let want = if self.states[u].me == tgt {
                0
            } else {
                self.choices[u]
                    .iter()
                    .map(|ch| {
                        ch.replies
                            .iter()
                            .map(|&(_, c, v)| c + self.values[v])
                            .min()
                            .expect("every state has an edge")
                    })
                    .max()
                    .expect("coalition always has a choice")
            };
            want == self.values[u]
        })
    }
}
