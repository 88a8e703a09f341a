//! The concrete configuration graph reachable from the source, built once
//! and shared by the equilibrium solvers.

use std::collections::{HashMap, VecDeque};

use super::{move_vectors, step_weights, Configuration, MoveVector};
use crate::arena::{EdgeId, Game};
use crate::error::Result;

pub type ConfigId = usize;

#[derive(Debug, Clone)]
pub struct Transition {
    pub moves: MoveVector,
    pub weights: Vec<u64>,
    pub to: ConfigId,
    /// For each player, the transitions out of the same configuration that
    /// differ from this one at most in that player's move. Player `i` pays
    /// `weights[i]` of the listed transition when deviating to it.
    pub devs: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct ConfigGraph {
    configs: Vec<Configuration>,
    index: HashMap<Configuration, ConfigId>,
    transitions: Vec<Vec<Transition>>,
    regions: Vec<usize>,
}

impl ConfigGraph {
    /// Explores every configuration reachable from the source. Counts
    /// transitions against the game's node budget.
    pub fn build(game: &Game) -> Result<Self> {
        let arena = game.arena();
        let mut g = ConfigGraph {
            configs: Vec::new(),
            index: HashMap::new(),
            transitions: Vec::new(),
            regions: Vec::new(),
        };
        let mut queue = VecDeque::new();
        let src = g.intern(game, Configuration::source(game), &mut queue);
        debug_assert_eq!(src, 0);
        let mut seen = 0usize;
        while let Some(id) = queue.pop_front() {
            let c = g.configs[id].clone();
            let mut out = Vec::new();
            for moves in move_vectors(arena, &c) {
                let weights = step_weights(game, &moves);
                let next = Configuration(moves.edges().iter().map(|&e| arena.edge(e).to).collect());
                let to = g.intern(game, next, &mut queue);
                out.push(Transition {
                    moves,
                    weights,
                    to,
                    devs: Vec::new(),
                });
            }
            seen += out.len();
            game.check_budget(seen)?;
            link_deviations(&mut out, game.players());
            g.transitions[id] = out;
        }
        Ok(g)
    }

    fn intern(
        &mut self,
        game: &Game,
        c: Configuration,
        queue: &mut VecDeque<ConfigId>,
    ) -> ConfigId {
        if let Some(&id) = self.index.get(&c) {
            return id;
        }
        let id = self.configs.len();
        self.regions.push(c.region(game.arena()));
        self.index.insert(c.clone(), id);
        self.configs.push(c);
        self.transitions.push(Vec::new());
        queue.push_back(id);
        id
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn source(&self) -> ConfigId {
        0
    }

    pub fn config(&self, id: ConfigId) -> &Configuration {
        &self.configs[id]
    }

    pub fn id(&self, c: &Configuration) -> Option<ConfigId> {
        self.index.get(c).copied()
    }

    pub fn transitions(&self, id: ConfigId) -> &[Transition] {
        &self.transitions[id]
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// Number of players at the target in configuration `id`.
    pub fn region(&self, id: ConfigId) -> usize {
        self.regions[id]
    }

    pub fn is_target(&self, id: ConfigId) -> bool {
        self.regions[id] == self.configs[id].players()
    }

    pub fn ids(&self) -> std::ops::Range<ConfigId> {
        0..self.configs.len()
    }
}

fn link_deviations(out: &mut [Transition], players: usize) {
    const MASK: EdgeId = EdgeId(u32::MAX);
    for i in 0..players {
        let mut groups: HashMap<Vec<EdgeId>, Vec<usize>> = HashMap::new();
        for (k, t) in out.iter().enumerate() {
            let mut key = t.moves.edges().to_vec();
            key[i] = MASK;
            groups.entry(key).or_default().push(k);
        }
        for t in out.iter_mut() {
            let mut key = t.moves.edges().to_vec();
            key[i] = MASK;
            t.devs.push(groups[&key].clone());
        }
    }
}
