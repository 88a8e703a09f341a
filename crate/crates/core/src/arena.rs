//! Arenas `⟨V, E, src, tgt⟩` and games `⟨arena, n⟩`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::costfn::{CostFnError, CostFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub(crate) u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub(crate) u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: StateId,
    pub to: StateId,
    pub cost: CostFunction,
}

/// Something wrong with an arena description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateState(String),
    UnknownState(String),
    DuplicateEdge {
        from: String,
        to: String,
    },
    InvalidCost {
        from: String,
        to: String,
        reason: CostFnError,
    },
    TargetOutEdge {
        to: String,
    },
    TargetLoopNotZero,
    Unreachable(String),
    NoStates,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateState(s) => write!(f, "state {s:?} declared twice"),
            Violation::UnknownState(s) => write!(f, "unknown state {s:?}"),
            Violation::DuplicateEdge { from, to } => write!(f, "duplicate edge {from} -> {to}"),
            Violation::InvalidCost { from, to, reason } => {
                write!(f, "edge {from} -> {to}: {reason}")
            }
            Violation::TargetOutEdge { to } => {
                write!(f, "tgt out-degree violation: target has an edge to {to}")
            }
            Violation::TargetLoopNotZero => write!(f, "target self-loop must have cost x -> 0"),
            Violation::Unreachable(s) => write!(f, "tgt unreachable from {s}"),
            Violation::NoStates => write!(f, "arena has no states"),
        }
    }
}

/// On-disk arena document. The target self-loop may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaFile {
    pub states: Vec<String>,
    pub source: String,
    pub target: String,
    pub edges: Vec<EdgeFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub from: String,
    pub to: String,
    pub cost: RawCost,
}

/// Cost function as written in the file, validated later so violations can
/// name the offending edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCost {
    pub pieces: Vec<crate::costfn::Piece>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    names: Vec<String>,
    index: HashMap<String, StateId>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    by_endpoints: HashMap<(StateId, StateId), EdgeId>,
    source: StateId,
    target: StateId,
}

pub fn parse_arena(text: &str) -> Result<Arena> {
    let file: ArenaFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    Arena::from_file(&file)
}

/// Lists every invariant violation of an arena document; empty means valid.
pub fn validate_arena(file: &ArenaFile) -> Vec<Violation> {
    match Arena::build(file) {
        Ok(_) => Vec::new(),
        Err(v) => v,
    }
}

impl Arena {
    pub fn from_file(file: &ArenaFile) -> Result<Arena> {
        Arena::build(file).map_err(Error::InvalidArena)
    }

    fn build(file: &ArenaFile) -> std::result::Result<Arena, Vec<Violation>> {
        let mut violations = Vec::new();
        if file.states.is_empty() {
            return Err(vec![Violation::NoStates]);
        }
        let mut index = HashMap::new();
        for (k, name) in file.states.iter().enumerate() {
            if index.insert(name.clone(), StateId(k as u32)).is_some() {
                violations.push(Violation::DuplicateState(name.clone()));
            }
        }
        let lookup = |name: &str, violations: &mut Vec<Violation>| -> Option<StateId> {
            let id = index.get(name).copied();
            if id.is_none() {
                violations.push(Violation::UnknownState(name.to_string()));
            }
            id
        };
        let source = lookup(&file.source, &mut violations);
        let target = lookup(&file.target, &mut violations);

        let mut edges = Vec::new();
        let mut by_endpoints = HashMap::new();
        for e in &file.edges {
            let (from, to) = (
                lookup(&e.from, &mut violations),
                lookup(&e.to, &mut violations),
            );
            let cost = match CostFunction::new(e.cost.pieces.clone()) {
                Ok(c) => Some(c),
                Err(reason) => {
                    violations.push(Violation::InvalidCost {
                        from: e.from.clone(),
                        to: e.to.clone(),
                        reason,
                    });
                    None
                }
            };
            let (Some(from), Some(to), Some(cost)) = (from, to, cost) else {
                continue;
            };
            if by_endpoints.contains_key(&(from, to)) {
                violations.push(Violation::DuplicateEdge {
                    from: e.from.clone(),
                    to: e.to.clone(),
                });
                continue;
            }
            if Some(from) == target {
                if to != from {
                    violations.push(Violation::TargetOutEdge { to: e.to.clone() });
                    continue;
                }
                if !cost.is_zero() {
                    violations.push(Violation::TargetLoopNotZero);
                    continue;
                }
            }
            by_endpoints.insert((from, to), EdgeId(edges.len() as u32));
            edges.push(Edge { from, to, cost });
        }
        let (Some(source), Some(target)) = (source, target) else {
            return Err(violations);
        };
        if let std::collections::hash_map::Entry::Vacant(e) = by_endpoints.entry((target, target)) {
            e.insert(EdgeId(edges.len() as u32));
            edges.push(Edge {
                from: target,
                to: target,
                cost: CostFunction::zero(),
            });
        }
        let mut out = vec![Vec::new(); file.states.len()];
        for (k, e) in edges.iter().enumerate() {
            out[e.from.index()].push(EdgeId(k as u32));
        }
        let arena = Arena {
            names: file.states.clone(),
            index,
            edges,
            out,
            by_endpoints,
            source,
            target,
        };
        for s in arena.unreaching_states() {
            violations.push(Violation::Unreachable(arena.name(s).to_string()));
        }
        if violations.is_empty() {
            Ok(arena)
        } else {
            Err(violations)
        }
    }

    fn unreaching_states(&self) -> Vec<StateId> {
        let mut rev = vec![Vec::new(); self.names.len()];
        for e in &self.edges {
            rev[e.to.index()].push(e.from);
        }
        let mut seen = vec![false; self.names.len()];
        seen[self.target.index()] = true;
        let mut queue = VecDeque::from([self.target]);
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s.index()] {
                if !seen[p.index()] {
                    seen[p.index()] = true;
                    queue.push_back(p);
                }
            }
        }
        self.states().filter(|s| !seen[s.index()]).collect()
    }

    /// Canonical document: declaration order, implicit target loop dropped.
    pub fn to_file(&self) -> ArenaFile {
        ArenaFile {
            states: self.names.clone(),
            source: self.name(self.source).to_string(),
            target: self.name(self.target).to_string(),
            edges: self
                .edges
                .iter()
                .filter(|e| e.from != self.target)
                .map(|e| EdgeFile {
                    from: self.name(e.from).to_string(),
                    to: self.name(e.to).to_string(),
                    cost: RawCost {
                        pieces: e.cost.pieces().to_vec(),
                    },
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("arena serializes")
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.names.len() as u32).map(StateId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    pub fn target(&self) -> StateId {
        self.target
    }

    pub fn target_loop(&self) -> EdgeId {
        self.by_endpoints[&(self.target, self.target)]
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s.index()]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub(crate) fn edges_checked(&self, e: EdgeId) -> Result<&Edge> {
        self.edges
            .get(e.index())
            .ok_or_else(|| Error::InvalidMove(format!("unknown edge id {}", e.0)))
    }

    pub fn edge_between(&self, from: StateId, to: StateId) -> Option<EdgeId> {
        self.by_endpoints.get(&(from, to)).copied()
    }

    /// Outgoing edges of `s`, in declaration order.
    pub fn out_edges(&self, s: StateId) -> &[EdgeId] {
        &self.out[s.index()]
    }

    pub fn edge_label(&self, e: EdgeId) -> String {
        let edge = self.edge(e);
        format!("{}->{}", self.name(edge.from), self.name(edge.to))
    }
}

/// A dynamic congestion game: an arena played by `n` players, all starting at
/// the source.
#[derive(Debug, Clone)]
pub struct Game {
    arena: Arena,
    players: usize,
    kappa: u64,
    ceiling: u64,
    node_budget: usize,
}

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

impl Game {
    pub fn new(arena: Arena, players: usize) -> Result<Game> {
        if players == 0 {
            return Err(Error::NoPlayers);
        }
        let load = players as u64;
        let mut kappa = 0;
        for e in &arena.edges {
            // costs are monotone, so d_e(n) bounds every d_e(l) with l <= n
            kappa = kappa.max(e.cost.eval(load)?);
        }
        // every rational play keeps each player below |V|·κ; leave room to
        // add a step on top and to sum over all players
        let ceiling = (arena.num_states() as u64)
            .checked_mul(kappa)
            .filter(|y| y.checked_mul(2 * load).is_some())
            .ok_or(Error::Overflow)?;
        Ok(Game {
            arena,
            players,
            kappa,
            ceiling,
            node_budget: DEFAULT_NODE_BUDGET,
        })
    }

    pub fn with_node_budget(mut self, budget: usize) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn node_budget(&self) -> usize {
        self.node_budget
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn players(&self) -> usize {
        self.players
    }

    /// Largest cost a player can pay on one edge: `max_e d_e(n)`.
    pub fn kappa(&self) -> u64 {
        self.kappa
    }

    /// `|V|·κ`, a ceiling on the cost any player needs to reach the target.
    pub fn cost_ceiling(&self) -> u64 {
        self.ceiling
    }

    /// Cost of edge `e` for each of `load` simultaneous users, `1 <= load <= n`.
    pub fn load_cost(&self, e: EdgeId, load: usize) -> u64 {
        debug_assert!(load >= 1 && load <= self.players);
        self.arena
            .edge(e)
            .cost
            .eval(load as u64)
            .expect("load within [1, n] cannot overflow once kappa is known")
    }

    pub(crate) fn check_budget(&self, seen: usize) -> Result<()> {
        if seen > self.node_budget {
            Err(Error::Budget(seen))
        } else {
            Ok(())
        }
    }
}

pub fn kappa(game: &Game) -> u64 {
    game.kappa()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn bridge_shape() {
        let a = fixtures::bridge_arena();
        assert_eq!(a.num_states(), 5);
        assert_eq!(a.num_edges(), 7);
        assert_eq!(a.edge(a.target_loop()).from, a.target());
        assert!(validate_arena(&a.to_file()).is_empty());
    }

    #[test]
    fn oversized_costs_are_refused() {
        let big = fixtures::trivial_arena(CostFunction::constant(u64::MAX / 3));
        assert!(matches!(Game::new(big, 1), Err(Error::Overflow)));
        let ok = fixtures::trivial_arena(CostFunction::constant(1 << 40));
        assert_eq!(Game::new(ok, 3).unwrap().cost_ceiling(), 2 << 40);
    }

    #[test]
    fn ladder_valid() {
        let a = fixtures::ladder_arena();
        assert_eq!(a.num_states(), 8);
        assert_eq!(a.num_edges(), 11);
    }

    #[test]
    fn trivial_arena_gets_a_target_loop() {
        let a = fixtures::trivial_arena(crate::costfn::CostFunction::affine(1, 0));
        assert_eq!(a.num_edges(), 2);
        assert!(a.edge(a.target_loop()).cost.is_zero());
    }

    #[test]
    fn target_out_edge_rejected() {
        let mut f = fixtures::bridge_arena().to_file();
        f.edges.push(EdgeFile {
            from: "tgt".into(),
            to: "v1".into(),
            cost: RawCost {
                pieces: CostFunction::affine(1, 0).pieces().to_vec(),
            },
        });
        let v = validate_arena(&f);
        assert!(v.contains(&Violation::TargetOutEdge { to: "v1".into() }));
        assert!(matches!(Arena::from_file(&f), Err(Error::InvalidArena(_))));
    }

    #[test]
    fn isolated_state_is_reported() {
        let mut f = fixtures::bridge_arena().to_file();
        f.states.push("u".into());
        let v = validate_arena(&f);
        assert_eq!(v, vec![Violation::Unreachable("u".into())]);
        assert_eq!(v[0].to_string(), "tgt unreachable from u");
    }

    #[test]
    fn explicit_loop_must_be_zero() {
        let mut f = fixtures::trivial_arena(CostFunction::affine(1, 0)).to_file();
        f.edges.push(EdgeFile {
            from: "tgt".into(),
            to: "tgt".into(),
            cost: RawCost {
                pieces: CostFunction::constant(1).pieces().to_vec(),
            },
        });
        assert_eq!(validate_arena(&f), vec![Violation::TargetLoopNotZero]);
        f.edges.last_mut().unwrap().cost.pieces = CostFunction::zero().pieces().to_vec();
        assert!(validate_arena(&f).is_empty());
    }

    #[test]
    fn duplicate_and_unknown() {
        let mut f = fixtures::bridge_arena().to_file();
        let dup = f.edges[0].clone();
        f.edges.push(dup);
        f.edges.push(EdgeFile {
            from: "src".into(),
            to: "nowhere".into(),
            cost: RawCost {
                pieces: CostFunction::zero().pieces().to_vec(),
            },
        });
        let v = validate_arena(&f);
        assert!(v.contains(&Violation::DuplicateEdge {
            from: "src".into(),
            to: "v1".into()
        }));
        assert!(v.contains(&Violation::UnknownState("nowhere".into())));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_arena("{"), Err(Error::Syntax(_))));
        let extra = r#"{"states":["s","t"],"source":"s","target":"t","edges":[],"extra":1}"#;
        assert!(matches!(parse_arena(extra), Err(Error::Syntax(_))));
    }

    #[test]
    fn kappa_examples() {
        let g = Game::new(fixtures::bridge_arena(), 2).unwrap();
        assert_eq!(g.kappa(), 8);
        let g = Game::new(fixtures::ladder_arena(), 3).unwrap();
        assert_eq!(g.kappa(), 9);
        let g = Game::new(fixtures::trivial_arena(CostFunction::zero()), 7).unwrap();
        assert_eq!(g.kappa(), 0);
    }

    #[test]
    fn json_round_trip() {
        let a = fixtures::ladder_arena();
        let back = parse_arena(&a.to_json()).unwrap();
        assert_eq!(a, back);
    }
}
