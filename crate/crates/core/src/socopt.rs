//! Social optimum: cheapest way to bring every player to the target,
//! searched on the abstract (Parikh) graph.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::arena::Game;
use crate::error::{self, Error, Result};
use crate::graphs::{
    abstract_successors, lift_distribution, AbstractConfiguration, Configuration, OutcomePath,
};

#[derive(Debug, Clone)]
pub struct SocialOptimum {
    pub cost: u64,
    /// Abstract configurations visited, source first.
    pub abstract_path: Vec<AbstractConfiguration>,
    /// A concrete play realizing `cost`.
    pub witness: OutcomePath,
}

/// Dijkstra on abstract configurations, ordered by cost then number of
/// steps. An optimal play never needs more than `n·|V|` steps, so finding
/// a longer one means something is broken.
pub fn social_optimum(game: &Game) -> Result<SocialOptimum> {
    let arena = game.arena();
    let n = game.players();
    let start = AbstractConfiguration::uniform(arena, arena.source(), n);
    let goal = AbstractConfiguration::uniform(arena, arena.target(), n);

    let mut ids: HashMap<AbstractConfiguration, usize> = HashMap::new();
    let mut nodes: Vec<AbstractConfiguration> = Vec::new();
    // best (cost, steps) and the step that achieved it
    let mut best: Vec<(u64, usize)> = Vec::new();
    let mut parent: Vec<Option<(usize, Vec<u32>)>> = Vec::new();
    let mut done: Vec<bool> = Vec::new();
    let mut heap = BinaryHeap::new();

    ids.insert(start.clone(), 0);
    nodes.push(start);
    best.push((0, 0));
    parent.push(None);
    done.push(false);
    heap.push(Reverse((0u64, 0usize, 0usize)));

    let mut expanded = 0usize;
    while let Some(Reverse((cost, steps, u))) = heap.pop() {
        if done[u] || (cost, steps) != best[u] {
            continue;
        }
        done[u] = true;
        if nodes[u] == goal {
            if steps > n * arena.num_states() {
                return Err(Error::Internal(format!(
                    "optimal abstract path has {steps} steps, more than n·|V|"
                )));
            }
            return Ok(rebuild(game, &nodes, &parent, u, cost));
        }
        expanded += 1;
        game.check_budget(expanded)?;
        for s in abstract_successors(game, &nodes[u].clone())? {
            let key = (error::add(cost, s.weight)?, steps + 1);
            let v = match ids.get(&s.to) {
                Some(&v) => v,
                None => {
                    let v = nodes.len();
                    ids.insert(s.to.clone(), v);
                    nodes.push(s.to);
                    best.push((u64::MAX, usize::MAX));
                    parent.push(None);
                    done.push(false);
                    v
                }
            };
            if !done[v] && key < best[v] {
                best[v] = key;
                parent[v] = Some((u, s.distribution));
                heap.push(Reverse((key.0, key.1, v)));
            }
        }
    }
    Err(Error::Internal("target configuration unreachable".into()))
}

fn rebuild(
    game: &Game,
    nodes: &[AbstractConfiguration],
    parent: &[Option<(usize, Vec<u32>)>],
    goal: usize,
    cost: u64,
) -> SocialOptimum {
    let mut chain = Vec::new();
    let mut u = goal;
    while let Some((p, dist)) = &parent[u] {
        chain.push((u, dist.clone()));
        u = *p;
    }
    chain.reverse();
    let mut abstract_path = vec![nodes[u].clone()];
    let mut witness = OutcomePath::empty(Configuration::source(game));
    for (v, dist) in chain {
        let m = lift_distribution(game.arena(), witness.last(), &dist);
        witness.push(game, m).expect("lifted move is valid");
        abstract_path.push(nodes[v].clone());
    }
    SocialOptimum {
        cost,
        abstract_path,
        witness,
    }
}

/// Whether some play has social cost at most `bound`.
pub fn constrained_social_optimum(game: &Game, bound: u64) -> Result<(bool, SocialOptimum)> {
    let so = social_optimum(game)?;
    Ok((so.cost <= bound, so))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costfn::CostFunction;
    use crate::fixtures;

    fn so(arena: crate::Arena, n: usize) -> SocialOptimum {
        social_optimum(&Game::new(arena, n).unwrap()).unwrap()
    }

    #[test]
    fn bridge_single_player() {
        let r = so(fixtures::bridge_arena(), 1);
        assert_eq!(r.cost, 8);
        let a = fixtures::bridge_arena();
        let names: Vec<_> = r
            .witness
            .configs()
            .map(|c| c.names(&a)[0].to_string())
            .collect();
        assert_eq!(names, ["src", "v1", "v3", "tgt"]);
    }

    #[test]
    fn bridge_two_players() {
        let r = so(fixtures::bridge_arena(), 2);
        assert_eq!(r.cost, 22);
        assert_eq!(r.witness.social_cost().unwrap(), 22);
        assert!(r.witness.len() <= 2 * 5);
        assert_eq!(r.abstract_path.len(), r.witness.len() + 1);
    }

    #[test]
    fn single_edge_everyone_crosses_together() {
        let r = so(fixtures::trivial_arena(CostFunction::affine(1, 0)), 3);
        assert_eq!(r.cost, 9);
    }

    #[test]
    fn bounds() {
        let g = Game::new(fixtures::bridge_arena(), 2).unwrap();
        assert!(constrained_social_optimum(&g, 22).unwrap().0);
        assert!(!constrained_social_optimum(&g, 21).unwrap().0);
        let big = 2 * 5 * g.kappa();
        assert!(constrained_social_optimum(&g, big).unwrap().0);
    }

    #[test]
    fn monotone_in_players() {
        let costs: Vec<_> = (1..=4)
            .map(|n| so(fixtures::bridge_arena(), n).cost)
            .collect();
        assert!(costs.windows(2).all(|w| w[0] <= w[1]), "{costs:?}");
    }
}
