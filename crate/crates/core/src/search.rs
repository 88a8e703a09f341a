//! Explicit-state exploration and path optimization over graphs whose only
//! cycles are allowed to carry zero weight.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::ext::ExtNat;

/// All states reachable from `states[0]`, with labelled edges
/// `(target, label)`.
pub(crate) struct Explored<S> {
    pub states: Vec<S>,
    pub succ: Vec<Vec<(usize, usize)>>,
}

pub(crate) fn explore<S, F>(start: S, budget: usize, mut expand: F) -> Result<Explored<S>>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S, &mut Vec<(S, usize)>) -> Result<()>,
{
    let mut index = HashMap::new();
    let mut states = vec![start.clone()];
    let mut succ = vec![Vec::new()];
    index.insert(start, 0usize);
    let mut queue = VecDeque::from([0usize]);
    let mut buf = Vec::new();
    let mut edges = 0usize;
    while let Some(u) = queue.pop_front() {
        buf.clear();
        expand(&states[u], &mut buf)?;
        edges += buf.len();
        if states.len() + edges > budget {
            return Err(Error::Budget(states.len() + edges));
        }
        let mut out = Vec::with_capacity(buf.len());
        for (s, label) in buf.drain(..) {
            let v = match index.get(&s) {
                Some(&v) => v,
                None => {
                    let v = states.len();
                    index.insert(s.clone(), v);
                    states.push(s);
                    succ.push(Vec::new());
                    queue.push_back(v);
                    v
                }
            };
            out.push((v, label));
        }
        succ[u] = out;
    }
    Ok(Explored { states, succ })
}

/// Strongly connected components in reverse topological order (every edge
/// leaving a component points to an earlier one).
pub(crate) struct Condensation {
    pub comp: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl Condensation {
    pub fn new(succ: &[Vec<(usize, usize)>]) -> Self {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(succ.len(), 0);
        for _ in 0..succ.len() {
            g.add_node(());
        }
        for (u, out) in succ.iter().enumerate() {
            for &(v, _) in out {
                g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
            }
        }
        let sccs = tarjan_scc(&g);
        let mut comp = vec![0; succ.len()];
        let members: Vec<Vec<usize>> = sccs
            .into_iter()
            .map(|c| c.into_iter().map(NodeIndex::index).collect())
            .collect();
        for (k, m) in members.iter().enumerate() {
            for &u in m {
                comp[u] = k;
            }
        }
        Condensation { comp, members }
    }
}

/// A graph with its condensation and the set of nodes that can reach a goal.
pub(crate) struct Analysis<S> {
    pub explored: Explored<S>,
    pub scc: Condensation,
    pub goal: Vec<bool>,
    pub coaccessible: Vec<bool>,
}

impl<S> Analysis<S> {
    pub fn new(explored: Explored<S>, is_goal: impl Fn(&S) -> bool) -> Self {
        let scc = Condensation::new(&explored.succ);
        let goal: Vec<bool> = explored.states.iter().map(is_goal).collect();
        let mut comp_ok = vec![false; scc.members.len()];
        for (k, m) in scc.members.iter().enumerate() {
            comp_ok[k] = m.iter().any(|&u| {
                goal[u]
                    || explored.succ[u]
                        .iter()
                        .any(|&(v, _)| scc.comp[v] != k && comp_ok[scc.comp[v]])
            });
        }
        let coaccessible = scc.comp.iter().map(|&k| comp_ok[k]).collect();
        Analysis {
            explored,
            scc,
            goal,
            coaccessible,
        }
    }

    pub fn start_coaccessible(&self) -> bool {
        self.coaccessible[0]
    }

    /// Least total weight of a path from the start to a goal, with one such
    /// path as `(node, edge position)` pairs. Cycles through coaccessible
    /// nodes must weigh zero; anything else is reported as an internal error.
    pub fn min_path(
        &self,
        weight: impl Fn(usize, usize) -> i64,
    ) -> Result<Option<(i64, Vec<(usize, usize)>)>> {
        let succ = &self.explored.succ;
        let ncomp = self.scc.members.len();
        let mut dist: Vec<Option<i64>> = vec![None; ncomp];
        for k in 0..ncomp {
            let mut best: Option<i64> = None;
            for &u in &self.scc.members[k] {
                if self.goal[u] {
                    best = Some(best.map_or(0, |b| b.min(0)));
                }
                for (pos, &(v, _)) in succ[u].iter().enumerate() {
                    let w = weight(u, pos);
                    let kv = self.scc.comp[v];
                    if kv == k {
                        if w != 0 && self.coaccessible[u] {
                            return Err(Error::Internal(
                                "cycle with non-zero weight in a graph that admits none".into(),
                            ));
                        }
                        continue;
                    }
                    if let Some(d) = dist[kv] {
                        let cand = d.checked_add(w).ok_or(Error::Overflow)?;
                        best = Some(best.map_or(cand, |b| b.min(cand)));
                    }
                }
            }
            dist[k] = best;
        }
        let Some(total) = dist[self.scc.comp[0]] else {
            return Ok(None);
        };
        // Replay: inside a component move to a node offering the optimum.
        let mut path = Vec::new();
        let mut u = 0usize;
        loop {
            let k = self.scc.comp[u];
            let want = dist[k].expect("on an optimal route");
            let exit = |x: usize| -> Option<Option<usize>> {
                if self.goal[x] && want == 0 {
                    return Some(None);
                }
                succ[x].iter().enumerate().find_map(|(pos, &(v, _))| {
                    let kv = self.scc.comp[v];
                    (kv != k && dist[kv].and_then(|d| d.checked_add(weight(x, pos))) == Some(want))
                        .then_some(Some(pos))
                })
            };
            let (route, last, choice) = self.route_in_component(u, k, exit);
            path.extend(route);
            match choice {
                None => return Ok(Some((total, path))),
                Some(pos) => {
                    path.push((last, pos));
                    u = succ[last][pos].0;
                }
            }
        }
    }

    /// Breadth-first search inside component `k` from `u` to the first node
    /// where `exit` succeeds.
    fn route_in_component<T>(
        &self,
        u: usize,
        k: usize,
        exit: impl Fn(usize) -> Option<T>,
    ) -> (Vec<(usize, usize)>, usize, T) {
        let succ = &self.explored.succ;
        let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([u]);
        let mut seen = std::collections::HashSet::from([u]);
        while let Some(x) = queue.pop_front() {
            if let Some(t) = exit(x) {
                let mut route = Vec::new();
                let mut y = x;
                while y != u {
                    let (p, pos) = parent[&y];
                    route.push((p, pos));
                    y = p;
                }
                route.reverse();
                return (route, x, t);
            }
            for (pos, &(v, _)) in succ[x].iter().enumerate() {
                if self.scc.comp[v] == k && seen.insert(v) {
                    parent.insert(v, (x, pos));
                    queue.push_back(v);
                }
            }
        }
        unreachable!("component value is realised by one of its nodes")
    }

    /// Supremum of the total weight over paths from the start to a goal.
    /// `None` if no such path exists, `+∞` if a positive-weight cycle lies on
    /// one.
    pub fn max_weight(&self, weight: impl Fn(usize, usize) -> u64) -> Result<Option<ExtNat>> {
        if !self.start_coaccessible() {
            return Ok(None);
        }
        let succ = &self.explored.succ;
        let ncomp = self.scc.members.len();
        let mut best: Vec<Option<ExtNat>> = vec![None; ncomp];
        for k in 0..ncomp {
            if !self.coaccessible[self.scc.members[k][0]] {
                continue;
            }
            let mut b: Option<ExtNat> = None;
            let mut pumpable = false;
            for &u in &self.scc.members[k] {
                if self.goal[u] {
                    b = b.max(Some(ExtNat::Fin(0)));
                }
                for (pos, &(v, _)) in succ[u].iter().enumerate() {
                    let w = weight(u, pos);
                    let kv = self.scc.comp[v];
                    if kv == k {
                        pumpable |= w > 0;
                    } else if let Some(d) = best[kv] {
                        b = b.max(Some(d.saturating_add(w)));
                    }
                }
            }
            best[k] = if pumpable { Some(ExtNat::Inf) } else { b };
        }
        Ok(best[self.scc.comp[0]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // nodes 0..n with explicit edges (to, weight); goal is the last node
    fn analysis(edges: &[&[(usize, i64)]]) -> (Analysis<usize>, Vec<Vec<i64>>) {
        let n = edges.len();
        let explored = explore(0usize, 1000, |&u, out| {
            for (k, &(v, _)) in edges[u].iter().enumerate() {
                out.push((v, k));
            }
            Ok(())
        })
        .unwrap();
        let weights = explored
            .states
            .iter()
            .map(|&u| edges[u].iter().map(|&(_, w)| w).collect())
            .collect();
        (Analysis::new(explored, |&u| u == n - 1), weights)
    }

    #[test]
    fn min_path_with_zero_cycles() {
        // 0 -> 1 (0), 1 -> 0 (0), 1 -> 2 (5), 0 -> 2 (7), 2 -> 2 (0)
        let (a, w) = analysis(&[&[(1, 0), (2, 7)], &[(0, 0), (2, 5)], &[(2, 0)]]);
        let (d, path) = a.min_path(|u, k| w[u][k]).unwrap().unwrap();
        assert_eq!(d, 5);
        let total: i64 = path.iter().map(|&(u, k)| w[u][k]).sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn negative_weights_and_dead_ends() {
        // 0 -> 1 (-3), 1 is a dead end; 0 -> 2 (-1)
        let (a, w) = analysis(&[&[(1, -3), (2, -1)], &[], &[(2, 0)]]);
        assert_eq!(a.min_path(|u, k| w[u][k]).unwrap().unwrap().0, -1);
        assert!(!a.coaccessible[a.explored.states.iter().position(|&s| s == 1).unwrap()]);
    }

    #[test]
    fn nonzero_cycle_is_an_error() {
        let (a, w) = analysis(&[&[(1, 1)], &[(0, 1), (2, 0)], &[(2, 0)]]);
        assert!(matches!(
            a.min_path(|u, k| w[u][k]),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn max_weight_cases() {
        let (a, w) = analysis(&[&[(1, 2), (2, 7)], &[(2, 9)], &[(2, 0)]]);
        let wt = |u: usize, k: usize| w[u][k] as u64;
        assert_eq!(a.max_weight(wt).unwrap(), Some(ExtNat::Fin(11)));
        let (a, w) = analysis(&[&[(1, 0)], &[(0, 1), (2, 0)], &[(2, 0)]]);
        let wt = |u: usize, k: usize| w[u][k] as u64;
        assert_eq!(a.max_weight(wt).unwrap(), Some(ExtNat::Inf));
        let (a, w) = analysis(&[&[(1, 0)], &[(1, 0)], &[(2, 0)]]);
        let wt = |u: usize, k: usize| w[u][k] as u64;
        assert_eq!(a.max_weight(wt).unwrap(), None);
    }
}
