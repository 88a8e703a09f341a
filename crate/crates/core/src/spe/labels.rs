//! The label fixpoint: for every transition and player, the most that
//! player may pay from there on in some subgame-perfect continuation.

use std::collections::HashMap;

use super::counter::{summarize, Labels, Summary};
use crate::arena::Game;
use crate::error::{Error, Result};
use crate::ext::{ExtNat, Label};
use crate::graphs::{ConfigGraph, ConfigId, Configuration};

/// Final labels on every transition reachable from the source.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    graph: ConfigGraph,
    labels: Labels,
    /// Iterations needed to stabilise each region, indexed by region.
    iterations: Vec<usize>,
}

/// Progress report handed to observers after every label update.
pub struct IterationEvent<'a> {
    /// Number of players at the target in the configurations updated.
    pub region: usize,
    /// Index `k` of the labels just computed (`k = 0` is the initial guess).
    pub k: usize,
    pub graph: &'a ConfigGraph,
    pub before: &'a Labels,
    pub after: &'a Labels,
}

pub fn compute_lambda(game: &Game) -> Result<LambdaTable> {
    compute_lambda_with(game, |_| {})
}

/// Like [`compute_lambda`], reporting each iteration to `observe`.
///
/// Regions are processed from "everybody at the target" downwards. Inside
/// a region the labels start at `+∞` (zero for players at the target) and
/// every round recomputes all of them from the previous round's table: an
/// edge gets `-∞` if some successor admits no consistent continuation, and
/// otherwise each player gets the cheapest deviation plus the worst
/// consistent continuation after it.
pub fn compute_lambda_with(
    game: &Game,
    mut observe: impl FnMut(&IterationEvent<'_>),
) -> Result<LambdaTable> {
    let n = game.players();
    let tgt = game.arena().target();
    let graph = ConfigGraph::build(game)?;
    let bounds = Bounds::new(game);

    let mut labels: Labels = graph
        .ids()
        .map(|c| vec![vec![Label::PosInf; n]; graph.transitions(c).len()])
        .collect();
    // summaries of configurations whose labels are final
    let mut settled: HashMap<ConfigId, Summary> = HashMap::new();
    let mut iterations = vec![0; n + 1];

    for j in (0..=n).rev() {
        let region: Vec<ConfigId> = graph.ids().filter(|&c| graph.region(c) == j).collect();
        let before = labels.clone();
        for &c in &region {
            let at_tgt: Vec<bool> = (0..n).map(|i| graph.config(c).get(i) == tgt).collect();
            for row in labels[c].iter_mut() {
                for i in 0..n {
                    row[i] = if at_tgt[i] {
                        Label::Fin(0)
                    } else {
                        Label::PosInf
                    };
                }
            }
        }
        observe(&IterationEvent {
            region: j,
            k: 0,
            graph: &graph,
            before: &before,
            after: &labels,
        });

        let mut k = 0usize;
        loop {
            k += 1;
            if k as u128 > bounds.stabilization {
                return Err(Error::Internal(format!(
                    "labels of region {j} still changing after {} rounds",
                    bounds.stabilization
                )));
            }
            let mut fresh: HashMap<ConfigId, Summary> = HashMap::new();
            let mut next = labels.clone();
            for &c in &region {
                let ts = graph.transitions(c);
                let mut summaries = Vec::with_capacity(ts.len());
                for t in ts {
                    let d = t.to;
                    let s = if graph.region(d) > j {
                        if let std::collections::hash_map::Entry::Vacant(e) = settled.entry(d) {
                            let s = summarize(game, &graph, &labels, d)?;
                            e.insert(s);
                        }
                        settled[&d].clone()
                    } else {
                        if let std::collections::hash_map::Entry::Vacant(e) = fresh.entry(d) {
                            let s = summarize(game, &graph, &labels, d)?;
                            e.insert(s);
                        }
                        fresh[&d].clone()
                    };
                    summaries.push(s);
                }
                let stuck = summaries.iter().any(|s| s.sup.is_none());
                let conf = graph.config(c);
                for (tk, t) in ts.iter().enumerate() {
                    for i in 0..n {
                        next[c][tk][i] = if conf.get(i) == tgt {
                            Label::Fin(0)
                        } else if stuck {
                            Label::NegInf
                        } else {
                            let mut best = ExtNat::Inf;
                            for &u in &t.devs[i] {
                                let sup = summaries[u].sup.as_ref().expect("not stuck")[i];
                                best = best.min(sup.saturating_add(ts[u].weights[i]));
                            }
                            best.into()
                        };
                    }
                }
            }
            bounds.check(&region, &labels, &next, k)?;
            observe(&IterationEvent {
                region: j,
                k,
                graph: &graph,
                before: &labels,
                after: &next,
            });
            let stable = region.iter().all(|&c| next[c] == labels[c]);
            labels = next;
            if stable {
                iterations[j] = k;
                break;
            }
        }
    }
    Ok(LambdaTable {
        graph,
        labels,
        iterations,
    })
}

/// The a-priori bounds the fixpoint must respect.
struct Bounds {
    stabilization: u128,
    /// Ceiling on any label once the iteration index reaches `|V|`.
    ceiling: u64,
    states: usize,
    players: usize,
    configs: u128,
    kappa: u128,
}

impl Bounds {
    fn new(game: &Game) -> Self {
        let arena = game.arena();
        let n = game.players() as u32;
        let v = arena.num_states() as u128;
        let kappa = game.kappa() as u128;
        let edges_pow = (arena.num_edges() as u128).saturating_pow(n);
        let stabilization = v.saturating_mul(
            1u128.saturating_add((n as u128).saturating_mul(kappa).saturating_mul(edges_pow)),
        );
        Bounds {
            stabilization,
            ceiling: game.cost_ceiling(),
            states: arena.num_states(),
            players: game.players(),
            configs: v.saturating_pow(n),
            kappa,
        }
    }

    /// `(n|C| + 2|V|)·Σ_{l=1..k} (n|C|)^{l-1}·κ^l`, saturating.
    fn intermediate(&self, k: usize) -> u128 {
        let nc = (self.players as u128).saturating_mul(self.configs);
        let mut sum = 0u128;
        let mut term = self.kappa;
        for _ in 1..=k {
            sum = sum.saturating_add(term);
            term = term.saturating_mul(nc).saturating_mul(self.kappa);
        }
        nc.saturating_add(2 * self.states as u128)
            .saturating_mul(sum)
    }

    fn check(&self, region: &[ConfigId], before: &Labels, after: &Labels, k: usize) -> Result<()> {
        let limit = self.intermediate(k);
        for &c in region {
            for (old, new) in before[c].iter().zip(&after[c]) {
                for (&o, &x) in old.iter().zip(new) {
                    if x > o {
                        return Err(Error::Internal(format!(
                            "label increased from {o} to {x} out of configuration #{c}"
                        )));
                    }
                    if let Label::Fin(v) = x {
                        if v as u128 > limit || (k >= self.states && v > self.ceiling) {
                            return Err(Error::Internal(format!(
                                "label {v} above its bound after {k} rounds"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl LambdaTable {
    pub fn graph(&self) -> &ConfigGraph {
        &self.graph
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn iterations(&self) -> &[usize] {
        &self.iterations
    }

    /// Labels of the transition `from → to`, if both are reachable.
    pub fn label(&self, from: &Configuration, to: &Configuration) -> Option<&[Label]> {
        let c = self.graph.id(from)?;
        let d = self.graph.id(to)?;
        let k = self.graph.transitions(c).iter().position(|t| t.to == d)?;
        Some(&self.labels[c][k])
    }

    /// JSON dump: one entry per transition.
    pub fn to_json_value(&self, game: &Game) -> serde_json::Value {
        let arena = game.arena();
        let mut entries = Vec::new();
        for c in self.graph.ids() {
            for (k, t) in self.graph.transitions(c).iter().enumerate() {
                entries.push(serde_json::json!({
                    "from": self.graph.config(c).names(arena),
                    "weights": t.weights,
                    "to": self.graph.config(t.to).names(arena),
                    "labels": self.labels[c][k],
                }));
            }
        }
        serde_json::Value::Array(entries)
    }
}
