//! Brute-force reference implementations. They work on concrete
//! configurations and explicit enumeration, share nothing with the solvers
//! beyond the game model and single-step semantics, and refuse to run past
//! the game's node budget.

use std::collections::HashMap;

use crate::arena::{Arena, ArenaFile, EdgeFile, EdgeId, Game, RawCost};
use crate::costfn::CostFunction;
use crate::dynamics::BlindProfile;
use crate::error::{Error, Result};
use crate::ext::ExtNat;
use crate::graphs::{move_vectors, step, Configuration, MoveVector, OutcomePath};

struct Budget {
    used: usize,
    limit: usize,
}

impl Budget {
    fn new(game: &Game) -> Self {
        Budget {
            used: 0,
            limit: game.node_budget(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::Budget(self.used))
        } else {
            Ok(())
        }
    }
}

fn plus(a: ExtNat, w: u64) -> ExtNat {
    a.saturating_add(w)
}

/// Least social cost of reaching the target configuration in at most
/// `max_steps` joint steps, or `+∞` if impossible.
pub fn brute_social_optimum(game: &Game, max_steps: usize) -> Result<ExtNat> {
    let mut memo: HashMap<(Configuration, usize), ExtNat> = HashMap::new();
    let mut budget = Budget::new(game);
    fn go(
        game: &Game,
        c: &Configuration,
        left: usize,
        memo: &mut HashMap<(Configuration, usize), ExtNat>,
        budget: &mut Budget,
    ) -> Result<ExtNat> {
        if c.all_at(game.arena().target()) {
            return Ok(ExtNat::Fin(0));
        }
        if left == 0 {
            return Ok(ExtNat::Inf);
        }
        if let Some(&v) = memo.get(&(c.clone(), left)) {
            return Ok(v);
        }
        budget.tick()?;
        let mut best = ExtNat::Inf;
        for m in move_vectors(game.arena(), c) {
            let (w, next) = step(game, c, &m)?;
            let rest = go(game, &next, left - 1, memo, budget)?;
            best = best.min(plus(rest, w.iter().sum()));
        }
        memo.insert((c.clone(), left), best);
        Ok(best)
    }
    go(
        game,
        &Configuration::source(game),
        max_steps,
        &mut memo,
        &mut budget,
    )
}

/// Cheapest path of at most `max_len` edges for player `i` against the
/// fixed paths of the others.
pub fn brute_best_response(
    game: &Game,
    profile: &BlindProfile,
    i: usize,
    max_len: usize,
) -> Result<ExtNat> {
    let arena = game.arena();
    let mut budget = Budget::new(game);
    let others_on = |e: EdgeId, k: usize| {
        profile
            .strategies()
            .iter()
            .enumerate()
            .filter(|&(j, s)| j != i && s.edge_at(arena, k) == e)
            .count()
    };
    let mut best = ExtNat::Inf;
    // explicit stack of (state, step, cost so far)
    let mut stack = vec![(arena.source(), 0usize, 0u64)];
    while let Some((v, k, cost)) = stack.pop() {
        budget.tick()?;
        if v == arena.target() {
            best = best.min(ExtNat::Fin(cost));
            continue;
        }
        if k == max_len {
            continue;
        }
        for &e in arena.out_edges(v) {
            let w = arena.edge(e).cost.eval(1 + others_on(e, k) as u64)?;
            stack.push((arena.edge(e).to, k + 1, cost + w));
        }
    }
    Ok(best)
}

/// Finite-horizon max-min values: what player `i` can guarantee from a
/// configuration within `horizon` steps when all others play against it.
pub struct BruteValues<'g> {
    game: &'g Game,
    horizon: usize,
    memo: HashMap<(Configuration, usize, usize), ExtNat>,
    budget: Budget,
}

impl<'g> BruteValues<'g> {
    pub fn new(game: &'g Game, horizon: usize) -> Self {
        BruteValues {
            game,
            horizon,
            memo: HashMap::new(),
            budget: Budget::new(game),
        }
    }

    pub fn value(&mut self, c: &Configuration, i: usize) -> Result<ExtNat> {
        self.at(c, i, self.horizon)
    }

    fn at(&mut self, c: &Configuration, i: usize, h: usize) -> Result<ExtNat> {
        let arena = self.game.arena();
        if c.get(i) == arena.target() {
            return Ok(ExtNat::Fin(0));
        }
        if h == 0 {
            return Ok(ExtNat::Inf);
        }
        let key = (c.clone(), i, h);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.budget.tick()?;
        // group joint moves by what the others do; player i answers last
        let mut groups: HashMap<Vec<EdgeId>, Vec<MoveVector>> = HashMap::new();
        let mut order = Vec::new();
        for m in move_vectors(arena, c) {
            let mut key = m.edges().to_vec();
            key.remove(i);
            if !groups.contains_key(&key) {
                order.push(key.clone());
            }
            groups.entry(key).or_default().push(m);
        }
        let mut worst = ExtNat::Fin(0);
        for key in order {
            let mut answer = ExtNat::Inf;
            for m in &groups[&key] {
                let (w, next) = step(self.game, c, m)?;
                let rest = self.at(&next, i, h - 1)?;
                answer = answer.min(plus(rest, w[i]));
            }
            worst = worst.max(answer);
        }
        self.memo.insert(key, worst);
        Ok(worst)
    }
}

/// Horizon large enough for [`BruteValues`] to match the exact values on
/// arenas whose non-target edges cost at least one.
pub fn value_horizon(game: &Game) -> usize {
    let y = game.cost_ceiling() as usize;
    y.max(game.arena().num_states()) + 1
}

/// Every play of at most `max_steps` steps that first reaches the target
/// configuration at its last step and passes the deviation test: no player
/// can switch edges at some step and be sure to pay less than it does on
/// the play, given that the others then punish it as hard as they can.
pub fn brute_ne_outcomes(game: &Game, max_steps: usize) -> Result<Vec<OutcomePath>> {
    let mut values = BruteValues::new(game, value_horizon(game));
    let mut found = Vec::new();
    for path in complete_paths(game, max_steps)? {
        if is_ne_by_deviation(game, &path, &mut values)? {
            found.push(path);
        }
    }
    Ok(found)
}

/// All plays from the source that reach the target configuration for the
/// first time within `max_steps` steps.
pub fn complete_paths(game: &Game, max_steps: usize) -> Result<Vec<OutcomePath>> {
    let mut budget = Budget::new(game);
    let mut out = Vec::new();
    let mut stack = vec![OutcomePath::empty(Configuration::source(game))];
    let tgt = game.arena().target();
    while let Some(p) = stack.pop() {
        budget.tick()?;
        if p.last().all_at(tgt) {
            out.push(p);
            continue;
        }
        if p.len() == max_steps {
            continue;
        }
        for m in move_vectors(game.arena(), p.last()) {
            let mut q = p.clone();
            q.push(game, m)?;
            stack.push(q);
        }
    }
    out.sort_by(|a, b| {
        a.steps()
            .len()
            .cmp(&b.steps().len())
            .then_with(|| moves_key(a).cmp(&moves_key(b)))
    });
    Ok(out)
}

fn moves_key(p: &OutcomePath) -> Vec<MoveVector> {
    p.steps().iter().map(|s| s.moves.clone()).collect()
}

fn is_ne_by_deviation(game: &Game, path: &OutcomePath, values: &mut BruteValues) -> Result<bool> {
    let arena = game.arena();
    for (l, s) in path.steps().iter().enumerate() {
        let c = path.config(l);
        for i in 0..game.players() {
            let suffix: u64 = path.steps()[l..].iter().map(|s| s.weights[i]).sum();
            for &e in arena.out_edges(c.get(i)) {
                let mut m = s.moves.clone();
                m.0[i] = e;
                let (w, next) = step(game, c, &m)?;
                let secured = plus(values.value(&next, i)?, w[i]);
                if ExtNat::Fin(suffix) > secured {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Subgame-perfect outcomes by backward induction, for arenas without
/// cycles outside the target. From each configuration a play is kept when
/// its continuation is itself kept and no single player gains by deviating
/// for one step, assuming the deviation is answered by the kept
/// continuation that is worst for the deviator.
pub fn brute_spe_outcomes(game: &Game) -> Result<Vec<OutcomePath>> {
    if has_cycle_outside_target(game.arena()) {
        return Err(Error::Precondition(
            "backward induction needs an arena without cycles outside the target".into(),
        ));
    }
    let mut memo: HashMap<Configuration, Vec<Continuation>> = HashMap::new();
    let mut budget = Budget::new(game);
    let start = Configuration::source(game);
    induct(game, &start, &mut memo, &mut budget)?;
    memo[&start]
        .iter()
        .map(|k| OutcomePath::from_moves(game, start.clone(), &k.moves))
        .collect()
}

#[derive(Clone)]
struct Continuation {
    moves: Vec<MoveVector>,
    costs: Vec<u64>,
}

fn induct(
    game: &Game,
    c: &Configuration,
    memo: &mut HashMap<Configuration, Vec<Continuation>>,
    budget: &mut Budget,
) -> Result<()> {
    if memo.contains_key(c) {
        return Ok(());
    }
    budget.tick()?;
    let n = game.players();
    if c.all_at(game.arena().target()) {
        memo.insert(
            c.clone(),
            vec![Continuation {
                moves: Vec::new(),
                costs: vec![0; n],
            }],
        );
        return Ok(());
    }
    let moves = move_vectors(game.arena(), c);
    let mut steps = Vec::with_capacity(moves.len());
    for m in &moves {
        let (w, next) = step(game, c, m)?;
        induct(game, &next, memo, budget)?;
        steps.push((w, next));
    }
    // worst kept continuation cost for each player after each step
    let worst: Vec<Vec<u64>> = steps
        .iter()
        .map(|(_, next)| {
            (0..n)
                .map(|i| {
                    memo[next]
                        .iter()
                        .map(|k| k.costs[i])
                        .max()
                        .expect("non-empty")
                })
                .collect()
        })
        .collect();
    let mut kept = Vec::new();
    for (a, m) in moves.iter().enumerate() {
        let (w, next) = &steps[a];
        // one-step deviations of player i: same moves for the others
        let punished = |i: usize| -> u64 {
            moves
                .iter()
                .enumerate()
                .filter(|(_, d)| (0..n).all(|j| j == i || d.0[j] == m.0[j]))
                .map(|(b, _)| steps[b].0[i] + worst[b][i])
                .min()
                .expect("includes the move itself")
        };
        let bounds: Vec<u64> = (0..n).map(punished).collect();
        for k in &memo[next] {
            if (0..n).all(|i| w[i] + k.costs[i] <= bounds[i]) {
                let mut mv = vec![m.clone()];
                mv.extend(k.moves.iter().cloned());
                kept.push(Continuation {
                    moves: mv,
                    costs: (0..n).map(|i| w[i] + k.costs[i]).collect(),
                });
            }
        }
    }
    memo.insert(c.clone(), kept);
    Ok(())
}

fn has_cycle_outside_target(arena: &Arena) -> bool {
    // Kahn's algorithm on the arena minus the target loop
    let n = arena.num_states();
    let mut indeg = vec![0usize; n];
    for e in arena.edge_ids() {
        if e != arena.target_loop() {
            indeg[arena.edge(e).to.index()] += 1;
        }
    }
    let mut ready: Vec<_> = arena.states().filter(|s| indeg[s.index()] == 0).collect();
    let mut seen = 0;
    while let Some(s) = ready.pop() {
        seen += 1;
        for &e in arena.out_edges(s) {
            if e == arena.target_loop() {
                continue;
            }
            let t = arena.edge(e).to;
            indeg[t.index()] -= 1;
            if indeg[t.index()] == 0 {
                ready.push(t);
            }
        }
    }
    seen < n
}

/// Cost charged on the direct edges from the `a` states to the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectExit {
    /// Two for a lone player, matching the closed form `14S + 12m` for the
    /// optimum of a positive instance.
    Two,
    /// One for a lone player, as drawn; positive instances then cost
    /// `14S + 10m`.
    One,
}

/// The Partition gadget for `family` with the default [`DirectExit::Two`].
/// Returns the arena and the player count `2S + 2m`.
pub fn gen_partition_arena(family: &[u64]) -> Result<(Arena, usize)> {
    gen_partition_arena_with(family, DirectExit::Two)
}

/// The Partition gadget: a positive instance admits social cost below
/// `M = 14S + 12m + 1`, a negative one does not.
pub fn gen_partition_arena_with(family: &[u64], exit: DirectExit) -> Result<(Arena, usize)> {
    let big = partition_bound(family)?;
    let s = family.iter().sum::<u64>() / 2;
    let m = family.len() as u64;
    let threshold = |r: u64, low: u64| CostFunction::threshold(r, low, big);
    let mut states = vec!["src".to_string(), "tgt".into(), "d1".into(), "d2".into()];
    let mut edges = Vec::new();
    let mut edge = |from: &str, to: &str, cost: CostFunction| {
        edges.push(EdgeFile {
            from: from.into(),
            to: to.into(),
            cost: RawCost {
                pieces: cost.pieces().to_vec(),
            },
        })
    };
    let direct = match exit {
        DirectExit::Two => 2,
        DirectExit::One => 1,
    };
    for (k, &r) in family.iter().enumerate() {
        let i = k + 1;
        let si = format!("s{i}");
        states.push(si.clone());
        edge(
            "src",
            &si,
            threshold(r.checked_add(2).ok_or(Error::Overflow)?, 1)?,
        );
        for j in 1..=2 {
            let a = format!("a{i}_{j}");
            states.push(a.clone());
            edge(&si, &a, CostFunction::threshold(1, 2, 4)?);
            edge(&a, &format!("d{j}"), CostFunction::constant(1));
            edge(&a, "tgt", threshold(1, direct)?);
        }
    }
    for j in 1..=2 {
        edge(&format!("d{j}"), "tgt", threshold(s, 1)?);
    }
    let file = ArenaFile {
        states,
        source: "src".into(),
        target: "tgt".into(),
        edges,
    };
    Ok((Arena::from_file(&file)?, (2 * s + 2 * m) as usize))
}

/// `M = 14S + 12m + 1` for a family, which must be non-empty with an even
/// sum `2S`.
pub fn partition_bound(family: &[u64]) -> Result<u64> {
    let total = family
        .iter()
        .try_fold(0u64, |acc, &r| acc.checked_add(r))
        .ok_or(Error::Overflow)?;
    if family.is_empty() || total % 2 == 1 {
        return Err(Error::Precondition(format!(
            "family must be non-empty with an even sum, got sum {total}"
        )));
    }
    let m = family.len() as u64;
    (total / 2)
        .checked_mul(14)
        .and_then(|x| x.checked_add(m.checked_mul(12)?))
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::Overflow)
}
