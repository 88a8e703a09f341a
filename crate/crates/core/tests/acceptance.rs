//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::checks::{self, Check};
use dyncong::dynamics::{blind_ne, is_blind_ne};
use dyncong::ext::ExtNat;
use dyncong::fixtures;
use dyncong::graphs::{eval_path, Configuration, OutcomePath};
use dyncong::ne::{check_ne_outcome, constrained_ne};
use dyncong::oracle::{gen_partition_arena, gen_partition_arena_with, partition_bound, DirectExit};
use dyncong::socopt::constrained_social_optimum;
use dyncong::spe::{check_spe_outcome, gamma_min_spe, spe_exists};
use dyncong::Game;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn e(err: dyncong::Error) -> String {
    format!("solver error: {err}")
}

fn within(limit: Duration, start: Instant) -> Check {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, allowed {limit:?}");
    Ok(())
}

fn bridge() -> Game {
    Game::new(fixtures::bridge_arena(), 2).unwrap()
}

fn bridge_outcome(g: &Game, configs: &[&[&str]]) -> OutcomePath {
    let cs: Vec<_> = configs
        .iter()
        .map(|c| Configuration::from_names(g.arena(), c).unwrap())
        .collect();
    OutcomePath::from_configs(g, &cs).unwrap()
}

fn replay_bridge() -> Check {
    let g = bridge();
    let [p1, p2, _] = fixtures::bridge_paths(g.arena());
    let moves = dyncong::dynamics::BlindProfile::new(vec![p1, p2]).move_vectors(g.arena());
    let start = Instant::now();
    let ev = eval_path(&g, &moves).map_err(e)?;
    let took = start.elapsed();
    let weights: Vec<Vec<u64>> = ev.path.steps().iter().map(|s| s.weights.clone()).collect();
    ensure!(
        weights == vec![vec![2, 2], vec![3, 6], vec![4, 1], vec![0, 4]],
        "weights {weights:?}"
    );
    ensure!(
        ev.costs == vec![ExtNat::Fin(9), ExtNat::Fin(13)],
        "costs {:?}",
        ev.costs
    );
    ensure!(took < Duration::from_millis(1), "took {took:?}");
    Ok(())
}

fn example_ne() -> Check {
    let g = bridge();
    let mixed = bridge_outcome(
        &g,
        &[
            &["src", "src"],
            &["v2", "v1"],
            &["v3", "v2"],
            &["tgt", "v3"],
            &["tgt", "tgt"],
        ],
    );
    let both = bridge_outcome(
        &g,
        &[
            &["src", "src"],
            &["v1", "v1"],
            &["v3", "v3"],
            &["tgt", "tgt"],
        ],
    );
    ensure!(
        mixed.costs().map_err(e)? == vec![10, 12],
        "mixed outcome costs differ"
    );
    ensure!(
        both.costs().map_err(e)? == vec![16, 16],
        "shared outcome costs differ"
    );
    ensure!(
        check_ne_outcome(&g, &mixed).map_err(e)?,
        "(10, 12) outcome rejected"
    );
    ensure!(
        !check_ne_outcome(&g, &both).map_err(e)?,
        "(16, 16) outcome accepted"
    );
    Ok(())
}

const LADDER_TABLE: [([usize; 3], u64); 20] = [
    ([1, 1, 1], 54),
    ([2, 2, 2], 72),
    ([3, 3, 3], 63),
    ([4, 4, 4], 54),
    ([1, 2, 3], 37),
    ([1, 3, 4], 41),
    ([1, 2, 4], 37),
    ([2, 3, 4], 45),
    ([1, 1, 2], 36),
    ([1, 1, 3], 43),
    ([1, 1, 4], 42),
    ([2, 2, 1], 42),
    ([2, 2, 3], 55),
    ([2, 2, 4], 50),
    ([3, 3, 1], 46),
    ([3, 3, 2], 52),
    ([3, 3, 4], 51),
    ([4, 4, 1], 46),
    ([4, 4, 2], 44),
    ([4, 4, 3], 51),
];

fn ladder_costs() -> Check {
    let g = Game::new(fixtures::ladder_arena(), 3).unwrap();
    let start = Instant::now();
    let mut wrong = Vec::new();
    for (routes, want) in LADDER_TABLE {
        let p = fixtures::ladder_profile(g.arena(), &routes);
        let ev = eval_path(&g, &p.move_vectors(g.arena())).map_err(e)?;
        if ev.social != ExtNat::Fin(want) {
            let each: Vec<String> = ev.costs.iter().map(|c| c.to_string()).collect();
            wrong.push(format!(
                "{routes:?} costs {} = {} instead of {want}",
                each.join(" + "),
                ev.social
            ));
        }
    }
    ensure!(wrong.is_empty(), "{}", wrong.join("; "));
    within(Duration::from_secs(1), start)
}

fn blind_suboptimal() -> Check {
    let g = Game::new(fixtures::ladder_arena(), 3).unwrap();
    let (ok, best) = constrained_ne(&g, &[1, 1, 1], 36).map_err(e)?;
    ensure!(ok, "best equilibrium costs {}", best.cost);
    let blind = blind_ne(&g, None).map_err(e)?;
    let social = blind.profile.social_cost(&g).map_err(e)?;
    ensure!(social > 36, "blind equilibrium costs {social}");
    for r in 0..64 {
        let routes = [r / 16 + 1, r / 4 % 4 + 1, r % 4 + 1];
        let p = fixtures::ladder_profile(g.arena(), &routes);
        if is_blind_ne(&g, &p).map_err(e)? {
            let social = p.social_cost(&g).map_err(e)?;
            ensure!(
                social > 36,
                "{routes:?} is a blind equilibrium of cost {social}"
            );
        }
    }
    let p = fixtures::ladder_profile(g.arena(), &[1, 1, 2]);
    ensure!(
        !is_blind_ne(&g, &p).map_err(e)?,
        "(ρ1, ρ1, ρ2) is blind-stable"
    );
    let (_, c) = dyncong::dynamics::best_response(&g, &p, 0).map_err(e)?;
    ensure!(c == 13, "first player's best response costs {c}");
    Ok(())
}

fn potential_descent() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for swap in 0..100 {
        let k = rng.gen_range(2..=6);
        let n = rng.gen_range(1..=3);
        let arena = common::random_arena(rng.gen(), k, rng.gen_bool(0.5));
        let g = Game::new(arena, n).map_err(e)?;
        checks::potential_identity(&g, &mut rng).map_err(|m| format!("swap {swap}: {m}"))?;
        if swap % 10 == 0 {
            let r = blind_ne(&g, Some(checks::random_profile(&g, &mut rng))).map_err(e)?;
            ensure!(
                r.iterations <= r.initial_potential,
                "{} improving steps from potential {}",
                r.iterations,
                r.initial_potential
            );
        }
    }
    Ok(())
}

fn bridge_spe() -> Check {
    let g = bridge();
    ensure!(
        spe_exists(&g).map_err(e)?.is_some(),
        "no subgame-perfect outcome found"
    );
    let [p1, p2, _] = fixtures::bridge_paths(g.arena());
    let out = dyncong::dynamics::BlindProfile::new(vec![p1, p2])
        .outcome(&g)
        .map_err(e)?;
    ensure!(
        out.social_cost().map_err(e)? == 22,
        "(π1, π2) social cost differs"
    );
    ensure!(
        check_spe_outcome(&g, &out).map_err(e)?,
        "(π1, π2) outcome rejected"
    );
    let best = gamma_min_spe(&g, &[1, 1]).map_err(e)?.ok_or("no optimum")?;
    ensure!(best.cost <= 22, "best subgame-perfect cost {}", best.cost);
    Ok(())
}

fn over_corpus(f: impl Fn(&Game) -> Check) -> Check {
    for case in common::corpus() {
        f(&case.game).map_err(|m| format!("{}: {m}", case.name))?;
    }
    Ok(())
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let corpus = common::corpus();
    ensure!(corpus.len() >= 15, "corpus has {} games", corpus.len());
    over_corpus(|g| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        checks::social_optimum_matches(g)?;
        checks::best_response_matches(g, &mut rng, 3)?;
        checks::values_match(g)?;
        checks::ne_outcomes_match(g, 6)
    })?;
    within(Duration::from_secs(300), start)
}

fn partition() -> Check {
    let start = Instant::now();
    let (arena, n) = gen_partition_arena(&[1, 1]).map_err(e)?;
    let m = partition_bound(&[1, 1]).map_err(e)?;
    let (ok, so) =
        constrained_social_optimum(&Game::new(arena, n).map_err(e)?, m - 1).map_err(e)?;
    ensure!(
        so.cost == 38 && ok,
        "(1, 1): optimum {} against M - 1 = {}",
        so.cost,
        m - 1
    );

    let (arena, n) = gen_partition_arena_with(&[1, 1], DirectExit::One).map_err(e)?;
    let (ok, so) =
        constrained_social_optimum(&Game::new(arena, n).map_err(e)?, m - 1).map_err(e)?;
    ensure!(
        so.cost == 34 && ok,
        "(1, 1) with unit exits: optimum {}",
        so.cost
    );

    for family in [&[1, 1, 4][..], &[1, 3]] {
        let (arena, n) = gen_partition_arena(family).map_err(e)?;
        let bound = partition_bound(family).map_err(e)? - 1;
        let (ok, so) =
            constrained_social_optimum(&Game::new(arena, n).map_err(e)?, bound).map_err(e)?;
        ensure!(
            !ok,
            "{family:?} has no partition, yet the optimum {} is within {bound}",
            so.cost
        );
    }

    let family = [1, 1, 1, 3];
    let (arena, n) = gen_partition_arena(&family).map_err(e)?;
    let bound = partition_bound(&family).map_err(e)? - 1;
    let (ok, so) =
        constrained_social_optimum(&Game::new(arena, n).map_err(e)?, bound).map_err(e)?;
    ensure!(
        !ok,
        "{family:?} answers true at M - 1 = {bound} (optimum {}); the family splits as {{3}} and {{1, 1, 1}}",
        so.cost
    );
    within(Duration::from_secs(600), start)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("replay of the two-player example", replay_bridge),
        ("Nash outcome checks", example_ne),
        ("blind profile cost table", ladder_costs),
        ("blind equilibria are suboptimal", blind_suboptimal),
        ("potential descent", potential_descent),
        ("subgame-perfect outcome", bridge_spe),
        ("oracle equivalence", oracle_equivalence),
        ("label fixpoint sanity", || over_corpus(checks::lambda_sane)),
        ("partition gadget", partition),
        ("metric sandwich", || over_corpus(checks::metric_sandwich)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let took = start.elapsed();
        match outcome {
            Ok(()) => println!("criterion {}: PASS {name} ({took:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
