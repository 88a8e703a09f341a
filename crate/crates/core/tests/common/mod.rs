//! Fixed corpus of small games shared by the integration tests.

#![allow(dead_code)]

pub mod checks;

use dyncong::arena::{ArenaFile, EdgeFile, RawCost};
use dyncong::fixtures;
use dyncong::{Arena, CostFunction, Game};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Case {
    pub name: String,
    pub game: Game,
}

fn random_cost(rng: &mut ChaCha8Rng) -> CostFunction {
    if rng.gen_bool(0.25) {
        let low = rng.gen_range(1..=3);
        CostFunction::threshold(rng.gen_range(1..=2), low, low + rng.gen_range(1..=6)).unwrap()
    } else {
        CostFunction::affine(rng.gen_range(0..=3), rng.gen_range(1..=3))
    }
}

/// A random arena on `k` states where every non-target edge costs at least
/// one. `cyclic` allows backward edges and self-loops.
pub fn random_arena(seed: u64, k: usize, cyclic: bool) -> Arena {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..k)
        .map(|i| match i {
            0 => "src".to_string(),
            i if i == k - 1 => "tgt".to_string(),
            i => format!("u{i}"),
        })
        .collect();
    let mut edges = Vec::new();
    let add = |from: usize,
               to: usize,
               rng: &mut ChaCha8Rng,
               edges: &mut Vec<(usize, usize, CostFunction)>| {
        if !edges.iter().any(|(a, b, _)| (*a, *b) == (from, to)) {
            let c = random_cost(rng);
            edges.push((from, to, c));
        }
    };
    for i in 0..k - 1 {
        add(i, i + 1, &mut rng, &mut edges);
        for j in i + 2..k {
            if rng.gen_bool(0.5) && edges.iter().filter(|e| e.0 == i).count() < 3 {
                add(i, j, &mut rng, &mut edges);
            }
        }
        if cyclic && i > 0 {
            if rng.gen_bool(0.3) {
                let j = rng.gen_range(0..i);
                add(i, j, &mut rng, &mut edges);
            }
            if rng.gen_bool(0.15) {
                add(i, i, &mut rng, &mut edges);
            }
        }
    }
    let file = ArenaFile {
        states: names.clone(),
        source: names[0].clone(),
        target: names[k - 1].clone(),
        edges: edges
            .into_iter()
            .map(|(a, b, c)| EdgeFile {
                from: names[a].clone(),
                to: names[b].clone(),
                cost: RawCost {
                    pieces: c.pieces().to_vec(),
                },
            })
            .collect(),
    };
    Arena::from_file(&file).expect("generated arena is valid")
}

/// Twenty-one games with at most six states and three players.
pub fn corpus() -> Vec<Case> {
    let mut out = vec![
        case("bridge/n1", fixtures::bridge_arena(), 1),
        case("bridge/n2", fixtures::bridge_arena(), 2),
        case("bridge/n3", fixtures::bridge_arena(), 3),
        case(
            "single-edge/n3",
            fixtures::trivial_arena(CostFunction::affine(1, 1)),
            3,
        ),
    ];
    let specs: [(u64, usize, bool, usize); 17] = [
        (1, 3, false, 2),
        (2, 4, false, 2),
        (3, 4, false, 3),
        (4, 5, false, 2),
        (5, 5, false, 3),
        (6, 6, false, 2),
        (7, 6, false, 3),
        (8, 3, true, 2),
        (9, 4, true, 2),
        (10, 4, true, 3),
        (11, 5, true, 2),
        (12, 5, true, 3),
        (13, 6, true, 2),
        (14, 6, true, 1),
        (15, 6, true, 3),
        (16, 5, true, 3),
        (17, 6, false, 3),
    ];
    for (seed, k, cyclic, n) in specs {
        let kind = if cyclic { "cyclic" } else { "dag" };
        out.push(case(
            &format!("{kind}-{seed}/v{k}/n{n}"),
            random_arena(seed, k, cyclic),
            n,
        ));
    }
    out
}

fn case(name: &str, arena: Arena, n: usize) -> Case {
    Case {
        name: name.to_string(),
        game: Game::new(arena, n).unwrap(),
    }
}
