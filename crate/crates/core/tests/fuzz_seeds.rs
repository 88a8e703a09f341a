//! Replays the checked-in fuzz corpus, plus random mutations of it, through
//! the same parser entry points the fuzz targets exercise.

use std::fs;
use std::path::PathBuf;

use dyncong::dynamics::parse_profile;
use dyncong::graphs::{outcome_players, parse_outcome, OutcomeFile};
use dyncong::{fixtures, parse_arena, Game};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "fuzz",
        "corpus",
        target,
    ]
    .iter()
    .collect();
    let mut files: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|f| f.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty());
    files.iter().map(|f| fs::read(f).unwrap()).collect()
}

fn mutate(seed: &[u8], rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut b = seed.to_vec();
    for _ in 0..rng.gen_range(1..4) {
        let at = rng.gen_range(0..=b.len());
        match rng.gen_range(0..4) {
            0 if at < b.len() => b[at] = rng.gen(),
            1 if at < b.len() => {
                b.remove(at);
            }
            2 => b.insert(
                at,
                *b"0123456789-,{}[]\":".get(rng.gen_range(0..18)).unwrap(),
            ),
            _ => b.truncate(at),
        }
    }
    b
}

fn inputs(target: &str) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(target.len() as u64);
    let base = seeds(target);
    let mut all = base.clone();
    for s in &base {
        all.extend((0..300).map(|_| mutate(s, &mut rng)));
    }
    all
}

fn arena_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(arena) = parse_arena(text) {
        let again = parse_arena(&arena.to_json()).expect("serialized arena parses");
        assert_eq!(again.to_json(), arena.to_json());
        for players in 1..=3 {
            if let Ok(game) = Game::new(arena.clone(), players) {
                assert!(game.cost_ceiling() >= game.kappa());
            }
        }
    }
}

fn outcome_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = serde_json::from_str::<OutcomeFile>(text) else {
        return;
    };
    let Some(n) = outcome_players(&file).filter(|&n| (1..=4).contains(&n)) else {
        return;
    };
    let game = Game::new(fixtures::bridge_arena(), n).unwrap();
    if let Ok(path) = parse_outcome(&game, text) {
        let doc = path.to_json_value(game.arena()).to_string();
        let again = parse_outcome(&game, &doc).expect("serialized outcome parses");
        assert_eq!(again.costs().ok(), path.costs().ok());
    }
}

fn profile_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let arena = fixtures::ladder_arena();
    if let Ok(profile) = parse_profile(&arena, text) {
        let doc = profile.to_json_value(&arena).to_string();
        let again = parse_profile(&arena, &doc).expect("serialized profile parses");
        assert_eq!(again.strategies(), profile.strategies());
        if profile.players() <= 4 {
            let game = Game::new(arena, profile.players()).unwrap();
            let _ = profile.costs(&game);
        }
    }
}

#[test]
fn arena_seeds() {
    let seeds = seeds("arena_json");
    assert!(seeds
        .iter()
        .any(|s| parse_arena(std::str::from_utf8(s).unwrap()).is_ok()));
    assert!(seeds
        .iter()
        .any(|s| parse_arena(std::str::from_utf8(s).unwrap()).is_err()));
    inputs("arena_json").iter().for_each(|d| arena_json(d));
}

#[test]
fn outcome_seeds() {
    inputs("outcome_json").iter().for_each(|d| outcome_json(d));
}

#[test]
fn profile_seeds() {
    let arena = fixtures::ladder_arena();
    let ok = seeds("profile_json")
        .iter()
        .filter(|s| parse_profile(&arena, std::str::from_utf8(s).unwrap()).is_ok())
        .count();
    assert_eq!(ok, 2);
    inputs("profile_json").iter().for_each(|d| profile_json(d));
}
