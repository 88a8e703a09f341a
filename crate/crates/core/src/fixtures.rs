//! Small named arenas used throughout the tests, the CLI examples and the
//! documentation.

use crate::arena::{parse_arena, Arena, EdgeFile, RawCost};
use crate::costfn::CostFunction;
use crate::dynamics::{BlindProfile, BlindStrategy};

pub const BRIDGE_JSON: &str = include_str!("../data/bridge.json");
pub const LADDER_JSON: &str = include_str!("../data/ladder.json");

/// Five-state diamond: `src→v1: x`, `src→v2: 5`, `v1→v2: 6`, `v1→v3: 3x`,
/// `v2→v3: x`, `v3→tgt: 4x`.
pub fn bridge_arena() -> Arena {
    parse_arena(BRIDGE_JSON).expect("bundled arena is valid")
}

/// Eight-state arena `q0..q7` where every blind equilibrium for three
/// players is worse than some general equilibrium.
pub fn ladder_arena() -> Arena {
    parse_arena(LADDER_JSON).expect("bundled arena is valid")
}

/// Two states and a single edge `src→tgt` with the given cost.
pub fn trivial_arena(cost: CostFunction) -> Arena {
    let file = crate::arena::ArenaFile {
        states: vec!["src".into(), "tgt".into()],
        source: "src".into(),
        target: "tgt".into(),
        edges: vec![EdgeFile {
            from: "src".into(),
            to: "tgt".into(),
            cost: RawCost {
                pieces: cost.pieces().to_vec(),
            },
        }],
    };
    Arena::from_file(&file).expect("trivial arena is valid")
}

/// Builds a blind strategy from a list of state names.
pub fn path(arena: &Arena, states: &[&str]) -> BlindStrategy {
    let ids: Vec<_> = states
        .iter()
        .map(|s| arena.state(s).unwrap_or_else(|| panic!("no state {s}")))
        .collect();
    BlindStrategy::from_states(arena, &ids).expect("fixture path is valid")
}

pub fn bridge_paths(arena: &Arena) -> [BlindStrategy; 3] {
    [
        path(arena, &["src", "v1", "v3", "tgt"]),
        path(arena, &["src", "v1", "v2", "v3", "tgt"]),
        path(arena, &["src", "v2", "v3", "tgt"]),
    ]
}

/// The four source-to-target routes of [`ladder_arena`], all of length four.
pub fn ladder_paths(arena: &Arena) -> [BlindStrategy; 4] {
    [
        path(arena, &["q0", "q1", "q2", "q3", "q7"]),
        path(arena, &["q0", "q4", "q5", "q6", "q7"]),
        path(arena, &["q0", "q1", "q5", "q6", "q7"]),
        path(arena, &["q0", "q1", "q2", "q6", "q7"]),
    ]
}

/// Profile of [`ladder_paths`] by one-based route numbers.
pub fn ladder_profile(arena: &Arena, routes: &[usize]) -> BlindProfile {
    let paths = ladder_paths(arena);
    BlindProfile::new(routes.iter().map(|&r| paths[r - 1].clone()).collect())
}
