#![no_main]

use dyncong::graphs::{outcome_players, parse_outcome, OutcomeFile, OutcomePath};
use dyncong::{fixtures, Game};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
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
        let again: OutcomePath = parse_outcome(&game, &doc).expect("serialized outcome parses");
        assert_eq!(again.costs().ok(), path.costs().ok());
    }
});
