#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(arena) = dyncong::parse_arena(text) {
        let again = dyncong::parse_arena(&arena.to_json()).expect("serialized arena parses");
        assert_eq!(again.to_json(), arena.to_json());
        for players in 1..=3 {
            if let Ok(game) = dyncong::Game::new(arena.clone(), players) {
                assert!(game.cost_ceiling() >= game.kappa());
            }
        }
    }
});
