#![no_main]

use dyncong::dynamics::parse_profile;
use dyncong::{fixtures, Game};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
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
});
