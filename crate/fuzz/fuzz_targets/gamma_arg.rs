#![no_main]

use dyncong_cli::{parse_family, parse_gamma};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_gamma(text) {
        let joined: Vec<String> = g.iter().map(i64::to_string).collect();
        assert_eq!(parse_gamma(&joined.join(",")).unwrap(), g);
    }
    if let Ok(f) = parse_family(text) {
        if let Ok(m) = dyncong::oracle::partition_bound(&f) {
            assert!(m > 12 * f.len() as u64);
        }
    }
});
