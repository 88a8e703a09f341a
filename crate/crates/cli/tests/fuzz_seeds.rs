use std::fs;
use std::path::PathBuf;

use dyncong_cli::{parse_family, parse_gamma};

#[test]
fn gamma_seeds() {
    let dir: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "fuzz",
        "corpus",
        "gamma_arg",
    ]
    .iter()
    .collect();
    let mut parsed = 0;
    for f in fs::read_dir(dir).unwrap() {
        let text = fs::read_to_string(f.unwrap().path()).unwrap();
        if let Ok(g) = parse_gamma(&text) {
            parsed += 1;
            let joined: Vec<String> = g.iter().map(i64::to_string).collect();
            assert_eq!(parse_gamma(&joined.join(",")).unwrap(), g);
        }
        if let Ok(f) = parse_family(&text) {
            if let Ok(m) = dyncong::oracle::partition_bound(&f) {
                assert!(m > 12 * f.len() as u64);
            }
        }
    }
    assert!(parsed >= 3);
}
