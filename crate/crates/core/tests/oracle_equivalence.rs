mod common;

use common::checks;
use common::corpus;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn over_corpus(mut check: impl FnMut(&common::Case) -> checks::Check) {
    let failures: Vec<String> = corpus()
        .iter()
        .filter_map(|case| check(case).err().map(|e| format!("{}: {e}", case.name)))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn social_optimum_agrees_with_exhaustive_search() {
    over_corpus(|c| checks::social_optimum_matches(&c.game));
}

#[test]
fn best_response_agrees_with_path_enumeration() {
    over_corpus(|c| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xb7);
        checks::best_response_matches(&c.game, &mut rng, 4)
    });
}

#[test]
fn values_agree_with_horizon_game() {
    over_corpus(|c| checks::values_match(&c.game));
}

#[test]
fn ne_checker_agrees_with_deviation_search() {
    over_corpus(|c| checks::ne_outcomes_match(&c.game, 6));
}

#[test]
fn spe_labels_agree_with_backward_induction() {
    over_corpus(|c| {
        if checks::is_acyclic_outside_target(c.game.arena()) {
            checks::spe_outcomes_match(&c.game)
        } else {
            Ok(())
        }
    });
}

#[test]
fn lambda_is_monotone_and_bounded() {
    over_corpus(|c| checks::lambda_sane(&c.game));
}

#[test]
fn equilibrium_costs_are_sandwiched() {
    over_corpus(|c| checks::metric_sandwich(&c.game));
}

#[test]
fn potential_tracks_unilateral_switches() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    over_corpus(|c| (0..10).try_for_each(|_| checks::potential_identity(&c.game, &mut rng)));
}
