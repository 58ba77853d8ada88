#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_rational::BigRational;
use ordinal_games::epistemic::{OppState, PossibilityStructure};
use ordinal_games::game::{ActionSetFamily, OrdinalGame, Payoff, Profile};
use ordinal_games::generate::{self, GeneratorConfig};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn data(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn q(n: i64, d: i64) -> Payoff {
    BigRational::new(n.into(), d.into())
}

pub fn names(game: &OrdinalGame, set: &BTreeSet<Profile>) -> Vec<Vec<String>> {
    set.iter().map(|p| game.profile_names(p)).collect()
}

pub fn family(game: &OrdinalGame, sets: &[&[&str]]) -> ActionSetFamily {
    let sets = sets
        .iter()
        .enumerate()
        .map(|(i, s)| s.iter().map(|a| game.action_index(i, a).unwrap()).collect())
        .collect();
    ActionSetFamily::new(game, sets).unwrap()
}

pub fn actions(game: &OrdinalGame, i: usize, names: &[&str]) -> BTreeSet<usize> {
    names.iter().map(|a| game.action_index(i, a).unwrap()).collect()
}

/// The three types of Ann from the leading example (beliefs {L}, {C} and
/// everything) and a single type of Bob who considers every pair possible.
pub fn leading_structure() -> PossibilityStructure {
    let g = ordinal_games::game::samples::leading();
    let bob = |bs: &[usize]| bs.iter().map(|&b| vec![(b, 0)]).collect::<BTreeSet<OppState>>();
    let all_ann: BTreeSet<OppState> = (0..3).flat_map(|a| (0..3).map(move |t| vec![(a, t)])).collect();
    PossibilityStructure::new(
        g,
        vec![vec!["t".into(), "t'".into(), "t''".into()], vec!["s".into()]],
        vec![vec![bob(&[0]), bob(&[1]), bob(&[0, 1, 2])], vec![all_ann]],
    )
    .unwrap()
}

pub fn bos_structure() -> PossibilityStructure {
    let text = std::fs::read_to_string(data("bos_struct.json")).unwrap();
    PossibilityStructure::parse(&text, Some(&data_dir())).unwrap()
}

pub fn sample_games() -> Vec<OrdinalGame> {
    use ordinal_games::game::samples::*;
    vec![leading(), battle_of_sexes(), admissible_not_maxmin(), maxmin_not_mixed()]
}

/// A game with `players` players and up to `max_actions` actions each.
pub fn random_game(rng: &mut impl Rng, players: usize, max_actions: usize, generic: bool) -> OrdinalGame {
    let actions = (0..players).map(|_| rng.gen_range(1..=max_actions)).collect();
    let mut c = GeneratorConfig::new(rng.gen(), actions);
    c.generic = generic;
    generate::random_game(&c).unwrap()
}

/// Every mixture over a two-action support with denominator at most `max_den`.
pub fn farey_weights(max_den: i64) -> Vec<Payoff> {
    let mut out: BTreeSet<Payoff> = BTreeSet::new();
    for d in 1..=max_den {
        for n in 0..=d {
            out.insert(q(n, d));
        }
    }
    out.into_iter().collect()
}

/// Grid search for a mixture of `support` (at most two actions) strictly
/// beating `action` against every opponent profile.
pub fn grid_dominated(game: &OrdinalGame, i: usize, action: usize, support: &[usize], max_den: i64) -> bool {
    let opp = game.opponent_profiles(i, &ActionSetFamily::full(game));
    let beats = |w: &[(usize, Payoff)]| {
        opp.iter().all(|o| {
            let mix: Payoff = w.iter().map(|(a, x)| x * game.utility(i, *a, o)).sum();
            &mix > game.utility(i, action, o)
        })
    };
    match support {
        [a] => beats(&[(*a, q(1, 1))]),
        [a, b] => farey_weights(max_den)
            .into_iter()
            .any(|t| beats(&[(*a, t.clone()), (*b, q(1, 1) - t)])),
        _ => panic!("grid oracle handles at most two support actions"),
    }
}
