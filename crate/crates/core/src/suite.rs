//! Randomized regression battery over generated games and structures.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::criteria;
use crate::epistemic::Attitude;
use crate::game::{ActionSetFamily, OrdinalGame};
use crate::generate::{self, GeneratorConfig};
use crate::solvers::{self, Concept};

/// Concepts whose traces depend only on ordinal payoff data.
pub const ORDINAL_CONCEPTS: [Concept; 5] = [Concept::Pr, Concept::Wr, Concept::Br, Concept::Iesd, Concept::Yr];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    pub players: usize,
    pub max_actions: usize,
    /// `None` mixes generic and unrestricted games.
    pub generic: Option<bool>,
    pub max_payoff: i64,
    pub transforms: usize,
    pub structures: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            count: 100,
            players: 2,
            max_actions: 3,
            generic: None,
            max_payoff: 9,
            transforms: 3,
            structures: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub check: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Outcome {
    fn new(check: impl Into<String>, passed: bool, detail: impl FnOnce() -> String) -> Self {
        Outcome {
            check: check.into(),
            passed,
            detail: (!passed).then(detail),
        }
    }
}

/// Runs every check on one game. `seed` drives the transforms and structures.
pub fn check_game(game: &OrdinalGame, seed: u64, transforms: usize, structures: usize) -> Vec<Outcome> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for c in Concept::ALL {
        let res = solvers::solve(game, c).map_err(|e| e.to_string()).and_then(|t| solvers::verify_trace(game, &t));
        out.push(Outcome::new(format!("trace {}", c.tag()), res.is_ok(), || res.unwrap_err()));
    }

    match solvers::relations(game) {
        Ok(rep) => {
            for claim in &rep.claims {
                out.push(Outcome::new(claim.name, claim.holds(), || {
                    format!("fails at rounds {:?}", claim.failing_rounds)
                }));
            }
        }
        Err(e) => out.push(Outcome::new("relations", false, || e.to_string())),
    }

    let full = ActionSetFamily::full(game);
    let mut singleton_bad = None;
    'outer: for i in 0..game.num_players() {
        for opp in game.opponent_profiles(i, &full) {
            let one = [opp.clone()];
            let o = criteria::obr_profiles(game, i, &one);
            let p = criteria::pbr_profiles(game, i, &one);
            let a = criteria::admissible_set(game, i, &one);
            if o != p || p != a {
                singleton_bad = Some(format!("player {i}, belief {opp:?}: obr {o:?}, pbr {p:?}, admissible {a:?}"));
                break 'outer;
            }
        }
    }
    out.push(Outcome::new("singleton coincidence", singleton_bad.is_none(), || singleton_bad.unwrap()));

    let base: Vec<_> = ORDINAL_CONCEPTS.iter().map(|&c| solvers::solve(game, c).ok().map(|t| t.rounds)).collect();
    let mut invariance_bad = None;
    for k in 0..transforms {
        let h = generate::random_monotone_transform(game, &mut rng);
        for (idx, &c) in ORDINAL_CONCEPTS.iter().enumerate() {
            let rounds = solvers::solve(&h, c).ok().map(|t| t.rounds);
            if rounds != base[idx] && invariance_bad.is_none() {
                invariance_bad = Some(format!("transform {k} changes the {} trace", c.tag()));
            }
        }
    }
    out.push(Outcome::new("ordinal invariance", invariance_bad.is_none(), || invariance_bad.unwrap()));

    for s in 0..structures {
        let st = generate::random_possibility_structure(game, &mut rng);
        for att in Attitude::ALL {
            let name = format!("inclusion {}", att.tag());
            match st.check_inclusion_theorem(att) {
                Ok(rep) => out.push(Outcome::new(name, rep.holds(), || {
                    let bad = rep.all_checks().find(|c| c.margin == crate::epistemic::Margin::Violated);
                    format!("structure {s}, level {:?}", bad.and_then(|c| c.level))
                })),
                // the joint cross-check reports disagreement as an error
                Err(e) => out.push(Outcome::new(name, false, || format!("structure {s}: {e}"))),
            }
        }
    }
    out
}

/// Shrinks a game while `check` keeps failing.
pub fn minimize(game: &OrdinalGame, check: &str, seed: u64, transforms: usize, structures: usize) -> OrdinalGame {
    shrink(game, |g| {
        check_game(g, seed, transforms, structures)
            .iter()
            .any(|o| o.check == check && !o.passed)
    })
}

/// Greedily drops actions while `fails` holds.
pub fn shrink(game: &OrdinalGame, fails: impl Fn(&OrdinalGame) -> bool) -> OrdinalGame {
    let mut current = game.clone();
    'shrink: loop {
        for i in 0..current.num_players() {
            for a in 0..current.num_actions(i) {
                if let Some(smaller) = current.without_action(i, a) {
                    if fails(&smaller) {
                        current = smaller;
                        continue 'shrink;
                    }
                }
            }
        }
        return current;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproducer {
    pub check: String,
    pub seed: u64,
    pub transforms: usize,
    pub structures: usize,
    pub game: Value,
}

impl Reproducer {
    /// Re-runs the recorded check; true when it still fails.
    pub fn replay(&self) -> Result<bool, crate::game::GameError> {
        let game = crate::io::game_from_value(&self.game)?;
        Ok(check_game(&game, self.seed, self.transforms, self.structures)
            .iter()
            .any(|o| o.check == self.check && !o.passed))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CheckTally {
    pub runs: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub index: usize,
    pub outcome: Outcome,
    pub reproducer: Reproducer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub games: usize,
    pub generic_games: usize,
    pub tallies: BTreeMap<String, CheckTally>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "games": self.games,
            "generic_games": self.generic_games,
            "passed": self.passed(),
            "checks": self.tallies,
            "failures": self.failures.iter().map(|f| json!({
                "index": f.index,
                "check": f.outcome.check,
                "detail": f.outcome.detail,
                "reproducer": f.reproducer,
            })).collect::<Vec<_>>(),
        })
    }
}

/// The `k`-th game of a suite: its generator config and check seed.
pub fn case(config: &SuiteConfig, k: usize) -> (GeneratorConfig, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(k as u64);
    let actions = (0..config.players).map(|_| rng.gen_range(1..=config.max_actions.max(1))).collect();
    let mut g = GeneratorConfig::new(rng.gen(), actions);
    g.max_payoff = config.max_payoff;
    g.generic = config.generic.unwrap_or_else(|| rng.gen_bool(0.5));
    (g, rng.gen())
}

pub fn property_suite(config: &SuiteConfig) -> Result<SuiteReport, generate::ConfigError> {
    let mut tallies: BTreeMap<String, CheckTally> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut generic_games = 0;
    for k in 0..config.count {
        let (gen, seed) = case(config, k);
        let game = generate::random_game(&gen)?;
        if game.is_generic().overall {
            generic_games += 1;
        }
        for outcome in check_game(&game, seed, config.transforms, config.structures) {
            let t = tallies.entry(outcome.check.clone()).or_default();
            t.runs += 1;
            if !outcome.passed {
                t.failures += 1;
                let small = minimize(&game, &outcome.check, seed, config.transforms, config.structures);
                failures.push(Failure {
                    index: k,
                    reproducer: Reproducer {
                        check: outcome.check.clone(),
                        seed,
                        transforms: config.transforms,
                        structures: config.structures,
                        game: crate::io::game_to_value(&small),
                    },
                    outcome,
                });
            }
        }
    }
    Ok(SuiteReport {
        config: config.clone(),
        games: config.count,
        generic_games,
        tallies,
        failures,
    })
}
