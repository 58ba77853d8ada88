//! Seeded random games, type structures and monotone payoff transforms.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::epistemic::{KnowledgeStructure, OppState, PossibilityStructure, State};
use crate::game::{ActionSetFamily, OrdinalGame, Payoff, Profile};

/// Largest number of types per player in generated structures.
pub const MAX_TYPES: usize = 3;
/// Largest state space of generated knowledge structures.
pub const MAX_STATES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub actions: Vec<usize>,
    pub generic: bool,
    /// Inclusive integer payoff range.
    pub min_payoff: i64,
    pub max_payoff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("need at least one player")]
    NoPlayers,
    #[error("every player needs at least one action")]
    NoActions,
    #[error("payoff range {0}..={1} is empty")]
    EmptyRange(i64, i64),
    #[error("a generic game with {actions} actions needs at least that many payoff values, range has {values}")]
    RangeTooSmall { actions: usize, values: u64 },
}

impl GeneratorConfig {
    pub fn new(seed: u64, actions: Vec<usize>) -> Self {
        GeneratorConfig {
            seed,
            actions,
            generic: false,
            min_payoff: 0,
            max_payoff: 9,
        }
    }

    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.actions.is_empty() {
            return Err(ConfigError::NoPlayers);
        }
        if self.actions.contains(&0) {
            return Err(ConfigError::NoActions);
        }
        if self.min_payoff > self.max_payoff {
            return Err(ConfigError::EmptyRange(self.min_payoff, self.max_payoff));
        }
        let values = self.max_payoff.abs_diff(self.min_payoff) + 1;
        let widest = *self.actions.iter().max().expect("nonempty");
        if self.generic && (widest as u64) > values {
            return Err(ConfigError::RangeTooSmall { actions: widest, values });
        }
        Ok(())
    }
}

pub fn player_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{}", i + 1)).collect()
}

pub fn action_names(i: usize, k: usize) -> Vec<String> {
    let stem = (b'a' + (i % 26) as u8) as char;
    (0..k).map(|a| format!("{stem}{}", a + 1)).collect()
}

/// Same seed and config give the same game. With `generic` each player's
/// column against every opponent profile is resampled until its entries are
/// distinct.
pub fn random_game(config: &GeneratorConfig) -> Result<OrdinalGame, ConfigError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok(game_from_rng(&mut rng, config))
}

fn game_from_rng(rng: &mut ChaCha8Rng, config: &GeneratorConfig) -> OrdinalGame {
    let n = config.num_players();
    let players = player_names(n);
    let actions: Vec<Vec<String>> = config.actions.iter().enumerate().map(|(i, &k)| action_names(i, k)).collect();
    let total: usize = config.actions.iter().product();
    let mut tables: Vec<Vec<Payoff>> = vec![vec![Payoff::one(); total]; n];
    let shape = OrdinalGame::new(players.clone(), actions.clone(), tables.clone()).expect("valid shape");
    for (i, table) in tables.iter_mut().enumerate() {
        for opp in shape.opponent_profiles(i, &ActionSetFamily::full(&shape)) {
            let column: Vec<i64> = loop {
                let c: Vec<i64> = (0..config.actions[i])
                    .map(|_| rng.gen_range(config.min_payoff..=config.max_payoff))
                    .collect();
                if !config.generic || c.iter().all_unique() {
                    break c;
                }
            };
            for (a, v) in column.into_iter().enumerate() {
                table[shape.profile_index(&shape.compose(i, a, &opp))] = Payoff::from_integer(v.into());
            }
        }
    }
    OrdinalGame::new(players, actions, tables).expect("valid shape")
}

/// A strictly increasing random relabelling of each player's payoff values.
pub fn random_monotone_transform(game: &OrdinalGame, rng: &mut impl Rng) -> OrdinalGame {
    let maps: Vec<Vec<(Payoff, Payoff)>> = (0..game.num_players())
        .map(|i| {
            let distinct: Vec<Payoff> = game.payoff_table(i).iter().sorted().dedup().cloned().collect();
            let mut next = Payoff::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=7).into());
            distinct
                .into_iter()
                .map(|v| {
                    let out = next.clone();
                    next += Payoff::new(rng.gen_range(1i64..=30).into(), rng.gen_range(1i64..=11).into());
                    (v, out)
                })
                .collect()
        })
        .collect();
    game.map_payoffs(|i, _, v| {
        let k = maps[i].binary_search_by(|(x, _)| x.cmp(v)).expect("value present");
        maps[i][k].1.clone()
    })
}

fn type_names(k: usize) -> Vec<String> {
    (0..k).map(|t| format!("t{t}")).collect()
}

/// Random possibility structure with at most [`MAX_TYPES`] types per player
/// and nonempty possibility sets.
pub fn random_possibility_structure(game: &OrdinalGame, rng: &mut impl Rng) -> PossibilityStructure {
    let n = game.num_players();
    let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=MAX_TYPES)).collect();
    let pi = (0..n)
        .map(|i| {
            let space: Vec<OppState> = game
                .opponents(i)
                .map(|j| (0..game.num_actions(j)).cartesian_product(0..counts[j]).collect::<Vec<_>>())
                .multi_cartesian_product()
                .collect();
            let space = if space.is_empty() { vec![Vec::new()] } else { space };
            (0..counts[i])
                .map(|_| {
                    let k = if rng.gen_bool(0.75) {
                        rng.gen_range(1..=space.len().min(4))
                    } else {
                        rng.gen_range(1..=space.len())
                    };
                    space.choose_multiple(rng, k).cloned().collect::<BTreeSet<_>>()
                })
                .collect()
        })
        .collect();
    let types = counts.iter().map(|&k| type_names(k)).collect();
    PossibilityStructure::new(game.clone(), types, pi).expect("generated structure is valid")
}

/// Own-pair partitions are the only ones Introspection and Independence allow
/// on a set of distinct states, so generation picks a state set and keeps it
/// when those cells satisfy Independence.
pub fn random_knowledge_structure(game: &OrdinalGame, rng: &mut impl Rng) -> KnowledgeStructure {
    let n = game.num_players();
    for _ in 0..200 {
        let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        let all: Vec<State> = (0..n)
            .map(|i| (0..game.num_actions(i)).cartesian_product(0..counts[i]).collect::<Vec<_>>())
            .multi_cartesian_product()
            .collect();
        let k = rng.gen_range(1..=all.len().min(MAX_STATES));
        let states: Vec<State> = all.choose_multiple(rng, k).cloned().sorted().collect();
        if let Some(s) = own_pair_structure(game, counts.iter().map(|&c| type_names(c)).collect(), states) {
            return s;
        }
    }
    // each type pinned to one action always satisfies Independence
    let k = rng.gen_range(1..=MAX_STATES);
    let profiles: Vec<Profile> = game.profiles().collect();
    let picked: BTreeSet<Profile> = (0..k).map(|_| profiles.choose(rng).expect("nonempty").clone()).collect();
    let states: Vec<State> = picked.iter().map(|p| p.iter().map(|&a| (a, 0)).collect()).collect();
    let mut types: Vec<Vec<String>> = vec![vec!["t0".to_string()]; n];
    let mut states = states;
    for i in 0..n {
        let used: Vec<usize> = states.iter().map(|s| s[i].0).sorted().dedup().collect();
        types[i] = used.iter().map(|a| format!("t{a}")).collect();
        for s in states.iter_mut() {
            s[i].1 = used.binary_search(&s[i].0).expect("present");
        }
    }
    own_pair_structure(game, types, states).expect("action-pinned types are independent")
}

/// The knowledge structure on `states` whose cells group equal own pairs.
pub fn own_pair_structure(game: &OrdinalGame, types: Vec<Vec<String>>, states: Vec<State>) -> Option<KnowledgeStructure> {
    let partitions = (0..game.num_players())
        .map(|i| {
            states
                .iter()
                .enumerate()
                .map(|(w, s)| (s[i], w))
                .into_group_map()
                .into_values()
                .map(|ws| ws.into_iter().collect::<BTreeSet<usize>>())
                .collect()
        })
        .collect();
    KnowledgeStructure::new(game.clone(), types, states, partitions).ok()
}

/// Every full-product knowledge structure on the given type counts: the
/// state space is all action-type tuples and each player's cells group
/// equal own pairs.
pub fn full_product_structure(game: &OrdinalGame, counts: &[usize]) -> Option<KnowledgeStructure> {
    let states: Vec<State> = (0..game.num_players())
        .map(|i| (0..game.num_actions(i)).cartesian_product(0..counts[i]).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect();
    own_pair_structure(game, counts.iter().map(|&c| type_names(c)).collect(), states)
}
