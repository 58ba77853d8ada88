//! Finite ordinal games with exact rational payoffs.
//!
//! A game stores one payoff representative per player. Everything the
//! solvers compute reads only payoff *comparisons*, so any strictly
//! increasing transform of a player's payoffs describes the same ordinal game
//! (see [`OrdinalGame::ordinal_equivalent`]).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Exact payoff value.
pub type Payoff = BigRational;

/// An action profile, one action index per player in declared player order.
/// Opponent profiles use the same representation with the owner's slot
/// removed.
pub type Profile = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("a game needs at least two players, found {0}")]
    PlayerCount(usize),
    #[error("duplicate player `{0}`")]
    DuplicatePlayer(String),
    #[error("player `{0}` has no actions")]
    NoActions(String),
    #[error("player `{player}` declares action `{action}` more than once")]
    DuplicateAction { player: String, action: String },
    #[error("no action list for player `{0}`")]
    MissingActions(String),
    #[error("entry for undeclared player `{0}`")]
    UnknownPlayer(String),
    #[error("no payoff table for player `{0}`")]
    MissingPayoffTable(String),
    #[error("player `{player}`: missing payoff for profile ({})", profile.join(", "))]
    MissingPayoff { player: String, profile: Vec<String> },
    #[error("player `{player}`: payoff table has surplus entries under ({})", prefix.join(", "))]
    SurplusPayoff { player: String, prefix: Vec<String> },
    #[error("player `{player}`: `{literal}` at ({}) is not an integer or p/q rational", profile.join(", "))]
    BadLiteral {
        player: String,
        profile: Vec<String>,
        literal: String,
    },
    #[error("player `{player}`: expected {expected} payoffs, found {found}")]
    PayoffCount {
        player: String,
        expected: usize,
        found: usize,
    },
    #[error("player index {0} out of range")]
    PlayerIndex(usize),
    #[error("action index {action} out of range for player `{player}`")]
    ActionIndex { player: String, action: usize },
    #[error("action set for player `{0}` is empty")]
    EmptyActionSet(String),
    #[error("belief set is empty")]
    EmptyBelief,
    #[error("`{0:?}` is not a valid opponent profile")]
    OpponentProfile(Profile),
}

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("invalid game: {}", .0.iter().map(|v| v.to_string()).join("; "))]
    Invalid(Vec<Violation>),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<Violation> for GameError {
    fn from(v: Violation) -> Self {
        GameError::Invalid(vec![v])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalGame {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    /// `payoffs[i][k]` is player `i`'s payoff at the `k`-th profile in
    /// row-major order (last player varies fastest).
    payoffs: Vec<Vec<Payoff>>,
    strides: Vec<usize>,
}

impl OrdinalGame {
    /// Builds and validates a game. `payoffs[i]` lists player `i`'s payoffs
    /// over all profiles in row-major order of the declared players.
    pub fn new(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        payoffs: Vec<Vec<Payoff>>,
    ) -> Result<Self, GameError> {
        let mut violations = check_names(&players, &actions);
        if !violations.is_empty() {
            return Err(GameError::Invalid(violations));
        }
        let total: usize = actions.iter().map(Vec::len).product();
        if payoffs.len() != players.len() {
            for p in players.iter().skip(payoffs.len()) {
                violations.push(Violation::MissingPayoffTable(p.clone()));
            }
        }
        for (p, table) in players.iter().zip(&payoffs) {
            if table.len() != total {
                violations.push(Violation::PayoffCount {
                    player: p.clone(),
                    expected: total,
                    found: table.len(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(GameError::Invalid(violations));
        }
        let mut strides = vec![1; actions.len()];
        for k in (0..actions.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * actions[k + 1].len();
        }
        Ok(OrdinalGame {
            players,
            actions,
            payoffs,
            strides,
        })
    }

    /// Builds a game from a payoff function over (player, profile).
    pub fn from_fn<F>(players: &[&str], actions: &[&[&str]], mut f: F) -> Result<Self, GameError>
    where
        F: FnMut(usize, &[usize]) -> Payoff,
    {
        let players: Vec<String> = players.iter().map(|s| s.to_string()).collect();
        let actions: Vec<Vec<String>> = actions
            .iter()
            .map(|a| a.iter().map(|s| s.to_string()).collect())
            .collect();
        let profiles: Vec<Profile> = actions
            .iter()
            .map(|a| 0..a.len())
            .multi_cartesian_product()
            .collect();
        let payoffs = (0..players.len())
            .map(|i| profiles.iter().map(|p| f(i, p)).collect())
            .collect();
        OrdinalGame::new(players, actions, payoffs)
    }

    /// Two-player game from integer matrices (rows: first player).
    pub fn bimatrix(
        players: [&str; 2],
        rows: &[&str],
        cols: &[&str],
        row_payoffs: &[&[i64]],
        col_payoffs: &[&[i64]],
    ) -> Result<Self, GameError> {
        let mut violations = Vec::new();
        for (who, m) in [(players[0], row_payoffs), (players[1], col_payoffs)] {
            if m.len() != rows.len() || m.iter().any(|r| r.len() != cols.len()) {
                violations.push(Violation::PayoffCount {
                    player: who.to_string(),
                    expected: rows.len() * cols.len(),
                    found: m.iter().map(|r| r.len()).sum(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(GameError::Invalid(violations));
        }
        OrdinalGame::from_fn(&players, &[rows, cols], |i, p| {
            let m = if i == 0 { row_payoffs } else { col_payoffs };
            BigRational::from_integer(m[p[0]][p[1]].into())
        })
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn player_name(&self, i: usize) -> &str {
        &self.players[i]
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p == name)
    }

    pub fn actions(&self, i: usize) -> &[String] {
        &self.actions[i]
    }

    pub fn num_actions(&self, i: usize) -> usize {
        self.actions[i].len()
    }

    pub fn action_name(&self, i: usize, a: usize) -> &str {
        &self.actions[i][a]
    }

    pub fn action_index(&self, i: usize, name: &str) -> Option<usize> {
        self.actions[i].iter().position(|a| a == name)
    }

    pub fn num_profiles(&self) -> usize {
        self.actions.iter().map(Vec::len).product()
    }

    /// Players other than `i`, in declared order.
    pub fn opponents(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_players()).filter(move |&j| j != i)
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn profile_at(&self, mut index: usize) -> Profile {
        self.strides
            .iter()
            .map(|s| {
                let a = index / s;
                index %= s;
                a
            })
            .collect()
    }

    /// All profiles in row-major order.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.num_profiles()).map(|k| self.profile_at(k))
    }

    pub fn payoff(&self, i: usize, profile: &[usize]) -> &Payoff {
        &self.payoffs[i][self.profile_index(profile)]
    }

    /// Player `i`'s payoff when playing `own` against opponent profile `opp`.
    pub fn utility(&self, i: usize, own: usize, opp: &[usize]) -> &Payoff {
        let mut idx = own * self.strides[i];
        for (k, j) in self.opponents(i).enumerate() {
            idx += opp[k] * self.strides[j];
        }
        &self.payoffs[i][idx]
    }

    pub fn payoff_table(&self, i: usize) -> &[Payoff] {
        &self.payoffs[i]
    }

    /// Inserts `own` into an opponent profile of player `i`.
    pub fn compose(&self, i: usize, own: usize, opp: &[usize]) -> Profile {
        let mut p = Vec::with_capacity(opp.len() + 1);
        p.extend_from_slice(&opp[..i]);
        p.push(own);
        p.extend_from_slice(&opp[i..]);
        p
    }

    /// Removes player `i`'s slot from a full profile.
    pub fn opponent_part(&self, i: usize, profile: &[usize]) -> Profile {
        profile
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &a)| a)
            .collect()
    }

    pub fn is_valid_opponent_profile(&self, i: usize, opp: &[usize]) -> bool {
        opp.len() + 1 == self.num_players()
            && self
                .opponents(i)
                .zip(opp)
                .all(|(j, &a)| a < self.num_actions(j))
    }

    /// Same players and actions with payoffs replaced by `f(player, profile, old)`.
    pub fn map_payoffs<F>(&self, mut f: F) -> OrdinalGame
    where
        F: FnMut(usize, &[usize], &Payoff) -> Payoff,
    {
        let profiles: Vec<Profile> = self.profiles().collect();
        let payoffs = (0..self.num_players())
            .map(|i| {
                profiles
                    .iter()
                    .zip(&self.payoffs[i])
                    .map(|(p, v)| f(i, p, v))
                    .collect()
            })
            .collect();
        OrdinalGame {
            payoffs,
            ..self.clone()
        }
    }

    /// Same game with player `i`'s action `drop` removed.
    pub fn without_action(&self, i: usize, drop: usize) -> Option<OrdinalGame> {
        if self.num_actions(i) <= 1 {
            return None;
        }
        let mut actions = self.actions.clone();
        actions[i].remove(drop);
        let keep: Vec<Profile> = self.profiles().filter(|p| p[i] != drop).collect();
        let payoffs = (0..self.num_players())
            .map(|j| keep.iter().map(|p| self.payoff(j, p).clone()).collect())
            .collect();
        OrdinalGame::new(self.players.clone(), actions, payoffs).ok()
    }

    /// Genericity: for every player, distinct own actions never tie against
    /// a fixed opponent profile.
    pub fn is_generic(&self) -> Genericity {
        let per_player: Vec<bool> = (0..self.num_players())
            .map(|i| {
                self.opponent_profiles(i, &ActionSetFamily::full(self))
                    .iter()
                    .all(|opp| {
                        let mut seen = HashSet::new();
                        (0..self.num_actions(i)).all(|a| seen.insert(self.utility(i, a, opp)))
                    })
            })
            .collect();
        Genericity {
            overall: per_player.iter().all(|&g| g),
            per_player,
        }
    }

    /// Whether both games have the same players and actions and, for each
    /// player, the same strict/indifference pattern over profiles.
    pub fn ordinal_equivalent(&self, other: &OrdinalGame) -> Result<bool, ShapeMismatch> {
        if self.players != other.players || self.actions != other.actions {
            return Err(ShapeMismatch);
        }
        Ok((0..self.num_players()).all(|i| self.dense_ranks(i) == other.dense_ranks(i)))
    }

    /// Dense rank of each profile's payoff for player `i` (0 = worst).
    pub fn dense_ranks(&self, i: usize) -> Vec<usize> {
        let distinct: Vec<&Payoff> = self.payoffs[i].iter().sorted().dedup().collect();
        self.payoffs[i]
            .iter()
            .map(|v| distinct.binary_search(&v).expect("value present"))
            .collect()
    }

    /// Opponent profiles of player `i` drawn from `restriction`, in
    /// lexicographic order.
    pub fn opponent_profiles(&self, i: usize, restriction: &ActionSetFamily) -> Vec<Profile> {
        self.opponents(i)
            .map(|j| restriction.get(j).iter().copied().collect::<Vec<_>>())
            .multi_cartesian_product()
            .collect()
    }

    pub fn profile_names(&self, profile: &[usize]) -> Vec<String> {
        profile
            .iter()
            .enumerate()
            .map(|(i, &a)| self.actions[i][a].clone())
            .collect()
    }

    pub fn opponent_profile_names(&self, i: usize, opp: &[usize]) -> Vec<String> {
        self.opponents(i)
            .zip(opp)
            .map(|(j, &a)| self.actions[j][a].clone())
            .collect()
    }
}

pub(crate) fn check_names(players: &[String], actions: &[Vec<String>]) -> Vec<Violation> {
    let mut violations = Vec::new();
    if players.len() < 2 {
        violations.push(Violation::PlayerCount(players.len()));
    }
    let mut seen = HashSet::new();
    for p in players {
        if !seen.insert(p) {
            violations.push(Violation::DuplicatePlayer(p.clone()));
        }
    }
    if actions.len() != players.len() {
        for p in players.iter().skip(actions.len()) {
            violations.push(Violation::MissingActions(p.clone()));
        }
    }
    for (p, acts) in players.iter().zip(actions) {
        if acts.is_empty() {
            violations.push(Violation::NoActions(p.clone()));
        }
        let mut seen = HashSet::new();
        for a in acts {
            if !seen.insert(a) {
                violations.push(Violation::DuplicateAction {
                    player: p.clone(),
                    action: a.clone(),
                });
            }
        }
    }
    violations
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("games differ in players or actions")]
pub struct ShapeMismatch;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Genericity {
    pub per_player: Vec<bool>,
    pub overall: bool,
}

/// Per player, a nonempty subset of that player's actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionSetFamily {
    sets: Vec<BTreeSet<usize>>,
}

impl ActionSetFamily {
    pub fn full(game: &OrdinalGame) -> Self {
        ActionSetFamily {
            sets: (0..game.num_players())
                .map(|i| (0..game.num_actions(i)).collect())
                .collect(),
        }
    }

    pub fn new(game: &OrdinalGame, sets: Vec<BTreeSet<usize>>) -> Result<Self, Violation> {
        if sets.len() != game.num_players() {
            return Err(Violation::PlayerIndex(sets.len()));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Violation::EmptyActionSet(game.player_name(i).to_string()));
            }
            if let Some(&a) = s.iter().find(|&&a| a >= game.num_actions(i)) {
                return Err(Violation::ActionIndex {
                    player: game.player_name(i).to_string(),
                    action: a,
                });
            }
        }
        Ok(ActionSetFamily { sets })
    }

    /// Per-player sets without the nonemptiness check. Used for rounds of
    /// procedures where emptiness is impossible by construction.
    pub(crate) fn from_sets(sets: Vec<BTreeSet<usize>>) -> Self {
        ActionSetFamily { sets }
    }

    pub fn get(&self, i: usize) -> &BTreeSet<usize> {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    pub fn is_subset(&self, other: &ActionSetFamily) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.is_subset(b))
    }

    pub fn contains_profile(&self, profile: &[usize]) -> bool {
        profile.iter().zip(&self.sets).all(|(a, s)| s.contains(a))
    }

    /// All profiles of the product, lexicographic.
    pub fn profiles(&self) -> BTreeSet<Profile> {
        self.sets
            .iter()
            .map(|s| s.iter().copied().collect::<Vec<_>>())
            .multi_cartesian_product()
            .collect()
    }

    pub fn names(&self, game: &OrdinalGame) -> Vec<Vec<String>> {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| s.iter().map(|&a| game.action_name(i, a).to_string()).collect())
            .collect()
    }
}

/// A coarse belief: a nonempty set of opponent profiles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BeliefSet {
    owner: usize,
    profiles: Vec<Profile>,
}

impl BeliefSet {
    pub fn new(
        game: &OrdinalGame,
        owner: usize,
        profiles: impl IntoIterator<Item = Profile>,
    ) -> Result<Self, Violation> {
        if owner >= game.num_players() {
            return Err(Violation::PlayerIndex(owner));
        }
        let profiles: Vec<Profile> = profiles
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if profiles.is_empty() {
            return Err(Violation::EmptyBelief);
        }
        if let Some(bad) = profiles
            .iter()
            .find(|p| !game.is_valid_opponent_profile(owner, p))
        {
            return Err(Violation::OpponentProfile(bad.clone()));
        }
        Ok(BeliefSet { owner, profiles })
    }

    /// Caller guarantees nonempty, sorted, deduplicated, valid profiles.
    pub(crate) fn from_sorted(owner: usize, profiles: Vec<Profile>) -> Self {
        debug_assert!(!profiles.is_empty());
        debug_assert!(profiles.windows(2).all(|w| w[0] < w[1]));
        BeliefSet { owner, profiles }
    }

    pub fn singleton(game: &OrdinalGame, owner: usize, opp: Profile) -> Result<Self, Violation> {
        BeliefSet::new(game, owner, [opp])
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.profiles.len() == 1
    }

    pub fn names(&self, game: &OrdinalGame) -> Vec<Vec<String>> {
        self.profiles
            .iter()
            .map(|p| game.opponent_profile_names(self.owner, p))
            .collect()
    }
}

/// Nonempty subsets of `items`, smallest first and lexicographic by position
/// within a size.
pub fn nonempty_subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (1..=items.len()).flat_map(move |k| items.iter().cloned().combinations(k))
}

/// Every belief set of `player` over the opponent profiles allowed by
/// `restriction`, each exactly once, in canonical order.
pub fn enumerate_belief_sets<'a>(
    game: &OrdinalGame,
    player: usize,
    restriction: &ActionSetFamily,
) -> impl Iterator<Item = BeliefSet> + 'a {
    let base = game.opponent_profiles(player, restriction);
    (1..=base.len()).flat_map(move |k| {
        base.clone()
            .into_iter()
            .combinations(k)
            .map(move |ps| BeliefSet::from_sorted(player, ps))
    })
}

impl fmt::Display for OrdinalGame {
    /// Two-player games print as a bimatrix (row player first); larger games
    /// as one line per profile.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num_players() == 2 {
            let cell = |p: &[usize]| {
                format!(
                    "{}, {}",
                    format_payoff(self.payoff(0, p)),
                    format_payoff(self.payoff(1, p))
                )
            };
            let width = self
                .profiles()
                .map(|p| cell(&p).len())
                .chain(self.actions[1].iter().map(String::len))
                .max()
                .unwrap_or(1);
            let lead = self.actions[0].iter().map(String::len).max().unwrap_or(1);
            write!(f, "{:lead$}", "")?;
            for c in &self.actions[1] {
                write!(f, " | {c:>width$}")?;
            }
            writeln!(f)?;
            for (r, row) in self.actions[0].iter().enumerate() {
                write!(f, "{row:>lead$}")?;
                for c in 0..self.actions[1].len() {
                    write!(f, " | {:>width$}", cell(&[r, c]))?;
                }
                writeln!(f)?;
            }
            Ok(())
        } else {
            for p in self.profiles() {
                let vals = (0..self.num_players())
                    .map(|i| format_payoff(self.payoff(i, &p)))
                    .join(", ");
                writeln!(f, "({}) -> ({vals})", self.profile_names(&p).join(", "))?;
            }
            Ok(())
        }
    }
}

/// Integers print bare, other rationals as `p/q`.
pub fn format_payoff(v: &Payoff) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Converts to `f64` for display only.
pub fn approx(v: &Payoff) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(n: i64) -> Payoff {
    BigRational::from_integer(n.into())
}

/// Small games used across tests, the CLI and the Python bindings.
pub mod samples {
    use super::*;

    /// The 3x3 leading example (Ann rows T/M/D, Bob columns L/C/R).
    pub fn leading() -> OrdinalGame {
        OrdinalGame::bimatrix(
            ["a", "b"],
            &["T", "M", "D"],
            &["L", "C", "R"],
            &[&[2, 3, 1], &[4, 1, 4], &[2, 2, 1]],
            &[&[3, 2, 1], &[3, 1, 0], &[0, 2, 1]],
        )
        .unwrap()
    }

    pub fn battle_of_sexes() -> OrdinalGame {
        OrdinalGame::bimatrix(
            ["a", "b"],
            &["T", "D"],
            &["L", "R"],
            &[&[2, 0], &[0, 1]],
            &[&[1, 0], &[0, 2]],
        )
        .unwrap()
    }

    /// Ann's payoffs only; the opponent's are all zero.
    pub fn admissible_not_maxmin() -> OrdinalGame {
        OrdinalGame::bimatrix(
            ["a", "b"],
            &["T", "M", "D"],
            &["L", "R"],
            &[&[6, 1], &[5, 2], &[4, 3]],
            &[&[0, 0], &[0, 0], &[0, 0]],
        )
        .unwrap()
    }

    pub fn maxmin_not_mixed() -> OrdinalGame {
        OrdinalGame::bimatrix(
            ["a", "b"],
            &["T", "M", "D"],
            &["L", "R"],
            &[&[3, 0], &[1, 1], &[0, 3]],
            &[&[0, 0], &[0, 0], &[0, 0]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    #[test]
    fn one_player_is_rejected() {
        let err = OrdinalGame::new(vec!["a".into()], vec![vec!["x".into()]], vec![vec![rat(0)]])
            .unwrap_err();
        match err {
            GameError::Invalid(v) => assert!(v.contains(&Violation::PlayerCount(1))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let err = OrdinalGame::new(
            vec!["a".into(), "a".into()],
            vec![vec!["x".into(), "x".into()], vec!["y".into()]],
            vec![vec![rat(0); 2]; 2],
        )
        .unwrap_err();
        let GameError::Invalid(v) = err else { panic!() };
        assert!(v.contains(&Violation::DuplicatePlayer("a".into())));
        assert!(v.iter().any(|x| matches!(x, Violation::DuplicateAction { .. })));
    }

    #[test]
    fn genericity_of_sample_games() {
        let g = leading().is_generic();
        assert!(!g.per_player[0]);
        assert!(!g.overall);
        let g = admissible_not_maxmin().is_generic();
        assert_eq!(g.per_player, vec![true, false]);
        let single = OrdinalGame::bimatrix(["a", "b"], &["x"], &["y"], &[&[1]], &[&[1]]).unwrap();
        assert!(single.is_generic().overall);
    }

    #[test]
    fn ordinal_equivalence_examples() {
        let g = leading();
        let doubled = g.map_payoffs(|i, _, v| if i == 0 { v * rat(2) } else { v.clone() });
        assert_eq!(g.ordinal_equivalent(&doubled), Ok(true));
        // swap Ann's payoffs at (T,L)=2 and (M,L)=4
        let swapped = g.map_payoffs(|i, p, v| match (i, p) {
            (0, [0, 0]) => rat(4),
            (0, [1, 0]) => rat(2),
            _ => v.clone(),
        });
        assert_eq!(g.ordinal_equivalent(&swapped), Ok(false));
        assert_eq!(g.ordinal_equivalent(&battle_of_sexes()), Err(ShapeMismatch));
    }

    #[test]
    fn belief_enumeration_counts_and_order() {
        let g = leading();
        let mut r = ActionSetFamily::full(&g);
        assert_eq!(enumerate_belief_sets(&g, 0, &r).count(), 7);
        r = ActionSetFamily::new(&g, vec![(0..3).collect(), [0, 1].into()]).unwrap();
        let sets: Vec<Vec<Profile>> = enumerate_belief_sets(&g, 0, &r)
            .map(|b| b.profiles().to_vec())
            .collect();
        assert_eq!(sets, vec![vec![vec![0]], vec![vec![1]], vec![vec![0], vec![1]]]);
    }

    #[test]
    fn three_player_belief_enumeration() {
        let g = OrdinalGame::from_fn(&["p", "q", "r"], &[&["a"], &["x", "y"], &["u", "v"]], |_, _| {
            rat(0)
        })
        .unwrap();
        let r = ActionSetFamily::new(&g, vec![[0].into(), [0, 1].into(), [0].into()]).unwrap();
        let sets: Vec<Vec<Profile>> = enumerate_belief_sets(&g, 0, &r)
            .map(|b| b.profiles().to_vec())
            .collect();
        assert_eq!(
            sets,
            vec![
                vec![vec![0, 0]],
                vec![vec![1, 0]],
                vec![vec![0, 0], vec![1, 0]]
            ]
        );
    }

    #[test]
    fn compose_and_split_roundtrip() {
        let g = OrdinalGame::from_fn(&["p", "q", "r"], &[&["a", "b"], &["x", "y"], &["u", "v"]], |_, _| {
            rat(0)
        })
        .unwrap();
        for p in g.profiles() {
            for i in 0..3 {
                let opp = g.opponent_part(i, &p);
                assert_eq!(g.compose(i, p[i], &opp), p);
            }
            assert_eq!(g.profile_at(g.profile_index(&p)), p);
        }
    }

    #[test]
    fn belief_set_rejects_bad_input() {
        let g = leading();
        assert_eq!(BeliefSet::new(&g, 0, []), Err(Violation::EmptyBelief));
        assert_eq!(
            BeliefSet::new(&g, 0, [vec![5]]),
            Err(Violation::OpponentProfile(vec![5]))
        );
        let b = BeliefSet::new(&g, 0, [vec![1], vec![0], vec![1]]).unwrap();
        assert_eq!(b.profiles(), &[vec![0], vec![1]]);
    }
}
