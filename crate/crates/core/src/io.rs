//! JSON game files.
//!
//! ```json
//! {
//!   "players": ["a", "b"],
//!   "actions": {"a": ["T", "D"], "b": ["L", "R"]},
//!   "payoffs": {"a": [[2, 0], [0, 1]], "b": [[1, 0], [0, 2]]}
//! }
//! ```
//!
//! Each player's table is nested by that player's own action first, then the
//! remaining players' actions in declared order. Entries are JSON integers or
//! strings holding an integer or `p/q`.

use std::str::FromStr;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::game::{GameError, OrdinalGame, Payoff, Violation};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawGame {
    pub players: Vec<String>,
    pub actions: IndexMap<String, Vec<String>>,
    pub payoffs: IndexMap<String, Value>,
}

pub fn parse_game(text: &str) -> Result<OrdinalGame, GameError> {
    let raw: RawGame = serde_json::from_str(text)?;
    validate_game(&raw)
}

pub fn game_from_value(value: &Value) -> Result<OrdinalGame, GameError> {
    let raw: RawGame = serde_json::from_value(value.clone())?;
    validate_game(&raw)
}

/// Turns a raw description into a game, collecting every violation found.
pub fn validate_game(raw: &RawGame) -> Result<OrdinalGame, GameError> {
    let mut violations = Vec::new();
    for name in raw.actions.keys().chain(raw.payoffs.keys()) {
        if !raw.players.contains(name) {
            violations.push(Violation::UnknownPlayer(name.clone()));
        }
    }
    let mut actions = Vec::new();
    for p in &raw.players {
        match raw.actions.get(p) {
            Some(a) => actions.push(a.clone()),
            None => {
                violations.push(Violation::MissingActions(p.clone()));
                actions.push(Vec::new());
            }
        }
    }
    if !violations.is_empty() {
        return Err(GameError::Invalid(violations));
    }
    let name_errors = crate::game::check_names(&raw.players, &actions);
    if !name_errors.is_empty() {
        return Err(GameError::Invalid(name_errors));
    }

    let n = raw.players.len();
    let total: usize = actions.iter().map(Vec::len).product();
    let mut tables = Vec::with_capacity(n);
    for (i, p) in raw.players.iter().enumerate() {
        let Some(value) = raw.payoffs.get(p) else {
            violations.push(Violation::MissingPayoffTable(p.clone()));
            tables.push(Vec::new());
            continue;
        };
        // axis order: own player, then others in declared order
        let order: Vec<usize> = std::iter::once(i).chain((0..n).filter(|&j| j != i)).collect();
        let mut table: Vec<Option<Payoff>> = vec![None; total];
        let mut cursor = vec![0usize; n];
        let mut bad = Vec::new();
        let mut missing = Vec::new();
        let mut surplus = Vec::new();
        walk(
            value,
            0,
            &order,
            &actions,
            &mut cursor,
            &mut |profile, v| match parse_payoff(v) {
                Some(x) => table[row_major(profile, &actions)] = Some(x),
                None => bad.push((names(profile, &actions), v.to_string())),
            },
            &mut |profile| missing.push(profile),
            &mut |prefix| surplus.push(prefix),
        );
        violations.extend(bad.into_iter().map(|(profile, literal)| Violation::BadLiteral {
            player: p.clone(),
            profile,
            literal,
        }));
        violations.extend(missing.into_iter().map(|profile| Violation::MissingPayoff {
            player: p.clone(),
            profile,
        }));
        violations.extend(surplus.into_iter().map(|prefix| Violation::SurplusPayoff {
            player: p.clone(),
            prefix,
        }));
        tables.push(table.into_iter().map(|x| x.unwrap_or_else(Zero::zero)).collect());
    }
    if !violations.is_empty() {
        return Err(GameError::Invalid(violations));
    }
    OrdinalGame::new(raw.players.clone(), actions, tables)
}

fn row_major(profile: &[usize], actions: &[Vec<String>]) -> usize {
    profile
        .iter()
        .zip(actions)
        .fold(0, |acc, (a, acts)| acc * acts.len() + a)
}

fn names(profile: &[usize], actions: &[Vec<String>]) -> Vec<String> {
    profile
        .iter()
        .zip(actions)
        .map(|(&a, acts)| acts[a].clone())
        .collect()
}

/// Walks a nested payoff array. `cursor` is indexed by player; axis `depth`
/// of the array corresponds to player `order[depth]`.
#[allow(clippy::too_many_arguments)]
fn walk(
    value: &Value,
    depth: usize,
    order: &[usize],
    actions: &[Vec<String>],
    cursor: &mut Vec<usize>,
    leaf: &mut dyn FnMut(&[usize], &Value),
    missing: &mut dyn FnMut(Vec<String>),
    surplus: &mut dyn FnMut(Vec<String>),
) {
    if depth == order.len() {
        leaf(cursor, value);
        return;
    }
    let player = order[depth];
    let len = actions[player].len();
    let items: &[Value] = match value {
        Value::Array(items) => items,
        _ => &[],
    };
    if items.len() > len {
        surplus(prefix_names(cursor, order, depth, actions));
    }
    for a in 0..len {
        cursor[player] = a;
        match items.get(a) {
            Some(v) => walk(v, depth + 1, order, actions, cursor, leaf, missing, surplus),
            None => {
                // name the first missing profile below this point
                for &q in &order[depth + 1..] {
                    cursor[q] = 0;
                }
                missing(names(cursor, actions));
            }
        }
    }
    cursor[player] = 0;
}

fn prefix_names(cursor: &[usize], order: &[usize], depth: usize, actions: &[Vec<String>]) -> Vec<String> {
    order[..depth]
        .iter()
        .map(|&p| actions[p][cursor[p]].clone())
        .collect()
}

/// Accepts JSON integers and strings of the form `n` or `p/q`.
pub fn parse_payoff(v: &Value) -> Option<Payoff> {
    match v {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Some(BigRational::from_integer(i.into()))
            } else {
                num.as_u64().map(|u| BigRational::from_integer(u.into()))
            }
        }
        Value::String(s) => parse_rational(s),
        _ => None,
    }
}

pub fn parse_rational(s: &str) -> Option<Payoff> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

/// Integers that fit in `i64` become JSON numbers, everything else a string.
pub fn payoff_to_value(v: &Payoff) -> Value {
    if v.is_integer() {
        match v.to_integer().to_i64() {
            Some(i) => Value::from(i),
            None => Value::String(v.to_integer().to_string()),
        }
    } else {
        Value::String(format!("{}/{}", v.numer(), v.denom()))
    }
}

pub fn to_raw(game: &OrdinalGame) -> RawGame {
    let n = game.num_players();
    let actions = (0..n)
        .map(|i| (game.player_name(i).to_string(), game.actions(i).to_vec()))
        .collect();
    let payoffs = (0..n)
        .map(|i| {
            let order: Vec<usize> = std::iter::once(i).chain(game.opponents(i)).collect();
            let mut cursor = vec![0usize; n];
            (game.player_name(i).to_string(), nest(game, i, &order, 0, &mut cursor))
        })
        .collect();
    RawGame {
        players: game.players().to_vec(),
        actions,
        payoffs,
    }
}

fn nest(game: &OrdinalGame, i: usize, order: &[usize], depth: usize, cursor: &mut Vec<usize>) -> Value {
    if depth == order.len() {
        return payoff_to_value(game.payoff(i, cursor));
    }
    let p = order[depth];
    let items = (0..game.num_actions(p))
        .map(|a| {
            cursor[p] = a;
            nest(game, i, order, depth + 1, cursor)
        })
        .collect();
    Value::Array(items)
}

pub fn game_to_value(game: &OrdinalGame) -> Value {
    serde_json::to_value(to_raw(game)).expect("raw game serializes")
}

/// Pretty-printed game file.
pub fn write_game(game: &OrdinalGame) -> String {
    serde_json::to_string_pretty(&game_to_value(game)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::samples::leading;

    #[test]
    fn leading_game_parses() {
        let text = r#"{
            "players": ["a", "b"],
            "actions": {"a": ["T", "M", "D"], "b": ["L", "C", "R"]},
            "payoffs": {
                "a": [[2, 3, 1], [4, 1, 4], [2, 2, 1]],
                "b": [[3, 3, 0], [2, 1, 2], [1, 0, 1]]
            }
        }"#;
        // Bob's table is indexed by his own action first.
        let g = parse_game(text).unwrap();
        assert_eq!(g, leading());
    }

    #[test]
    fn missing_entry_names_profile() {
        let text = r#"{
            "players": ["a", "b"],
            "actions": {"a": ["T", "D"], "b": ["L", "R"]},
            "payoffs": {"a": [[2, 0], [0]], "b": [[1, 0], [0, 2]]}
        }"#;
        let GameError::Invalid(v) = parse_game(text).unwrap_err() else {
            panic!()
        };
        assert_eq!(
            v,
            vec![Violation::MissingPayoff {
                player: "a".into(),
                profile: vec!["D".into(), "R".into()]
            }]
        );
    }

    #[test]
    fn float_literal_is_rejected() {
        let text = r#"{
            "players": ["a", "b"],
            "actions": {"a": ["T"], "b": ["L"]},
            "payoffs": {"a": [[1.5]], "b": [["3/4"]]}
        }"#;
        let GameError::Invalid(v) = parse_game(text).unwrap_err() else {
            panic!()
        };
        assert!(matches!(&v[..], [Violation::BadLiteral { literal, .. }] if literal == "1.5"));
    }

    #[test]
    fn one_player_file_is_rejected() {
        let text = r#"{"players": ["a"], "actions": {"a": ["T"]}, "payoffs": {"a": [1]}}"#;
        let GameError::Invalid(v) = parse_game(text).unwrap_err() else {
            panic!()
        };
        assert_eq!(v, vec![Violation::PlayerCount(1)]);
    }

    #[test]
    fn rationals_roundtrip() {
        let text = r#"{
            "players": ["a", "b", "c"],
            "actions": {"a": ["x", "y"], "b": ["u"], "c": ["p", "q"]},
            "payoffs": {
                "a": [[[1, "2/3"]], [["-7/2", 0]]],
                "b": [[["99999999999999999999999", 1], [2, 3]]],
                "c": [[[0], [0]], [[1], [1]]]
            }
        }"#;
        let g = parse_game(text).unwrap();
        let out = write_game(&g);
        let again = parse_game(&out).unwrap();
        assert_eq!(g, again);
        assert_eq!(out, write_game(&again));
    }
}
