//! Finite type structures and the events, operators and chains built on them.

mod knowledge;
mod possibility;
mod witness;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::game::{GameError, OrdinalGame, Profile};
use crate::solvers::Concept;

pub use knowledge::{
    KChain, KnowledgeStructure, PlayerTriviality, RawKnowledge, State, TrivialityReport, WtReport,
};
pub use possibility::{
    CbChain, InclusionReport, LevelCheck, Margin, PossibilityStructure, RawPossibility,
};
pub use witness::build_witness_structure;

/// An own action together with an own type.
pub type Pair = (usize, usize);
/// One `(action, type)` pair per opponent, in player order.
pub type OppState = Vec<Pair>;

/// A product event: one set of `(action, type)` pairs per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    parts: Vec<BTreeSet<Pair>>,
}

impl Event {
    pub fn new(parts: Vec<BTreeSet<Pair>>) -> Self {
        Event { parts }
    }

    pub fn empty(players: usize) -> Self {
        Event {
            parts: vec![BTreeSet::new(); players],
        }
    }

    pub fn parts(&self) -> &[BTreeSet<Pair>] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &BTreeSet<Pair> {
        &self.parts[i]
    }

    /// The joint event is empty as soon as one part is.
    pub fn is_empty(&self) -> bool {
        self.parts.iter().any(BTreeSet::is_empty)
    }

    pub fn intersect(&self, other: &Event) -> Event {
        Event {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.intersection(b).copied().collect())
                .collect(),
        }
    }

    /// Inclusion of the joint product sets.
    pub fn is_subset(&self, other: &Event) -> bool {
        self.is_empty() || self.parts.iter().zip(&other.parts).all(|(a, b)| a.is_subset(b))
    }

    /// Same joint set (all empty events are equal).
    pub fn same_set(&self, other: &Event) -> bool {
        (self.is_empty() && other.is_empty()) || self == other
    }

    pub fn contains_state(&self, state: &[Pair]) -> bool {
        state.iter().zip(&self.parts).all(|(p, part)| part.contains(p))
    }
}

/// Action profiles of a product event: the product of the per-player
/// action projections.
pub fn project_actions(event: &Event) -> BTreeSet<Profile> {
    if event.is_empty() {
        return BTreeSet::new();
    }
    let mut out = vec![Vec::new()];
    for part in event.parts() {
        let actions: BTreeSet<usize> = part.iter().map(|&(a, _)| a).collect();
        out = out
            .into_iter()
            .flat_map(|prefix: Profile| {
                actions.iter().map(move |&a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attitude {
    Opt,
    Pes,
    Adm,
    OptDeg,
}

impl Attitude {
    pub const ALL: [Attitude; 4] = [Attitude::Opt, Attitude::Pes, Attitude::Adm, Attitude::OptDeg];

    /// The procedure whose rounds bound this attitude's behavior.
    pub fn concept(self) -> Concept {
        match self {
            Attitude::Opt | Attitude::OptDeg => Concept::Pr,
            Attitude::Pes => Concept::Wr,
            Attitude::Adm => Concept::Br,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Attitude::Opt => "opt",
            Attitude::Pes => "pes",
            Attitude::Adm => "adm",
            Attitude::OptDeg => "opt-deg",
        }
    }
}

impl fmt::Display for Attitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Attitude {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "opt" => Ok(Attitude::Opt),
            "pes" => Ok(Attitude::Pes),
            "adm" | "ad" => Ok(Attitude::Adm),
            "opt-deg" | "optdeg" | "opt∩deg" => Ok(Attitude::OptDeg),
            _ => Err(format!("unknown attitude `{s}` (expected opt, pes, adm or opt-deg)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureViolation {
    #[error("entry for undeclared player `{0}`")]
    UnknownPlayer(String),
    #[error("no type list for player `{0}`")]
    MissingTypes(String),
    #[error("player `{0}` has no types")]
    NoTypes(String),
    #[error("player `{player}` declares type `{name}` more than once")]
    DuplicateType { player: String, name: String },
    #[error("no possibility set for type `{name}` of player `{player}`")]
    MissingPossibility { player: String, name: String },
    #[error("possibility set for undeclared type `{name}` of player `{player}`")]
    UnknownType { player: String, name: String },
    #[error("possibility set of type `{name}` of player `{player}` is empty")]
    EmptyPossibility { player: String, name: String },
    #[error("player `{player}`, {location}: {message}")]
    BadEntry {
        player: String,
        location: String,
        message: String,
    },
    #[error("state {0} is listed twice")]
    DuplicateState(usize),
    #[error("state space is empty")]
    EmptyStateSpace,
    #[error("type `{name}` of player `{player}` occurs in no state")]
    UnusedType { player: String, name: String },
    #[error("player `{player}`: not a partition ({message})")]
    NotPartition { player: String, message: String },
    #[error("player `{player}`: state {state} is not in its own cell")]
    Reflexivity { player: String, state: usize },
    #[error("player `{player}`: Introspection fails at state {state}")]
    Introspection { player: String, state: usize },
    #[error("player `{player}`: Independence fails for states {first} and {second}")]
    Independence {
        player: String,
        first: usize,
        second: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum StructureError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("cannot read game file `{path}`: {message}")]
    GameFile { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid structure: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<StructureViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EpistemicError {
    #[error("state space is not a full product")]
    NotProduct,
    #[error(transparent)]
    Solver(#[from] crate::solvers::SolverError),
    #[error("epistemic defect: {0}")]
    Defect(String),
}

/// A game given inline or as a path relative to `base`.
pub(crate) fn resolve_game(value: &Value, base: Option<&Path>) -> Result<OrdinalGame, StructureError> {
    match value {
        Value::String(path) => {
            let full = match base {
                Some(dir) => dir.join(path),
                None => Path::new(path).to_path_buf(),
            };
            let text = std::fs::read_to_string(&full).map_err(|e| StructureError::GameFile {
                path: full.display().to_string(),
                message: e.to_string(),
            })?;
            Ok(crate::io::parse_game(&text)?)
        }
        other => Ok(crate::io::game_from_value(other)?),
    }
}

pub(crate) fn check_type_names(game: &OrdinalGame, types: &[Vec<String>]) -> Vec<StructureViolation> {
    let mut out = Vec::new();
    for (i, names) in types.iter().enumerate() {
        if names.is_empty() {
            out.push(StructureViolation::NoTypes(game.player_name(i).to_string()));
        }
        let mut seen = BTreeSet::new();
        for n in names {
            if !seen.insert(n) {
                out.push(StructureViolation::DuplicateType {
                    player: game.player_name(i).to_string(),
                    name: n.clone(),
                });
            }
        }
    }
    out
}

/// Looks up type lists keyed by player name.
pub(crate) fn collect_types(
    game: &OrdinalGame,
    raw: &indexmap::IndexMap<String, Vec<String>>,
    violations: &mut Vec<StructureViolation>,
) -> Vec<Vec<String>> {
    for name in raw.keys() {
        if game.player_index(name).is_none() {
            violations.push(StructureViolation::UnknownPlayer(name.clone()));
        }
    }
    let types: Vec<Vec<String>> = (0..game.num_players())
        .map(|i| match raw.get(game.player_name(i)) {
            Some(t) => t.clone(),
            None => {
                violations.push(StructureViolation::MissingTypes(game.player_name(i).to_string()));
                Vec::new()
            }
        })
        .collect();
    violations.extend(check_type_names(game, &types));
    types
}
