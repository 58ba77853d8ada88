//! Knowledge structures: a set of action-type states (not necessarily a
//! product) with one partition per player.
//!
//! File format:
//!
//! ```json
//! {
//!   "game": "bos.json",
//!   "types": {"a": ["t"], "b": ["s"]},
//!   "states": [["T", "L", "t", "s"], ["D", "R", "t", "s"]],
//!   "partitions": {"a": [[0], [1]], "b": [[0, 1]]}
//! }
//! ```
//!
//! A state lists every player's action and then every player's type.
//! Instead of `partitions` a file may give `cells_by_state`: for every state,
//! the list of states the player considers possible there. Such a
//! correspondence is accepted only if it is reflexive and forms a partition.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{
    collect_types, resolve_game, EpistemicError, LevelCheck, OppState, Pair, PossibilityStructure,
    StructureError, StructureViolation,
};
use crate::criteria;
use crate::game::{OrdinalGame, Profile};
use crate::solvers;

/// Largest number of interactive events enumerated exhaustively per player.
pub const TRIVIALITY_EXHAUSTIVE_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawKnowledge {
    pub game: Value,
    pub types: IndexMap<String, Vec<String>>,
    pub states: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<IndexMap<String, Vec<Vec<usize>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells_by_state: Option<IndexMap<String, Vec<Vec<usize>>>>,
}

pub type State = Vec<Pair>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeStructure {
    game: OrdinalGame,
    types: Vec<Vec<String>>,
    states: Vec<State>,
    /// Per player, cells ordered by their smallest state.
    cells: Vec<Vec<BTreeSet<usize>>>,
    cell_of: Vec<Vec<usize>>,
}

fn player_name(game: &OrdinalGame, i: usize) -> String {
    game.player_name(i).to_string()
}

impl KnowledgeStructure {
    pub fn new(
        game: OrdinalGame,
        types: Vec<Vec<String>>,
        states: Vec<State>,
        partitions: Vec<Vec<BTreeSet<usize>>>,
    ) -> Result<Self, StructureError> {
        let n = game.num_players();
        let mut violations = super::check_type_names(&game, &types);
        if types.len() != n || partitions.len() != n {
            return Err(StructureError::Invalid(vec![StructureViolation::BadEntry {
                player: String::new(),
                location: "structure".into(),
                message: "type or partition lists do not match the player count".into(),
            }]));
        }
        if states.is_empty() {
            violations.push(StructureViolation::EmptyStateSpace);
        }
        let mut seen = BTreeMap::new();
        for (k, s) in states.iter().enumerate() {
            let ok = s.len() == n
                && s.iter()
                    .enumerate()
                    .all(|(i, &(a, t))| a < game.num_actions(i) && t < types[i].len());
            if !ok {
                violations.push(StructureViolation::BadEntry {
                    player: String::new(),
                    location: format!("state {k}"),
                    message: format!("invalid state {s:?}"),
                });
            }
            if seen.insert(s.clone(), k).is_some() {
                violations.push(StructureViolation::DuplicateState(k));
            }
        }
        for (i, names) in types.iter().enumerate() {
            for (t, name) in names.iter().enumerate() {
                if !states.iter().any(|s| s.get(i).map(|p| p.1) == Some(t)) {
                    violations.push(StructureViolation::UnusedType {
                        player: player_name(&game, i),
                        name: name.clone(),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return Err(StructureError::Invalid(violations));
        }

        let mut cells_out = Vec::with_capacity(n);
        let mut cell_of_out = Vec::with_capacity(n);
        for (i, cells) in partitions.into_iter().enumerate() {
            let pname = player_name(&game, i);
            let mut cell_of = vec![usize::MAX; states.len()];
            let mut cells: Vec<BTreeSet<usize>> = cells;
            cells.sort_by_key(|c| c.iter().next().copied());
            let mut ok = true;
            for (c, cell) in cells.iter().enumerate() {
                if cell.is_empty() {
                    violations.push(StructureViolation::NotPartition {
                        player: pname.clone(),
                        message: "empty cell".into(),
                    });
                    ok = false;
                }
                for &w in cell {
                    if w >= states.len() {
                        violations.push(StructureViolation::NotPartition {
                            player: pname.clone(),
                            message: format!("state index {w} out of range"),
                        });
                        ok = false;
                    } else if cell_of[w] != usize::MAX {
                        violations.push(StructureViolation::NotPartition {
                            player: pname.clone(),
                            message: format!("state {w} lies in two cells"),
                        });
                        ok = false;
                    } else {
                        cell_of[w] = c;
                    }
                }
            }
            if let Some(w) = cell_of.iter().position(|&c| c == usize::MAX) {
                if ok {
                    violations.push(StructureViolation::NotPartition {
                        player: pname.clone(),
                        message: format!("state {w} lies in no cell"),
                    });
                }
                ok = false;
            }
            if ok {
                // Introspection: each cell fixes the player's own pair.
                for (w, s) in states.iter().enumerate() {
                    if cells[cell_of[w]].iter().any(|&v| states[v][i] != s[i]) {
                        violations.push(StructureViolation::Introspection {
                            player: pname.clone(),
                            state: w,
                        });
                    }
                }
                // Independence: equal own types see the same opponent states.
                let mut by_type: BTreeMap<usize, (usize, BTreeSet<OppState>)> = BTreeMap::new();
                for (w, s) in states.iter().enumerate() {
                    let view = opp_view(&states, &cells[cell_of[w]], i);
                    match by_type.get(&s[i].1) {
                        Some((first, v)) if *v != view => {
                            violations.push(StructureViolation::Independence {
                                player: pname.clone(),
                                first: *first,
                                second: w,
                            });
                        }
                        Some(_) => {}
                        None => {
                            by_type.insert(s[i].1, (w, view));
                        }
                    }
                }
            }
            cells_out.push(cells);
            cell_of_out.push(cell_of);
        }
        if !violations.is_empty() {
            return Err(StructureError::Invalid(violations));
        }
        Ok(KnowledgeStructure {
            game,
            types,
            states,
            cells: cells_out,
            cell_of: cell_of_out,
        })
    }

    /// Builds from a per-state correspondence, rejecting it unless every
    /// state lies in its own image and the images form a partition.
    pub fn from_correspondence(
        game: OrdinalGame,
        types: Vec<Vec<String>>,
        states: Vec<State>,
        images: Vec<Vec<BTreeSet<usize>>>,
    ) -> Result<Self, StructureError> {
        let mut violations = Vec::new();
        let mut partitions = Vec::with_capacity(images.len());
        for (i, per_state) in images.iter().enumerate() {
            let pname = player_name(&game, i);
            if per_state.len() != states.len() {
                violations.push(StructureViolation::NotPartition {
                    player: pname,
                    message: format!("{} images for {} states", per_state.len(), states.len()),
                });
                continue;
            }
            for (w, img) in per_state.iter().enumerate() {
                if !img.contains(&w) {
                    violations.push(StructureViolation::Reflexivity {
                        player: pname.clone(),
                        state: w,
                    });
                }
                for &v in img {
                    if per_state.get(v).is_some_and(|other| other != img) {
                        violations.push(StructureViolation::NotPartition {
                            player: pname.clone(),
                            message: format!("states {w} and {v} have different images"),
                        });
                    }
                }
            }
            let cells: BTreeSet<BTreeSet<usize>> = per_state.iter().cloned().collect();
            partitions.push(cells.into_iter().collect());
        }
        if !violations.is_empty() {
            return Err(StructureError::Invalid(violations));
        }
        Self::new(game, types, states, partitions)
    }

    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, StructureError> {
        let raw: RawKnowledge = serde_json::from_str(text)?;
        Self::from_raw(&raw, base)
    }

    pub fn from_raw(raw: &RawKnowledge, base: Option<&Path>) -> Result<Self, StructureError> {
        let game = resolve_game(&raw.game, base)?;
        let mut violations = Vec::new();
        let types = collect_types(&game, &raw.types, &mut violations);
        let n = game.num_players();
        let mut states = Vec::with_capacity(raw.states.len());
        for (k, entry) in raw.states.iter().enumerate() {
            match parse_state(&game, &types, entry) {
                Ok(s) => states.push(s),
                Err(message) => violations.push(StructureViolation::BadEntry {
                    player: String::new(),
                    location: format!("state {k}"),
                    message,
                }),
            }
        }
        let (map, by_state) = match (&raw.partitions, &raw.cells_by_state) {
            (Some(p), None) => (p, false),
            (None, Some(c)) => (c, true),
            _ => {
                violations.push(StructureViolation::BadEntry {
                    player: String::new(),
                    location: "structure".into(),
                    message: "give exactly one of `partitions` and `cells_by_state`".into(),
                });
                return Err(StructureError::Invalid(violations));
            }
        };
        for name in map.keys() {
            if game.player_index(name).is_none() {
                violations.push(StructureViolation::UnknownPlayer(name.clone()));
            }
        }
        let mut lists = Vec::with_capacity(n);
        for i in 0..n {
            match map.get(game.player_name(i)) {
                Some(cells) => lists.push(cells.iter().map(|c| c.iter().copied().collect()).collect::<Vec<BTreeSet<usize>>>()),
                None => {
                    violations.push(StructureViolation::NotPartition {
                        player: player_name(&game, i),
                        message: "missing".into(),
                    });
                    lists.push(Vec::new());
                }
            }
        }
        if !violations.is_empty() {
            return Err(StructureError::Invalid(violations));
        }
        if by_state {
            Self::from_correspondence(game, types, states, lists)
        } else {
            Self::new(game, types, states, lists)
        }
    }

    pub fn to_raw(&self) -> RawKnowledge {
        let g = &self.game;
        let n = g.num_players();
        let types = (0..n).map(|i| (player_name(g, i), self.types[i].clone())).collect();
        let states = self
            .states
            .iter()
            .map(|s| {
                let acts = s.iter().enumerate().map(|(i, &(a, _))| g.action_name(i, a).to_string());
                let tys = s.iter().enumerate().map(|(i, &(_, t))| self.types[i][t].clone());
                acts.chain(tys).collect()
            })
            .collect();
        let partitions = (0..n)
            .map(|i| {
                let cells = self.cells[i].iter().map(|c| c.iter().copied().collect()).collect();
                (player_name(g, i), cells)
            })
            .collect();
        RawKnowledge {
            game: crate::io::game_to_value(g),
            types,
            states,
            partitions: Some(partitions),
            cells_by_state: None,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("serializable")
    }

    pub fn game(&self) -> &OrdinalGame {
        &self.game
    }

    pub fn types(&self, i: usize) -> &[String] {
        &self.types[i]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn cells(&self, i: usize) -> &[BTreeSet<usize>] {
        &self.cells[i]
    }

    pub fn all_states(&self) -> BTreeSet<usize> {
        (0..self.states.len()).collect()
    }

    /// `Π_i(ω)`.
    pub fn cell(&self, i: usize, w: usize) -> &BTreeSet<usize> {
        &self.cells[i][self.cell_of[i][w]]
    }

    /// `K_i(E)`: states whose cell lies inside `e`. Asserts the Truth axiom.
    pub fn knowledge_operator(&self, i: usize, e: &BTreeSet<usize>) -> BTreeSet<usize> {
        let k: BTreeSet<usize> = self.cells[i].iter().filter(|c| c.is_subset(e)).flatten().copied().collect();
        assert!(k.is_subset(e), "Truth axiom violated for player {i}");
        k
    }

    /// `K(E) = ∩_i K_i(E)`.
    pub fn knowledge(&self, e: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = e.clone();
        for i in 0..self.game.num_players() {
            let k = self.knowledge_operator(i, e);
            out = out.intersection(&k).copied().collect();
        }
        out
    }

    /// `K^0 = E`, `K^m = K(K^{m-1})`, until it repeats and at least `depth` levels exist.
    pub fn ck_chain(&self, e: &BTreeSet<usize>, depth: Option<usize>) -> KChain {
        let mut levels = vec![e.clone()];
        let mut fixed_point = None;
        loop {
            let prev = levels.last().expect("level 0");
            let next = self.knowledge(prev);
            if fixed_point.is_none() && next == *prev {
                fixed_point = Some(levels.len() - 1);
            }
            levels.push(next);
            if let Some(f) = fixed_point {
                if levels.len() > depth.unwrap_or(0).max(f + 1) {
                    break;
                }
            }
        }
        KChain {
            levels,
            fixed_point: fixed_point.expect("set before exit"),
        }
    }

    /// Opponent action profiles in the player's cell at `w`.
    fn cell_actions(&self, i: usize, w: usize) -> Vec<Profile> {
        self.cell(i, w)
            .iter()
            .map(|&v| self.game.opponent_part(i, &self.profile(v)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn profile(&self, w: usize) -> Profile {
        self.states[w].iter().map(|&(a, _)| a).collect()
    }

    /// States where every player's action is an optimistic reply to the
    /// opponent actions in their cell.
    pub fn opt_event(&self) -> BTreeSet<usize> {
        (0..self.states.len())
            .filter(|&w| {
                (0..self.game.num_players()).all(|i| {
                    criteria::obr_profiles(&self.game, i, &self.cell_actions(i, w)).contains(&self.states[w][i].0)
                })
            })
            .collect()
    }

    /// Action profiles of the given states.
    pub fn project(&self, set: &BTreeSet<usize>) -> BTreeSet<Profile> {
        set.iter().map(|&w| self.profile(w)).collect()
    }

    /// Checks `proj_A K^n(Opt) ⊆ YR^{n+1}` level by level and at the fixed points.
    pub fn check_wt_theorem(&self) -> WtReport {
        let trace = solvers::wishful_thinking(&self.game);
        let opt = self.opt_event();
        let chain = self.ck_chain(&opt, Some(trace.fixed_point_round + 1));
        let top = chain.fixed_point.max(trace.fixed_point_round) + 1;
        let levels = (0..=top)
            .map(|n| LevelCheck::new(Some(n), self.project(chain.level(n)), trace.round(n + 1).profiles()))
            .collect();
        let infinity = LevelCheck::new(None, self.project(chain.infinity()), trace.fixed_point().profiles());
        WtReport { levels, infinity }
    }

    /// The possibility structure induced by projecting cells onto opponents.
    pub fn to_possibility(&self) -> Result<PossibilityStructure, EpistemicError> {
        let n = self.game.num_players();
        let mut pi: Vec<Vec<Option<BTreeSet<OppState>>>> = (0..n).map(|i| vec![None; self.types[i].len()]).collect();
        for (w, s) in self.states.iter().enumerate() {
            for i in 0..n {
                let view = opp_view(&self.states, self.cell(i, w), i);
                let slot = &mut pi[i][s[i].1];
                match slot {
                    Some(v) if *v != view => {
                        return Err(EpistemicError::Defect(format!("Independence fails for player {i}")));
                    }
                    Some(_) => {}
                    None => *slot = Some(view),
                }
            }
        }
        let pi = pi
            .into_iter()
            .map(|per| per.into_iter().map(|v| v.expect("every type occurs")).collect())
            .collect();
        PossibilityStructure::new(self.game.clone(), self.types.clone(), pi)
            .map_err(|e| EpistemicError::Defect(format!("induced structure invalid: {e}")))
    }

    /// Whether the state space is all of `∏ A_j × T_j`.
    pub fn is_full_product(&self) -> bool {
        let expected: usize = (0..self.game.num_players())
            .map(|i| self.game.num_actions(i) * self.types[i].len())
            .product();
        self.states.len() == expected
    }

    /// On a full-product state space, checks that player `i` knows an
    /// interactive event `Ψ_i × E_{-i}` only when `E_{-i}` is everything.
    /// Beyond [`TRIVIALITY_EXHAUSTIVE_LIMIT`] events, a seeded sample is used.
    pub fn product_triviality_check(&self, seed: u64) -> Result<TrivialityReport, EpistemicError> {
        if !self.is_full_product() {
            return Err(EpistemicError::NotProduct);
        }
        let n = self.game.num_players();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut players = Vec::with_capacity(n);
        for i in 0..n {
            let space: Vec<OppState> = self
                .states
                .iter()
                .map(|s| s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let k = space.len();
            let exhaustive = k < 64 && (1usize << k) - 1 <= TRIVIALITY_EXHAUSTIVE_LIMIT;
            let masks: Vec<Vec<bool>> = if exhaustive {
                (1usize..(1 << k)).map(|m| (0..k).map(|b| m >> b & 1 == 1).collect()).collect()
            } else {
                let mut v: Vec<Vec<bool>> = (0..TRIVIALITY_EXHAUSTIVE_LIMIT - 1)
                    .map(|_| loop {
                        let m: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
                        if m.iter().any(|&b| b) {
                            break m;
                        }
                    })
                    .collect();
                v.push(vec![true; k]);
                v
            };
            let opp_of: Vec<usize> = self
                .states
                .iter()
                .map(|s| {
                    let opp: OppState = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect();
                    space.binary_search(&opp).expect("opponent view in space")
                })
                .collect();
            let mut counterexample = None;
            for mask in &masks {
                let event: BTreeSet<usize> = (0..self.states.len()).filter(|&w| mask[opp_of[w]]).collect();
                let known = !self.knowledge_operator(i, &event).is_empty();
                let full = mask.iter().all(|&b| b);
                if known != full && counterexample.is_none() {
                    counterexample = Some(space.iter().zip(mask).filter(|(_, &b)| b).map(|(s, _)| s.clone()).collect());
                }
            }
            players.push(PlayerTriviality {
                player: i,
                events_checked: masks.len(),
                exhaustive,
                counterexample,
            });
        }
        Ok(TrivialityReport { players })
    }
}

fn opp_view(states: &[State], cell: &BTreeSet<usize>, i: usize) -> BTreeSet<OppState> {
    cell.iter()
        .map(|&v| states[v].iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect())
        .collect()
}

fn parse_state(game: &OrdinalGame, types: &[Vec<String>], entry: &[String]) -> Result<State, String> {
    let n = game.num_players();
    if entry.len() != 2 * n {
        return Err(format!("expected {} names ({n} actions then {n} types), found {}", 2 * n, entry.len()));
    }
    (0..n)
        .map(|i| {
            let a = game
                .action_index(i, &entry[i])
                .ok_or_else(|| format!("`{}` is not an action of `{}`", entry[i], game.player_name(i)))?;
            let t = types[i]
                .iter()
                .position(|x| *x == entry[n + i])
                .ok_or_else(|| format!("`{}` is not a type of `{}`", entry[n + i], game.player_name(i)))?;
            Ok((a, t))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KChain {
    pub levels: Vec<BTreeSet<usize>>,
    pub fixed_point: usize,
}

impl KChain {
    pub fn level(&self, n: usize) -> &BTreeSet<usize> {
        &self.levels[n.min(self.levels.len() - 1)]
    }

    pub fn infinity(&self) -> &BTreeSet<usize> {
        &self.levels[self.fixed_point]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WtReport {
    pub levels: Vec<LevelCheck>,
    pub infinity: LevelCheck,
}

impl WtReport {
    pub fn holds(&self) -> bool {
        self.levels
            .iter()
            .chain(std::iter::once(&self.infinity))
            .all(|c| c.margin != super::Margin::Violated)
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        json!({
            "holds": self.holds(),
            "levels": self.levels.iter().map(|c| c.to_json(game)).collect::<Vec<_>>(),
            "infinity": self.infinity.to_json(game),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerTriviality {
    pub player: usize,
    pub events_checked: usize,
    pub exhaustive: bool,
    /// An opponent event whose knowledge status breaks the equivalence.
    pub counterexample: Option<Vec<OppState>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityReport {
    pub players: Vec<PlayerTriviality>,
}

impl TrivialityReport {
    pub fn holds(&self) -> bool {
        self.players.iter().all(|p| p.counterexample.is_none())
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        json!({
            "holds": self.holds(),
            "players": self.players.iter().map(|p| json!({
                "player": game.player_name(p.player),
                "events_checked": p.events_checked,
                "exhaustive": p.exhaustive,
                "counterexample": p.counterexample.as_ref().map(|c| format!("{c:?}")),
            })).collect::<Vec<_>>(),
        })
    }
}
