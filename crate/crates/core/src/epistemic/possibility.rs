//! Possibility structures: each type of a player maps to a nonempty set of
//! opponent `(action, type)` profiles.
//!
//! File format:
//!
//! ```json
//! {
//!   "game": "bos.json",
//!   "types": {"a": ["t", "u"], "b": ["s"]},
//!   "pi": {
//!     "a": {"t": [["L", "s"]], "u": [["L", "s"], ["R", "s"]]},
//!     "b": {"s": [["T", "t"]]}
//!   }
//! }
//! ```
//!
//! Each `pi` entry lists the opponents' actions in player order followed by
//! their types. `game` is either a path (relative to the structure file) or
//! an inline game object.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use indexmap::IndexMap;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{
    collect_types, project_actions, resolve_game, Attitude, EpistemicError, Event, OppState, Pair,
    StructureError, StructureViolation,
};
use crate::criteria;
use crate::game::{OrdinalGame, Profile};
use crate::solvers;

/// Above this many joint states the joint-state cross-check of the belief
/// chain is skipped.
pub const JOINT_CHECK_LIMIT: usize = 250_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawPossibility {
    pub game: Value,
    pub types: IndexMap<String, Vec<String>>,
    pub pi: IndexMap<String, IndexMap<String, Vec<Vec<String>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibilityStructure {
    game: OrdinalGame,
    types: Vec<Vec<String>>,
    pi: Vec<Vec<BTreeSet<OppState>>>,
}

impl PossibilityStructure {
    pub fn new(game: OrdinalGame, types: Vec<Vec<String>>, pi: Vec<Vec<BTreeSet<OppState>>>) -> Result<Self, StructureError> {
        let mut violations = super::check_type_names(&game, &types);
        let n = game.num_players();
        if types.len() != n || pi.len() != n {
            return Err(StructureError::Invalid(vec![StructureViolation::BadEntry {
                player: String::new(),
                location: "structure".into(),
                message: "type or possibility lists do not match the player count".into(),
            }]));
        }
        for i in 0..n {
            let pname = game.player_name(i).to_string();
            if pi[i].len() != types[i].len() {
                violations.push(StructureViolation::BadEntry {
                    player: pname.clone(),
                    location: "pi".into(),
                    message: format!("{} possibility sets for {} types", pi[i].len(), types[i].len()),
                });
                continue;
            }
            let opps: Vec<usize> = game.opponents(i).collect();
            for (t, image) in pi[i].iter().enumerate() {
                if image.is_empty() {
                    violations.push(StructureViolation::EmptyPossibility {
                        player: pname.clone(),
                        name: types[i][t].clone(),
                    });
                }
                for s in image {
                    let ok = s.len() == opps.len()
                        && s.iter().zip(&opps).all(|(&(a, u), &j)| a < game.num_actions(j) && u < types[j].len());
                    if !ok {
                        violations.push(StructureViolation::BadEntry {
                            player: pname.clone(),
                            location: format!("type `{}`", types[i][t]),
                            message: format!("invalid opponent state {s:?}"),
                        });
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(StructureError::Invalid(violations));
        }
        Ok(PossibilityStructure { game, types, pi })
    }

    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, StructureError> {
        let raw: RawPossibility = serde_json::from_str(text)?;
        Self::from_raw(&raw, base)
    }

    pub fn from_raw(raw: &RawPossibility, base: Option<&Path>) -> Result<Self, StructureError> {
        let game = resolve_game(&raw.game, base)?;
        Self::from_raw_with_game(raw, game)
    }

    pub fn from_raw_with_game(raw: &RawPossibility, game: OrdinalGame) -> Result<Self, StructureError> {
        let mut violations = Vec::new();
        let types = collect_types(&game, &raw.types, &mut violations);
        for name in raw.pi.keys() {
            if game.player_index(name).is_none() {
                violations.push(StructureViolation::UnknownPlayer(name.clone()));
            }
        }
        if !violations.is_empty() {
            return Err(StructureError::Invalid(violations));
        }
        let n = game.num_players();
        let mut pi = Vec::with_capacity(n);
        for i in 0..n {
            let pname = game.player_name(i).to_string();
            let empty = IndexMap::new();
            let map = raw.pi.get(&pname).unwrap_or(&empty);
            for tname in map.keys() {
                if !types[i].contains(tname) {
                    violations.push(StructureViolation::UnknownType {
                        player: pname.clone(),
                        name: tname.clone(),
                    });
                }
            }
            let opps: Vec<usize> = game.opponents(i).collect();
            let mut images = Vec::with_capacity(types[i].len());
            for tname in &types[i] {
                let Some(entries) = map.get(tname) else {
                    violations.push(StructureViolation::MissingPossibility {
                        player: pname.clone(),
                        name: tname.clone(),
                    });
                    images.push(BTreeSet::new());
                    continue;
                };
                let mut image = BTreeSet::new();
                for (k, entry) in entries.iter().enumerate() {
                    match parse_opp_state(&game, &types, &opps, entry) {
                        Ok(s) => {
                            image.insert(s);
                        }
                        Err(message) => violations.push(StructureViolation::BadEntry {
                            player: pname.clone(),
                            location: format!("type `{tname}`, entry {k}"),
                            message,
                        }),
                    }
                }
                if entries.is_empty() {
                    violations.push(StructureViolation::EmptyPossibility {
                        player: pname.clone(),
                        name: tname.clone(),
                    });
                }
                images.push(image);
            }
            pi.push(images);
        }
        if !violations.is_empty() {
            return Err(StructureError::Invalid(violations));
        }
        Self::new(game, types, pi)
    }

    /// Raw form with the game embedded inline.
    pub fn to_raw(&self) -> RawPossibility {
        let g = &self.game;
        let types = (0..g.num_players())
            .map(|i| (g.player_name(i).to_string(), self.types[i].clone()))
            .collect();
        let pi = (0..g.num_players())
            .map(|i| {
                let opps: Vec<usize> = g.opponents(i).collect();
                let map = self.types[i]
                    .iter()
                    .enumerate()
                    .map(|(t, tname)| {
                        let entries = self.pi[i][t]
                            .iter()
                            .map(|s| {
                                let acts = s.iter().zip(&opps).map(|(&(a, _), &j)| g.action_name(j, a).to_string());
                                let tys = s.iter().zip(&opps).map(|(&(_, u), &j)| self.types[j][u].clone());
                                acts.chain(tys).collect()
                            })
                            .collect();
                        (tname.clone(), entries)
                    })
                    .collect();
                (g.player_name(i).to_string(), map)
            })
            .collect();
        RawPossibility {
            game: crate::io::game_to_value(g),
            types,
            pi,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("serializable")
    }

    pub fn game(&self) -> &OrdinalGame {
        &self.game
    }

    pub fn num_players(&self) -> usize {
        self.game.num_players()
    }

    pub fn types(&self, i: usize) -> &[String] {
        &self.types[i]
    }

    pub fn num_types(&self, i: usize) -> usize {
        self.types[i].len()
    }

    pub fn type_index(&self, i: usize, name: &str) -> Option<usize> {
        self.types[i].iter().position(|t| t == name)
    }

    pub fn pi(&self, i: usize, t: usize) -> &BTreeSet<OppState> {
        &self.pi[i][t]
    }

    /// First-order belief: opponent action profiles in `pi(i, t)`.
    pub fn fob(&self, i: usize, t: usize) -> Vec<Profile> {
        self.pi[i][t]
            .iter()
            .map(|s| s.iter().map(|&(a, _)| a).collect::<Profile>())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// `A_i × T_i` in action-major order.
    pub fn omega_i(&self, i: usize) -> impl Iterator<Item = Pair> + '_ {
        (0..self.game.num_actions(i)).cartesian_product(0..self.types[i].len())
    }

    pub fn full_event(&self) -> Event {
        Event::new((0..self.num_players()).map(|i| self.omega_i(i).collect()).collect())
    }

    fn event_by<F>(&self, mut keep: F) -> Event
    where
        F: FnMut(usize, usize, usize) -> bool,
    {
        Event::new(
            (0..self.num_players())
                .map(|i| self.omega_i(i).filter(|&(a, t)| keep(i, a, t)).collect())
                .collect(),
        )
    }

    fn per_type<F>(&self, f: F) -> Vec<Vec<BTreeSet<usize>>>
    where
        F: Fn(usize, &[Profile]) -> BTreeSet<usize>,
    {
        (0..self.num_players())
            .map(|i| (0..self.num_types(i)).map(|t| f(i, &self.fob(i, t))).collect())
            .collect()
    }

    pub fn event_opt(&self) -> Event {
        let best = self.per_type(|i, fob| criteria::obr_profiles(&self.game, i, fob));
        self.event_by(|i, a, t| best[i][t].contains(&a))
    }

    pub fn event_pes(&self) -> Event {
        let best = self.per_type(|i, fob| criteria::pbr_profiles(&self.game, i, fob));
        self.event_by(|i, a, t| best[i][t].contains(&a))
    }

    /// Admissibility relative to the first-order belief.
    pub fn event_adm(&self) -> Event {
        let best = self.per_type(|i, fob| criteria::admissible_set(&self.game, i, fob));
        self.event_by(|i, a, t| best[i][t].contains(&a))
    }

    /// Types whose possibility set is a single opponent state.
    pub fn event_deg(&self) -> Event {
        self.event_by(|i, _, t| self.pi[i][t].len() == 1)
    }

    /// `(a, t)` such that `a` is a point best reply to every profile in `fob(t)`
    /// and to at least one profile.
    pub fn event_mar(&self) -> Event {
        let g = &self.game;
        let full = crate::game::ActionSetFamily::full(g);
        let point_support: Vec<BTreeMap<usize, BTreeSet<Profile>>> = (0..g.num_players())
            .map(|i| {
                let mut m: BTreeMap<usize, BTreeSet<Profile>> = BTreeMap::new();
                for p in g.opponent_profiles(i, &full) {
                    for a in criteria::argmax(g, i, &p) {
                        m.entry(a).or_default().insert(p.clone());
                    }
                }
                m
            })
            .collect();
        self.event_by(|i, a, t| match point_support[i].get(&a) {
            Some(ms) => self.fob(i, t).iter().all(|p| ms.contains(p)),
            None => false,
        })
    }

    pub fn attitude_event(&self, attitude: Attitude) -> Event {
        match attitude {
            Attitude::Opt => self.event_opt(),
            Attitude::Pes => self.event_pes(),
            Attitude::Adm => self.event_adm(),
            Attitude::OptDeg => self.event_opt().intersect(&self.event_deg()),
        }
    }

    fn opp_state_in(&self, i: usize, s: &[Pair], e: &Event) -> bool {
        self.game.opponents(i).zip(s).all(|(j, p)| e.part(j).contains(p))
    }

    /// `B_i(E_{-i})`: pairs whose type considers only states in the product
    /// of the opponents' parts of `e`. Part `i` of `e` is ignored.
    pub fn belief_operator(&self, i: usize, e: &Event) -> std::collections::BTreeSet<Pair> {
        self.omega_i(i)
            .filter(|&(_, t)| self.pi[i][t].iter().all(|s| self.opp_state_in(i, s, e)))
            .collect()
    }

    pub fn belief(&self, e: &Event) -> Event {
        Event::new((0..self.num_players()).map(|i| self.belief_operator(i, e)).collect())
    }

    /// `CB^0 = att`, `CB^m = att ∩ B(CB^{m-1})`, computed per player until the
    /// joint event repeats and at least `depth` levels exist. The result is
    /// cross-checked against a literal computation over joint states.
    pub fn cb_chain(&self, att: &Event, depth: Option<usize>) -> Result<CbChain, EpistemicError> {
        let mut levels = vec![att.clone()];
        let mut fixed_point = None;
        loop {
            let prev = levels.last().expect("level 0");
            let next = att.intersect(&self.belief(prev));
            if fixed_point.is_none() && next.same_set(prev) {
                fixed_point = Some(levels.len() - 1);
            }
            levels.push(next);
            if let Some(f) = fixed_point {
                if levels.len() > depth.unwrap_or(0).max(f + 1) {
                    break;
                }
            }
        }
        let chain = CbChain {
            levels,
            fixed_point: fixed_point.expect("set before exit"),
            joint_checked: false,
        };
        self.cross_check(att, chain)
    }

    fn cross_check(&self, att: &Event, mut chain: CbChain) -> Result<CbChain, EpistemicError> {
        let Some(joint) = JointSpace::new(self) else { return Ok(chain) };
        let att_j = joint.from_event(att);
        let mut current = att_j.clone();
        for (m, level) in chain.levels.iter().enumerate() {
            if m > 0 {
                let b = joint.belief(self, &current);
                current = att_j.iter().zip(&b).map(|(x, y)| *x && *y).collect();
            }
            if current != joint.from_event(level) {
                return Err(EpistemicError::Defect(format!(
                    "per-player and joint belief chains differ at level {m}"
                )));
            }
        }
        chain.joint_checked = true;
        Ok(chain)
    }

    /// Checks `proj_A CB^n(att) ⊆ AR^{n+1}` level by level and at the fixed points.
    pub fn check_inclusion_theorem(&self, attitude: Attitude) -> Result<InclusionReport, EpistemicError> {
        self.check_inclusion_theorem_to(attitude, None)
    }

    /// As [`Self::check_inclusion_theorem`], reporting at least levels `0..=depth`.
    pub fn check_inclusion_theorem_to(&self, attitude: Attitude, depth: Option<usize>) -> Result<InclusionReport, EpistemicError> {
        let trace = solvers::solve(&self.game, attitude.concept())?;
        let att = self.attitude_event(attitude);
        let chain = self.cb_chain(&att, Some(trace.fixed_point_round + 1))?;
        let top = (chain.fixed_point.max(trace.fixed_point_round) + 1).max(depth.unwrap_or(0));
        let levels = (0..=top)
            .map(|n| LevelCheck::new(Some(n), project_actions(chain.level(n)), trace.round(n + 1).profiles()))
            .collect();
        let infinity = LevelCheck::new(None, project_actions(chain.infinity()), trace.fixed_point().profiles());
        Ok(InclusionReport {
            attitude,
            levels,
            infinity,
            joint_checked: chain.joint_checked,
        })
    }
}

fn parse_opp_state(
    game: &OrdinalGame,
    types: &[Vec<String>],
    opps: &[usize],
    entry: &[String],
) -> Result<OppState, String> {
    let k = opps.len();
    if entry.len() != 2 * k {
        return Err(format!("expected {} names ({k} actions then {k} types), found {}", 2 * k, entry.len()));
    }
    opps.iter()
        .enumerate()
        .map(|(pos, &j)| {
            let a = game
                .action_index(j, &entry[pos])
                .ok_or_else(|| format!("`{}` is not an action of `{}`", entry[pos], game.player_name(j)))?;
            let t = types[j]
                .iter()
                .position(|x| *x == entry[k + pos])
                .ok_or_else(|| format!("`{}` is not a type of `{}`", entry[k + pos], game.player_name(j)))?;
            Ok((a, t))
        })
        .collect()
}

/// Flat indexing of `Ω = ∏ A_i × T_i` for the joint-state cross-check.
struct JointSpace {
    sizes: Vec<usize>,
    types: Vec<usize>,
    total: usize,
}

impl JointSpace {
    fn new(s: &PossibilityStructure) -> Option<Self> {
        let n = s.num_players();
        let types: Vec<usize> = (0..n).map(|i| s.num_types(i)).collect();
        let sizes: Vec<usize> = (0..n).map(|i| s.game.num_actions(i) * types[i]).collect();
        let total = sizes.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x))?;
        (total <= JOINT_CHECK_LIMIT).then_some(JointSpace { sizes, types, total })
    }

    fn pair_index(&self, i: usize, (a, t): Pair) -> usize {
        a * self.types[i] + t
    }

    fn decode(&self, mut k: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for i in (0..self.sizes.len()).rev() {
            out[i] = k % self.sizes[i];
            k /= self.sizes[i];
        }
        out
    }

    fn from_event(&self, e: &Event) -> Vec<bool> {
        let idx: Vec<BTreeSet<usize>> = e
            .parts()
            .iter()
            .enumerate()
            .map(|(i, part)| part.iter().map(|&p| self.pair_index(i, p)).collect())
            .collect();
        (0..self.total)
            .map(|k| self.decode(k).iter().enumerate().all(|(i, q)| idx[i].contains(q)))
            .collect()
    }

    /// `B(E)` for an arbitrary joint set: project `E` onto each `Ω_{-i}`,
    /// apply `B_i`, and take the product.
    fn belief(&self, s: &PossibilityStructure, e: &[bool]) -> Vec<bool> {
        let n = self.sizes.len();
        let mut own_ok: Vec<Vec<bool>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut proj: BTreeSet<Vec<usize>> = BTreeSet::new();
            for (k, &inside) in e.iter().enumerate() {
                if inside {
                    let mut d = self.decode(k);
                    d.remove(i);
                    proj.insert(d);
                }
            }
            let opps: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let mut ok = vec![false; self.sizes[i]];
            for (a, t) in s.omega_i(i) {
                ok[self.pair_index(i, (a, t))] = s.pi[i][t].iter().all(|st| {
                    let key: Vec<usize> = st.iter().zip(&opps).map(|(&p, &j)| self.pair_index(j, p)).collect();
                    proj.contains(&key)
                });
            }
            own_ok.push(ok);
        }
        (0..self.total)
            .map(|k| self.decode(k).iter().enumerate().all(|(i, &q)| own_ok[i][q]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CbChain {
    pub levels: Vec<Event>,
    /// First level equal (as a joint set) to its successor.
    pub fixed_point: usize,
    /// Whether the joint-state recomputation ran.
    pub joint_checked: bool,
}

impl CbChain {
    pub fn level(&self, n: usize) -> &Event {
        &self.levels[n.min(self.levels.len() - 1)]
    }

    pub fn infinity(&self) -> &Event {
        &self.levels[self.fixed_point]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Margin {
    Equal,
    Strict,
    Violated,
}

impl Margin {
    pub fn tag(self) -> &'static str {
        match self {
            Margin::Equal => "equal",
            Margin::Strict => "strict",
            Margin::Violated => "violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCheck {
    /// `None` for the fixed points.
    pub level: Option<usize>,
    pub projected: BTreeSet<Profile>,
    pub target: BTreeSet<Profile>,
    pub margin: Margin,
}

impl LevelCheck {
    pub fn new(level: Option<usize>, projected: BTreeSet<Profile>, target: BTreeSet<Profile>) -> Self {
        let margin = if projected == target {
            Margin::Equal
        } else if projected.is_subset(&target) {
            Margin::Strict
        } else {
            Margin::Violated
        };
        LevelCheck {
            level,
            projected,
            target,
            margin,
        }
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        let names = |ps: &BTreeSet<Profile>| ps.iter().map(|p| game.profile_names(p)).collect::<Vec<_>>();
        json!({
            "level": self.level.map_or(Value::String("inf".into()), |n| json!(n)),
            "margin": self.margin.tag(),
            "projected": names(&self.projected),
            "target": names(&self.target),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionReport {
    pub attitude: Attitude,
    pub levels: Vec<LevelCheck>,
    pub infinity: LevelCheck,
    pub joint_checked: bool,
}

impl InclusionReport {
    pub fn all_checks(&self) -> impl Iterator<Item = &LevelCheck> {
        self.levels.iter().chain(std::iter::once(&self.infinity))
    }

    pub fn holds(&self) -> bool {
        self.all_checks().all(|c| c.margin != Margin::Violated)
    }

    pub fn equal_everywhere(&self) -> bool {
        self.all_checks().all(|c| c.margin == Margin::Equal)
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        json!({
            "attitude": self.attitude.tag(),
            "procedure": self.attitude.concept().tag(),
            "holds": self.holds(),
            "equal_everywhere": self.equal_everywhere(),
            "joint_checked": self.joint_checked,
            "levels": self.levels.iter().map(|c| c.to_json(game)).collect::<Vec<_>>(),
            "infinity": self.infinity.to_json(game),
        })
    }
}
