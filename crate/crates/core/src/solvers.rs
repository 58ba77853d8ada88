//! Iterated procedures with per-round traces.
//!
//! Every procedure starts from the full game and computes round `m + 1`
//! from round `m` for all players at once. A trace stores rounds `0..=n+1`
//! where `n` is the first round equal to its successor, together with one
//! justification per element of each round: a certificate when the element
//! survives, a witness or a failed search when it does not.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::criteria::{
    self, borgers_dominated_among, strictly_dominated_mixed, strictly_dominated_pure_among,
    supporting_probability, BorgersVerdict, CriteriaError, DominanceKind, DominanceWitness,
};
use crate::game::{format_payoff, nonempty_subsets, ActionSetFamily, OrdinalGame, Payoff, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Pr,
    Wr,
    Br,
    Yr,
    Tr,
    Iesd,
}

impl Concept {
    pub const ALL: [Concept; 6] = [Concept::Pr, Concept::Wr, Concept::Br, Concept::Yr, Concept::Tr, Concept::Iesd];
    /// Concepts whose rounds are products of action sets.
    pub const ACTION_BASED: [Concept; 5] = [Concept::Pr, Concept::Wr, Concept::Br, Concept::Tr, Concept::Iesd];

    pub fn tag(self) -> &'static str {
        match self {
            Concept::Pr => "PR",
            Concept::Wr => "WR",
            Concept::Br => "BR",
            Concept::Yr => "YR",
            Concept::Tr => "TR",
            Concept::Iesd => "IESD",
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Concept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Concept::ALL
            .into_iter()
            .find(|c| c.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown concept `{s}` (expected pr, wr, br, yr, tr or iesd)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error("solver defect: {0}")]
    Defect(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundSet {
    Family(ActionSetFamily),
    Profiles(BTreeSet<Profile>),
}

impl RoundSet {
    pub fn profiles(&self) -> BTreeSet<Profile> {
        match self {
            RoundSet::Family(f) => f.profiles(),
            RoundSet::Profiles(p) => p.clone(),
        }
    }

    pub fn family(&self) -> Option<&ActionSetFamily> {
        match self {
            RoundSet::Family(f) => Some(f),
            RoundSet::Profiles(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            RoundSet::Family(f) => f.sets().iter().any(BTreeSet::is_empty),
            RoundSet::Profiles(p) => p.is_empty(),
        }
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        match self {
            RoundSet::Family(f) => family_json(game, f),
            RoundSet::Profiles(ps) => ps.iter().map(|p| json!(game.profile_names(p))).collect(),
        }
    }
}

pub fn family_json(game: &OrdinalGame, f: &ActionSetFamily) -> Value {
    let mut map = serde_json::Map::new();
    for (i, set) in f.sets().iter().enumerate() {
        let names: Vec<&str> = set.iter().map(|&a| game.action_name(i, a)).collect();
        map.insert(game.player_name(i).to_string(), json!(names));
    }
    Value::Object(map)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    Action { player: usize, action: usize },
    Profile(Profile),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// An opponent profile against which the action is a point best reply.
    Point(Profile),
    /// A belief set (maxmin reply for WR, admissible relative to it for BR).
    Belief(Vec<Profile>),
    /// A probability belief under which no surviving rival does better.
    Probability(Vec<(Profile, Payoff)>),
    /// For each other survivor, a profile where it fails to beat the action.
    Undominated(Vec<(usize, Profile)>),
    /// One opponent profile per player meeting the wishful-thinking conditions.
    Wishful(Vec<Profile>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elimination {
    Dominated(DominanceWitness),
    /// No belief within the previous round supports the action.
    NoSupport,
    /// The named player has no opponent profile meeting the conditions.
    NoWishfulWitness { player: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Survives(Certificate),
    Eliminated(Elimination),
}

impl Verdict {
    pub fn survives(&self) -> bool {
        matches!(self, Verdict::Survives(_))
    }
}

/// Decision about one element of round `round - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    pub round: usize,
    pub subject: Subject,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTrace {
    pub concept: Concept,
    pub rounds: Vec<RoundSet>,
    pub fixed_point_round: usize,
    pub justifications: Vec<Justification>,
}

impl EliminationTrace {
    /// Round `m`; rounds past the stored ones equal the fixed point.
    pub fn round(&self, m: usize) -> &RoundSet {
        &self.rounds[m.min(self.rounds.len() - 1)]
    }

    pub fn fixed_point(&self) -> &RoundSet {
        &self.rounds[self.fixed_point_round]
    }

    pub fn family(&self, m: usize) -> Option<&ActionSetFamily> {
        self.round(m).family()
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        json!({
            "concept": self.concept.tag(),
            "rounds": self.rounds.iter().map(|r| r.to_json(game)).collect::<Vec<_>>(),
            "fixed_point_round": self.fixed_point_round,
            "justifications": self.justifications.iter().map(|j| justification_json(game, j)).collect::<Vec<_>>(),
        })
    }
}

fn opp_json(game: &OrdinalGame, i: usize, ps: &[Profile]) -> Value {
    ps.iter().map(|p| json!(game.opponent_profile_names(i, p))).collect()
}

fn justification_json(game: &OrdinalGame, j: &Justification) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("round".into(), json!(j.round));
    let player = match &j.subject {
        Subject::Action { player, action } => {
            out.insert("player".into(), json!(game.player_name(*player)));
            out.insert("action".into(), json!(game.action_name(*player, *action)));
            Some(*player)
        }
        Subject::Profile(p) => {
            out.insert("profile".into(), json!(game.profile_names(p)));
            None
        }
    };
    match &j.verdict {
        Verdict::Survives(c) => {
            out.insert("status".into(), json!("survives"));
            let i = player.unwrap_or(0);
            let cert = match c {
                Certificate::Point(p) => json!({"point": game.opponent_profile_names(i, p)}),
                Certificate::Belief(ps) => json!({"belief": opp_json(game, i, ps)}),
                Certificate::Probability(ws) => json!({
                    "probability": ws.iter().map(|(p, w)| json!([game.opponent_profile_names(i, p), format_payoff(w)])).collect::<Vec<_>>()
                }),
                Certificate::Undominated(list) => json!({
                    "undominated": list.iter().map(|(d, p)| json!([game.action_name(i, *d), game.opponent_profile_names(i, p)])).collect::<Vec<_>>()
                }),
                Certificate::Wishful(per) => json!({
                    "wishful": per.iter().enumerate().map(|(k, p)| json!(game.opponent_profile_names(k, p))).collect::<Vec<_>>()
                }),
            };
            out.insert("certificate".into(), cert);
        }
        Verdict::Eliminated(e) => {
            out.insert("status".into(), json!("eliminated"));
            let w = match e {
                Elimination::Dominated(w) => w.to_json(game),
                Elimination::NoSupport => json!("no supporting belief"),
                Elimination::NoWishfulWitness { player } => {
                    json!({"no_witness_for": game.player_name(*player)})
                }
            };
            out.insert("witness".into(), w);
        }
    }
    Value::Object(out)
}

fn run_actions<F>(game: &OrdinalGame, concept: Concept, mut decide: F) -> Result<EliminationTrace, SolverError>
where
    F: FnMut(usize, usize, &ActionSetFamily, &[Profile]) -> Result<Verdict, SolverError>,
{
    let n = game.num_players();
    let mut rounds = vec![ActionSetFamily::full(game)];
    let mut justifications = Vec::new();
    loop {
        let current = rounds.last().expect("round 0").clone();
        let m = rounds.len();
        let mut next = vec![BTreeSet::new(); n];
        for (i, slot) in next.iter_mut().enumerate() {
            let opp = game.opponent_profiles(i, &current);
            for &a in current.get(i) {
                let verdict = decide(i, a, &current, &opp)?;
                if verdict.survives() {
                    slot.insert(a);
                }
                justifications.push(Justification {
                    round: m,
                    subject: Subject::Action { player: i, action: a },
                    verdict,
                });
            }
            if slot.is_empty() {
                return Err(SolverError::Defect(format!(
                    "{concept} round {m} left player {} without actions",
                    game.player_name(i)
                )));
            }
        }
        let next = ActionSetFamily::from_sets(next);
        let done = next == current;
        rounds.push(next);
        if done {
            break;
        }
    }
    let fixed_point_round = rounds.len() - 2;
    Ok(EliminationTrace {
        concept,
        rounds: rounds.into_iter().map(RoundSet::Family).collect(),
        fixed_point_round,
        justifications,
    })
}

pub fn point_rationalizability(game: &OrdinalGame) -> EliminationTrace {
    run_actions(game, Concept::Pr, |i, a, _, opp| {
        Ok(match opp.iter().find(|p| criteria::argmax(game, i, p).contains(&a)) {
            Some(p) => Verdict::Survives(Certificate::Point(p.clone())),
            None => Verdict::Eliminated(Elimination::NoSupport),
        })
    })
    .expect("point rationalizability cannot fail")
}

/// Largest belief on which `a`'s worst case is `v`: every profile where `a`
/// gets at least `v`. Enlarging a belief can only lower rivals' worst cases,
/// so `a` is a maxmin reply to some belief iff it is one to such a set.
pub fn maxmin_support(game: &OrdinalGame, i: usize, a: usize, opp: &[Profile]) -> Option<Vec<Profile>> {
    let mut levels: Vec<&Payoff> = opp.iter().map(|p| game.utility(i, a, p)).collect();
    levels.sort();
    levels.dedup();
    for v in levels.into_iter().rev() {
        let belief: Vec<Profile> = opp.iter().filter(|p| game.utility(i, a, p) >= v).cloned().collect();
        if criteria::pbr_profiles(game, i, &belief).contains(&a) {
            return Some(belief);
        }
    }
    None
}

pub fn wald_rationalizability(game: &OrdinalGame) -> EliminationTrace {
    run_actions(game, Concept::Wr, |i, a, _, opp| {
        Ok(match maxmin_support(game, i, a, opp) {
            Some(k) => Verdict::Survives(Certificate::Belief(k)),
            None => Verdict::Eliminated(Elimination::NoSupport),
        })
    })
    .expect("wald rationalizability cannot fail")
}

pub fn borgers_rationalizability(game: &OrdinalGame) -> EliminationTrace {
    run_actions(game, Concept::Br, |i, a, current, opp| {
        Ok(match borgers_dominated_among(game, i, a, opp, current.get(i)) {
            BorgersVerdict::Admissible { subset } => Verdict::Survives(Certificate::Belief(subset)),
            BorgersVerdict::Dominated { per_subset } => Verdict::Eliminated(Elimination::Dominated(
                DominanceWitness::borgers(i, a, opp.to_vec(), per_subset),
            )),
        })
    })
    .expect("borgers rationalizability cannot fail")
}

pub fn rationalizability(game: &OrdinalGame) -> Result<EliminationTrace, SolverError> {
    run_actions(game, Concept::Tr, |i, a, current, opp| {
        let rivals = current.get(i);
        let support: BTreeSet<usize> = rivals.iter().copied().filter(|&x| x != a).collect();
        if let Some(sigma) = strictly_dominated_mixed(game, i, a, opp, &support)? {
            return Ok(Verdict::Eliminated(Elimination::Dominated(DominanceWitness::mixed(
                i,
                a,
                sigma,
                opp.to_vec(),
            ))));
        }
        match supporting_probability(game, i, a, opp, rivals)? {
            Some(mu) => Ok(Verdict::Survives(Certificate::Probability(mu))),
            None => Err(SolverError::Defect(format!(
                "{} of {} is neither dominated nor supported",
                game.action_name(i, a),
                game.player_name(i)
            ))),
        }
    })
}

pub fn iesd_pure(game: &OrdinalGame) -> EliminationTrace {
    run_actions(game, Concept::Iesd, |i, a, current, opp| {
        let rivals = current.get(i);
        if let Some(d) = strictly_dominated_pure_among(game, i, a, opp, rivals) {
            return Ok(Verdict::Eliminated(Elimination::Dominated(DominanceWitness::pure(
                DominanceKind::StrictPure,
                i,
                a,
                d,
                opp.to_vec(),
            ))));
        }
        let list = rivals
            .iter()
            .filter(|&&d| d != a)
            .map(|&d| {
                let p = opp
                    .iter()
                    .find(|p| game.utility(i, d, p) <= game.utility(i, a, p))
                    .expect("undominated action has a failing profile");
                (d, p.clone())
            })
            .collect();
        Ok(Verdict::Survives(Certificate::Undominated(list)))
    })
    .expect("iesd cannot fail")
}

/// The three wishful-thinking conditions for player `i`, candidate `star`
/// and opponent profile `opp`, relative to the previous round `prev`.
pub fn wishful_conditions(game: &OrdinalGame, prev: &BTreeSet<Profile>, star: &[usize], i: usize, opp: &[usize]) -> bool {
    let own = star[i];
    if !prev.contains(&game.compose(i, own, opp)) {
        return false;
    }
    if !criteria::argmax(game, i, opp).contains(&own) {
        return false;
    }
    let star_opp = game.opponent_part(i, star);
    let ceiling = (0..game.num_actions(i))
        .map(|x| game.utility(i, x, &star_opp))
        .max()
        .expect("nonempty action set");
    game.utility(i, own, opp) >= ceiling
}

pub fn wishful_thinking(game: &OrdinalGame) -> EliminationTrace {
    let n = game.num_players();
    let full = ActionSetFamily::full(game);
    let opp_all: Vec<Vec<Profile>> = (0..n).map(|i| game.opponent_profiles(i, &full)).collect();
    let mut rounds = vec![full.profiles()];
    let mut justifications = Vec::new();
    loop {
        let current = rounds.last().expect("round 0").clone();
        let m = rounds.len();
        let mut next = BTreeSet::new();
        for star in &current {
            let mut witnesses = Vec::with_capacity(n);
            let mut failed = None;
            for (i, opps) in opp_all.iter().enumerate() {
                match opps.iter().find(|p| wishful_conditions(game, &current, star, i, p)) {
                    Some(p) => witnesses.push(p.clone()),
                    None => {
                        failed = Some(i);
                        break;
                    }
                }
            }
            let verdict = match failed {
                None => {
                    next.insert(star.clone());
                    Verdict::Survives(Certificate::Wishful(witnesses))
                }
                Some(player) => Verdict::Eliminated(Elimination::NoWishfulWitness { player }),
            };
            justifications.push(Justification {
                round: m,
                subject: Subject::Profile(star.clone()),
                verdict,
            });
        }
        let done = next == current;
        rounds.push(next);
        if done {
            break;
        }
    }
    let fixed_point_round = rounds.len() - 2;
    EliminationTrace {
        concept: Concept::Yr,
        rounds: rounds.into_iter().map(RoundSet::Profiles).collect(),
        fixed_point_round,
        justifications,
    }
}

pub fn solve(game: &OrdinalGame, concept: Concept) -> Result<EliminationTrace, SolverError> {
    Ok(match concept {
        Concept::Pr => point_rationalizability(game),
        Concept::Wr => wald_rationalizability(game),
        Concept::Br => borgers_rationalizability(game),
        Concept::Yr => wishful_thinking(game),
        Concept::Tr => rationalizability(game)?,
        Concept::Iesd => iesd_pure(game),
    })
}

/// Re-checks a trace against the definitions without trusting the solver.
pub fn verify_trace(game: &OrdinalGame, trace: &EliminationTrace) -> Result<(), String> {
    let rounds = &trace.rounds;
    if rounds.len() < 2 || trace.fixed_point_round != rounds.len() - 2 {
        return Err("trace must end with two equal rounds".into());
    }
    if rounds[rounds.len() - 1] != rounds[rounds.len() - 2] {
        return Err("last two rounds differ".into());
    }
    let full = ActionSetFamily::full(game);
    let round0_ok = match &rounds[0] {
        RoundSet::Family(f) => *f == full,
        RoundSet::Profiles(p) => *p == full.profiles(),
    };
    if !round0_ok {
        return Err("round 0 is not the full game".into());
    }
    for m in 0..rounds.len() - 1 {
        let (prev, next) = (&rounds[m], &rounds[m + 1]);
        if !next.profiles().is_subset(&prev.profiles()) {
            return Err(format!("round {} is not contained in round {m}", m + 1));
        }
        if m + 1 < rounds.len() - 1 && next == prev {
            return Err(format!("fixed point reached before round {}", trace.fixed_point_round));
        }
        let js: Vec<&Justification> = trace.justifications.iter().filter(|j| j.round == m + 1).collect();
        match prev {
            RoundSet::Family(f) => {
                let RoundSet::Family(g) = next else { return Err("mixed round kinds".into()) };
                let expected: usize = f.sets().iter().map(BTreeSet::len).sum();
                if js.len() != expected {
                    return Err(format!("round {} has {} justifications, expected {expected}", m + 1, js.len()));
                }
                for j in js {
                    let Subject::Action { player, action } = j.subject else {
                        return Err("profile subject in action trace".into());
                    };
                    if !f.get(player).contains(&action) {
                        return Err(format!("round {} justifies a non-member", m + 1));
                    }
                    if j.verdict.survives() != g.get(player).contains(&action) {
                        return Err(format!("round {} verdict disagrees with the next round", m + 1));
                    }
                    check_action(game, trace.concept, f, player, action, &j.verdict)
                        .map_err(|e| format!("round {}, {} of {}: {e}", m + 1, game.action_name(player, action), game.player_name(player)))?;
                }
            }
            RoundSet::Profiles(ps) => {
                let next = next.profiles();
                if js.len() != ps.len() {
                    return Err(format!("round {} justification count mismatch", m + 1));
                }
                for j in js {
                    let Subject::Profile(star) = &j.subject else {
                        return Err("action subject in profile trace".into());
                    };
                    if !ps.contains(star) || j.verdict.survives() != next.contains(star) {
                        return Err(format!("round {} verdict disagrees with the next round", m + 1));
                    }
                    check_profile(game, ps, star, &j.verdict).map_err(|e| format!("round {}: {e}", m + 1))?;
                }
            }
        }
    }
    Ok(())
}

fn check_action(
    game: &OrdinalGame,
    concept: Concept,
    prev: &ActionSetFamily,
    i: usize,
    a: usize,
    verdict: &Verdict,
) -> Result<(), String> {
    let opp = game.opponent_profiles(i, prev);
    let opp_set: BTreeSet<&Profile> = opp.iter().collect();
    let inside = |ps: &[Profile]| !ps.is_empty() && ps.iter().all(|p| opp_set.contains(p));
    let own = prev.get(i);
    match (concept, verdict) {
        (Concept::Pr, Verdict::Survives(Certificate::Point(p))) => {
            (opp_set.contains(p) && criteria::argmax(game, i, p).contains(&a)).then_some(()).ok_or("bad point certificate")?
        }
        (Concept::Pr, Verdict::Eliminated(Elimination::NoSupport)) => {
            (!opp.iter().any(|p| criteria::argmax(game, i, p).contains(&a))).then_some(()).ok_or("supported action eliminated")?
        }
        (Concept::Wr, Verdict::Survives(Certificate::Belief(k))) => {
            (inside(k) && criteria::pbr_profiles(game, i, k).contains(&a)).then_some(()).ok_or("bad belief certificate")?
        }
        (Concept::Wr, Verdict::Eliminated(Elimination::NoSupport)) => {
            (!nonempty_subsets(&opp).any(|k| criteria::pbr_profiles(game, i, &k).contains(&a)))
                .then_some(())
                .ok_or("supported action eliminated")?
        }
        (Concept::Br, Verdict::Survives(Certificate::Belief(k))) => {
            (inside(k) && criteria::weakly_dominated_among(game, i, a, k, own).is_none())
                .then_some(())
                .ok_or("bad admissibility certificate")?
        }
        (Concept::Tr, Verdict::Survives(Certificate::Probability(mu))) => {
            let points: Vec<Profile> = mu.iter().map(|(p, _)| p.clone()).collect();
            (inside(&points) && criteria::verify_supporting_probability(game, i, a, mu, own))
                .then_some(())
                .ok_or("bad probability certificate")?
        }
        (Concept::Iesd, Verdict::Survives(Certificate::Undominated(list))) => {
            let covered: BTreeSet<usize> = list.iter().map(|(d, _)| *d).collect();
            let expected: BTreeSet<usize> = own.iter().copied().filter(|&d| d != a).collect();
            (covered == expected
                && list
                    .iter()
                    .all(|(d, p)| opp_set.contains(p) && game.utility(i, *d, p) <= game.utility(i, a, p)))
            .then_some(())
            .ok_or("bad undominated certificate")?
        }
        (Concept::Br | Concept::Tr | Concept::Iesd, Verdict::Eliminated(Elimination::Dominated(w))) => {
            let kind_ok = matches!(
                (concept, w.kind),
                (Concept::Br, DominanceKind::Borgers)
                    | (Concept::Tr, DominanceKind::StrictMixed)
                    | (Concept::Iesd, DominanceKind::StrictPure)
            );
            let mut reference = w.reference.clone();
            reference.sort();
            let dominators_ok = match &w.dominator {
                Some(criteria::Dominator::Pure(d)) => own.contains(d),
                Some(criteria::Dominator::Mixed(s)) => s.support().is_subset(own),
                None => w.per_subset.iter().all(|(_, d)| own.contains(d)),
            };
            (kind_ok && w.player == i && w.dominated == a && reference == opp && dominators_ok && w.verify(game))
                .then_some(())
                .ok_or("bad dominance witness")?
        }
        _ => return Err("justification kind does not match the concept".into()),
    }
    Ok(())
}

fn check_profile(game: &OrdinalGame, prev: &BTreeSet<Profile>, star: &[usize], verdict: &Verdict) -> Result<(), String> {
    let full = ActionSetFamily::full(game);
    match verdict {
        Verdict::Survives(Certificate::Wishful(per)) => {
            (per.len() == game.num_players()
                && per
                    .iter()
                    .enumerate()
                    .all(|(i, p)| game.is_valid_opponent_profile(i, p) && wishful_conditions(game, prev, star, i, p)))
            .then_some(())
            .ok_or_else(|| "bad wishful certificate".to_string())
        }
        Verdict::Eliminated(Elimination::NoWishfulWitness { player }) => {
            let i = *player;
            (i < game.num_players()
                && !game
                    .opponent_profiles(i, &full)
                    .iter()
                    .any(|p| wishful_conditions(game, prev, star, i, p)))
            .then_some(())
            .ok_or_else(|| "eliminated profile has a witness".to_string())
        }
        _ => Err("justification kind does not match the concept".into()),
    }
}

/// One inclusion claim checked at every round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: &'static str,
    /// False when the claim's hypothesis (genericity) fails for this game.
    pub applies: bool,
    /// Rounds at which the inclusion fails.
    pub failing_rounds: Vec<usize>,
}

impl Claim {
    pub fn holds(&self) -> bool {
        !self.applies || self.failing_rounds.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub sub: Concept,
    pub sup: Concept,
    pub player: usize,
    pub action: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRelations {
    pub round: usize,
    /// `inclusion[x][y]` is true when concept x's round is inside concept y's,
    /// indices following [`Concept::ACTION_BASED`].
    pub inclusion: Vec<Vec<bool>>,
    pub yr_in_pr: bool,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub generic: bool,
    pub traces: Vec<EliminationTrace>,
    pub rounds: Vec<RoundRelations>,
    pub claims: Vec<Claim>,
}

impl RelationReport {
    pub fn trace(&self, concept: Concept) -> &EliminationTrace {
        self.traces.iter().find(|t| t.concept == concept).expect("all concepts traced")
    }

    pub fn violations(&self) -> Vec<&Claim> {
        self.claims.iter().filter(|c| !c.holds()).collect()
    }

    /// First recorded witness of `sub ⊄ sup` at any round.
    pub fn counterexample(&self, sub: Concept, sup: Concept) -> Option<(usize, &Counterexample)> {
        self.rounds.iter().find_map(|r| {
            r.counterexamples
                .iter()
                .find(|c| c.sub == sub && c.sup == sup)
                .map(|c| (r.round, c))
        })
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        let tags: Vec<&str> = Concept::ACTION_BASED.iter().map(|c| c.tag()).collect();
        json!({
            "generic": self.generic,
            "concepts": tags,
            "claims": self.claims.iter().map(|c| json!({
                "claim": c.name,
                "applies": c.applies,
                "holds": c.holds(),
                "failing_rounds": c.failing_rounds,
            })).collect::<Vec<_>>(),
            "rounds": self.rounds.iter().map(|r| json!({
                "round": r.round,
                "inclusion": r.inclusion,
                "yr_in_pr": r.yr_in_pr,
                "counterexamples": r.counterexamples.iter().map(|c| json!({
                    "sub": c.sub.tag(),
                    "sup": c.sup.tag(),
                    "player": game.player_name(c.player),
                    "action": game.action_name(c.player, c.action),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "fixed_points": self.traces.iter().map(|t| json!({
                "concept": t.concept.tag(),
                "fixed_point_round": t.fixed_point_round,
                "fixed_point": t.fixed_point().to_json(game),
            })).collect::<Vec<_>>(),
        })
    }
}

fn family_subset(x: &ActionSetFamily, y: &ActionSetFamily) -> Option<(usize, usize)> {
    x.sets()
        .iter()
        .enumerate()
        .find_map(|(i, s)| s.iter().find(|a| !y.get(i).contains(a)).map(|&a| (i, a)))
}

/// Runs every procedure and checks the known inclusions round by round.
pub fn relations(game: &OrdinalGame) -> Result<RelationReport, SolverError> {
    let traces: Vec<EliminationTrace> = Concept::ALL.iter().map(|&c| solve(game, c)).collect::<Result<_, _>>()?;
    let generic = game.is_generic().overall;
    let get = |c: Concept| traces.iter().find(|t| t.concept == c).expect("traced");
    let horizon = traces.iter().map(|t| t.rounds.len()).max().unwrap_or(1);
    let mut rounds = Vec::with_capacity(horizon);
    for m in 0..horizon {
        let fams: Vec<&ActionSetFamily> = Concept::ACTION_BASED
            .iter()
            .map(|&c| get(c).family(m).expect("action trace"))
            .collect();
        let mut inclusion = vec![vec![true; fams.len()]; fams.len()];
        let mut counterexamples = Vec::new();
        for (x, fx) in fams.iter().enumerate() {
            for (y, fy) in fams.iter().enumerate() {
                if let Some((player, action)) = family_subset(fx, fy) {
                    inclusion[x][y] = false;
                    counterexamples.push(Counterexample {
                        sub: Concept::ACTION_BASED[x],
                        sup: Concept::ACTION_BASED[y],
                        player,
                        action,
                    });
                }
            }
        }
        let pr = get(Concept::Pr).family(m).expect("action trace");
        let yr_in_pr = get(Concept::Yr).round(m).profiles().iter().all(|p| pr.contains_profile(p));
        rounds.push(RoundRelations {
            round: m,
            inclusion,
            yr_in_pr,
            counterexamples,
        });
    }
    let idx = |c: Concept| Concept::ACTION_BASED.iter().position(|&x| x == c).expect("action concept");
    let claim = |name: &'static str, applies: bool, check: &dyn Fn(&RoundRelations) -> bool| Claim {
        name,
        applies,
        failing_rounds: rounds.iter().filter(|r| !check(r)).map(|r| r.round).collect(),
    };
    let claims = vec![
        claim("PR ⊆ WR", true, &|r| r.inclusion[idx(Concept::Pr)][idx(Concept::Wr)]),
        claim("PR ⊆ BR", true, &|r| r.inclusion[idx(Concept::Pr)][idx(Concept::Br)]),
        claim("YR ⊆ PR", true, &|r| r.yr_in_pr),
        claim("TR ⊆ BR", true, &|r| r.inclusion[idx(Concept::Tr)][idx(Concept::Br)]),
        claim("WR ⊆ BR (generic)", generic, &|r| r.inclusion[idx(Concept::Wr)][idx(Concept::Br)]),
    ];
    Ok(RelationReport {
        generic,
        traces,
        rounds,
        claims,
    })
}
