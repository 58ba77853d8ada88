//! Increasingly risk-averse cardinalizations of an ordinal game and their
//! normalized limit.
//!
//! Member `r` maps each payoff `u` of player `i` to `-(c - u)^r` with
//! `c = 1 + max u_i`, then rescales affinely so the player's payoffs span
//! `[0, 1]`. The limit marks each player's worst payoff 0 and everything
//! else 1.

use std::collections::BTreeSet;

use num_traits::{One, Pow, Zero};
use serde_json::{json, Value};

use crate::game::{OrdinalGame, Payoff, Profile};
use crate::solvers::{self, SolverError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RiskError {
    #[error("r must be at least 1")]
    ZeroIndex,
    #[error("r list must be nonempty and strictly increasing")]
    BadIndexList,
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("risk defect: {0}")]
    Defect(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcaveFamilyMember {
    pub r: u32,
    pub game: OrdinalGame,
    /// Players whose payoffs are constant; their transformed payoffs are all 0.
    pub degenerate: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitingGame {
    pub game: OrdinalGame,
    pub degenerate: Vec<usize>,
}

fn min_max(values: &[Payoff]) -> (Payoff, Payoff) {
    let lo = values.iter().min().expect("nonempty table").clone();
    let hi = values.iter().max().expect("nonempty table").clone();
    (lo, hi)
}

fn constant_players(game: &OrdinalGame) -> Vec<usize> {
    (0..game.num_players())
        .filter(|&i| {
            let (lo, hi) = min_max(game.payoff_table(i));
            lo == hi
        })
        .collect()
}

/// Unnormalized `-(c - u)^r`.
fn raw_value(c: &Payoff, u: &Payoff, r: u32) -> Payoff {
    -Pow::pow(c - u, r)
}

pub fn concave_transform(game: &OrdinalGame, r: u32) -> Result<ConcaveFamilyMember, RiskError> {
    if r == 0 {
        return Err(RiskError::ZeroIndex);
    }
    let degenerate = constant_players(game);
    let bounds: Vec<(Payoff, Payoff)> = (0..game.num_players())
        .map(|i| {
            let (lo, hi) = min_max(game.payoff_table(i));
            let c = &hi + Payoff::one();
            (raw_value(&c, &lo, r), raw_value(&c, &hi, r))
        })
        .collect();
    let transformed = game.map_payoffs(|i, _, u| {
        if degenerate.contains(&i) {
            return Payoff::zero();
        }
        let c = game.payoff_table(i).iter().max().expect("nonempty") + Payoff::one();
        let (vlo, vhi) = &bounds[i];
        (raw_value(&c, u, r) - vlo) / (vhi - vlo)
    });
    let member = ConcaveFamilyMember {
        r,
        game: transformed,
        degenerate,
    };
    member.check_invariants(game)?;
    Ok(member)
}

impl ConcaveFamilyMember {
    fn check_invariants(&self, base: &OrdinalGame) -> Result<(), RiskError> {
        if !base.ordinal_equivalent(&self.game).unwrap_or(false) {
            return Err(RiskError::Defect(format!("member r={} is not ordinally equivalent", self.r)));
        }
        for i in 0..self.game.num_players() {
            let (lo, hi) = min_max(self.game.payoff_table(i));
            let want_hi = if self.degenerate.contains(&i) { Payoff::zero() } else { Payoff::one() };
            if !lo.is_zero() || hi != want_hi {
                return Err(RiskError::Defect(format!("player {i} not normalized at r={}", self.r)));
            }
        }
        Ok(())
    }
}

/// Checks that member `r`'s payoffs are an increasing concave function of
/// member `s`'s payoffs on the values attained, player by player.
pub fn link_is_concave(lower: &ConcaveFamilyMember, higher: &ConcaveFamilyMember) -> bool {
    let g = &lower.game;
    (0..g.num_players()).all(|i| {
        let mut points: Vec<(Payoff, Payoff)> = g
            .payoff_table(i)
            .iter()
            .cloned()
            .zip(higher.game.payoff_table(i).iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        points.dedup_by(|a, b| a.0 == b.0);
        let slopes: Vec<Payoff> = points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect();
        slopes.iter().all(|s| s > &Payoff::zero()) && slopes.windows(2).all(|w| w[1] <= w[0])
    })
}

pub fn limiting_game(game: &OrdinalGame) -> LimitingGame {
    let degenerate = constant_players(game);
    let limit = game.map_payoffs(|i, _, u| {
        let lo = game.payoff_table(i).iter().min().expect("nonempty");
        if degenerate.contains(&i) || u == lo {
            Payoff::zero()
        } else {
            Payoff::one()
        }
    });
    LimitingGame { game: limit, degenerate }
}

/// How two profile sets compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetRelation {
    Equal,
    StrictSubset,
    StrictSuperset,
    Incomparable,
}

impl SetRelation {
    pub fn between(a: &BTreeSet<Profile>, b: &BTreeSet<Profile>) -> Self {
        match (a.is_subset(b), b.is_subset(a)) {
            (true, true) => SetRelation::Equal,
            (true, false) => SetRelation::StrictSubset,
            (false, true) => SetRelation::StrictSuperset,
            (false, false) => SetRelation::Incomparable,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SetRelation::Equal => "equal",
            SetRelation::StrictSubset => "strict-subset",
            SetRelation::StrictSuperset => "strict-superset",
            SetRelation::Incomparable => "incomparable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberResult {
    pub r: u32,
    pub tr_fixed_point: BTreeSet<Profile>,
    pub tr_family: Vec<BTreeSet<usize>>,
    pub degenerate: Vec<usize>,
    /// The link from the previous member's payoffs is increasing and concave.
    pub concave_link: Option<bool>,
    /// Point, Wald, Börgers and pure-dominance traces coincide with the base game's.
    pub ordinal_traces_match: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub members: Vec<MemberResult>,
    pub monotone: bool,
    pub within_br: bool,
    /// First listed `r` from which the TR fixed point no longer changes.
    pub stabilized_at: u32,
    pub br_base: BTreeSet<Profile>,
    pub wr_base: BTreeSet<Profile>,
    pub wr_limit: BTreeSet<Profile>,
    pub wr_limit_round1: Vec<BTreeSet<usize>>,
    pub limit: LimitingGame,
    /// Pairwise relations among TR at the largest r, BR of the base game,
    /// WR of the limiting game and WR of the base game.
    pub matrix: Vec<Vec<SetRelation>>,
}

pub const MATRIX_LABELS: [&str; 4] = ["TR(r_max)", "BR(base)", "WR(limit)", "WR(base)"];

fn same_ordinal_traces(a: &OrdinalGame, b: &OrdinalGame) -> bool {
    use solvers::Concept;
    [Concept::Pr, Concept::Wr, Concept::Br, Concept::Iesd, Concept::Yr]
        .iter()
        .all(|&c| match (solvers::solve(a, c), solvers::solve(b, c)) {
            (Ok(x), Ok(y)) => x.rounds == y.rounds,
            _ => false,
        })
}

pub fn convergence_experiment(game: &OrdinalGame, rs: &[u32]) -> Result<ConvergenceReport, RiskError> {
    if rs.is_empty() || rs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RiskError::BadIndexList);
    }
    let br_base = solvers::borgers_rationalizability(game).fixed_point().profiles();
    let mut members: Vec<MemberResult> = Vec::with_capacity(rs.len());
    let mut previous: Option<ConcaveFamilyMember> = None;
    for &r in rs {
        let member = concave_transform(game, r)?;
        let trace = solvers::rationalizability(&member.game)?;
        let family = trace.fixed_point().family().expect("action trace").sets().to_vec();
        members.push(MemberResult {
            r,
            tr_fixed_point: trace.fixed_point().profiles(),
            tr_family: family,
            degenerate: member.degenerate.clone(),
            concave_link: previous.as_ref().map(|p| link_is_concave(p, &member)),
            ordinal_traces_match: same_ordinal_traces(game, &member.game),
        });
        previous = Some(member);
    }
    let monotone = members.windows(2).all(|w| w[0].tr_fixed_point.is_subset(&w[1].tr_fixed_point));
    let within_br = members.iter().all(|m| m.tr_fixed_point.is_subset(&br_base));
    let last = &members.last().expect("nonempty").tr_fixed_point;
    let stabilized_at = members
        .iter()
        .find(|m| &m.tr_fixed_point == last)
        .map(|m| m.r)
        .expect("last member matches itself");

    let limit = limiting_game(game);
    let wr_limit_trace = solvers::wald_rationalizability(&limit.game);
    let wr_limit = wr_limit_trace.fixed_point().profiles();
    let wr_limit_round1 = wr_limit_trace.family(1).expect("action trace").sets().to_vec();
    let wr_base = solvers::wald_rationalizability(game).fixed_point().profiles();
    let sets = [last, &br_base, &wr_limit, &wr_base];
    let matrix = sets
        .iter()
        .map(|a| sets.iter().map(|b| SetRelation::between(a, b)).collect())
        .collect();
    Ok(ConvergenceReport {
        members,
        monotone,
        within_br,
        stabilized_at,
        br_base,
        wr_base,
        wr_limit,
        wr_limit_round1,
        limit,
        matrix,
    })
}

fn profiles_json(game: &OrdinalGame, set: &BTreeSet<Profile>) -> Value {
    set.iter().map(|p| game.profile_names(p)).collect::<Vec<_>>().into()
}

fn family_sets_json(game: &OrdinalGame, sets: &[BTreeSet<usize>]) -> Value {
    sets.iter()
        .enumerate()
        .map(|(i, s)| {
            let names: Vec<&str> = s.iter().map(|&a| game.action_name(i, a)).collect();
            (game.player_name(i).to_string(), json!(names))
        })
        .collect::<serde_json::Map<_, _>>()
        .into()
}

impl ConvergenceReport {
    pub fn holds(&self) -> bool {
        self.monotone
            && self.within_br
            && self.members.iter().all(|m| m.ordinal_traces_match && m.concave_link != Some(false))
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        json!({
            "members": self.members.iter().map(|m| json!({
                "r": m.r,
                "tr_fixed_point": family_sets_json(game, &m.tr_family),
                "degenerate_players": m.degenerate.iter().map(|&i| game.player_name(i)).collect::<Vec<_>>(),
                "concave_link": m.concave_link,
                "ordinal_traces_match": m.ordinal_traces_match,
            })).collect::<Vec<_>>(),
            "monotone": self.monotone,
            "within_br": self.within_br,
            "stabilized_at": self.stabilized_at,
            "br_base": profiles_json(game, &self.br_base),
            "wr_base": profiles_json(game, &self.wr_base),
            "wr_limit": profiles_json(game, &self.wr_limit),
            "wr_limit_round1": family_sets_json(game, &self.wr_limit_round1),
            "limiting_game": crate::io::game_to_value(&self.limit.game),
            "inclusion_matrix": {
                "labels": MATRIX_LABELS,
                "relations": self.matrix.iter().map(|row| row.iter().map(|r| r.tag()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rat;
    use crate::game::samples::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> Payoff {
        BigRational::new(n.into(), d.into())
    }

    fn row(g: &OrdinalGame, i: usize, a: usize) -> Vec<Payoff> {
        g.opponent_profiles(i, &crate::game::ActionSetFamily::full(g))
            .iter()
            .map(|o| g.utility(i, a, o).clone())
            .collect()
    }

    #[test]
    fn affine_member() {
        let m = concave_transform(&admissible_not_maxmin(), 1).unwrap();
        assert_eq!(row(&m.game, 0, 0), [rat(1), rat(0)]);
        assert_eq!(row(&m.game, 0, 1), [q(4, 5), q(1, 5)]);
        assert_eq!(row(&m.game, 0, 2), [q(3, 5), q(2, 5)]);
        assert_eq!(m.degenerate, [1]);
    }

    #[test]
    fn quadratic_member() {
        let m = concave_transform(&admissible_not_maxmin(), 2).unwrap();
        assert_eq!(row(&m.game, 0, 1), [q(32, 35), q(11, 35)]);
        assert_eq!(row(&m.game, 0, 2), [q(27, 35), q(20, 35)]);
    }

    #[test]
    fn links_are_concave() {
        let g = leading();
        let members: Vec<_> = [1, 2, 3, 5, 8].iter().map(|&r| concave_transform(&g, r).unwrap()).collect();
        for w in members.windows(2) {
            assert!(link_is_concave(&w[0], &w[1]));
        }
        // the reverse direction is convex, not concave
        assert!(!link_is_concave(&members[2], &members[0]));
    }

    #[test]
    fn limits_of_sample_games() {
        let l = limiting_game(&admissible_not_maxmin());
        assert_eq!(row(&l.game, 0, 0), [rat(1), rat(0)]);
        assert_eq!(row(&l.game, 0, 1), [rat(1), rat(1)]);
        assert_eq!(row(&l.game, 0, 2), [rat(1), rat(1)]);
        let l = limiting_game(&leading());
        // Bob's payoffs by his own action across Ann's rows
        let bob = |c: usize| row(&l.game, 1, c);
        assert_eq!(bob(0), [rat(1), rat(1), rat(0)]);
        assert_eq!(bob(1), [rat(1), rat(1), rat(1)]);
        assert_eq!(bob(2), [rat(1), rat(0), rat(1)]);
        assert_eq!(limiting_game(&concave_transform(&leading(), 4).unwrap().game), l);
    }

    #[test]
    fn leading_experiment() {
        let g = leading();
        let rep = convergence_experiment(&g, &[1, 2, 4, 8]).unwrap();
        assert!(rep.holds());
        for m in &rep.members {
            assert!(!m.tr_family[1].contains(&2));
        }
        assert_eq!(rep.wr_limit_round1[1].len(), 3);
        assert!(rep.wr_limit.iter().any(|p| p[1] == 2));
    }

    #[test]
    fn admissible_not_maxmin_experiment() {
        let g = admissible_not_maxmin();
        let rep = convergence_experiment(&g, &[1, 2, 4]).unwrap();
        assert!(rep.holds());
        assert!(rep.members.iter().all(|m| m.tr_fixed_point.len() == g.num_profiles()));
        assert_eq!(rep.wr_limit_round1[0].len(), 3);
        assert_eq!(rep.stabilized_at, 1);
    }

    #[test]
    fn trivial_and_invalid_inputs() {
        let g = OrdinalGame::bimatrix(["a", "b"], &["x"], &["y"], &[&[0]], &[&[0]]).unwrap();
        let rep = convergence_experiment(&g, &[1]).unwrap();
        assert_eq!(rep.members[0].tr_fixed_point, BTreeSet::from([vec![0, 0]]));
        assert!(rep.matrix.iter().flatten().all(|&r| r == SetRelation::Equal));
        assert_eq!(convergence_experiment(&g, &[2, 1]), Err(RiskError::BadIndexList));
        assert_eq!(concave_transform(&g, 0), Err(RiskError::ZeroIndex));
        assert_eq!(limiting_game(&g).degenerate, [0, 1]);
    }
}
