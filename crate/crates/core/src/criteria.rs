//! Single-agent choice rules against a set of opponent profiles.
//!
//! All functions take the player index and a list of opponent profiles
//! (`A_{-i}` coordinates in player order, the player's own slot removed).
//! Action sets come back as `BTreeSet`s so that iteration follows the
//! declared action order.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::game::{nonempty_subsets, BeliefSet, OrdinalGame, Payoff, Profile};
use crate::lp::{self, Constraint, LinearProgram, LpError, LpSolution, Relation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriteriaError {
    #[error("restriction is empty")]
    EmptyRestriction,
    #[error("support contains the tested action")]
    SupportContainsAction,
    #[error(transparent)]
    Lp(#[from] LpError),
}

fn all_actions(game: &OrdinalGame, i: usize) -> BTreeSet<usize> {
    (0..game.num_actions(i)).collect()
}

/// Actions in `candidates` attaining the maximum of `score`.
fn argmax_by<F>(candidates: &BTreeSet<usize>, mut score: F) -> BTreeSet<usize>
where
    F: FnMut(usize) -> Payoff,
{
    let mut best: Option<Payoff> = None;
    let mut out = BTreeSet::new();
    for &a in candidates {
        let s = score(a);
        match &best {
            Some(b) if s < *b => {}
            Some(b) if s == *b => {
                out.insert(a);
            }
            _ => {
                best = Some(s);
                out.clear();
                out.insert(a);
            }
        }
    }
    out
}

fn best_case(game: &OrdinalGame, i: usize, a: usize, profiles: &[Profile]) -> Payoff {
    profiles
        .iter()
        .map(|p| game.utility(i, a, p))
        .max()
        .expect("nonempty belief")
        .clone()
}

fn worst_case(game: &OrdinalGame, i: usize, a: usize, profiles: &[Profile]) -> Payoff {
    profiles
        .iter()
        .map(|p| game.utility(i, a, p))
        .min()
        .expect("nonempty belief")
        .clone()
}

/// Point best replies to a single opponent profile.
pub fn argmax(game: &OrdinalGame, i: usize, opp: &[usize]) -> BTreeSet<usize> {
    argmax_by(&all_actions(game, i), |a| game.utility(i, a, opp).clone())
}

/// Optimistic (max-max) best replies.
pub fn obr(game: &OrdinalGame, i: usize, belief: &BeliefSet) -> BTreeSet<usize> {
    obr_profiles(game, i, belief.profiles())
}

pub fn obr_profiles(game: &OrdinalGame, i: usize, profiles: &[Profile]) -> BTreeSet<usize> {
    argmax_by(&all_actions(game, i), |a| best_case(game, i, a, profiles))
}

/// Pessimistic (max-min) best replies.
pub fn pbr(game: &OrdinalGame, i: usize, belief: &BeliefSet) -> BTreeSet<usize> {
    pbr_profiles(game, i, belief.profiles())
}

pub fn pbr_profiles(game: &OrdinalGame, i: usize, profiles: &[Profile]) -> BTreeSet<usize> {
    argmax_by(&all_actions(game, i), |a| worst_case(game, i, a, profiles))
}

/// `x` is at least as good as `y` everywhere on `restriction` and better somewhere.
pub fn weakly_dominates(game: &OrdinalGame, i: usize, x: usize, y: usize, restriction: &[Profile]) -> bool {
    let mut strict = false;
    for p in restriction {
        let (ux, uy) = (game.utility(i, x, p), game.utility(i, y, p));
        if ux < uy {
            return false;
        }
        strict |= ux > uy;
    }
    strict
}

pub fn strictly_dominates(game: &OrdinalGame, i: usize, x: usize, y: usize, restriction: &[Profile]) -> bool {
    !restriction.is_empty()
        && restriction
            .iter()
            .all(|p| game.utility(i, x, p) > game.utility(i, y, p))
}

/// First weak dominator of `action` in declared order, over all of `A_i`.
pub fn weakly_dominated(game: &OrdinalGame, i: usize, action: usize, restriction: &[Profile]) -> Option<usize> {
    weakly_dominated_among(game, i, action, restriction, &all_actions(game, i))
}

pub fn weakly_dominated_among(
    game: &OrdinalGame,
    i: usize,
    action: usize,
    restriction: &[Profile],
    dominators: &BTreeSet<usize>,
) -> Option<usize> {
    dominators
        .iter()
        .copied()
        .find(|&d| d != action && weakly_dominates(game, i, d, action, restriction))
}

/// Actions not weakly dominated relative to `restriction`.
pub fn admissible_set(game: &OrdinalGame, i: usize, restriction: &[Profile]) -> BTreeSet<usize> {
    admissible_set_among(game, i, restriction, &all_actions(game, i))
}

/// Members of `actions` not weakly dominated by another member.
pub fn admissible_set_among(
    game: &OrdinalGame,
    i: usize,
    restriction: &[Profile],
    actions: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    actions
        .iter()
        .copied()
        .filter(|&a| weakly_dominated_among(game, i, a, restriction, actions).is_none())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BorgersVerdict {
    /// One weak dominator for every nonempty subset, in canonical subset order.
    Dominated { per_subset: Vec<(Vec<Profile>, usize)> },
    /// First subset (canonical order) relative to which the action is admissible.
    Admissible { subset: Vec<Profile> },
}

impl BorgersVerdict {
    pub fn is_dominated(&self) -> bool {
        matches!(self, BorgersVerdict::Dominated { .. })
    }
}

pub fn borgers_dominated(game: &OrdinalGame, i: usize, action: usize, restriction: &[Profile]) -> BorgersVerdict {
    borgers_dominated_among(game, i, action, restriction, &all_actions(game, i))
}

pub fn borgers_dominated_among(
    game: &OrdinalGame,
    i: usize,
    action: usize,
    restriction: &[Profile],
    dominators: &BTreeSet<usize>,
) -> BorgersVerdict {
    let mut sorted = restriction.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut per_subset = Vec::new();
    for subset in nonempty_subsets(&sorted) {
        match weakly_dominated_among(game, i, action, &subset, dominators) {
            Some(d) => per_subset.push((subset, d)),
            None => return BorgersVerdict::Admissible { subset },
        }
    }
    BorgersVerdict::Dominated { per_subset }
}

/// First pure action strictly better than `action` on every profile.
pub fn strictly_dominated_pure(game: &OrdinalGame, i: usize, action: usize, restriction: &[Profile]) -> Option<usize> {
    strictly_dominated_pure_among(game, i, action, restriction, &all_actions(game, i))
}

pub fn strictly_dominated_pure_among(
    game: &OrdinalGame,
    i: usize,
    action: usize,
    restriction: &[Profile],
    dominators: &BTreeSet<usize>,
) -> Option<usize> {
    dominators
        .iter()
        .copied()
        .find(|&d| d != action && strictly_dominates(game, i, d, action, restriction))
}

/// A probability distribution over some of a player's actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedAction {
    owner: usize,
    weights: BTreeMap<usize, Payoff>,
}

impl MixedAction {
    /// Zero weights are dropped. Fails unless the weights are nonnegative and sum to one.
    pub fn new(owner: usize, weights: BTreeMap<usize, Payoff>) -> Option<Self> {
        if weights.values().any(Signed::is_negative) {
            return None;
        }
        let total: Payoff = weights.values().sum();
        if !total.is_one() {
            return None;
        }
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Some(MixedAction { owner, weights })
    }

    pub fn pure(owner: usize, action: usize) -> Self {
        MixedAction {
            owner,
            weights: BTreeMap::from([(action, Payoff::one())]),
        }
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn weights(&self) -> &BTreeMap<usize, Payoff> {
        &self.weights
    }

    pub fn weight(&self, action: usize) -> Payoff {
        self.weights.get(&action).cloned().unwrap_or_else(Payoff::zero)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.weights.keys().copied().collect()
    }

    pub fn expected(&self, game: &OrdinalGame, opp: &[usize]) -> Payoff {
        self.weights
            .iter()
            .map(|(&a, w)| w * game.utility(self.owner, a, opp))
            .sum()
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        let mut map = serde_json::Map::new();
        for (&a, w) in &self.weights {
            map.insert(
                game.action_name(self.owner, a).to_string(),
                Value::String(crate::game::format_payoff(w)),
            );
        }
        Value::Object(map)
    }
}

fn dominance_lp(
    game: &OrdinalGame,
    i: usize,
    action: usize,
    restriction: &[Profile],
    support: &[usize],
) -> LinearProgram {
    // variables: sigma_1..sigma_k, e_plus, e_minus
    let k = support.len();
    let mut objective = vec![Payoff::zero(); k + 2];
    objective[k] = Payoff::one();
    objective[k + 1] = -Payoff::one();
    let mut constraints: Vec<Constraint> = restriction
        .iter()
        .map(|p| {
            let mut coeffs: Vec<Payoff> = support.iter().map(|&a| game.utility(i, a, p).clone()).collect();
            coeffs.push(-Payoff::one());
            coeffs.push(Payoff::one());
            Constraint {
                coeffs,
                relation: Relation::Ge,
                rhs: game.utility(i, action, p).clone(),
            }
        })
        .collect();
    let mut sum = vec![Payoff::one(); k];
    sum.extend([Payoff::zero(), Payoff::zero()]);
    constraints.push(Constraint {
        coeffs: sum,
        relation: Relation::Eq,
        rhs: Payoff::one(),
    });
    LinearProgram { objective, constraints }
}

/// Strict dominance of `action` by a mixture over `support`, decided by an
/// exact linear program maximizing the uniform slack.
pub fn strictly_dominated_mixed(
    game: &OrdinalGame,
    i: usize,
    action: usize,
    restriction: &[Profile],
    support: &BTreeSet<usize>,
) -> Result<Option<MixedAction>, CriteriaError> {
    if restriction.is_empty() {
        return Err(CriteriaError::EmptyRestriction);
    }
    if support.contains(&action) {
        return Err(CriteriaError::SupportContainsAction);
    }
    if support.is_empty() {
        return Ok(None);
    }
    let support: Vec<usize> = support.iter().copied().collect();
    let program = dominance_lp(game, i, action, restriction, &support);
    match lp::solve(&program)? {
        LpSolution::Optimal { value, point } => {
            if !value.is_positive() {
                return Ok(None);
            }
            let weights = support.iter().copied().zip(point).collect();
            let sigma = MixedAction::new(i, weights)
                .ok_or_else(|| LpError::Defect("mixture weights do not form a distribution".into()))?;
            if !mixed_strictly_dominates(game, &sigma, action, restriction) {
                return Err(LpError::Defect("returned mixture fails re-verification".into()).into());
            }
            Ok(Some(sigma))
        }
        other => Err(LpError::Defect(format!("dominance program ended as {other:?}")).into()),
    }
}

pub fn mixed_strictly_dominates(game: &OrdinalGame, sigma: &MixedAction, action: usize, restriction: &[Profile]) -> bool {
    !restriction.is_empty()
        && restriction
            .iter()
            .all(|p| sigma.expected(game, p) > *game.utility(sigma.owner, action, p))
}

/// A probability belief over `restriction` against which `action` does at
/// least as well as every member of `rivals`. Exists exactly when no mixture
/// over `rivals` strictly dominates `action`.
pub fn supporting_probability(
    game: &OrdinalGame,
    i: usize,
    action: usize,
    restriction: &[Profile],
    rivals: &BTreeSet<usize>,
) -> Result<Option<Vec<(Profile, Payoff)>>, CriteriaError> {
    if restriction.is_empty() {
        return Err(CriteriaError::EmptyRestriction);
    }
    let n = restriction.len();
    let mut constraints: Vec<Constraint> = rivals
        .iter()
        .filter(|&&r| r != action)
        .map(|&r| Constraint {
            coeffs: restriction
                .iter()
                .map(|p| game.utility(i, action, p) - game.utility(i, r, p))
                .collect(),
            relation: Relation::Ge,
            rhs: Payoff::zero(),
        })
        .collect();
    constraints.push(Constraint {
        coeffs: vec![Payoff::one(); n],
        relation: Relation::Eq,
        rhs: Payoff::one(),
    });
    let program = LinearProgram {
        objective: vec![Payoff::zero(); n],
        constraints,
    };
    match lp::solve(&program)? {
        LpSolution::Optimal { point, .. } => Ok(Some(restriction.iter().cloned().zip(point).collect())),
        LpSolution::Infeasible => Ok(None),
        LpSolution::Unbounded => Err(LpError::Defect("feasibility program unbounded".into()).into()),
    }
}

/// Checks a belief returned by [`supporting_probability`].
pub fn verify_supporting_probability(
    game: &OrdinalGame,
    i: usize,
    action: usize,
    belief: &[(Profile, Payoff)],
    rivals: &BTreeSet<usize>,
) -> bool {
    if belief.iter().any(|(_, w)| w.is_negative()) {
        return false;
    }
    if !belief.iter().map(|(_, w)| w).sum::<Payoff>().is_one() {
        return false;
    }
    let eu = |a: usize| -> Payoff { belief.iter().map(|(p, w)| w * game.utility(i, a, p)).sum() };
    let own = eu(action);
    rivals.iter().all(|&r| eu(r) <= own)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceKind {
    WeakPure,
    StrictPure,
    StrictMixed,
    Borgers,
}

impl DominanceKind {
    pub fn tag(self) -> &'static str {
        match self {
            DominanceKind::WeakPure => "weak-pure",
            DominanceKind::StrictPure => "strict-pure",
            DominanceKind::StrictMixed => "strict-mixed",
            DominanceKind::Borgers => "borgers",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dominator {
    Pure(usize),
    Mixed(MixedAction),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceWitness {
    pub kind: DominanceKind,
    pub player: usize,
    pub dominated: usize,
    /// Absent for Börgers witnesses, which carry `per_subset` instead.
    pub dominator: Option<Dominator>,
    pub reference: Vec<Profile>,
    pub per_subset: Vec<(Vec<Profile>, usize)>,
}

impl DominanceWitness {
    pub fn pure(kind: DominanceKind, player: usize, dominated: usize, dominator: usize, reference: Vec<Profile>) -> Self {
        DominanceWitness {
            kind,
            player,
            dominated,
            dominator: Some(Dominator::Pure(dominator)),
            reference,
            per_subset: Vec::new(),
        }
    }

    pub fn mixed(player: usize, dominated: usize, sigma: MixedAction, reference: Vec<Profile>) -> Self {
        DominanceWitness {
            kind: DominanceKind::StrictMixed,
            player,
            dominated,
            dominator: Some(Dominator::Mixed(sigma)),
            reference,
            per_subset: Vec::new(),
        }
    }

    pub fn borgers(player: usize, dominated: usize, reference: Vec<Profile>, per_subset: Vec<(Vec<Profile>, usize)>) -> Self {
        DominanceWitness {
            kind: DominanceKind::Borgers,
            player,
            dominated,
            dominator: None,
            reference,
            per_subset,
        }
    }

    /// Re-checks the witness by direct payoff comparisons.
    pub fn verify(&self, game: &OrdinalGame) -> bool {
        let i = self.player;
        if self.reference.is_empty() {
            return false;
        }
        match (self.kind, &self.dominator) {
            (DominanceKind::WeakPure, Some(Dominator::Pure(d))) => {
                weakly_dominates(game, i, *d, self.dominated, &self.reference)
            }
            (DominanceKind::StrictPure, Some(Dominator::Pure(d))) => {
                strictly_dominates(game, i, *d, self.dominated, &self.reference)
            }
            (DominanceKind::StrictMixed, Some(Dominator::Mixed(sigma))) => {
                sigma.owner == i
                    && !sigma.weights.contains_key(&self.dominated)
                    && mixed_strictly_dominates(game, sigma, self.dominated, &self.reference)
            }
            (DominanceKind::Borgers, None) => {
                let reference: BTreeSet<&Profile> = self.reference.iter().collect();
                let subsets: BTreeSet<&Vec<Profile>> = self.per_subset.iter().map(|(s, _)| s).collect();
                let expected = (1usize << reference.len().min(63)) - 1;
                subsets.len() == self.per_subset.len()
                    && self.per_subset.len() == expected
                    && self.per_subset.iter().all(|(s, d)| {
                        !s.is_empty()
                            && s.iter().all(|p| reference.contains(p))
                            && weakly_dominates(game, i, *d, self.dominated, s)
                    })
            }
            _ => false,
        }
    }

    pub fn to_json(&self, game: &OrdinalGame) -> Value {
        let i = self.player;
        let profiles = |ps: &[Profile]| -> Value {
            ps.iter()
                .map(|p| json!(game.opponent_profile_names(i, p)))
                .collect()
        };
        let dominator = match &self.dominator {
            Some(Dominator::Pure(d)) => json!(game.action_name(i, *d)),
            Some(Dominator::Mixed(sigma)) => sigma.to_json(game),
            None => Value::Null,
        };
        let mut out = json!({
            "kind": self.kind.tag(),
            "player": game.player_name(i),
            "dominated": game.action_name(i, self.dominated),
            "dominator": dominator,
            "reference": profiles(&self.reference),
        });
        if self.kind == DominanceKind::Borgers {
            out["per_subset"] = self
                .per_subset
                .iter()
                .map(|(s, d)| json!({"subset": profiles(s), "dominator": game.action_name(i, *d)}))
                .collect();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::samples::*;
    use crate::game::rat;

    fn q(n: i64, d: i64) -> Payoff {
        Payoff::new(n.into(), d.into())
    }

    fn opp(ps: &[usize]) -> Vec<Profile> {
        ps.iter().map(|&p| vec![p]).collect()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    const T: usize = 0;
    const M: usize = 1;
    const D: usize = 2;
    const L: usize = 0;
    const C: usize = 1;
    const R: usize = 2;

    #[test]
    fn optimistic_and_pessimistic_replies() {
        let g = leading();
        let b = |ps: &[usize]| BeliefSet::new(&g, 0, opp(ps)).unwrap();
        assert_eq!(obr(&g, 0, &b(&[L])), set(&[M]));
        assert_eq!(obr(&g, 0, &b(&[L, C, R])), set(&[M]));
        assert_eq!(pbr(&g, 0, &b(&[L, C, R])), set(&[T, M, D]));
        let g = admissible_not_maxmin();
        assert_eq!(pbr_profiles(&g, 0, &opp(&[0, 1])), set(&[D]));
        let g = maxmin_not_mixed();
        assert_eq!(pbr_profiles(&g, 0, &opp(&[0, 1])), set(&[M]));
    }

    #[test]
    fn weak_dominators() {
        let g = leading();
        assert_eq!(weakly_dominated(&g, 0, D, &opp(&[C])), Some(T));
        assert_eq!(weakly_dominated(&g, 0, D, &opp(&[L])), Some(M));
        assert_eq!(weakly_dominated(&g, 0, M, &opp(&[L])), None);
    }

    #[test]
    fn admissible_sets() {
        let g = leading();
        assert_eq!(admissible_set(&g, 0, &opp(&[L, C, R])), set(&[T, M]));
        let g = admissible_not_maxmin();
        assert_eq!(admissible_set(&g, 0, &opp(&[0, 1])), set(&[T, M, D]));
    }

    #[test]
    fn borgers_examples() {
        let g = leading();
        let v = borgers_dominated(&g, 0, D, &opp(&[L, C, R]));
        let BorgersVerdict::Dominated { per_subset } = &v else { panic!("{v:?}") };
        assert_eq!(per_subset.len(), 7);
        let w = DominanceWitness::borgers(0, D, opp(&[L, C, R]), per_subset.clone());
        assert!(w.verify(&g));
        let g = admissible_not_maxmin();
        assert_eq!(
            borgers_dominated(&g, 0, M, &opp(&[0, 1])),
            BorgersVerdict::Admissible { subset: opp(&[0, 1]) }
        );
    }

    #[test]
    fn strict_pure_examples() {
        let g = leading();
        let all_a: Vec<Profile> = opp(&[T, M, D]);
        assert_eq!(strictly_dominated_pure(&g, 1, R, &all_a), Some(C));
        assert_eq!(strictly_dominated_pure(&g, 0, D, &opp(&[L, C, R])), None);
    }

    #[test]
    fn mixed_examples() {
        let g = maxmin_not_mixed();
        let sigma = strictly_dominated_mixed(&g, 0, M, &opp(&[0, 1]), &set(&[T, D]))
            .unwrap()
            .unwrap();
        assert_eq!(sigma.weight(T), q(1, 2));
        assert_eq!(sigma.weight(D), q(1, 2));

        let g = admissible_not_maxmin();
        assert_eq!(strictly_dominated_mixed(&g, 0, M, &opp(&[0, 1]), &set(&[T, D])).unwrap(), None);

        let g = leading();
        let sigma = strictly_dominated_mixed(&g, 0, D, &opp(&[L, C, R]), &set(&[T, M]))
            .unwrap()
            .unwrap();
        let t = sigma.weight(T);
        assert!(t > q(1, 2) && t < rat(1));
        assert_eq!(t, q(3, 4));
        let w = DominanceWitness::mixed(0, D, sigma, opp(&[L, C, R]));
        assert!(w.verify(&g));
    }

    #[test]
    fn mixed_rejects_bad_inputs() {
        let g = leading();
        assert_eq!(
            strictly_dominated_mixed(&g, 0, D, &[], &set(&[T])),
            Err(CriteriaError::EmptyRestriction)
        );
        assert_eq!(
            strictly_dominated_mixed(&g, 0, D, &opp(&[L]), &set(&[D])),
            Err(CriteriaError::SupportContainsAction)
        );
        assert_eq!(strictly_dominated_mixed(&g, 0, D, &opp(&[L]), &set(&[])), Ok(None));
    }

    #[test]
    fn singleton_support_matches_pure() {
        let g = leading();
        for i in 0..2 {
            let restriction: Vec<Profile> = (0..3).map(|x| vec![x]).collect();
            for a in 0..3 {
                for d in (0..3).filter(|&d| d != a) {
                    let mixed = strictly_dominated_mixed(&g, i, a, &restriction, &set(&[d])).unwrap();
                    assert_eq!(mixed.is_some(), strictly_dominates(&g, i, d, a, &restriction));
                }
            }
        }
    }

    #[test]
    fn supporting_probability_is_dual() {
        let g = maxmin_not_mixed();
        let r = opp(&[0, 1]);
        assert_eq!(supporting_probability(&g, 0, M, &r, &set(&[T, D])).unwrap(), None);
        let mu = supporting_probability(&g, 0, T, &r, &set(&[M, D])).unwrap().unwrap();
        assert!(verify_supporting_probability(&g, 0, T, &mu, &set(&[M, D])));
    }

    #[test]
    fn witness_rejects_tampering() {
        let g = leading();
        let w = DominanceWitness::pure(DominanceKind::StrictPure, 1, R, C, opp(&[T, M, D]));
        assert!(w.verify(&g));
        let bad = DominanceWitness::pure(DominanceKind::StrictPure, 1, C, R, opp(&[T, M, D]));
        assert!(!bad.verify(&g));
        let json = w.to_json(&g);
        assert_eq!(json["dominator"], "C");
        assert_eq!(json["reference"][0][0], "T");
    }
}
