//! Finite structures whose belief chains project exactly onto the rounds of
//! the matching procedure.
//!
//! For an action `a` surviving to round `m + 1` the player gets a type `a@m`
//! whose possibility set pairs each profile of the action's survival
//! certificate with the opponents' types one level down. Level 0 points to
//! a sink type per opponent. Types `a@inf` for the fixed-point survivors
//! point to each other, so they stay in every level of the chain.

use std::collections::{BTreeMap, BTreeSet};

use super::{Attitude, EpistemicError, OppState, PossibilityStructure};
use crate::game::{OrdinalGame, Profile};
use crate::solvers::{self, Certificate, EliminationTrace, Subject, Verdict};

pub const SINK: &str = "~sink";

fn certificate_belief(trace: &EliminationTrace, round: usize, i: usize, a: usize) -> Result<Vec<Profile>, EpistemicError> {
    let j = trace
        .justifications
        .iter()
        .find(|j| j.round == round && j.subject == Subject::Action { player: i, action: a })
        .ok_or_else(|| EpistemicError::Defect(format!("no justification for player {i}, action {a}, round {round}")))?;
    match &j.verdict {
        Verdict::Survives(Certificate::Point(p)) => Ok(vec![p.clone()]),
        Verdict::Survives(Certificate::Belief(k)) => Ok(k.clone()),
        other => Err(EpistemicError::Defect(format!("unexpected certificate {other:?}"))),
    }
}

/// Builds the structure and model-checks it; a mismatch is a defect.
pub fn build_witness_structure(game: &OrdinalGame, attitude: Attitude) -> Result<PossibilityStructure, EpistemicError> {
    let trace = solvers::solve(game, attitude.concept())?;
    let n = game.num_players();
    let nbar = trace.fixed_point_round;
    let family = |m: usize| trace.family(m).expect("action trace");

    // type names and lookup tables
    let mut types: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut level_type: Vec<BTreeMap<(usize, usize), usize>> = vec![BTreeMap::new(); n];
    let mut loop_type: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    let mut sink = vec![None; n];
    for i in 0..n {
        for m in 0..nbar {
            for &a in family(m + 1).get(i) {
                level_type[i].insert((a, m), types[i].len());
                types[i].push(format!("{}@{m}", game.action_name(i, a)));
            }
        }
        for &a in family(nbar).get(i) {
            loop_type[i].insert(a, types[i].len());
            types[i].push(format!("{}@inf", game.action_name(i, a)));
        }
        if nbar > 0 {
            sink[i] = Some(types[i].len());
            types[i].push(SINK.to_string());
        }
    }

    // `None` level means the fixed-point loop
    let opp_state = |i: usize, p: &Profile, level: Option<Option<usize>>| -> OppState {
        game.opponents(i)
            .zip(p)
            .map(|(j, &b)| {
                let t = match level {
                    Some(None) => sink[j].expect("sink exists below level 1"),
                    Some(Some(l)) => level_type[j][&(b, l)],
                    None => loop_type[j][&b],
                };
                (b, t)
            })
            .collect()
    };

    let mut pi: Vec<Vec<BTreeSet<OppState>>> = types.iter().map(|ts| vec![BTreeSet::new(); ts.len()]).collect();
    for i in 0..n {
        for (&(a, m), &t) in &level_type[i] {
            let below = if m == 0 { Some(None) } else { Some(Some(m - 1)) };
            for p in certificate_belief(&trace, m + 1, i, a)? {
                pi[i][t].insert(opp_state(i, &p, below));
            }
        }
        for (&a, &t) in &loop_type[i] {
            for p in certificate_belief(&trace, nbar + 1, i, a)? {
                pi[i][t].insert(opp_state(i, &p, None));
            }
        }
        if let Some(t) = sink[i] {
            let p: Profile = game
                .opponents(i)
                .map(|j| *family(nbar).get(j).iter().next().expect("nonempty fixed point"))
                .collect();
            pi[i][t].insert(opp_state(i, &p, None));
        }
    }

    let structure = PossibilityStructure::new(game.clone(), types, pi)
        .map_err(|e| EpistemicError::Defect(format!("witness structure invalid: {e}")))?;
    let report = structure.check_inclusion_theorem(attitude)?;
    if !report.equal_everywhere() {
        let bad = report
            .all_checks()
            .find(|c| c.margin != super::Margin::Equal)
            .map(|c| format!("{:?}", c.level))
            .unwrap_or_default();
        return Err(EpistemicError::Defect(format!("{attitude} witness is not tight at level {bad}")));
    }
    Ok(structure)
}
