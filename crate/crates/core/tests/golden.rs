mod common;

use std::collections::BTreeSet;

use common::*;
use ordinal_games::criteria::{self, Dominator};
use ordinal_games::epistemic::{project_actions, Attitude, KnowledgeStructure, StructureError, StructureViolation};
use ordinal_games::game::samples::*;
use ordinal_games::game::{rat, Profile};
use ordinal_games::generate;
use ordinal_games::risk;
use ordinal_games::solvers::{self, Concept, Elimination, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn col(names: &[&str], g: &ordinal_games::game::OrdinalGame, j: usize) -> Vec<Profile> {
    names.iter().map(|n| vec![g.action_index(j, n).unwrap()]).collect()
}

#[test]
fn leading_game_is_accepted() {
    let text = std::fs::read_to_string(data("leading.json")).unwrap();
    assert_eq!(ordinal_games::io::parse_game(&text).unwrap(), leading());
}

#[test]
fn optimistic_replies() {
    let g = leading();
    assert_eq!(criteria::obr_profiles(&g, 0, &col(&["L"], &g, 1)), actions(&g, 0, &["M"]));
    assert_eq!(criteria::obr_profiles(&g, 0, &col(&["L", "C", "R"], &g, 1)), actions(&g, 0, &["M"]));
}

#[test]
fn pessimistic_replies() {
    let g = leading();
    assert_eq!(criteria::pbr_profiles(&g, 0, &col(&["L", "C", "R"], &g, 1)), actions(&g, 0, &["T", "M", "D"]));
    let b = admissible_not_maxmin();
    assert_eq!(criteria::pbr_profiles(&b, 0, &col(&["L", "R"], &b, 1)), actions(&b, 0, &["D"]));
    let v = maxmin_not_mixed();
    assert_eq!(criteria::pbr_profiles(&v, 0, &col(&["L", "R"], &v, 1)), actions(&v, 0, &["M"]));
}

#[test]
fn dominance_examples() {
    let g = leading();
    let d = g.action_index(0, "D").unwrap();
    assert_eq!(criteria::weakly_dominated(&g, 0, d, &col(&["C"], &g, 1)), g.action_index(0, "T"));
    assert_eq!(criteria::admissible_set(&g, 0, &col(&["L", "C", "R"], &g, 1)), actions(&g, 0, &["T", "M"]));
    assert!(criteria::borgers_dominated(&g, 0, d, &col(&["L", "C", "R"], &g, 1)).is_dominated());

    let b = admissible_not_maxmin();
    let all = col(&["L", "R"], &b, 1);
    assert_eq!(criteria::admissible_set(&b, 0, &all), actions(&b, 0, &["T", "M", "D"]));
    assert!(!criteria::borgers_dominated(&b, 0, 1, &all).is_dominated());
    assert_eq!(criteria::strictly_dominated_mixed(&b, 0, 1, &all, &actions(&b, 0, &["T", "D"])).unwrap(), None);

    let v = maxmin_not_mixed();
    let sigma = criteria::strictly_dominated_mixed(&v, 0, 1, &col(&["L", "R"], &v, 1), &actions(&v, 0, &["T", "D"]))
        .unwrap()
        .expect("M is dominated by a mixture");
    assert_eq!(sigma.weight(0), q(1, 2));
    assert_eq!(sigma.weight(2), q(1, 2));
}

#[test]
fn point_rationalizability_examples() {
    let g = leading();
    let pr = solvers::point_rationalizability(&g);
    assert_eq!(pr.family(1), Some(&family(&g, &[&["T", "M"], &["L", "C"]])));
    assert_eq!(pr.family(2), Some(&family(&g, &[&["T", "M"], &["L"]])));
    assert_eq!(pr.family(3), Some(&family(&g, &[&["M"], &["L"]])));
    assert_eq!(pr.fixed_point_round, 3);
    let bos = battle_of_sexes();
    assert_eq!(solvers::point_rationalizability(&bos).fixed_point().profiles().len(), 4);
}

#[test]
fn wald_rationalizability_examples() {
    let g = leading();
    let wr = solvers::wald_rationalizability(&g);
    assert_eq!(wr.family(1), Some(&family(&g, &[&["T", "M", "D"], &["L", "C"]])));
    assert_eq!(wr.fixed_point_round, 1);
    let b = admissible_not_maxmin();
    assert_eq!(solvers::wald_rationalizability(&b).family(1).unwrap().get(0), &actions(&b, 0, &["T", "D"]));
    let v = maxmin_not_mixed();
    assert_eq!(solvers::wald_rationalizability(&v).family(1).unwrap().get(0), &actions(&v, 0, &["T", "M", "D"]));
}

#[test]
fn borgers_and_mixed_examples() {
    let g = leading();
    assert!(!solvers::borgers_rationalizability(&g).family(1).unwrap().get(0).contains(&2));
    let b = admissible_not_maxmin();
    assert_eq!(solvers::borgers_rationalizability(&b).family(1).unwrap().get(0).len(), 3);
    assert_eq!(solvers::rationalizability(&b).unwrap().family(1).unwrap().get(0).len(), 3);
    let v = maxmin_not_mixed();
    let tr = solvers::rationalizability(&v).unwrap();
    assert_eq!(tr.family(1).unwrap().get(0), &actions(&v, 0, &["T", "D"]));
    let witness = tr
        .justifications
        .iter()
        .find_map(|j| match &j.verdict {
            Verdict::Eliminated(Elimination::Dominated(w)) => Some(w.clone()),
            _ => None,
        })
        .unwrap();
    assert!(matches!(witness.dominator, Some(Dominator::Mixed(_))));
    assert!(witness.verify(&v));
}

#[test]
fn wishful_thinking_in_battle_of_sexes() {
    let g = battle_of_sexes();
    let yr = solvers::wishful_thinking(&g);
    assert!(yr.round(0).profiles().contains(&vec![1, 0]));
    assert!(!yr.round(1).profiles().contains(&vec![1, 0]));
    assert_eq!(yr.round(1).profiles().len(), 3);
}

#[test]
fn relation_witnesses() {
    let rel = solvers::relations(&leading()).unwrap();
    assert!(rel.violations().is_empty());
    let (round, c) = rel.counterexample(Concept::Wr, Concept::Br).unwrap();
    assert_eq!((round, c.player, c.action), (1, 0, 2));

    let rel = solvers::relations(&admissible_not_maxmin()).unwrap();
    let (_, c) = rel.counterexample(Concept::Br, Concept::Wr).unwrap();
    assert_eq!((c.player, c.action), (0, 1));

    let rel = solvers::relations(&maxmin_not_mixed()).unwrap();
    let (_, c) = rel.counterexample(Concept::Wr, Concept::Tr).unwrap();
    assert_eq!((c.player, c.action), (0, 1));
}

#[test]
fn bos_structure_events_and_chain() {
    let s = bos_structure();
    let opt = s.event_opt();
    let named = |i: usize, part: &BTreeSet<(usize, usize)>| -> BTreeSet<(String, String)> {
        part.iter()
            .map(|&(a, t)| (s.game().action_name(i, a).to_string(), s.types(i)[t].clone()))
            .collect()
    };
    let pairs = |xs: &[(&str, &str)]| xs.iter().map(|(a, t)| (a.to_string(), t.to_string())).collect::<BTreeSet<_>>();
    assert_eq!(named(0, opt.part(0)), pairs(&[("T", "t"), ("D", "t'")]));
    assert_eq!(named(1, opt.part(1)), pairs(&[("L", "s"), ("R", "s'")]));

    let chain = s.cb_chain(&opt, Some(4)).unwrap();
    for n in 0..5 {
        assert!(chain.level(n).same_set(&opt));
    }
    let all: BTreeSet<Profile> = s.game().profiles().collect();
    assert_eq!(project_actions(chain.infinity()), all);
    let rep = s.check_inclusion_theorem(Attitude::Opt).unwrap();
    assert!(rep.equal_everywhere());
}

#[test]
fn leading_structure_attitudes() {
    let s = leading_structure();
    assert_eq!(s.event_opt().part(0).len(), 3);
    assert_eq!(s.event_pes().part(0).len(), 5);
    assert!(s.check_inclusion_theorem(Attitude::Pes).unwrap().holds());
}

#[test]
fn delusional_partition_is_rejected() {
    let text = std::fs::read_to_string(data("delusional.json")).unwrap();
    let Err(StructureError::Invalid(v)) = KnowledgeStructure::parse(&text, Some(&data_dir())) else {
        panic!("structure accepted")
    };
    assert!(v.contains(&StructureViolation::Reflexivity { player: "a".into(), state: 0 }));
}

#[test]
fn wishful_thinking_excludes_dl_in_every_knowledge_structure() {
    let g = battle_of_sexes();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let k = generate::random_knowledge_structure(&g, &mut rng);
        assert!(!k.project(&k.opt_event()).contains(&vec![1, 0]));
        assert!(k.check_wt_theorem().holds());
    }
}

#[test]
fn product_structure_knows_only_the_full_event() {
    let text = std::fs::read_to_string(data("tiny_product.json")).unwrap();
    let k = KnowledgeStructure::parse(&text, Some(&data_dir())).unwrap();
    let rep = k.product_triviality_check(0).unwrap();
    assert!(rep.holds());
    assert!(rep.players.iter().all(|p| p.exhaustive));
}

#[test]
fn limiting_games() {
    let l = risk::limiting_game(&admissible_not_maxmin()).game;
    assert_eq!(l.payoff(0, &[0, 0]), &rat(1));
    assert_eq!(l.payoff(0, &[0, 1]), &rat(0));
    for a in 1..3 {
        assert_eq!(l.payoff(0, &[a, 0]), &rat(1));
        assert_eq!(l.payoff(0, &[a, 1]), &rat(1));
    }
    let l = risk::limiting_game(&leading()).game;
    let rows: Vec<Vec<_>> = (0..3).map(|a| (0..3).map(|c| l.payoff(1, &[a, c]).clone()).collect()).collect();
    assert_eq!(rows, [[rat(1), rat(1), rat(1)], [rat(1), rat(1), rat(0)], [rat(0), rat(1), rat(1)]]);
}

#[test]
fn risk_limit_examples() {
    let g = leading();
    let rep = risk::convergence_experiment(&g, &[1, 2, 4, 8]).unwrap();
    assert!(rep.members.iter().all(|m| !m.tr_family[1].contains(&2)));
    assert_eq!(rep.wr_limit_round1[1].len(), 3);
    assert!(rep.wr_limit.iter().any(|p| p[1] == 2));

    let b = admissible_not_maxmin();
    let rep = risk::convergence_experiment(&b, &[1, 2, 4]).unwrap();
    assert!(rep.members.iter().all(|m| m.tr_fixed_point.len() == 6));
    assert_eq!(rep.wr_limit_round1[0].len(), 3);
}
