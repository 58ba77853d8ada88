mod common;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use ordinal_games::epistemic::{Attitude, KnowledgeStructure, PossibilityStructure};
use ordinal_games::game::OrdinalGame;
use ordinal_games::generate::{self, GeneratorConfig};
use ordinal_games::io;
use ordinal_games::risk;
use ordinal_games::solvers;
use ordinal_games::suite::ORDINAL_CONCEPTS;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn game_strategy(max_players: usize, max_actions: usize) -> impl Strategy<Value = OrdinalGame> {
    (prop::collection::vec(1..=max_actions, 2..=max_players), any::<u64>(), any::<bool>(), 1i64..=9).prop_map(
        |(actions, seed, generic, max)| {
            let mut c = GeneratorConfig::new(seed, actions.clone());
            c.max_payoff = max.max(actions.iter().copied().max().unwrap() as i64 - 1);
            c.generic = generic;
            generate::random_game(&c).unwrap()
        },
    )
}

fn with_rng<S: Strategy>(s: S) -> impl Strategy<Value = (S::Value, ChaCha8Rng)> {
    (s, any::<u64>()).prop_map(|(v, seed)| (v, ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn game_round_trip(g in game_strategy(3, 3)) {
        prop_assert_eq!(io::parse_game(&io::write_game(&g)).unwrap(), g);
    }

    #[test]
    fn structure_round_trips((g, mut rng) in with_rng(game_strategy(2, 3))) {
        let s = generate::random_possibility_structure(&g, &mut rng);
        prop_assert_eq!(PossibilityStructure::parse(&s.to_json_string(), None).unwrap(), s);
        let k = generate::random_knowledge_structure(&g, &mut rng);
        prop_assert_eq!(KnowledgeStructure::parse(&k.to_json_string(), None).unwrap(), k);
    }

    #[test]
    fn traces_are_ordinal((g, mut rng) in with_rng(game_strategy(3, 3))) {
        let h = generate::random_monotone_transform(&g, &mut rng);
        prop_assert!(g.ordinal_equivalent(&h).unwrap());
        for c in ORDINAL_CONCEPTS {
            prop_assert_eq!(solvers::solve(&g, c).unwrap().rounds, solvers::solve(&h, c).unwrap().rounds, "{}", c);
        }
    }

    #[test]
    fn concept_inclusions_hold(g in game_strategy(3, 3)) {
        let rel = solvers::relations(&g).unwrap();
        let bad: Vec<_> = rel.violations().iter().map(|c| c.name).collect();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn every_trace_verifies(g in game_strategy(2, 3)) {
        for c in solvers::Concept::ALL {
            let t = solvers::solve(&g, c).unwrap();
            prop_assert!(solvers::verify_trace(&g, &t).is_ok(), "{}", c);
        }
    }

    #[test]
    fn knowledge_operator_laws(
        (g, mut rng) in with_rng(game_strategy(2, 3)),
        masks in prop::collection::vec(any::<u8>(), 2),
    ) {
        let k = generate::random_knowledge_structure(&g, &mut rng);
        let n = k.states().len();
        let event = |m: u8| -> BTreeSet<usize> { (0..n).filter(|w| m >> (w % 8) & 1 == 1).collect() };
        let (e, f) = (event(masks[0]), event(masks[1]));
        let union: BTreeSet<usize> = e.union(&f).copied().collect();
        let meet: BTreeSet<usize> = e.intersection(&f).copied().collect();
        for i in 0..g.num_players() {
            let ke = k.knowledge_operator(i, &e);
            prop_assert!(ke.is_subset(&e));
            prop_assert!(ke.is_subset(&k.knowledge_operator(i, &union)));
            prop_assert_eq!(&k.knowledge_operator(i, &ke), &ke);
            let both: BTreeSet<usize> = ke.intersection(&k.knowledge_operator(i, &f)).copied().collect();
            prop_assert_eq!(k.knowledge_operator(i, &meet), both);
            prop_assert_eq!(k.knowledge_operator(i, &k.all_states()), k.all_states());
        }
        let chain = k.ck_chain(&e, None);
        for w in chain.levels.windows(2) {
            prop_assert!(w[1].is_subset(&w[0]));
        }
    }

    #[test]
    fn wishful_thinking_inclusion((g, mut rng) in with_rng(game_strategy(2, 3))) {
        let k = generate::random_knowledge_structure(&g, &mut rng);
        prop_assert!(k.check_wt_theorem().holds());
    }

    #[test]
    fn cb_chain_decreases((g, mut rng) in with_rng(game_strategy(2, 3))) {
        let s = generate::random_possibility_structure(&g, &mut rng);
        for att in Attitude::ALL {
            let chain = s.cb_chain(&s.attitude_event(att), None).unwrap();
            for w in chain.levels.windows(2) {
                prop_assert!(w[1].is_subset(&w[0]), "{}", att.tag());
            }
            prop_assert!(s.check_inclusion_theorem(att).unwrap().holds(), "{}", att.tag());
        }
    }

    #[test]
    fn transforms_are_normalized(g in game_strategy(3, 3), r in 1u32..=8) {
        let m = risk::concave_transform(&g, r).unwrap();
        for i in 0..g.num_players() {
            let table = m.game.payoff_table(i);
            prop_assert!(table.iter().all(|v| *v >= Zero::zero() && *v <= One::one()));
        }
        prop_assert_eq!(risk::limiting_game(&m.game).game, risk::limiting_game(&g).game);
    }

    #[test]
    fn family_links_are_concave(g in game_strategy(2, 3), r in 1u32..=6) {
        let lo = risk::concave_transform(&g, r).unwrap();
        let hi = risk::concave_transform(&g, 2 * r).unwrap();
        prop_assert!(risk::link_is_concave(&lo, &hi));
    }
}
