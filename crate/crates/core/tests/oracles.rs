//! Solvers compared against literal, brute-force readings of each definition.

mod common;

use std::collections::BTreeSet;

use common::*;
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use ordinal_games::epistemic::{Event, Pair, PossibilityStructure};
use ordinal_games::game::{rat, samples, ActionSetFamily, OrdinalGame, Payoff, Profile};
use ordinal_games::generate;
use ordinal_games::lp::{self, Constraint, LinearProgram, LpSolution, Relation};
use ordinal_games::risk;
use ordinal_games::solvers::{self, Concept};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subsets(items: &[Profile]) -> impl Iterator<Item = Vec<Profile>> + '_ {
    (1..=items.len()).flat_map(move |k| items.iter().cloned().combinations(k))
}

fn best_against(g: &OrdinalGame, i: usize, a: usize, opp: &[usize]) -> bool {
    (0..g.num_actions(i)).all(|x| g.utility(i, a, opp) >= g.utility(i, x, opp))
}

fn worst(g: &OrdinalGame, i: usize, a: usize, k: &[Profile]) -> Payoff {
    k.iter().map(|p| g.utility(i, a, p).clone()).min().unwrap()
}

fn weakly_beaten(g: &OrdinalGame, i: usize, a: usize, k: &[Profile]) -> bool {
    (0..g.num_actions(i)).any(|x| {
        k.iter().all(|p| g.utility(i, x, p) >= g.utility(i, a, p)) && k.iter().any(|p| g.utility(i, x, p) > g.utility(i, a, p))
    })
}

/// Solves a square system exactly; `None` when singular.
fn solve_square(mut m: Vec<Vec<Payoff>>, mut b: Vec<Payoff>) -> Option<Vec<Payoff>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let d = &f * &m[c][k];
                    m[r][k] -= d;
                }
                let d = &f * &b[c];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|r| &b[r] / &m[r][r]).collect())
}

/// Rows `coeffs · x >= rhs` plus one equality; vertices by brute force.
fn vertices(ge: &[(Vec<Payoff>, Payoff)], eq: Option<&(Vec<Payoff>, Payoff)>, n: usize) -> Vec<Vec<Payoff>> {
    let need = n - usize::from(eq.is_some());
    let mut out = Vec::new();
    for pick in (0..ge.len()).combinations(need) {
        let mut rows: Vec<(Vec<Payoff>, Payoff)> = pick.iter().map(|&r| ge[r].clone()).collect();
        rows.extend(eq.cloned());
        let (m, b): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        if let Some(x) = solve_square(m, b) {
            let ok = ge.iter().all(|(c, r)| dot(c, &x) >= *r) && eq.is_none_or(|(c, r)| dot(c, &x) == *r);
            if ok {
                out.push(x);
            }
        }
    }
    out
}

fn dot(a: &[Payoff], b: &[Payoff]) -> Payoff {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Some probability over `opp` makes `a` a best reply among all actions.
fn supported_by_vertex(g: &OrdinalGame, i: usize, a: usize, opp: &[Profile]) -> bool {
    let m = opp.len();
    let mut ge: Vec<(Vec<Payoff>, Payoff)> = (0..m)
        .map(|k| ((0..m).map(|j| if j == k { Payoff::one() } else { Payoff::zero() }).collect(), Payoff::zero()))
        .collect();
    for x in (0..g.num_actions(i)).filter(|&x| x != a) {
        ge.push((opp.iter().map(|p| g.utility(i, a, p) - g.utility(i, x, p)).collect(), Payoff::zero()));
    }
    let eq = (vec![Payoff::one(); m], Payoff::one());
    !vertices(&ge, Some(&eq), m).is_empty()
}

type Rule = fn(&OrdinalGame, usize, usize, &[Profile]) -> bool;

fn iterate(g: &OrdinalGame, keep: Rule) -> Vec<ActionSetFamily> {
    let mut rounds = vec![ActionSetFamily::full(g)];
    loop {
        let cur = rounds.last().unwrap().clone();
        let sets = (0..g.num_players())
            .map(|i| {
                let opp = g.opponent_profiles(i, &cur);
                cur.get(i).iter().copied().filter(|&a| keep(g, i, a, &opp)).collect()
            })
            .collect();
        let next = ActionSetFamily::new(g, sets).expect("some action survives");
        if next == cur {
            return rounds;
        }
        rounds.push(next);
    }
}

fn pr_rule(g: &OrdinalGame, i: usize, a: usize, opp: &[Profile]) -> bool {
    opp.iter().any(|p| best_against(g, i, a, p))
}

fn wr_rule(g: &OrdinalGame, i: usize, a: usize, opp: &[Profile]) -> bool {
    subsets(opp).any(|k| (0..g.num_actions(i)).all(|x| worst(g, i, a, &k) >= worst(g, i, x, &k)))
}

fn br_rule(g: &OrdinalGame, i: usize, a: usize, opp: &[Profile]) -> bool {
    subsets(opp).any(|k| !weakly_beaten(g, i, a, &k))
}

fn iesd_rule(g: &OrdinalGame, i: usize, a: usize, opp: &[Profile]) -> bool {
    !(0..g.num_actions(i)).any(|x| opp.iter().all(|p| g.utility(i, x, p) > g.utility(i, a, p)))
}

fn tr_rule(g: &OrdinalGame, i: usize, a: usize, opp: &[Profile]) -> bool {
    supported_by_vertex(g, i, a, opp)
}

fn yr_oracle(g: &OrdinalGame) -> Vec<BTreeSet<Profile>> {
    let mut rounds: Vec<BTreeSet<Profile>> = vec![g.profiles().collect()];
    loop {
        let prev = rounds.last().unwrap().clone();
        let next: BTreeSet<Profile> = prev
            .iter()
            .filter(|star| {
                (0..g.num_players()).all(|i| {
                    let own = star[i];
                    let rest = g.opponent_part(i, star);
                    let top = (0..g.num_actions(i)).map(|x| g.utility(i, x, &rest)).max().unwrap();
                    g.profiles().any(|q| {
                        q[i] == own
                            && prev.contains(&q)
                            && best_against(g, i, own, &g.opponent_part(i, &q))
                            && g.payoff(i, &q) >= top
                    })
                })
            })
            .cloned()
            .collect();
        if next == prev {
            return rounds;
        }
        rounds.push(next);
    }
}

fn solver_families(g: &OrdinalGame, c: Concept) -> Vec<ActionSetFamily> {
    let t = solvers::solve(g, c).unwrap();
    (0..=t.fixed_point_round).map(|m| t.family(m).unwrap().clone()).collect()
}

fn random_games(seed: u64, count: usize, players: usize, max_actions: usize) -> Vec<OrdinalGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = common::sample_games();
    for _ in 0..count {
        let generic = rng.gen_bool(0.5);
        out.push(random_game(&mut rng, players, max_actions, generic));
    }
    out
}

#[test]
fn action_concepts_match_brute_force() {
    let rules: [(Concept, Rule); 5] = [
        (Concept::Pr, pr_rule),
        (Concept::Wr, wr_rule),
        (Concept::Br, br_rule),
        (Concept::Iesd, iesd_rule),
        (Concept::Tr, tr_rule),
    ];
    for (k, g) in random_games(21, 150, 2, 3).iter().enumerate() {
        for (c, rule) in rules {
            assert_eq!(solver_families(g, c), iterate(g, rule), "game {k}, {c}");
        }
    }
}

#[test]
fn three_player_concepts_match_brute_force() {
    let rules: [(Concept, Rule); 4] = [
        (Concept::Pr, pr_rule),
        (Concept::Wr, wr_rule),
        (Concept::Br, br_rule),
        (Concept::Iesd, iesd_rule),
    ];
    for (k, g) in random_games(22, 40, 3, 2).iter().enumerate().skip(4) {
        for (c, rule) in rules {
            assert_eq!(solver_families(g, c), iterate(g, rule), "game {k}, {c}");
        }
    }
}

#[test]
fn wishful_thinking_matches_brute_force() {
    for (k, g) in random_games(23, 150, 2, 3).iter().chain(&random_games(24, 30, 3, 2)).enumerate() {
        let t = solvers::wishful_thinking(g);
        let got: Vec<_> = (0..=t.fixed_point_round).map(|m| t.round(m).profiles()).collect();
        assert_eq!(got, yr_oracle(g), "game {k}");
    }
}

#[test]
fn bos_wishful_rounds() {
    let g = samples::battle_of_sexes();
    let rounds = yr_oracle(&g);
    assert_eq!(rounds.len(), 2);
    assert_eq!(rounds[1], BTreeSet::from([vec![0, 0], vec![0, 1], vec![1, 1]]));
}

/// `CB^m` over explicit joint states, one state at a time.
fn naive_chain(s: &PossibilityStructure, att: &Event) -> Vec<BTreeSet<Vec<Pair>>> {
    let g = s.game();
    let n = g.num_players();
    let omega: Vec<Vec<Pair>> = (0..n).map(|i| s.omega_i(i).collect()).collect();
    let states: Vec<Vec<Pair>> = omega.iter().multi_cartesian_product().map(|v| v.into_iter().copied().collect()).collect();
    let in_att: BTreeSet<Vec<Pair>> = states.iter().filter(|w| att.contains_state(w)).cloned().collect();
    let mut levels = vec![in_att.clone()];
    loop {
        let prev = levels.last().unwrap();
        let others: Vec<Vec<usize>> = (0..n).map(|i| g.opponents(i).collect()).collect();
        let proj: Vec<BTreeSet<Vec<Pair>>> = (0..n)
            .map(|i| prev.iter().map(|v| others[i].iter().map(|&j| v[j]).collect()).collect())
            .collect();
        let believes = |i: usize, w: &[Pair]| s.pi(i, w[i].1).iter().all(|opp| proj[i].contains(opp));
        let next: BTreeSet<Vec<Pair>> = in_att
            .iter()
            .filter(|w| (0..n).all(|i| believes(i, w)))
            .cloned()
            .collect();
        if &next == prev {
            return levels;
        }
        levels.push(next);
    }
}

#[test]
fn cb_chain_matches_joint_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut structures = vec![bos_structure(), leading_structure()];
    for _ in 0..60 {
        let g = random_game(&mut rng, 2, 3, false);
        structures.push(generate::random_possibility_structure(&g, &mut rng));
    }
    for (k, s) in structures.iter().enumerate() {
        for att in [s.event_opt(), s.event_pes(), s.event_adm()] {
            let naive = naive_chain(s, &att);
            let chain = s.cb_chain(&att, Some(naive.len())).unwrap();
            for (m, level) in naive.iter().enumerate() {
                let e = chain.level(m);
                let joint: BTreeSet<Vec<Pair>> = if e.is_empty() {
                    BTreeSet::new()
                } else {
                    e.parts().iter().multi_cartesian_product().map(|v| v.into_iter().copied().collect()).collect()
                };
                assert_eq!(&joint, level, "structure {k}, level {m}");
            }
        }
    }
}

fn random_lp(rng: &mut impl Rng) -> (LinearProgram, Vec<(Vec<Payoff>, Payoff)>) {
    let n = rng.gen_range(1..=3);
    let rows = rng.gen_range(1..=4);
    let mut constraints = Vec::new();
    let mut ge = Vec::new();
    for k in 0..n {
        let unit: Vec<Payoff> = (0..n).map(|j| if j == k { rat(1) } else { rat(0) }).collect();
        ge.push((unit.clone(), rat(0)));
        ge.push((unit.iter().map(|v| -v).collect(), rat(-6)));
        constraints.push(Constraint { coeffs: unit, relation: Relation::Le, rhs: rat(6) });
    }
    for _ in 0..rows {
        let coeffs: Vec<Payoff> = (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect();
        let rhs = rat(rng.gen_range(-4..=8));
        if rng.gen_bool(0.5) {
            ge.push((coeffs.iter().map(|v| -v).collect(), -rhs.clone()));
            constraints.push(Constraint { coeffs, relation: Relation::Le, rhs });
        } else {
            ge.push((coeffs.clone(), rhs.clone()));
            constraints.push(Constraint { coeffs, relation: Relation::Ge, rhs });
        }
    }
    let objective = (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect();
    (LinearProgram { objective, constraints }, ge)
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (mut optimal, mut infeasible) = (0, 0);
    for k in 0..400 {
        let (prog, ge) = random_lp(&mut rng);
        let n = prog.objective.len();
        let best = vertices(&ge, None, n).into_iter().map(|x| dot(&prog.objective, &x)).max();
        match (lp::solve(&prog).unwrap(), best) {
            (LpSolution::Optimal { value, point }, Some(b)) => {
                assert_eq!(value, b, "lp {k}");
                assert!(point.iter().all(|x| !x.is_negative()));
                assert!(ge.iter().all(|(c, r)| dot(c, &point) >= *r), "lp {k}: infeasible point");
                optimal += 1;
            }
            (LpSolution::Infeasible, None) => infeasible += 1,
            (got, want) => panic!("lp {k}: simplex {got:?}, vertices {want:?}"),
        }
    }
    assert!(optimal > 50 && infeasible > 10, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn mixed_dominance_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for k in 0..150 {
        let g = random_game(&mut rng, 2, 3, false);
        for i in 0..2 {
            let opp = g.opponent_profiles(i, &ActionSetFamily::full(&g));
            for a in 0..g.num_actions(i) {
                let support: Vec<usize> = (0..g.num_actions(i)).filter(|&b| b != a).collect();
                if support.is_empty() {
                    continue;
                }
                let set = support.iter().copied().collect();
                let lp = ordinal_games::criteria::strictly_dominated_mixed(&g, i, a, &opp, &set).unwrap();
                assert_eq!(lp.is_some(), grid_dominated(&g, i, a, &support, 24), "game {k}, player {i}, action {a}");
                assert_eq!(lp.is_none(), supported_by_vertex(&g, i, a, &opp), "game {k}, player {i}, action {a}");
            }
        }
    }
}

#[test]
fn transform_values_by_hand() {
    // Ann's payoffs in the leading game are 1, 2 and 4, so c = 5
    let g = samples::leading();
    let m = risk::concave_transform(&g, 2).unwrap();
    let ann = |a: usize, b: usize| m.game.payoff(0, &[a, b]).clone();
    assert_eq!(ann(1, 1), q(0, 1));
    assert_eq!(ann(0, 0), q(7, 15));
    assert_eq!(ann(1, 0), q(1, 1));
    let m = risk::concave_transform(&g, 1).unwrap();
    assert_eq!(m.game.payoff(0, &[0, 0]), &q(1, 3));
    // r = 3: -64, -27, -1 rescaled by 63
    let m = risk::concave_transform(&g, 3).unwrap();
    assert_eq!(m.game.payoff(0, &[0, 0]), &q(37, 63));
}

#[test]
fn constant_player_is_degenerate() {
    let g = samples::admissible_not_maxmin();
    let m = risk::concave_transform(&g, 2).unwrap();
    assert_eq!(m.degenerate, vec![1]);
    assert!(g.profiles().all(|p| m.game.payoff(1, &p).is_zero()));
}

#[test]
fn genericity_matches_pairwise_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for k in 0..300 {
        let players = rng.gen_range(2..=3);
        let generic = rng.gen_bool(0.3);
        let g = random_game(&mut rng, players, 3, generic);
        let per: Vec<bool> = (0..players)
            .map(|i| {
                g.profiles().all(|p| {
                    (0..g.num_actions(i)).all(|x| x == p[i] || g.payoff(i, &p) != g.utility(i, x, &g.opponent_part(i, &p)))
                })
            })
            .collect();
        let got = g.is_generic();
        assert_eq!(got.per_player, per, "game {k}");
        assert_eq!(got.overall, per.iter().all(|&b| b));
    }
}
