use std::collections::BTreeSet;

use proptest::prelude::*;

use nondec::encodings::{encode_graph, parse_cnf, parse_graph, Graph};
use nondec::nondet::{decoder_for, guess_and_verify, run_nondet, ExplorationOrder};
use nondec::problems::{canonicalize_solution, ProblemId, NO};
use nondec::reductions::{
    apply_polyreduction, check_polyreduction, directed_to_undirected, hamcycled_to_hamcycle,
    sat_search_via_oracle, DecisionOracle,
};
use nondec::solvers::{check_solution, enumerate_solutions};
use nondec::verifiers::{verifier_for, verify, Verdict};
use nondec::StepBudget;

const NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

fn graph_strategy(max_vertices: usize, directed: bool) -> impl Strategy<Value = String> {
    (1..=max_vertices).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| if directed { i != j } else { i < j })
            .collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            let mut g = Graph::new(directed);
            for v in &NAMES[..n] {
                g.add_vertex(v.to_string()).unwrap();
            }
            for (&(i, j), keep) in pairs.iter().zip(mask) {
                if keep {
                    g.add_edge(NAMES[i].to_string(), NAMES[j].to_string())
                        .unwrap();
                }
            }
            encode_graph(&g)
        })
    })
}

fn cnf_strategy() -> impl Strategy<Value = String> {
    let literal = (0..4usize, any::<bool>())
        .prop_map(|(v, neg)| format!("{}{}", if neg { "!" } else { "" }, ["p", "q", "r", "s"][v]));
    let clause = proptest::collection::vec(literal, 1..4).prop_map(|lits| lits.join(","));
    proptest::collection::vec(clause, 0..6).prop_map(|cs| cs.join(" "))
}

/// Strings a careless verifier might accept: shuffled vertex lists,
/// truncations and near-misses.
fn candidate_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        proptest::collection::vec(proptest::sample::select(NAMES.to_vec()), 0..7)
            .prop_map(|vs| vs.join(",")),
        "[abcde, ]{0,8}",
        Just("yes".to_string()),
        Just("no".to_string()),
    ]
}

fn b() -> StepBudget {
    StepBudget::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn accepted_hamcycle_solutions_are_correct(w in graph_strategy(5, false), s in candidate_strategy(), h in candidate_strategy()) {
        let v = verifier_for(ProblemId::HamCycle);
        if verify(&v, &w, &s, &h, b()).unwrap() == Verdict::Yes {
            prop_assert!(check_solution(ProblemId::HamCycle, &w, &s).unwrap());
        }
    }

    #[test]
    fn accepted_edges_lie_on_cycles(w in graph_strategy(5, false), s in candidate_strategy(), h in candidate_strategy()) {
        let v = verifier_for(ProblemId::HamCycleEdge);
        if verify(&v, &w, &s, &h, b()).unwrap() == Verdict::Yes {
            prop_assert!(check_solution(ProblemId::HamCycleEdge, &w, &s).unwrap());
        }
    }

    #[test]
    fn every_cycle_is_accepted(w in graph_strategy(5, false)) {
        let v = verifier_for(ProblemId::HamCycle);
        for s in enumerate_solutions(ProblemId::HamCycle, &w, b()).unwrap().positive_members() {
            prop_assert_eq!(verify(&v, &w, &s, "", b()).unwrap(), Verdict::Yes);
        }
    }

    #[test]
    fn accepted_assignments_satisfy(w in cnf_strategy(), bits in proptest::collection::vec(any::<bool>(), 4)) {
        let f = parse_cnf(&w).unwrap();
        let s = f.variables().iter().zip(&bits)
            .map(|(v, &b)| format!("{v}={}", u8::from(b)))
            .collect::<Vec<_>>()
            .join(" ");
        let verdict = verify(&verifier_for(ProblemId::Sat), &w, &s, "", b()).unwrap();
        prop_assert_eq!(verdict == Verdict::Yes, check_solution(ProblemId::Sat, &w, &s).unwrap());
    }

    #[test]
    fn factor_verifier_matches_divisibility(m in 0u64..2000, d in 0u64..2000) {
        let w = m.to_string();
        let s = d.to_string();
        let verdict = verify(&verifier_for(ProblemId::Factor), &w, &s, "", b()).unwrap();
        prop_assert_eq!(verdict == Verdict::Yes, d >= 2 && d < m && m % d == 0);
    }

    #[test]
    fn exploration_order_is_irrelevant(w in graph_strategy(5, false)) {
        let np = guess_and_verify(&verifier_for(ProblemId::HamCycle), &decoder_for(ProblemId::HamCycle));
        let runs: Vec<_> = ExplorationOrder::ALL.iter().map(|&o| run_nondet(&np, &w, o).unwrap()).collect();
        prop_assert_eq!(&runs[0], &runs[1]);
        prop_assert_eq!(&runs[0], &runs[2]);
    }

    #[test]
    fn guess_and_verify_finds_exactly_the_cycles(w in graph_strategy(4, true)) {
        let p = ProblemId::DirectedHamCycle;
        let np = guess_and_verify(&verifier_for(p), &decoder_for(p));
        let leaves: BTreeSet<String> = run_nondet(&np, &w, ExplorationOrder::Sequential).unwrap()
            .accepting_outputs()
            .map(|o| canonicalize_solution(p, o))
            .collect();
        prop_assert_eq!(leaves, enumerate_solutions(p, &w, b()).unwrap().positive_members());
    }

    #[test]
    fn composition_is_sequential_application(w in graph_strategy(4, true)) {
        let first = directed_to_undirected();
        let second = hamcycled_to_hamcycle();
        let composed = first.then(&second).unwrap();
        let stepwise = apply_polyreduction(&second, &apply_polyreduction(&first, &w).unwrap()).unwrap();
        prop_assert_eq!(apply_polyreduction(&composed, &w).unwrap(), stepwise);
    }

    #[test]
    fn sat_self_reduction_agrees_with_brute_force(w in cnf_strategy()) {
        let f = parse_cnf(&w).unwrap();
        let mut oracle = DecisionOracle::exact(ProblemId::SatD, b());
        let answer = sat_search_via_oracle(&f, &mut oracle).unwrap();
        let solutions = enumerate_solutions(ProblemId::Sat, &w, b()).unwrap();
        prop_assert!(solutions.contains(&answer));
        prop_assert!(oracle.call_count() <= f.variables().len() as u64 + 1);
    }
}

#[test]
fn composed_gadget_reduction_checks_on_digraphs() {
    let composed = directed_to_undirected()
        .then(&hamcycled_to_hamcycle())
        .unwrap();
    let space = nondec::spaces::graphs_up_to(4, true);
    let report = check_polyreduction(&composed, &space, b()).unwrap();
    assert!(report.passes(), "{}", report.summary());
}

#[test]
fn gadget_preserves_vertex_and_edge_counts() {
    for w in nondec::spaces::graphs_up_to(3, true) {
        let g = parse_graph(&w, true).unwrap();
        let mapped = apply_polyreduction(&directed_to_undirected(), &w).unwrap();
        let h = parse_graph(&mapped, false).unwrap();
        assert_eq!(h.vertex_count(), 3 * g.vertex_count());
        assert_eq!(h.edge_count(), 2 * g.vertex_count() + g.edge_count());
    }
}

#[test]
fn tight_budgets_never_change_answers_silently() {
    // A run either finishes with the true answer or reports exhaustion.
    let w = "a,b a,c a,d b,c b,d c,d";
    let full = enumerate_solutions(ProblemId::HamCycle, w, b()).unwrap();
    for steps in 1..200 {
        match enumerate_solutions(ProblemId::HamCycle, w, StepBudget::new(steps)) {
            Ok(set) => assert_eq!(set, full, "{steps} steps"),
            Err(_) => continue,
        }
    }
    let v = verifier_for(ProblemId::HamCycle);
    for steps in 1..40 {
        if let Ok(verdict) = verify(&v, w, "a,b,c,d", "", StepBudget::new(steps)) {
            assert_eq!(verdict, Verdict::Yes);
        }
    }
    assert_ne!(
        enumerate_solutions(ProblemId::Factor, "29", b())
            .unwrap()
            .iter()
            .next()
            .map(String::as_str),
        Some("29")
    );
    assert!(enumerate_solutions(ProblemId::Factor, "29", b())
        .unwrap()
        .contains(NO));
}
