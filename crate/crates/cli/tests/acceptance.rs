//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nondec::encodings::{parse_cnf, parse_graph};
use nondec::nondet::{
    decoder_for, guess_and_verify, run_nondet, scaling_report, ExplorationOrder, Family, Growth,
    Runner,
};
use nondec::problems::{canonicalize_solution, ProblemId, NO};
use nondec::reductions::{
    check_general_reduction, check_polyreduction, directed_to_undirected,
    directed_to_undirected_general, factor_search_via_oracle, hamcycle_identity,
    hamcycle_search_via_oracle, hamcycled_to_hamcycle, sat_search_via_oracle, DecisionOracle,
};
use nondec::solvers::{check_solution, enumerate_solutions, is_positive, Program};
use nondec::spaces::{cnfs_up_to, desk_scale, graphs_on, graphs_up_to};
use nondec::verifiers::{
    adversarial_verifier, check_verifier_axioms, verifier_for, verify, AdversarialKind,
    AxiomConfig, Verdict,
};
use nondec::StepBudget;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn budget() -> StepBudget {
    StepBudget::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn worked_examples() -> Check {
    let cases = [
        (ProblemId::Factor, "35", set(&["5", "7"])),
        (ProblemId::Factor, "29", set(&["no"])),
        (ProblemId::HamCycle, "a,b b,c c,a", set(&["a,b,c"])),
    ];
    for (p, w, expected) in &cases {
        let got = enumerate_solutions(*p, w, budget()).map_err(|e| e.to_string())?;
        ensure(got.as_set() == expected, || format!("{p}({w:?}) = {got:?}"))?;
    }
    Ok("Factor(35)={5,7}, Factor(29)={no}, HamCycle(triangle)={a,b,c}".into())
}

fn verifier_axioms() -> Check {
    let cfg = AxiomConfig::default();
    let mut runs = 0;
    for p in ProblemId::ALL {
        let report = check_verifier_axioms(&verifier_for(p), p, &desk_scale(p), &cfg)
            .map_err(|e| format!("{p}: {e}"))?;
        ensure(report.passes(), || report.summary())?;
        runs += report.verifier_runs;
    }
    let graphs = graphs_up_to(5, false);
    for kind in AdversarialKind::ALL {
        let v = adversarial_verifier(kind.name()).map_err(|e| e.to_string())?;
        let report = check_verifier_axioms(&v, ProblemId::HamCycle, &graphs, &cfg)
            .map_err(|e| e.to_string())?;
        ensure(report.failures().next().is_some(), || {
            format!("{} produced no witness", kind.name())
        })?;
        if kind == AdversarialKind::PartialCycleAsSolution {
            ensure(
                !report.axiom3_violations.is_empty()
                    && report.axiom1_failures.is_empty()
                    && report.axiom2_violations.is_empty(),
                || {
                    format!(
                        "partial-cycle should fail only axiom 3:\n{}",
                        report.summary()
                    )
                },
            )?;
        }
    }
    Ok(format!(
        "10 shipped verifiers pass ({runs} verifier runs), 3 adversarial verifiers fail with witnesses"
    ))
}

fn hint_example() -> Check {
    let v = verifier_for(ProblemId::HamCycleEdge);
    let w = "a,b b,p p,q q,r r,a";
    let with_hint = verify(&v, w, "a,b", "p,q,r", budget()).map_err(|e| e.to_string())?;
    let without = verify(&v, w, "a,b", "", budget()).map_err(|e| e.to_string())?;
    ensure(with_hint == Verdict::Yes && without == Verdict::No, || {
        format!("got {with_hint} with hint, {without} without")
    })?;
    Ok("verify(a,b | p,q,r) = yes, verify(a,b | \"\") = no".into())
}

fn reduction_soundness() -> Check {
    let graphs = graphs_up_to(4, false);
    let digraphs = graphs_up_to(4, true);
    let reports = [
        check_polyreduction(&hamcycled_to_hamcycle(), &graphs, budget()),
        check_polyreduction(&directed_to_undirected(), &digraphs, budget()),
        check_general_reduction(&directed_to_undirected_general(), &digraphs, budget()),
        check_general_reduction(&hamcycle_identity(), &graphs, budget()),
    ];
    let mut instances = 0;
    for report in reports {
        let report = report.map_err(|e| e.to_string())?;
        ensure(report.passes(), || report.summary())?;
        instances += report.rows.len();
    }
    Ok(format!(
        "4 reductions pass on {instances} instances (graphs <= 4, digraphs <= 4)"
    ))
}

fn ceil_log2(m: u64) -> u64 {
    (64 - (m - 1).leading_zeros()) as u64
}

fn random_cnf(rng: &mut ChaCha8Rng) -> String {
    let vars = rng.gen_range(1..=10);
    let clauses = rng.gen_range(1..=4 * vars);
    (0..clauses)
        .map(|_| {
            let width = rng.gen_range(1..=3);
            (0..width)
                .map(|_| {
                    let v = rng.gen_range(1..=vars);
                    let sign = if rng.gen_bool(0.5) { "!" } else { "" };
                    format!("{sign}x{v:02}")
                })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn self_reductions() -> Check {
    let b = budget();
    let mut composites = 0;
    for m in 1..=10_000u64 {
        let mut oracle = DecisionOracle::exact(ProblemId::FactorInRangeD, b);
        let answer = factor_search_via_oracle(m, &mut oracle).map_err(|e| e.to_string())?;
        let positive =
            is_positive(ProblemId::Factor, &m.to_string(), b).map_err(|e| e.to_string())?;
        if positive {
            composites += 1;
            let ok = check_solution(ProblemId::Factor, &m.to_string(), &answer)
                .map_err(|e| e.to_string())?;
            ensure(ok, || format!("m={m}: {answer} is not a factor"))?;
            let limit = 2 * ceil_log2(m) + 2;
            ensure(oracle.call_count() <= limit, || {
                format!("m={m}: {} calls > {limit}", oracle.call_count())
            })?;
        } else {
            ensure(answer == NO, || format!("m={m}: prime but got {answer}"))?;
        }
    }

    let mut graphs = graphs_up_to(5, false);
    graphs.extend(graphs_on(6, false));
    for w in &graphs {
        let g = parse_graph(w, false).map_err(|e| e.to_string())?;
        let mut oracle = DecisionOracle::exact(ProblemId::HamCycleD, b);
        let answer = hamcycle_search_via_oracle(&g, &mut oracle).map_err(|e| e.to_string())?;
        let expected = enumerate_solutions(ProblemId::HamCycle, w, b).map_err(|e| e.to_string())?;
        ensure(expected.contains(&answer), || {
            format!("{w:?}: got {answer}")
        })?;
        let limit = g.edge_count() as u64 + 1;
        ensure(oracle.call_count() <= limit, || {
            format!("{w:?}: {} calls > {limit}", oracle.call_count())
        })?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(20_260_101);
    let mut formulas: Vec<String> = (0..500).map(|_| random_cnf(&mut rng)).collect();
    formulas.extend(cnfs_up_to(2, 2));
    let mut satisfiable = 0;
    for w in &formulas {
        let f = parse_cnf(w).map_err(|e| e.to_string())?;
        let mut oracle = DecisionOracle::exact(ProblemId::SatD, b);
        let answer = sat_search_via_oracle(&f, &mut oracle).map_err(|e| e.to_string())?;
        let expected = enumerate_solutions(ProblemId::Sat, w, b).map_err(|e| e.to_string())?;
        ensure(expected.contains(&answer), || {
            format!("{w:?}: got {answer}")
        })?;
        satisfiable += usize::from(answer != NO);
        let limit = f.variables().len() as u64 + 1;
        ensure(oracle.call_count() <= limit, || {
            format!("{w:?}: {} calls > {limit}", oracle.call_count())
        })?;
    }
    Ok(format!(
        "{composites} composites <= 10^4, {} graphs <= 6 vertices, {} CNFs ({satisfiable} satisfiable) within call budgets",
        graphs.len(),
        formulas.len()
    ))
}

fn nondeterminism_link() -> Check {
    let mut instances = 0;
    let mut paths = 0;
    for p in [ProblemId::Factor, ProblemId::HamCycle, ProblemId::Sat] {
        let np = guess_and_verify(&verifier_for(p), &decoder_for(p));
        for w in desk_scale(p) {
            let runs = ExplorationOrder::ALL
                .iter()
                .map(|&order| run_nondet(&np, &w, order))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            ensure(runs.iter().all(|r| *r == runs[0]), || {
                format!("{p} {w:?}: exploration orders disagree")
            })?;
            let leaves: BTreeSet<String> = runs[0]
                .accepting_outputs()
                .map(|o| canonicalize_solution(p, o))
                .collect();
            let expected = enumerate_solutions(p, &w, budget()).map_err(|e| e.to_string())?;
            ensure(leaves == expected.positive_members(), || {
                format!("{p} {w:?}: leaves {leaves:?} vs oracle {expected:?}")
            })?;
            instances += 1;
            paths += runs[0].paths_explored;
        }
    }
    Ok(format!(
        "{instances} instances, {paths} paths per order, leaf sets equal oracle and agree across 3 orders"
    ))
}

fn scaling() -> Check {
    let brute = Runner::Program(Program::brute_force(ProblemId::SatD));
    let sizes: Vec<usize> = (4..=10).collect();
    let sat =
        scaling_report(&brute, Family::UnsatCnf, &sizes, budget()).map_err(|e| e.to_string())?;
    ensure(sat.fit.exp_residual < sat.fit.poly_residual, || {
        sat.to_csv()
    })?;
    let walk = Runner::Verifier(verifier_for(ProblemId::HamCycle));
    let sizes: Vec<usize> = (4..=12).collect();
    let hc =
        scaling_report(&walk, Family::CycleGraph, &sizes, budget()).map_err(|e| e.to_string())?;
    ensure(
        hc.fit.winner == Growth::Polynomial && (0.5..=2.0).contains(&hc.fit.poly_exponent),
        || hc.to_csv(),
    )?;
    Ok(format!(
        "SatD brute force residuals exp {:.4} < poly {:.4}; HamCycle verifier slope {:.3}",
        sat.fit.exp_residual, sat.fit.poly_residual, hc.fit.poly_exponent
    ))
}

fn cli_goldens() -> Check {
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_nondec"))
            .args(args)
            .env_remove("NONDEC_MAX_STEPS")
            .output()
            .map_err(|e| e.to_string())?;
        Ok::<_, String>((
            String::from_utf8_lossy(&out.stdout).into_owned(),
            out.status.code(),
        ))
    };
    let goldens: [(&[&str], &str, i32); 6] = [
        (
            &["solve", "-o", "records", "-p", "Factor", "-w", "35"],
            "5\n7\n",
            0,
        ),
        (
            &[
                "verify",
                "-o",
                "records",
                "-p",
                "HamCycleEdge",
                "-w",
                "a,b b,p p,q q,r r,a",
                "-s",
                "a,b",
                "-H",
                "p,q,r",
            ],
            "yes\n",
            0,
        ),
        (
            &["solve", "-o", "records", "-p", "Factor", "-w", "29"],
            "no\n",
            0,
        ),
        (&["solve", "-p", "NoSuchProblem", "-w", "1"], "", 2),
        (
            &[
                "check-verifier",
                "--adversarial",
                "rejects-everything",
                "--space",
                "graphs:3",
            ],
            "",
            1,
        ),
        (
            &[
                "solve",
                "-p",
                "Sat",
                "-w",
                "x y z u v w",
                "--max-steps",
                "10",
            ],
            "",
            3,
        ),
    ];
    for (args, stdout, code) in goldens {
        let (out, status) = run(args)?;
        ensure(status == Some(code), || {
            format!("{args:?}: exit {status:?}, expected {code}")
        })?;
        if code == 0 {
            ensure(out == stdout, || {
                format!("{args:?}: stdout {out:?}, expected {stdout:?}")
            })?;
        }
    }
    Ok("3 golden transcripts byte-exact in records mode; exit codes 0/1/2/3 as documented".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 worked examples", worked_examples, Duration::from_secs(1)),
        (
            "2 verifier axioms",
            verifier_axioms,
            Duration::from_secs(300),
        ),
        ("3 hint example", hint_example, Duration::from_secs(1)),
        (
            "4 reduction soundness",
            reduction_soundness,
            Duration::from_secs(300),
        ),
        (
            "5 self-reductions",
            self_reductions,
            Duration::from_secs(300),
        ),
        (
            "6 nondeterminism link",
            nondeterminism_link,
            Duration::from_secs(300),
        ),
        ("7 scaling", scaling, Duration::from_secs(120)),
        ("8 cli goldens", cli_goldens, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
