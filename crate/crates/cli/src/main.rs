use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nondec::encodings::{is_printable_ascii, Natural};
use nondec::nondet::{
    decoder_for, guess_and_verify, nondet_solves, run_nondet, scaling_report, ExplorationOrder,
    Family, Runner, ScalingError,
};
use nondec::problems::{canonicalize_solution, ProblemId};
use nondec::reductions::{
    apply_general_reduction, apply_polyreduction, check_general_reduction, check_polyreduction,
    general_reduction_by_name, general_reductions, np_hard_via, polyreduction_by_name,
    polyreductions, search_via_exact_oracle, ReductionError, ReductionReport,
};
use nondec::solvers::{enumerate_solutions, Program, SolverError};
use nondec::spaces::SpaceSpec;
use nondec::verifiers::{
    adversarial_verifier, check_verifier_axioms, verifier_for, verify, AxiomConfig, VerifierError,
};
use nondec::{StepBudget, MAX_STEPS_ENV};

#[derive(Parser)]
#[command(
    name = "nondec",
    version,
    about = "Computational problems, verifiers, nondeterminism and reductions at desk scale"
)]
struct Cli {
    /// Step budget per program, verifier or oracle call.
    #[arg(long, global = true, env = MAX_STEPS_ENV)]
    max_steps: Option<u64>,
    /// Output mode. Records are tab-separated with a leading schema comment.
    #[arg(short = 'o', long, global = true, value_enum, default_value_t = Mode::Human)]
    output: Mode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Human,
    Records,
}

#[derive(Args)]
struct Instance {
    /// Instance text, taken verbatim (quote it if it contains spaces).
    #[arg(short = 'w', long = "instance", conflicts_with = "file")]
    instance: Option<String>,
    /// Read the instance from a file; one trailing newline is ignored.
    #[arg(short = 'f', long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the solution set of an instance, one solution per line.
    Solve {
        #[arg(short, long)]
        problem: String,
        #[command(flatten)]
        instance: Instance,
    },
    /// Run a verifier on (instance, solution, hint) and print yes or no.
    Verify {
        #[arg(short, long)]
        problem: String,
        #[command(flatten)]
        instance: Instance,
        #[arg(short, long, allow_hyphen_values = true)]
        solution: String,
        #[arg(short = 'H', long, default_value = "", allow_hyphen_values = true)]
        hint: String,
        /// Use an adversarial verifier instead of the shipped one.
        #[arg(long)]
        adversarial: Option<String>,
    },
    /// Check the three verifier axioms exhaustively over an instance space.
    CheckVerifier {
        /// Defaults to the adversarial verifier's target when one is given.
        #[arg(short, long)]
        problem: Option<String>,
        #[arg(long)]
        adversarial: Option<String>,
        /// desk, graphs:N, digraphs:N, naturals:A..B, ranges:M or cnf:VxC.
        #[arg(long, default_value = "desk")]
        space: SpaceSpec,
        /// Maximum length of enumerated solutions and hints.
        #[arg(long, default_value_t = 8)]
        hint_bound: usize,
        /// Enumeration alphabet (default: instance characters, separators
        /// and solution symbols).
        #[arg(long)]
        alphabet: Option<String>,
        /// Require every correct solution to be verifiable.
        #[arg(long)]
        strict: bool,
        /// Ceiling on verifier runs per instance.
        #[arg(long, default_value_t = 1_000_000)]
        max_runs: u64,
    },
    /// Apply a reduction to one instance.
    Reduce {
        #[arg(short, long)]
        reduction: String,
        #[command(flatten)]
        instance: Instance,
        /// For general reductions: solve the mapped instance by brute force
        /// and map the solution back.
        #[arg(long)]
        solve: bool,
    },
    /// Check a reduction exhaustively over an instance space.
    CheckReduction {
        #[arg(short, long)]
        reduction: String,
        /// Compose with a second polyreduction first.
        #[arg(long)]
        then: Option<String>,
        #[arg(long, default_value = "desk")]
        space: SpaceSpec,
        /// Also judge NP-hardness of the target from the reduction's source.
        #[arg(long)]
        np_hard: bool,
    },
    /// Solve a search problem with an exact oracle for its decision variant.
    SearchViaOracle {
        /// Factor, HamCycle or Sat.
        #[arg(short, long)]
        problem: String,
        #[command(flatten)]
        instance: Instance,
    },
    /// Explore the guess-and-verify computation tree of an instance, or
    /// check it against the brute-force oracle over a space.
    Simulate {
        #[arg(short, long)]
        problem: String,
        #[command(flatten)]
        instance: Instance,
        /// Check every instance of a space instead of one instance.
        #[arg(long, conflicts_with_all = ["instance", "file"])]
        space: Option<SpaceSpec>,
        #[arg(long, default_value = "sequential")]
        order: String,
    },
    /// Step counts over an instance family, with polynomial and exponential
    /// fits.
    Scaling {
        /// unsat-cnf or cycle-graph.
        #[arg(long)]
        family: String,
        /// brute-force, verifier, guess-and-verify or constant.
        #[arg(long, default_value = "brute-force")]
        runner: String,
        /// Comma-separated sizes (at least four distinct).
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// List registered problems and reductions.
    ListProblems,
}

/// Failures, each tied to one exit code.
enum Failure {
    /// Exit 1: a check ran and found violations.
    Violations(String),
    /// Exit 2.
    Usage(String),
    /// Exit 3.
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violations(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        Failure::Budget(e.to_string())
    }
}

impl From<VerifierError> for Failure {
    fn from(e: VerifierError) -> Self {
        match e {
            VerifierError::VerifierTimeout(_)
            | VerifierError::SearchSpaceTooLarge { .. }
            | VerifierError::Solver(_) => Failure::Budget(e.to_string()),
            VerifierError::UnknownKind(_) | VerifierError::Problem(_) => {
                Failure::Usage(e.to_string())
            }
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::BudgetExceeded(_) | ReductionError::Solver(_) => {
                Failure::Budget(e.to_string())
            }
            ReductionError::ReductionCheckFailed { .. } | ReductionError::OracleInconsistent(_) => {
                Failure::Violations(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ScalingError> for Failure {
    fn from(e: ScalingError) -> Self {
        match e {
            ScalingError::TooFewSizes(_) | ScalingError::UnknownFamily(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Budget(e.to_string()),
        }
    }
}

type Outcome = Result<String, (String, Failure)>;

fn problem(name: &str) -> Result<ProblemId, Failure> {
    name.parse::<ProblemId>()
        .map_err(|e| Failure::Usage(e.to_string()))
}

impl Instance {
    fn read(&self) -> Result<String, Failure> {
        let text = match (&self.instance, &self.file) {
            (Some(w), _) => w.clone(),
            (None, Some(path)) => {
                let mut text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                if text.ends_with('\n') {
                    text.pop();
                    if text.ends_with('\r') {
                        text.pop();
                    }
                }
                text
            }
            (None, None) => return Err(Failure::Usage("give an instance with -w or -f".into())),
        };
        if !is_printable_ascii(&text) {
            return Err(Failure::Usage(
                "instances must be printable ASCII (bytes 32 to 126)".into(),
            ));
        }
        Ok(text)
    }
}

fn lines<I: IntoIterator<Item = S>, S: AsRef<str>>(items: I) -> String {
    items.into_iter().fold(String::new(), |mut out, s| {
        out.push_str(s.as_ref());
        out.push('\n');
        out
    })
}

fn reduction_output(report: &ReductionReport, mode: Mode) -> Outcome {
    let text = match mode {
        Mode::Human => report.summary(),
        Mode::Records => report.to_records(),
    };
    if report.passes() {
        Ok(text)
    } else {
        Err((text, Failure::Violations(String::new())))
    }
}

fn run(cli: Cli) -> Outcome {
    let budget = cli
        .max_steps
        .map_or_else(StepBudget::default, StepBudget::new);
    let mode = cli.output;
    let plain = |f: Failure| (String::new(), f);
    match cli.command {
        Command::Solve {
            problem: p,
            instance,
        } => {
            let p = problem(&p).map_err(plain)?;
            let w = instance.read().map_err(plain)?;
            let set = enumerate_solutions(p, &w, budget).map_err(|e| plain(e.into()))?;
            Ok(lines(set.iter()))
        }
        Command::Verify {
            problem: p,
            instance,
            solution,
            hint,
            adversarial,
        } => {
            let p = problem(&p).map_err(plain)?;
            let w = instance.read().map_err(plain)?;
            let v = match adversarial {
                Some(kind) => adversarial_verifier(&kind).map_err(|e| plain(e.into()))?,
                None => verifier_for(p),
            };
            let verdict = verify(&v, &w, &solution, &hint, budget).map_err(|e| plain(e.into()))?;
            Ok(lines([verdict.as_str()]))
        }
        Command::CheckVerifier {
            problem: p,
            adversarial,
            space,
            hint_bound,
            alphabet,
            strict,
            max_runs,
        } => {
            let v = match &adversarial {
                Some(kind) => adversarial_verifier(kind).map_err(|e| plain(e.into()))?,
                None => {
                    let name = p
                        .as_deref()
                        .ok_or_else(|| plain(Failure::Usage("give -p or --adversarial".into())))?;
                    verifier_for(problem(name).map_err(plain)?)
                }
            };
            let p = match p {
                Some(name) => problem(&name).map_err(plain)?,
                None => v.target(),
            };
            if alphabet
                .as_deref()
                .is_some_and(|a| !is_printable_ascii(a) || a.is_empty())
            {
                return Err(plain(Failure::Usage(
                    "alphabet must be nonempty printable ASCII".into(),
                )));
            }
            let cfg = AxiomConfig {
                string_bound: hint_bound,
                alphabet: alphabet.map(String::into_bytes),
                budget,
                oracle_budget: budget,
                max_runs_per_instance: max_runs,
                strict,
            };
            let report = check_verifier_axioms(&v, p, &space.instances(p), &cfg)
                .map_err(|e| plain(e.into()))?;
            let text = match mode {
                Mode::Human => report.summary(),
                Mode::Records => report.to_records(),
            };
            if report.passes() {
                Ok(text)
            } else {
                Err((text, Failure::Violations(String::new())))
            }
        }
        Command::Reduce {
            reduction,
            instance,
            solve,
        } => {
            let w = instance.read().map_err(plain)?;
            if let Ok(red) = polyreduction_by_name(&reduction) {
                if solve {
                    return Err(plain(Failure::Usage(
                        "--solve needs a general reduction".into(),
                    )));
                }
                return Ok(lines([
                    apply_polyreduction(&red, &w).map_err(|e| plain(e.into()))?
                ]));
            }
            let gr = general_reduction_by_name(&reduction).map_err(|e| plain(e.into()))?;
            let out = if solve {
                let target = Program::brute_force(gr.target());
                apply_general_reduction(&gr, &target, &w, budget)
            } else {
                gr.map(&w)
            };
            Ok(lines([out.map_err(|e| plain(e.into()))?]))
        }
        Command::CheckReduction {
            reduction,
            then,
            space,
            np_hard,
        } => {
            if let Ok(mut red) = polyreduction_by_name(&reduction) {
                if let Some(second) = then {
                    let second = polyreduction_by_name(&second).map_err(|e| plain(e.into()))?;
                    red = red.then(&second).map_err(|e| plain(e.into()))?;
                }
                if np_hard {
                    let judgment =
                        np_hard_via(&red, red.source(), budget).map_err(|e| plain(e.into()))?;
                    let mut text = reduction_output(&judgment.report, mode)?;
                    writeln!(text, "{}", judgment.label).expect("string write");
                    return Ok(text);
                }
                let report = check_polyreduction(&red, &space.instances(red.source()), budget)
                    .map_err(|e| plain(e.into()))?;
                return reduction_output(&report, mode);
            }
            if then.is_some() || np_hard {
                return Err(plain(Failure::Usage(
                    "--then and --np-hard apply to polyreductions only".into(),
                )));
            }
            let gr = general_reduction_by_name(&reduction).map_err(|e| plain(e.into()))?;
            let report = check_general_reduction(&gr, &space.instances(gr.source()), budget)
                .map_err(|e| plain(e.into()))?;
            reduction_output(&report, mode)
        }
        Command::SearchViaOracle {
            problem: p,
            instance,
        } => {
            let p = problem(&p).map_err(plain)?;
            let w = instance.read().map_err(plain)?;
            if p == ProblemId::Factor && Natural::parse(&w).is_ok_and(|m| m.to_u64().is_none()) {
                return Err(plain(Failure::Budget(
                    "number too large for the oracle".into(),
                )));
            }
            let (answer, calls) =
                search_via_exact_oracle(p, &w, budget).map_err(|e| plain(e.into()))?;
            Ok(match mode {
                Mode::Human => format!("{answer}\noracle calls: {calls}\n"),
                Mode::Records => format!("# solution\toracle_calls\n{answer}\t{calls}\n"),
            })
        }
        Command::Simulate {
            problem: p,
            instance,
            space,
            order,
        } => {
            let p = problem(&p).map_err(plain)?;
            let order: ExplorationOrder = order
                .parse()
                .map_err(|e: nondec::nondet::NondetError| plain(Failure::Usage(e.to_string())))?;
            let np = guess_and_verify(&verifier_for(p), &decoder_for(p)).with_path_budget(budget);
            let budget_failure =
                |e: nondec::nondet::NondetError| plain(Failure::Budget(e.to_string()));
            if let Some(space) = space {
                let report =
                    nondet_solves(&np, p, &space.instances(p), budget).map_err(budget_failure)?;
                let text = match mode {
                    Mode::Human => {
                        let mut text = format!(
                            "{} {}: {} instances, {} paths, {} violations\n",
                            if report.solves() { "PASS" } else { "FAIL" },
                            np.name(),
                            report.instances_checked,
                            report.paths_explored,
                            report.violations.len()
                        );
                        for v in report.violations.iter().take(10) {
                            writeln!(
                                text,
                                "  w={:?} {}: {}",
                                v.instance,
                                v.class.as_str(),
                                v.detail
                            )
                            .expect("string write");
                        }
                        text
                    }
                    Mode::Records => report.to_records(),
                };
                return if report.solves() {
                    Ok(text)
                } else {
                    Err((text, Failure::Violations(String::new())))
                };
            }
            let w = instance.read().map_err(plain)?;
            let summary = run_nondet(&np, &w, order).map_err(budget_failure)?;
            let outputs: Vec<String> = summary
                .leaf_outputs
                .iter()
                .map(|o| canonicalize_solution(p, o))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let text = match mode {
                Mode::Human => format!(
                    "{}paths: {}, max steps on a path: {}, timed-out paths: {}\n",
                    lines(&outputs),
                    summary.paths_explored,
                    summary.max_steps_on_any_path,
                    summary.timeouts
                ),
                Mode::Records => format!(
                    "# leaf_output\n{}# summary paths={} max_steps={} timeouts={}\n",
                    lines(&outputs),
                    summary.paths_explored,
                    summary.max_steps_on_any_path,
                    summary.timeouts
                ),
            };
            if summary.timeouts > 0 {
                return Err((text, Failure::Budget("some paths timed out".into())));
            }
            Ok(text)
        }
        Command::Scaling {
            family,
            runner,
            sizes,
        } => {
            let family: Family = family.parse().map_err(|e: ScalingError| plain(e.into()))?;
            let p = family.problem();
            let runner = match runner.as_str() {
                "brute-force" => Runner::Program(Program::brute_force(p)),
                "verifier" => Runner::Verifier(verifier_for(p)),
                "guess-and-verify" => Runner::NProgram(
                    guess_and_verify(&verifier_for(p), &decoder_for(p)).with_path_budget(budget),
                ),
                "constant" => Runner::Program(Program::constant("no")),
                other => {
                    return Err(plain(Failure::Usage(format!(
                        "unknown runner `{other}` (expected brute-force, verifier, guess-and-verify or constant)"
                    ))))
                }
            };
            let sizes = sizes.unwrap_or_else(|| match family {
                Family::UnsatCnf => (4..=10).collect(),
                Family::CycleGraph => vec![4, 6, 8, 10, 12],
            });
            let report =
                scaling_report(&runner, family, &sizes, budget).map_err(|e| plain(e.into()))?;
            Ok(report.to_csv())
        }
        Command::ListProblems => {
            let mut text = String::new();
            if mode == Mode::Records {
                text.push_str("# name\tkind\tdescription\n");
            }
            for p in ProblemId::ALL {
                let kind = if p.is_decision() {
                    "decision"
                } else {
                    "search"
                };
                writeln!(text, "{}\t{kind}\t{}", p.name(), p.description()).expect("string write");
            }
            for r in polyreductions() {
                writeln!(
                    text,
                    "{}\tpolyreduction\t{} -> {}",
                    r.name(),
                    r.source(),
                    r.target()
                )
                .expect("string write");
            }
            for r in general_reductions() {
                writeln!(
                    text,
                    "{}\tgeneral-reduction\t{} -> {}",
                    r.name(),
                    r.source(),
                    r.target()
                )
                .expect("string write");
            }
            Ok(text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err((text, failure)) => {
            print!("{text}");
            let message = match &failure {
                Failure::Violations(m) | Failure::Usage(m) | Failure::Budget(m) => m,
            };
            if !message.is_empty() {
                eprintln!("nondec: {message}");
            }
            ExitCode::from(failure.code())
        }
    }
}
