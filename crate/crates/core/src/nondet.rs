//! Nondeterministic programs as deterministic transition functions over a
//! finite string of binary choices, exhaustive simulation of their
//! computation trees, guess-and-verify construction from a verifier, and
//! step-count scaling experiments.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::budget::{Exhausted, StepBudget, StepMeter};
use crate::encodings::{parse_cnf, parse_graph, parse_range_instance, Natural};
use crate::problems::{canonicalize_solution, ProblemId, NO, YES};
use crate::solvers::{enumerate_solutions, run_program, Outcome, Program, SolverError};
use crate::spaces::{cycle_graph, cycle_graph_tour, unsat_cnf};
use crate::verifiers::{verify_counted, Tape, Verifier, VerifierError};

/// Most computation paths a single simulation may explore.
pub const MAX_PATHS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NondetError {
    #[error("choice space too large: more than {limit} computation paths")]
    ChoiceSpaceTooLarge { limit: u64 },
    #[error("unknown exploration order `{0}` (expected sequential, reversed or parallel)")]
    UnknownOrder(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// What a transition does on a full choice prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Output(String),
    NeedMoreChoices,
}

type TransitionFn = dyn Fn(&str, &[bool], &mut StepMeter) -> Result<Step, Exhausted> + Send + Sync;
type BoundFn = dyn Fn(usize) -> usize + Send + Sync;

/// A nondeterministic program: `transition(w, c)` either finishes with an
/// output or asks for another choice bit. A path that still needs choices
/// at `choice_bound(|w|)` bits ends with output "no".
#[derive(Clone)]
pub struct NProgram {
    name: String,
    transition: Arc<TransitionFn>,
    choice_bound: Arc<BoundFn>,
    path_budget: StepBudget,
}

impl fmt::Debug for NProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NProgram")
            .field("name", &self.name)
            .field("path_budget", &self.path_budget)
            .finish()
    }
}

impl NProgram {
    pub fn new<T, B>(name: impl Into<String>, transition: T, choice_bound: B) -> Self
    where
        T: Fn(&str, &[bool], &mut StepMeter) -> Result<Step, Exhausted> + Send + Sync + 'static,
        B: Fn(usize) -> usize + Send + Sync + 'static,
    {
        NProgram {
            name: name.into(),
            transition: Arc::new(transition),
            choice_bound: Arc::new(choice_bound),
            path_budget: StepBudget::default(),
        }
    }

    pub fn with_path_budget(mut self, budget: StepBudget) -> Self {
        self.path_budget = budget;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn choice_bound(&self, input_len: usize) -> usize {
        (self.choice_bound)(input_len)
    }

    pub fn path_budget(&self) -> StepBudget {
        self.path_budget
    }
}

/// Everything observable about one computation tree. Independent of the
/// order in which paths are explored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComputationSummary {
    pub leaf_outputs: BTreeSet<String>,
    pub paths_explored: u64,
    pub max_steps_on_any_path: u64,
    /// Paths that ran out of their step budget.
    pub timeouts: u64,
}

impl ComputationSummary {
    fn merge(mut self, other: ComputationSummary) -> Self {
        self.leaf_outputs.extend(other.leaf_outputs);
        self.paths_explored += other.paths_explored;
        self.max_steps_on_any_path = self.max_steps_on_any_path.max(other.max_steps_on_any_path);
        self.timeouts += other.timeouts;
        self
    }

    /// Leaf outputs other than "no".
    pub fn accepting_outputs(&self) -> impl Iterator<Item = &String> {
        self.leaf_outputs.iter().filter(|o| *o != NO)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExplorationOrder {
    /// Depth first, choice 0 before choice 1.
    #[default]
    Sequential,
    /// Depth first, choice 1 before choice 0.
    Reversed,
    /// Subtrees near the root explored concurrently.
    Parallel,
}

impl ExplorationOrder {
    pub const ALL: [ExplorationOrder; 3] = [
        ExplorationOrder::Sequential,
        ExplorationOrder::Reversed,
        ExplorationOrder::Parallel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExplorationOrder::Sequential => "sequential",
            ExplorationOrder::Reversed => "reversed",
            ExplorationOrder::Parallel => "parallel",
        }
    }
}

impl FromStr for ExplorationOrder {
    type Err = NondetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExplorationOrder::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| NondetError::UnknownOrder(s.to_string()))
    }
}

/// Depth below which the parallel order forks.
const PARALLEL_DEPTH: usize = 8;

struct Simulation<'a> {
    np: &'a NProgram,
    w: &'a str,
    bound: usize,
    order: ExplorationOrder,
    leaves: AtomicU64,
}

impl Simulation<'_> {
    fn leaf(&self) -> Result<(), NondetError> {
        if self.leaves.fetch_add(1, Ordering::Relaxed) >= MAX_PATHS {
            return Err(NondetError::ChoiceSpaceTooLarge { limit: MAX_PATHS });
        }
        Ok(())
    }

    fn explore(&self, prefix: &mut Vec<bool>) -> Result<ComputationSummary, NondetError> {
        let mut meter = self.np.path_budget.meter();
        let step = (self.np.transition)(self.w, prefix, &mut meter);
        let output = match step {
            Ok(Step::NeedMoreChoices) if prefix.len() < self.bound => None,
            Ok(Step::NeedMoreChoices) => Some(Ok(NO.to_string())),
            Ok(Step::Output(text)) => Some(Ok(text)),
            Err(e) => Some(Err(e)),
        };
        if let Some(output) = output {
            self.leaf()?;
            let mut summary = ComputationSummary {
                paths_explored: 1,
                max_steps_on_any_path: meter.used(),
                ..ComputationSummary::default()
            };
            match output {
                Ok(text) => {
                    summary.leaf_outputs.insert(text);
                }
                Err(_) => summary.timeouts = 1,
            }
            return Ok(summary);
        }
        let (first, second) = match self.order {
            ExplorationOrder::Reversed => (true, false),
            _ => (false, true),
        };
        if self.order == ExplorationOrder::Parallel && prefix.len() < PARALLEL_DEPTH {
            let mut left = prefix.clone();
            left.push(first);
            prefix.push(second);
            let (a, b) = rayon::join(|| self.explore(&mut left), || self.explore(prefix));
            prefix.pop();
            return Ok(a?.merge(b?));
        }
        let mut summary = ComputationSummary::default();
        for bit in [first, second] {
            prefix.push(bit);
            let sub = self.explore(prefix);
            prefix.pop();
            summary = summary.merge(sub?);
        }
        Ok(summary)
    }
}

/// Explores every computation path of `np` on `w`.
pub fn run_nondet(
    np: &NProgram,
    w: &str,
    order: ExplorationOrder,
) -> Result<ComputationSummary, NondetError> {
    let sim = Simulation {
        np,
        w,
        bound: np.choice_bound(w.len()),
        order,
        leaves: AtomicU64::new(0),
    };
    sim.explore(&mut Vec::new())
}

// --- decoders -----------------------------------------------------------

/// Result of reading a candidate `(s, h)` off a choice prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Candidate { s: String, h: String },
    NeedMore,
    Invalid,
}

type DecodeFn = dyn Fn(&str, &[bool]) -> Decoded + Send + Sync;

/// Maps choice strings to candidate `(s, h)` pairs. Every pair the
/// decoder can produce is reachable within `choice_bound(|w|)` bits.
#[derive(Clone)]
pub struct Decoder {
    name: String,
    decode: Arc<DecodeFn>,
    choice_bound: Arc<BoundFn>,
}

impl fmt::Debug for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Decoder").field("name", &self.name).finish()
    }
}

impl Decoder {
    pub fn new<D, B>(name: impl Into<String>, decode: D, choice_bound: B) -> Self
    where
        D: Fn(&str, &[bool]) -> Decoded + Send + Sync + 'static,
        B: Fn(usize) -> usize + Send + Sync + 'static,
    {
        Decoder {
            name: name.into(),
            decode: Arc::new(decode),
            choice_bound: Arc::new(choice_bound),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decode(&self, w: &str, choices: &[bool]) -> Decoded {
        (self.decode)(w, choices)
    }

    pub fn choice_bound(&self, input_len: usize) -> usize {
        (self.choice_bound)(input_len)
    }

    /// Wraps the decoder for a decision problem: `("yes", s)` for each
    /// inner candidate `(s, _)`.
    pub fn decision(inner: Decoder) -> Decoder {
        let name = format!("decision({})", inner.name);
        let bound = inner.choice_bound.clone();
        Decoder::new(
            name,
            move |w, c| match inner.decode(w, c) {
                Decoded::Candidate { s, .. } => Decoded::Candidate {
                    s: YES.to_string(),
                    h: s,
                },
                other => other,
            },
            move |n| bound(n),
        )
    }
}

/// Bits needed to pick one of `r` options.
fn bits_for(r: usize) -> usize {
    if r <= 1 {
        0
    } else {
        (usize::BITS - (r - 1).leading_zeros()) as usize
    }
}

fn read_bits(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| acc << 1 | u64::from(b))
}

enum Partial<T> {
    Done(T, usize),
    NeedMore,
    Invalid,
}

/// A vertex order starting at vertex 0; each later vertex is an index into
/// the sorted remaining vertices.
fn decode_permutation(n: usize, choices: &[bool]) -> Partial<Vec<usize>> {
    let mut seq = vec![0];
    let mut remaining: Vec<usize> = (1..n).collect();
    let mut pos = 0;
    while !remaining.is_empty() {
        let k = bits_for(remaining.len());
        if pos + k > choices.len() {
            return Partial::NeedMore;
        }
        let idx = read_bits(&choices[pos..pos + k]) as usize;
        pos += k;
        if idx >= remaining.len() {
            return Partial::Invalid;
        }
        seq.push(remaining.remove(idx));
    }
    Partial::Done(seq, pos)
}

fn log2_ceil(n: usize) -> usize {
    bits_for(n)
}

fn factor_bits(w_len: usize) -> usize {
    (w_len as f64 * 10f64.log2()).ceil() as usize + 1
}

fn permutation_bits(w_len: usize) -> usize {
    (w_len + 1) * log2_ceil(w_len + 2)
}

/// A candidate divisor written in `bitlen(m)` bits.
fn decode_divisor(m: u64, choices: &[bool]) -> Partial<u64> {
    let k = (u64::BITS - m.leading_zeros()) as usize;
    if choices.len() < k {
        return Partial::NeedMore;
    }
    Partial::Done(read_bits(&choices[..k]), k)
}

pub fn factor_decoder() -> Decoder {
    Decoder::new(
        "factor",
        |w, c| {
            let Some(m) = Natural::parse(w).ok().and_then(|m| m.to_u64()) else {
                return Decoded::Invalid;
            };
            match decode_divisor(m, c) {
                Partial::Done(d, _) => Decoded::Candidate {
                    s: d.to_string(),
                    h: String::new(),
                },
                Partial::NeedMore => Decoded::NeedMore,
                Partial::Invalid => Decoded::Invalid,
            }
        },
        factor_bits,
    )
}

pub fn factor_in_range_decoder() -> Decoder {
    Decoder::new(
        "factor-in-range",
        |w, c| {
            let Some(m) = parse_range_instance(w)
                .ok()
                .and_then(|(m, _, _)| m.to_u64())
            else {
                return Decoded::Invalid;
            };
            match decode_divisor(m, c) {
                Partial::Done(d, _) => Decoded::Candidate {
                    s: YES.to_string(),
                    h: d.to_string(),
                },
                Partial::NeedMore => Decoded::NeedMore,
                Partial::Invalid => Decoded::Invalid,
            }
        },
        factor_bits,
    )
}

pub fn permutation_decoder(directed: bool) -> Decoder {
    Decoder::new(
        if directed {
            "directed-permutation"
        } else {
            "permutation"
        },
        move |w, c| {
            let Ok(g) = parse_graph(w, directed) else {
                return Decoded::Invalid;
            };
            let (names, _) = g.adjacency();
            if names.is_empty() {
                return Decoded::Invalid;
            }
            match decode_permutation(names.len(), c) {
                Partial::Done(seq, _) => Decoded::Candidate {
                    s: seq.iter().map(|&i| names[i]).collect::<Vec<_>>().join(","),
                    h: String::new(),
                },
                Partial::NeedMore => Decoded::NeedMore,
                Partial::Invalid => Decoded::Invalid,
            }
        },
        permutation_bits,
    )
}

/// A vertex order read as a cycle, then a position on it naming the edge
/// `s`; the hint walks the rest of the cycle away from that edge.
pub fn edge_cycle_decoder() -> Decoder {
    Decoder::new(
        "edge-cycle",
        |w, c| {
            let Ok(g) = parse_graph(w, false) else {
                return Decoded::Invalid;
            };
            let (names, _) = g.adjacency();
            let n = names.len();
            if n < 3 {
                return Decoded::Invalid;
            }
            let (seq, used) = match decode_permutation(n, c) {
                Partial::Done(seq, used) => (seq, used),
                Partial::NeedMore => return Decoded::NeedMore,
                Partial::Invalid => return Decoded::Invalid,
            };
            let k = bits_for(n);
            if c.len() < used + k {
                return Decoded::NeedMore;
            }
            let i = read_bits(&c[used..used + k]) as usize;
            if i >= n {
                return Decoded::Invalid;
            }
            let (a, b) = (seq[i], seq[(i + 1) % n]);
            let rest: Vec<&str> = if a < b {
                (2..n).map(|j| names[seq[(i + j) % n]]).collect()
            } else {
                (1..n - 1).map(|j| names[seq[(i + n - j) % n]]).collect()
            };
            Decoded::Candidate {
                s: format!("{},{}", names[a.min(b)], names[a.max(b)]),
                h: rest.join(","),
            }
        },
        |len| permutation_bits(len) + log2_ceil(len + 2),
    )
}

/// One bit per variable, in sorted variable order.
pub fn assignment_decoder() -> Decoder {
    Decoder::new(
        "assignment",
        |w, c| {
            let Ok(f) = parse_cnf(w) else {
                return Decoded::Invalid;
            };
            let vars = f.variables();
            if c.len() < vars.len() {
                return Decoded::NeedMore;
            }
            let s = vars
                .iter()
                .zip(c)
                .map(|(v, &b)| format!("{v}={}", u8::from(b)))
                .collect::<Vec<_>>()
                .join(" ");
            Decoded::Candidate {
                s,
                h: String::new(),
            }
        },
        |len| len,
    )
}

/// The decoder whose candidates the shipped verifier for `p` understands.
pub fn decoder_for(p: ProblemId) -> Decoder {
    match p {
        ProblemId::Factor => factor_decoder(),
        ProblemId::FactorD => Decoder::decision(factor_decoder()),
        ProblemId::FactorInRangeD => factor_in_range_decoder(),
        ProblemId::HamCycle => permutation_decoder(false),
        ProblemId::HamCycleD => Decoder::decision(permutation_decoder(false)),
        ProblemId::DirectedHamCycle => permutation_decoder(true),
        ProblemId::DirectedHamCycleD => Decoder::decision(permutation_decoder(true)),
        ProblemId::HamCycleEdge => edge_cycle_decoder(),
        ProblemId::Sat => assignment_decoder(),
        ProblemId::SatD => Decoder::decision(assignment_decoder()),
    }
}

/// Guess a candidate with the decoder, then run the verifier on it. An
/// accepted candidate is output as `s`; everything else outputs "no".
pub fn guess_and_verify(v: &Verifier, decoder: &Decoder) -> NProgram {
    let verifier = v.clone();
    let dec = decoder.clone();
    let bound = decoder.choice_bound.clone();
    NProgram::new(
        format!("guess-and-verify({}, {})", v.name(), decoder.name()),
        move |w, c, meter| {
            meter.charge(c.len() as u64)?;
            match dec.decode(w, c) {
                Decoded::NeedMore => Ok(Step::NeedMoreChoices),
                Decoded::Invalid => Ok(Step::Output(NO.to_string())),
                Decoded::Candidate { s, h } => {
                    let accepted =
                        verifier.run(w, &mut Tape::new(&s), &mut Tape::new(&h), meter)?;
                    Ok(Step::Output(if accepted { s } else { NO.to_string() }))
                }
            }
        },
        move |n| bound(n),
    )
}

/// Why a nondeterministic program fails to solve a problem on an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NondetViolationClass {
    /// Some path output a non-"no" string that is not a solution.
    WrongOutput,
    /// Positive instance, but every path output "no".
    AllPathsNo,
    /// Negative instance, but some path output something other than "no".
    AcceptsNegative,
    /// Some path ran out of steps.
    Timeout,
}

impl NondetViolationClass {
    pub fn as_str(self) -> &'static str {
        match self {
            NondetViolationClass::WrongOutput => "wrong-output",
            NondetViolationClass::AllPathsNo => "all-paths-no",
            NondetViolationClass::AcceptsNegative => "accepts-negative",
            NondetViolationClass::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondetViolation {
    pub instance: String,
    pub class: NondetViolationClass,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NondetReport {
    pub instances_checked: usize,
    pub paths_explored: u64,
    pub violations: Vec<NondetViolation>,
}

impl NondetReport {
    pub fn solves(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_records(&self) -> String {
        let mut out = String::from("# instance\tclass\tdetail\n");
        for v in &self.violations {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                v.instance,
                v.class.as_str(),
                v.detail
            ));
        }
        out
    }
}

/// Checks that `np` nondeterministically solves `p` on every instance.
pub fn nondet_solves(
    np: &NProgram,
    p: ProblemId,
    space: &[String],
    oracle_budget: StepBudget,
) -> Result<NondetReport, NondetError> {
    let mut report = NondetReport {
        instances_checked: space.len(),
        ..NondetReport::default()
    };
    for w in space {
        let summary = run_nondet(np, w, ExplorationOrder::Sequential)?;
        report.paths_explored += summary.paths_explored;
        let solutions = enumerate_solutions(p, w, oracle_budget)?;
        let violation = |class, detail: String| NondetViolation {
            instance: w.clone(),
            class,
            detail,
        };
        if summary.timeouts > 0 {
            report.violations.push(violation(
                NondetViolationClass::Timeout,
                format!("{} paths timed out", summary.timeouts),
            ));
        }
        for out in summary.accepting_outputs() {
            if solutions.is_negative() {
                report.violations.push(violation(
                    NondetViolationClass::AcceptsNegative,
                    out.clone(),
                ));
            } else if !solutions.contains(&canonicalize_solution(p, out)) {
                report
                    .violations
                    .push(violation(NondetViolationClass::WrongOutput, out.clone()));
            }
        }
        if !solutions.is_negative() && summary.accepting_outputs().next().is_none() {
            report.violations.push(violation(
                NondetViolationClass::AllPathsNo,
                format!("{} paths", summary.paths_explored),
            ));
        }
    }
    Ok(report)
}

// --- scaling ------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalingError {
    #[error("scaling needs at least {MIN_SIZES} distinct sizes, got {0}")]
    TooFewSizes(usize),
    #[error("run at size {size} timed out")]
    Timeout { size: usize },
    #[error("unknown family `{0}` (expected unsat-cnf or cycle-graph)")]
    UnknownFamily(String),
    #[error(transparent)]
    Nondet(#[from] NondetError),
    #[error(transparent)]
    Verifier(#[from] VerifierError),
}

pub const MIN_SIZES: usize = 4;

/// Parametrized instance families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Unsatisfiable formulas over `n` variables.
    UnsatCnf,
    /// The `n`-cycle graph, with its Hamilton cycle as the witness.
    CycleGraph,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::UnsatCnf => "unsat-cnf",
            Family::CycleGraph => "cycle-graph",
        }
    }

    pub fn instance(self, n: usize) -> String {
        match self {
            Family::UnsatCnf => unsat_cnf(n),
            Family::CycleGraph => cycle_graph(n),
        }
    }

    /// The problem the family's instances are posed for.
    pub fn problem(self) -> ProblemId {
        match self {
            Family::UnsatCnf => ProblemId::SatD,
            Family::CycleGraph => ProblemId::HamCycle,
        }
    }

    /// The `(s, h)` a verifier is timed on: the tour of a cycle graph, or
    /// `("no", "")` for formulas that have no satisfying assignment.
    pub fn witness(self, n: usize) -> (String, String) {
        match self {
            Family::UnsatCnf => (NO.to_string(), String::new()),
            Family::CycleGraph => (cycle_graph_tour(n), String::new()),
        }
    }
}

impl FromStr for Family {
    type Err = ScalingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Family::UnsatCnf, Family::CycleGraph]
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| ScalingError::UnknownFamily(s.to_string()))
    }
}

/// What gets timed in a scaling experiment.
#[derive(Debug, Clone)]
pub enum Runner {
    Program(Program),
    /// Measured by the most expensive computation path.
    NProgram(NProgram),
    /// Measured on the family's witness pair.
    Verifier(Verifier),
}

impl Runner {
    pub fn name(&self) -> &str {
        match self {
            Runner::Program(p) => p.name(),
            Runner::NProgram(np) => np.name(),
            Runner::Verifier(v) => v.name(),
        }
    }

    pub fn measure(
        &self,
        family: Family,
        n: usize,
        budget: StepBudget,
    ) -> Result<u64, ScalingError> {
        let w = family.instance(n);
        match self {
            Runner::Program(p) => match run_program(p, &w, budget) {
                Outcome::Output { steps_used, .. } => Ok(steps_used),
                Outcome::Timeout { .. } => Err(ScalingError::Timeout { size: n }),
            },
            Runner::NProgram(np) => {
                let summary = run_nondet(np, &w, ExplorationOrder::Sequential)?;
                if summary.timeouts > 0 {
                    return Err(ScalingError::Timeout { size: n });
                }
                Ok(summary.max_steps_on_any_path)
            }
            Runner::Verifier(v) => {
                let (s, h) = family.witness(n);
                match verify_counted(v, &w, &s, &h, budget) {
                    Ok((_, steps)) => Ok(steps),
                    Err(VerifierError::VerifierTimeout(_)) => {
                        Err(ScalingError::Timeout { size: n })
                    }
                    Err(e) => Err(e.into()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    Polynomial,
    Exponential,
}

impl Growth {
    pub fn as_str(self) -> &'static str {
        match self {
            Growth::Polynomial => "polynomial",
            Growth::Exponential => "exponential",
        }
    }
}

/// Least-squares fits of `ln steps` against `ln n` (polynomial) and
/// against `n` (exponential).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Slope of the log-log fit: steps ~ n^exponent.
    pub poly_exponent: f64,
    pub poly_residual: f64,
    /// Slope of the log-linear fit in bits: steps ~ 2^(rate * n).
    pub exp_rate_bits: f64,
    pub exp_residual: f64,
    /// The better-fitting model; ties go to polynomial.
    pub winner: Growth,
}

/// Slope and sum of squared residuals of the least-squares line.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let sse = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (my + slope * (x - mx))).powi(2))
        .sum();
    (slope, sse)
}

pub fn fit_scaling(points: &[(usize, u64)]) -> Result<ScalingFit, ScalingError> {
    let sizes: BTreeSet<usize> = points.iter().map(|p| p.0).collect();
    if sizes.len() < MIN_SIZES {
        return Err(ScalingError::TooFewSizes(sizes.len()));
    }
    let ns: Vec<f64> = points.iter().map(|p| p.0.max(1) as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.1.max(1) as f64).ln()).collect();
    let log_ns: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let (poly_exponent, poly_residual) = least_squares(&log_ns, &ys);
    let (exp_rate, exp_residual) = least_squares(&ns, &ys);
    let winner = if exp_residual < poly_residual * 0.5 && exp_residual + 1e-9 < poly_residual {
        Growth::Exponential
    } else {
        Growth::Polynomial
    };
    Ok(ScalingFit {
        poly_exponent,
        poly_residual,
        exp_rate_bits: exp_rate / std::f64::consts::LN_2,
        exp_residual,
        winner,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub family: String,
    pub runner: String,
    pub points: Vec<(usize, u64)>,
    pub fit: ScalingFit,
}

impl ScalingReport {
    /// `size,steps` rows followed by the fit summary as comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,steps\n");
        for (n, steps) in &self.points {
            out.push_str(&format!("{n},{steps}\n"));
        }
        let f = &self.fit;
        out.push_str(&format!(
            "# polynomial fit: exponent {:.3}, residual {:.4}\n",
            f.poly_exponent, f.poly_residual
        ));
        out.push_str(&format!(
            "# exponential fit: rate {:.3} bits per size unit, residual {:.4}; better fit: {}\n",
            f.exp_rate_bits,
            f.exp_residual,
            f.winner.as_str()
        ));
        out
    }
}

pub fn scaling_report(
    runner: &Runner,
    family: Family,
    sizes: &[usize],
    budget: StepBudget,
) -> Result<ScalingReport, ScalingError> {
    let distinct: BTreeSet<usize> = sizes.iter().copied().collect();
    if distinct.len() < MIN_SIZES {
        return Err(ScalingError::TooFewSizes(distinct.len()));
    }
    let points = distinct
        .into_iter()
        .map(|n| runner.measure(family, n, budget).map(|steps| (n, steps)))
        .collect::<Result<Vec<_>, _>>()?;
    let fit = fit_scaling(&points)?;
    Ok(ScalingReport {
        family: family.name().to_string(),
        runner: runner.name().to_string(),
        points,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{cnfs_up_to, graphs_up_to, naturals, range_instances};
    use crate::verifiers::verifier_for;

    fn gv(p: ProblemId) -> NProgram {
        guess_and_verify(&verifier_for(p), &decoder_for(p))
    }

    #[test]
    fn bits_and_permutations() {
        assert_eq!(
            (
                bits_for(1),
                bits_for(2),
                bits_for(3),
                bits_for(4),
                bits_for(5)
            ),
            (0, 1, 2, 2, 3)
        );
        // n = 3: remaining {1,2} takes 1 bit, then {x} takes 0.
        assert!(
            matches!(decode_permutation(3, &[true]), Partial::Done(ref s, 1) if *s == [0, 2, 1])
        );
        assert!(matches!(
            decode_permutation(4, &[true, true]),
            Partial::Invalid
        ));
    }

    #[test]
    fn factor_tree_outputs() {
        let s = run_nondet(&gv(ProblemId::Factor), "35", ExplorationOrder::Sequential).unwrap();
        assert_eq!(
            s.accepting_outputs().cloned().collect::<Vec<_>>(),
            ["5", "7"]
        );
        assert_eq!(s.paths_explored, 64);
        let s = run_nondet(&gv(ProblemId::Factor), "29", ExplorationOrder::Sequential).unwrap();
        assert_eq!(s.leaf_outputs, BTreeSet::from([NO.to_string()]));
    }

    #[test]
    fn guess_and_verify_solves_desk_spaces() {
        let b = StepBudget::default();
        let cases: Vec<(ProblemId, Vec<String>)> = vec![
            (ProblemId::Factor, naturals(0, 80)),
            (ProblemId::FactorD, naturals(0, 40)),
            (ProblemId::FactorInRangeD, range_instances(12)),
            (ProblemId::HamCycle, graphs_up_to(4, false)),
            (ProblemId::HamCycleD, graphs_up_to(4, false)),
            (ProblemId::HamCycleEdge, graphs_up_to(4, false)),
            (ProblemId::DirectedHamCycle, graphs_up_to(3, true)),
            (ProblemId::Sat, cnfs_up_to(2, 2)),
            (ProblemId::SatD, cnfs_up_to(2, 2)),
        ];
        for (p, space) in cases {
            let report = nondet_solves(&gv(p), p, &space, b).unwrap();
            assert!(report.solves(), "{p}: {}", report.to_records());
        }
    }

    #[test]
    fn wrong_nprograms_are_caught() {
        let b = StepBudget::default();
        let liar = NProgram::new("liar", |_, _, _| Ok(Step::Output("7".into())), |_| 0);
        let report = nondet_solves(&liar, ProblemId::Factor, &naturals(34, 37), b).unwrap();
        let found: Vec<_> = report
            .violations
            .iter()
            .map(|v| (v.instance.as_str(), v.class))
            .collect();
        assert_eq!(
            found,
            [
                ("34", NondetViolationClass::WrongOutput),
                ("36", NondetViolationClass::WrongOutput),
                ("37", NondetViolationClass::AcceptsNegative),
            ]
        );
        let silent = NProgram::new("silent", |_, _, _| Ok(Step::Output(NO.into())), |_| 0);
        let report = nondet_solves(&silent, ProblemId::Factor, &naturals(35, 35), b).unwrap();
        assert_eq!(report.violations[0].class, NondetViolationClass::AllPathsNo);
        let slow = gv(ProblemId::Factor).with_path_budget(StepBudget::new(5));
        let report = nondet_solves(&slow, ProblemId::Factor, &naturals(35, 35), b).unwrap();
        assert_eq!(report.violations[0].class, NondetViolationClass::Timeout);
    }

    #[test]
    fn orders_agree() {
        let np = gv(ProblemId::HamCycle);
        let w = "a,b a,c a,d b,c b,d c,d";
        let runs: Vec<_> = ExplorationOrder::ALL
            .iter()
            .map(|&o| run_nondet(&np, w, o).unwrap())
            .collect();
        assert_eq!(runs[0], runs[1]);
        assert_eq!(runs[0], runs[2]);
        assert_eq!(runs[0].accepting_outputs().count(), 3);
    }

    #[test]
    fn choice_bound_ends_paths_with_no() {
        let forever = NProgram::new("forever", |_, _, _| Ok(Step::NeedMoreChoices), |_| 3);
        let s = run_nondet(&forever, "", ExplorationOrder::Sequential).unwrap();
        assert_eq!(s.paths_explored, 8);
        assert_eq!(s.leaf_outputs, BTreeSet::from([NO.to_string()]));
        let huge = NProgram::new("huge", |_, _, _| Ok(Step::NeedMoreChoices), |_| 40);
        assert!(matches!(
            run_nondet(&huge, "", ExplorationOrder::Sequential),
            Err(NondetError::ChoiceSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn least_squares_recovers_exact_models() {
        let poly: Vec<(usize, u64)> = (2..8).map(|n| (n, (n * n * n) as u64)).collect();
        let fit = fit_scaling(&poly).unwrap();
        assert!((fit.poly_exponent - 3.0).abs() < 1e-9);
        assert_eq!(fit.winner, Growth::Polynomial);
        let exp: Vec<(usize, u64)> = (2..10).map(|n| (n, 1u64 << n)).collect();
        let fit = fit_scaling(&exp).unwrap();
        assert!((fit.exp_rate_bits - 1.0).abs() < 1e-9);
        assert_eq!(fit.winner, Growth::Exponential);
        assert!(matches!(
            fit_scaling(&exp[..3]),
            Err(ScalingError::TooFewSizes(3))
        ));
    }

    #[test]
    fn scaling_families() {
        let b = StepBudget::default();
        let brute = Runner::Program(Program::brute_force(ProblemId::SatD));
        let r = scaling_report(&brute, Family::UnsatCnf, &[4, 6, 8, 10], b).unwrap();
        assert_eq!(r.fit.winner, Growth::Exponential);
        assert!(r.fit.exp_rate_bits > 0.8, "{}", r.to_csv());

        let verifier = Runner::Verifier(verifier_for(ProblemId::HamCycle));
        let r = scaling_report(&verifier, Family::CycleGraph, &[4, 6, 8, 10, 12], b).unwrap();
        assert!((0.5..=2.0).contains(&r.fit.poly_exponent), "{}", r.to_csv());
        assert_eq!(r.fit.winner, Growth::Polynomial);

        let constant = Runner::Program(Program::constant("no"));
        let r = scaling_report(&constant, Family::CycleGraph, &[4, 6, 8, 10], b).unwrap();
        assert!(r.fit.poly_exponent.abs() < 1e-9);
        assert!(r.to_csv().starts_with("size,steps\n4,2\n"));
    }
}
