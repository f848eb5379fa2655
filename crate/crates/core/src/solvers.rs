//! Brute-force oracles, step-counted programs, and the check that a program
//! solves a problem on a finite instance space.
//!
//! The oracles enumerate complete solution sets: trial division for the
//! factoring problems, backtracking over vertex orders for the Hamilton
//! cycle problems, and all `2^k` assignments for satisfiability. They are
//! exact, exponential, and meant for desk-scale instances only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::budget::{Exhausted, StepBudget, StepMeter};
use crate::encodings::{
    encode_assignment, parse_assignment, parse_cnf, parse_graph, parse_range_instance,
    parse_vertex_list, CnfFormula, Graph, Natural,
};
use crate::problems::{ProblemId, SolutionSet, NO, YES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(StepBudget),
}

impl From<Exhausted> for SolverError {
    fn from(e: Exhausted) -> Self {
        SolverError::BudgetExceeded(StepBudget::new(e.max_steps))
    }
}

/// Nontrivial-factor bounds `[max(lo, 2), min(hi, m - 1)]`; `None` when the
/// range is empty.
fn factor_window(m: u64, lo: u64, hi: u64) -> Option<(u64, u64)> {
    if m < 4 {
        return None;
    }
    let (lo, hi) = (lo.max(2), hi.min(m - 1));
    (lo <= hi).then_some((lo, hi))
}

fn parse_m(w: &str, meter: &StepMeter) -> Result<Option<u64>, Exhausted> {
    match Natural::parse(w) {
        Err(_) => Ok(None),
        Ok(m) => match m.to_u64() {
            Some(m) => Ok(Some(m)),
            None => Err(Exhausted {
                max_steps: meter.max(),
            }),
        },
    }
}

/// Divisors of `m` in `[lo, hi] ∩ [2, m-1]`, by trial division.
fn divisors_in(
    m: u64,
    lo: u64,
    hi: u64,
    first_only: bool,
    meter: &mut StepMeter,
) -> Result<Vec<u64>, Exhausted> {
    let mut out = Vec::new();
    if let Some((lo, hi)) = factor_window(m, lo, hi) {
        for d in lo..=hi {
            meter.tick()?;
            if m.is_multiple_of(d) {
                out.push(d);
                if first_only {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn range_parts(w: &str, meter: &StepMeter) -> Result<Option<(u64, u64, u64)>, Exhausted> {
    let Ok((m, lo, hi)) = parse_range_instance(w) else {
        return Ok(None);
    };
    let m = m.to_u64().ok_or(Exhausted {
        max_steps: meter.max(),
    })?;
    // Bounds past 64 bits clamp: a huge `lo` empties the window, a huge `hi`
    // stops at m - 1 anyway.
    let lo = lo.to_u64().unwrap_or(u64::MAX);
    let hi = hi.to_u64().unwrap_or(u64::MAX);
    Ok(Some((m, lo, hi)))
}

/// Walks every Hamilton cycle of the graph given by `adj`, starting at
/// vertex 0. Undirected cycles are reported once, in the orientation whose
/// second vertex is smaller than its last. `visit` returns `true` to stop.
pub(crate) fn for_each_hamilton_cycle(
    adj: &[Vec<bool>],
    directed: bool,
    meter: &mut StepMeter,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<bool, Exhausted> {
    let n = adj.len();
    if n < if directed { 2 } else { 3 } {
        return Ok(false);
    }
    let mut path = Vec::with_capacity(n);
    path.push(0);
    let mut used = vec![false; n];
    used[0] = true;
    extend_path(adj, directed, &mut path, &mut used, meter, visit)
}

fn extend_path(
    adj: &[Vec<bool>],
    directed: bool,
    path: &mut Vec<usize>,
    used: &mut [bool],
    meter: &mut StepMeter,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<bool, Exhausted> {
    meter.tick()?;
    let n = adj.len();
    let last = *path.last().expect("path starts nonempty");
    if path.len() == n {
        if adj[last][0] && (directed || path[1] < path[n - 1]) {
            return Ok(visit(path));
        }
        return Ok(false);
    }
    for next in 0..n {
        if used[next] || !adj[last][next] {
            continue;
        }
        used[next] = true;
        path.push(next);
        let stop = extend_path(adj, directed, path, used, meter, visit)?;
        path.pop();
        used[next] = false;
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

fn cycle_string(names: &[&str], cycle: &[usize]) -> String {
    cycle
        .iter()
        .map(|&i| names[i])
        .collect::<Vec<_>>()
        .join(",")
}

fn hamilton_cycles(
    g: &Graph,
    meter: &mut StepMeter,
    first_only: bool,
) -> Result<BTreeSet<String>, Exhausted> {
    let (names, adj) = g.adjacency();
    let mut found = BTreeSet::new();
    for_each_hamilton_cycle(&adj, g.is_directed(), meter, &mut |cycle| {
        found.insert(cycle_string(&names, cycle));
        first_only
    })?;
    Ok(found)
}

/// Edges on at least one Hamilton cycle, as `u,v` with `u < v`.
fn hamilton_edges(g: &Graph, meter: &mut StepMeter) -> Result<BTreeSet<String>, Exhausted> {
    let (names, adj) = g.adjacency();
    let mut found = BTreeSet::new();
    for_each_hamilton_cycle(&adj, false, meter, &mut |cycle| {
        for k in 0..cycle.len() {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            let (u, v) = if names[a] < names[b] { (a, b) } else { (b, a) };
            found.insert(format!("{},{}", names[u], names[v]));
        }
        false
    })?;
    Ok(found)
}

/// All satisfying assignments (or the first, when `first_only`) by plain
/// enumeration of every assignment.
fn satisfying_assignments(
    f: &CnfFormula,
    meter: &mut StepMeter,
    first_only: bool,
) -> Result<BTreeSet<String>, Exhausted> {
    let vars: Vec<&String> = f.variables().iter().collect();
    if vars.len() >= 63 {
        return Err(Exhausted {
            max_steps: meter.max(),
        });
    }
    let index: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    // Clauses as (variable index, negated) pairs for fast evaluation.
    let clauses: Vec<Vec<(usize, bool)>> = f
        .clauses()
        .iter()
        .map(|c| {
            c.iter()
                .map(|l| (index[l.var.as_str()], l.negated))
                .collect()
        })
        .collect();
    let k = vars.len();
    let mut found = BTreeSet::new();
    for mask in 0u64..(1u64 << k) {
        meter.tick()?;
        // Variable i takes bit (k - 1 - i) so masks run in lexicographic order.
        let value = |i: usize| (mask >> (k - 1 - i)) & 1 == 1;
        let mut satisfied = true;
        for clause in &clauses {
            meter.tick()?;
            if !clause.iter().any(|&(i, neg)| value(i) != neg) {
                satisfied = false;
                break;
            }
        }
        if satisfied {
            let assignment: BTreeMap<String, bool> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| ((*v).clone(), value(i)))
                .collect();
            found.insert(
                encode_assignment(&assignment, f.variables()).expect("every variable assigned"),
            );
            if first_only {
                break;
            }
        }
    }
    Ok(found)
}

fn enumerate_metered(
    p: ProblemId,
    w: &str,
    meter: &mut StepMeter,
    first_only: bool,
) -> Result<SolutionSet, Exhausted> {
    let decision = p.is_decision();
    let first_only = first_only || decision;
    let found: Vec<String> = match p {
        ProblemId::Factor | ProblemId::FactorD => match parse_m(w, meter)? {
            None => Vec::new(),
            Some(m) => divisors_in(m, 2, u64::MAX, first_only, meter)?
                .into_iter()
                .map(|d| d.to_string())
                .collect(),
        },
        ProblemId::FactorInRangeD => match range_parts(w, meter)? {
            None => Vec::new(),
            Some((m, lo, hi)) => divisors_in(m, lo, hi, true, meter)?
                .into_iter()
                .map(|d| d.to_string())
                .collect(),
        },
        ProblemId::HamCycle
        | ProblemId::HamCycleD
        | ProblemId::DirectedHamCycle
        | ProblemId::DirectedHamCycleD => match parse_graph(w, p.is_directed()) {
            Err(_) => Vec::new(),
            Ok(g) => hamilton_cycles(&g, meter, first_only)?
                .into_iter()
                .collect(),
        },
        ProblemId::HamCycleEdge => match parse_graph(w, false) {
            Err(_) => Vec::new(),
            Ok(g) if first_only => hamilton_cycles(&g, meter, true)?.into_iter().collect(),
            Ok(g) => hamilton_edges(&g, meter)?.into_iter().collect(),
        },
        ProblemId::Sat | ProblemId::SatD => match parse_cnf(w) {
            Err(_) => Vec::new(),
            Ok(f) => satisfying_assignments(&f, meter, first_only)?
                .into_iter()
                .collect(),
        },
    };
    Ok(if decision {
        SolutionSet::decision(!found.is_empty())
    } else {
        SolutionSet::from_solutions(found)
    })
}

/// The complete canonical solution set of `w`, by exhaustive search.
pub fn enumerate_solutions(
    p: ProblemId,
    w: &str,
    budget: StepBudget,
) -> Result<SolutionSet, SolverError> {
    let mut meter = budget.meter();
    Ok(enumerate_metered(p, w, &mut meter, false)?)
}

/// Positivity only; stops at the first solution found.
pub fn is_positive(p: ProblemId, w: &str, budget: StepBudget) -> Result<bool, SolverError> {
    let mut meter = budget.meter();
    Ok(!enumerate_metered(p, w, &mut meter, true)?.is_negative())
}

fn graph_cycle_ok(g: &Graph, seq: &[&str]) -> bool {
    let n = g.vertex_count();
    if seq.len() != n || n < if g.is_directed() { 2 } else { 3 } {
        return false;
    }
    let distinct: BTreeSet<&str> = seq.iter().copied().collect();
    if distinct.len() != n || !seq.iter().all(|v| g.vertices().contains(*v)) {
        return false;
    }
    (0..n).all(|k| g.has_edge(seq[k], seq[(k + 1) % n]))
}

/// Decides `s ∈ F(w)` directly: divide, walk the cycle, or evaluate the
/// formula. Only `"no"` and `"yes"` need a full positivity search.
pub fn check_solution(p: ProblemId, w: &str, s: &str) -> Result<bool, SolverError> {
    if s == NO {
        return Ok(!is_positive(p, w, StepBudget::default())?);
    }
    if p.is_decision() {
        return Ok(s == YES && is_positive(p, w, StepBudget::default())?);
    }
    Ok(match p {
        ProblemId::Factor => {
            let (Ok(m), Ok(d)) = (Natural::parse(w), Natural::parse(s)) else {
                return Ok(false);
            };
            let two = Natural::from(2);
            d >= two && d < m && (m.value() % d.value()) == num_bigint::BigUint::from(0u8)
        }
        ProblemId::HamCycle | ProblemId::DirectedHamCycle => {
            let (Ok(g), Ok(seq)) = (parse_graph(w, p.is_directed()), parse_vertex_list(s)) else {
                return Ok(false);
            };
            graph_cycle_ok(&g, &seq)
                && crate::encodings::canonical_cycle(&seq, p.is_directed()).as_deref() == Ok(s)
        }
        ProblemId::HamCycleEdge => {
            let (Ok(g), Ok(seq)) = (parse_graph(w, false), parse_vertex_list(s)) else {
                return Ok(false);
            };
            if seq.len() != 2 || seq[0] >= seq[1] || !g.has_edge(seq[0], seq[1]) {
                return Ok(false);
            }
            let (names, adj) = g.adjacency();
            let (u, v) = (
                names
                    .iter()
                    .position(|n| *n == seq[0])
                    .expect("edge endpoint"),
                names
                    .iter()
                    .position(|n| *n == seq[1])
                    .expect("edge endpoint"),
            );
            let mut meter = StepBudget::default().meter();
            for_each_hamilton_cycle(&adj, false, &mut meter, &mut |cycle| {
                let n = cycle.len();
                (0..n).any(|k| {
                    let (a, b) = (cycle[k], cycle[(k + 1) % n]);
                    (a, b) == (u, v) || (a, b) == (v, u)
                })
            })?
        }
        ProblemId::Sat => {
            let Ok(f) = parse_cnf(w) else {
                return Ok(false);
            };
            match parse_assignment(s, f.variables()) {
                Ok(a) => f.evaluate(&a),
                Err(_) => false,
            }
        }
        _ => unreachable!("decision problems handled above"),
    })
}

/// What running a program produced. A timeout stands for the undefined
/// result of a program that crashes or never halts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Output { text: String, steps_used: u64 },
    Timeout { steps_used: u64 },
}

impl Outcome {
    pub fn output(&self) -> Option<&str> {
        match self {
            Outcome::Output { text, .. } => Some(text),
            Outcome::Timeout { .. } => None,
        }
    }

    pub fn steps_used(&self) -> u64 {
        match self {
            Outcome::Output { steps_used, .. } | Outcome::Timeout { steps_used } => *steps_used,
        }
    }

    /// `Some(true)` for accept (output other than "no"), `Some(false)` for
    /// reject, `None` when undefined.
    pub fn accepts(&self) -> Option<bool> {
        self.output().map(|t| t != NO)
    }
}

type ProgramBody = dyn Fn(&str, &mut StepMeter) -> Result<String, Exhausted> + Send + Sync;

/// A deterministic program on ASCII strings, instrumented with a step meter.
#[derive(Clone)]
pub struct Program {
    name: String,
    body: Arc<ProgramBody>,
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Program").field("name", &self.name).finish()
    }
}

impl Program {
    pub fn new<F>(name: impl Into<String>, body: F) -> Self
    where
        F: Fn(&str, &mut StepMeter) -> Result<String, Exhausted> + Send + Sync + 'static,
    {
        Program {
            name: name.into(),
            body: Arc::new(body),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Prints the smallest nontrivial factor, or "no". One step per digit
    /// parsed and per candidate divisor.
    pub fn trial_division() -> Self {
        Program::new("trial-division", |w, meter| {
            meter.charge(w.len() as u64)?;
            let Ok(m) = Natural::parse(w) else {
                return Ok(NO.to_string());
            };
            let Some(m) = m.to_u64() else {
                // Would run for longer than any desk-scale budget allows.
                meter.charge(u64::MAX)?;
                unreachable!()
            };
            for d in 2..m {
                meter.tick()?;
                if m % d == 0 {
                    return Ok(d.to_string());
                }
            }
            Ok(NO.to_string())
        })
    }

    /// Ignores its input.
    pub fn constant(output: impl Into<String>) -> Self {
        let output = output.into();
        Program::new(format!("constant:{output}"), move |_, _| Ok(output.clone()))
    }

    /// Prints the lexicographically smallest member of the brute-force
    /// solution set.
    pub fn brute_force(p: ProblemId) -> Self {
        Program::new(format!("brute-force:{p}"), move |w, meter| {
            let set = enumerate_metered(p, w, meter, false)?;
            let first = set.iter().next().cloned();
            Ok(first.unwrap_or_else(|| NO.to_string()))
        })
    }
}

/// Runs `prog` on `w`. Invocation and emitting the output cost one step
/// each, so every program spends at least two steps.
pub fn run_program(prog: &Program, w: &str, budget: StepBudget) -> Outcome {
    let mut meter = budget.meter();
    let result = meter
        .tick()
        .and_then(|_| (prog.body)(w, &mut meter))
        .and_then(|text| meter.tick().map(|_| text));
    match result {
        Ok(text) => Outcome::Output {
            text,
            steps_used: meter.used(),
        },
        Err(_) => Outcome::Timeout {
            steps_used: meter.used(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvesViolation {
    pub instance: String,
    pub verdict: String,
    pub detail: String,
}

/// Outcome of checking a solver against the oracle on a finite space. An
/// empty violation list means the program solves the problem there.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolvesReport {
    pub instances_checked: usize,
    pub violations: Vec<SolvesViolation>,
}

impl SolvesReport {
    pub fn solves(&self) -> bool {
        self.violations.is_empty()
    }

    /// Tab-separated `instance verdict detail` rows under a schema comment.
    pub fn to_records(&self) -> String {
        let mut out = String::from("# instance\tverdict\tdetail\n");
        for v in &self.violations {
            out.push_str(&format!("{}\t{}\t{}\n", v.instance, v.verdict, v.detail));
        }
        out
    }

    pub(crate) fn merge(parts: Vec<Vec<SolvesViolation>>) -> Self {
        SolvesReport {
            instances_checked: parts.len(),
            violations: parts.into_iter().flatten().collect(),
        }
    }
}

/// Checks `prog(w) ∈ F(w)` for every `w` in `space`. Instances are checked
/// in parallel; the report keeps the order of `space`.
pub fn solves_on_space(
    prog: &Program,
    p: ProblemId,
    space: &[String],
    budget: StepBudget,
) -> Result<SolvesReport, SolverError> {
    let parts = space
        .par_iter()
        .map(|w| {
            let expected = enumerate_solutions(p, w, budget)?;
            let outcome = run_program(prog, w, budget);
            Ok(match outcome {
                Outcome::Timeout { steps_used } => vec![SolvesViolation {
                    instance: w.clone(),
                    verdict: "timeout".into(),
                    detail: format!("steps={steps_used}"),
                }],
                Outcome::Output { text, .. } if !expected.contains(&text) => {
                    vec![SolvesViolation {
                        instance: w.clone(),
                        verdict: "wrong-output".into(),
                        detail: text,
                    }]
                }
                Outcome::Output { .. } => Vec::new(),
            })
        })
        .collect::<Result<Vec<_>, SolverError>>()?;
    Ok(SolvesReport::merge(parts))
}
