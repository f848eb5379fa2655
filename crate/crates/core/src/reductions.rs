//! Polyreductions, general reductions with a solution map, the NP-hardness
//! judgment, and search-to-decision self-reductions driven by a decision
//! oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::budget::{Exhausted, StepBudget, StepMeter};
use crate::encodings::{
    canonical_cycle, encode_assignment, encode_cnf, encode_graph, parse_cnf, parse_graph,
    parse_vertex_list, Clause, CnfFormula, EncodingError, Graph,
};
use crate::problems::{canonicalize_solution, ProblemId, NO, YES};
use crate::solvers::{
    enumerate_solutions, is_positive, run_program, Outcome, Program, SolverError,
};
use crate::spaces::desk_scale;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("`{0}` is not a decision problem, so it cannot be a polyreduction source")]
    NotADecisionSource(String),
    #[error("cannot compose: `{first}` targets {target}, but `{second}` starts from {expected}")]
    IncompatibleComposition {
        first: String,
        second: String,
        target: String,
        expected: String,
    },
    #[error("reduction exceeded its budget of {0}")]
    BudgetExceeded(StepBudget),
    #[error("{0} is not among the certified sources (HamCycleD, SatD)")]
    SourceNotCertified(String),
    #[error("reduction check failed on {failures} instances")]
    ReductionCheckFailed { failures: usize },
    #[error("oracle answers are inconsistent: {0}")]
    OracleInconsistent(String),
    #[error("unknown reduction `{0}`")]
    UnknownReduction(String),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

type MapFn = dyn Fn(&str, &mut StepMeter) -> Result<String, Exhausted> + Send + Sync;

fn budgeted(map: &MapFn, w: &str, budget: StepBudget) -> Result<String, ReductionError> {
    let mut meter = budget.meter();
    map(w, &mut meter).map_err(|_| ReductionError::BudgetExceeded(budget))
}

/// An instance map `r` from a decision problem `D` to a problem `G` such
/// that `w` is positive for `D` iff `r(w)` is positive for `G`.
#[derive(Clone)]
pub struct Polyreduction {
    name: String,
    source: ProblemId,
    target: ProblemId,
    map: Arc<MapFn>,
    budget: StepBudget,
}

impl fmt::Debug for Polyreduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polyreduction")
            .field("name", &self.name)
            .field("source", &self.source)
            .field("target", &self.target)
            .finish()
    }
}

impl Polyreduction {
    pub fn new<F>(
        name: impl Into<String>,
        source: ProblemId,
        target: ProblemId,
        map: F,
    ) -> Result<Self, ReductionError>
    where
        F: Fn(&str, &mut StepMeter) -> Result<String, Exhausted> + Send + Sync + 'static,
    {
        if !source.is_decision() {
            return Err(ReductionError::NotADecisionSource(
                source.name().to_string(),
            ));
        }
        Ok(Polyreduction {
            name: name.into(),
            source,
            target,
            map: Arc::new(map),
            budget: StepBudget::default(),
        })
    }

    pub fn with_budget(mut self, budget: StepBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> ProblemId {
        self.source
    }

    pub fn target(&self) -> ProblemId {
        self.target
    }

    /// `r2 ∘ r1`. The intermediate problem may be a search problem whose
    /// decision variant is `r2`'s source.
    pub fn then(&self, second: &Polyreduction) -> Result<Polyreduction, ReductionError> {
        if self.target.decision_variant() != second.source {
            return Err(ReductionError::IncompatibleComposition {
                first: self.name.clone(),
                second: second.name.clone(),
                target: self.target.name().to_string(),
                expected: second.source.name().to_string(),
            });
        }
        let (r1, r2) = (self.map.clone(), second.map.clone());
        Ok(Polyreduction {
            name: format!("{} then {}", self.name, second.name),
            source: self.source,
            target: second.target,
            map: Arc::new(move |w, meter| r2(&r1(w, meter)?, meter)),
            budget: StepBudget::new(
                self.budget
                    .max_steps()
                    .saturating_add(second.budget.max_steps()),
            ),
        })
    }
}

pub fn apply_polyreduction(red: &Polyreduction, w: &str) -> Result<String, ReductionError> {
    budgeted(&*red.map, w, red.budget)
}

fn copy(w: &str, meter: &mut StepMeter) -> Result<String, Exhausted> {
    meter.charge(w.len() as u64)?;
    Ok(w.to_string())
}

pub fn hamcycled_to_hamcycle() -> Polyreduction {
    Polyreduction::new(
        "hamcycled-to-hamcycle",
        ProblemId::HamCycleD,
        ProblemId::HamCycle,
        copy,
    )
    .expect("decision source")
}

pub fn satd_to_satd() -> Polyreduction {
    Polyreduction::new("satd-to-satd", ProblemId::SatD, ProblemId::SatD, copy)
        .expect("decision source")
}

const GADGET_ROLES: [&str; 3] = ["in", "mid", "out"];

fn gadget_vertex(v: &str, role: &str) -> String {
    format!("0{v}{role}")
}

/// Splits each vertex into an `in - mid - out` path and each arc `u -> v`
/// into the edge `u.out - v.in`. Malformed input maps to the one-vertex
/// graph, which has no Hamilton cycle.
fn split_vertices(g: &Graph, meter: &mut StepMeter) -> Result<String, Exhausted> {
    let mut out = Graph::new(false);
    for v in g.vertices() {
        meter.tick()?;
        out.add_edge(gadget_vertex(v, "in"), gadget_vertex(v, "mid"))
            .expect("fresh names");
        out.add_edge(gadget_vertex(v, "mid"), gadget_vertex(v, "out"))
            .expect("fresh names");
    }
    for (u, v) in g.edges() {
        meter.tick()?;
        out.add_edge(gadget_vertex(u, "out"), gadget_vertex(v, "in"))
            .expect("fresh names");
    }
    meter.charge(out.edge_count() as u64)?;
    Ok(encode_graph(&out))
}

fn gadget_map(w: &str, meter: &mut StepMeter) -> Result<String, Exhausted> {
    meter.charge(w.len() as u64)?;
    match parse_graph(w, true) {
        Ok(g) => split_vertices(&g, meter),
        Err(_) => Ok("a".to_string()),
    }
}

pub fn directed_to_undirected() -> Polyreduction {
    Polyreduction::new(
        "directed-to-undirected",
        ProblemId::DirectedHamCycleD,
        ProblemId::HamCycleD,
        gadget_map,
    )
    .expect("decision source")
}

/// The gadget reduction after silently dropping the smallest arc.
pub fn broken_drop_arc() -> Polyreduction {
    Polyreduction::new(
        "broken-drop-arc",
        ProblemId::DirectedHamCycleD,
        ProblemId::HamCycleD,
        |w, meter| {
            meter.charge(w.len() as u64)?;
            match parse_graph(w, true) {
                Ok(g) => {
                    let g = match g.edges().iter().next() {
                        Some((u, v)) => g.without_edge(u, v),
                        None => g,
                    };
                    split_vertices(&g, meter)
                }
                Err(_) => Ok("a".to_string()),
            }
        },
    )
    .expect("decision source")
}

pub fn polyreductions() -> Vec<Polyreduction> {
    vec![
        hamcycled_to_hamcycle(),
        satd_to_satd(),
        directed_to_undirected(),
        broken_drop_arc(),
    ]
}

pub fn polyreduction_by_name(name: &str) -> Result<Polyreduction, ReductionError> {
    polyreductions()
        .into_iter()
        .find(|r| r.name() == name)
        .ok_or_else(|| ReductionError::UnknownReduction(name.to_string()))
}

// --- checking -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// Source and target positivity differ.
    Mismatch,
    /// A target solution mapped back to something outside `F(w)`.
    BadSolution {
        target_solution: String,
        mapped: String,
    },
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Ok => f.write_str("ok"),
            RowStatus::Mismatch => f.write_str("mismatch"),
            RowStatus::BadSolution {
                target_solution,
                mapped,
            } => {
                write!(f, "bad-solution:{target_solution}->{mapped}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRow {
    pub instance: String,
    pub source_verdict: &'static str,
    pub target_verdict: &'static str,
    pub status: RowStatus,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionReport {
    pub reduction: String,
    pub rows: Vec<ReductionRow>,
    pub oracle_calls: u64,
}

impl ReductionReport {
    pub fn failures(&self) -> impl Iterator<Item = &ReductionRow> {
        self.rows.iter().filter(|r| r.status != RowStatus::Ok)
    }

    pub fn passes(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Newline-delimited `instance source_verdict target_verdict status`
    /// rows and a trailing summary comment with the oracle-call count.
    pub fn to_records(&self) -> String {
        let mut out = String::from("# instance\tsource_verdict\ttarget_verdict\tstatus\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.instance, r.source_verdict, r.target_verdict, r.status
            ));
        }
        out.push_str(&format!(
            "# summary instances={} failures={} oracle_calls={}\n",
            self.rows.len(),
            self.failures().count(),
            self.oracle_calls
        ));
        out
    }

    pub fn summary(&self) -> String {
        let failures = self.failures().count();
        let mut out = format!(
            "{} {}: {} instances, {} failures, {} oracle calls\n",
            if failures == 0 { "PASS" } else { "FAIL" },
            self.reduction,
            self.rows.len(),
            failures,
            self.oracle_calls
        );
        for r in self.failures().take(10) {
            out.push_str(&format!(
                "  w={:?} source={} target={} {}\n",
                r.instance, r.source_verdict, r.target_verdict, r.status
            ));
        }
        out
    }
}

fn verdict(positive: bool) -> &'static str {
    if positive {
        YES
    } else {
        NO
    }
}

/// Compares source positivity of `w` with target positivity of `r(w)` for
/// every `w` in `space`.
pub fn check_polyreduction(
    red: &Polyreduction,
    space: &[String],
    oracle_budget: StepBudget,
) -> Result<ReductionReport, ReductionError> {
    let rows = space
        .par_iter()
        .map(|w| {
            let mapped = apply_polyreduction(red, w)?;
            let source = is_positive(red.source, w, oracle_budget)?;
            let target = is_positive(red.target, &mapped, oracle_budget)?;
            Ok(ReductionRow {
                instance: w.clone(),
                source_verdict: verdict(source),
                target_verdict: verdict(target),
                status: if source == target {
                    RowStatus::Ok
                } else {
                    RowStatus::Mismatch
                },
            })
        })
        .collect::<Result<Vec<_>, ReductionError>>()?;
    Ok(ReductionReport {
        reduction: red.name.clone(),
        oracle_calls: 2 * rows.len() as u64,
        rows,
    })
}

// --- general reductions -------------------------------------------------

/// An instance map `r` together with a solution map `r'` such that
/// `r'(g)` solves `w` for every solution `g` of `r(w)`.
#[derive(Clone)]
pub struct GeneralReduction {
    name: String,
    source: ProblemId,
    target: ProblemId,
    map: Arc<MapFn>,
    map_back: Arc<MapFn>,
    budget: StepBudget,
}

impl fmt::Debug for GeneralReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralReduction")
            .field("name", &self.name)
            .field("source", &self.source)
            .field("target", &self.target)
            .finish()
    }
}

impl GeneralReduction {
    pub fn new<R, B>(
        name: impl Into<String>,
        source: ProblemId,
        target: ProblemId,
        map: R,
        map_back: B,
    ) -> Self
    where
        R: Fn(&str, &mut StepMeter) -> Result<String, Exhausted> + Send + Sync + 'static,
        B: Fn(&str, &mut StepMeter) -> Result<String, Exhausted> + Send + Sync + 'static,
    {
        GeneralReduction {
            name: name.into(),
            source,
            target,
            map: Arc::new(map),
            map_back: Arc::new(map_back),
            budget: StepBudget::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> ProblemId {
        self.source
    }

    pub fn target(&self) -> ProblemId {
        self.target
    }

    pub fn map(&self, w: &str) -> Result<String, ReductionError> {
        budgeted(&*self.map, w, self.budget)
    }

    pub fn map_back(&self, g: &str) -> Result<String, ReductionError> {
        budgeted(&*self.map_back, g, self.budget)
    }
}

pub fn hamcycle_identity() -> GeneralReduction {
    GeneralReduction::new(
        "hamcycle-identity",
        ProblemId::HamCycle,
        ProblemId::HamCycle,
        copy,
        copy,
    )
}

/// Contracts a Hamilton cycle of the split graph to the directed cycle it
/// encodes, in canonical form. Anything unrecognizable is returned as is.
fn contract_gadget_cycle(g: &str, meter: &mut StepMeter) -> Result<Option<Vec<String>>, Exhausted> {
    meter.charge(g.len() as u64)?;
    let Ok(names) = parse_vertex_list(g) else {
        return Ok(None);
    };
    let mut parts = Vec::with_capacity(names.len());
    for name in &names {
        let Some(rest) = name.strip_prefix('0') else {
            return Ok(None);
        };
        let Some((v, role)) = GADGET_ROLES
            .iter()
            .find_map(|role| rest.strip_suffix(role).map(|v| (v, *role)))
        else {
            return Ok(None);
        };
        parts.push((v, role));
    }
    let n = parts.len();
    if n < 3 || n % 3 != 0 {
        return Ok(None);
    }
    // Orient so that each `in` is followed by its `mid`.
    let forward = parts
        .iter()
        .enumerate()
        .find(|(_, (_, role))| *role == "in")
        .is_some_and(|(i, (v, _))| parts[(i + 1) % n] == (*v, "mid"));
    let ordered: Vec<(&str, &str)> = if forward {
        parts.clone()
    } else {
        parts.iter().rev().copied().collect()
    };
    Ok(Some(
        ordered
            .into_iter()
            .filter(|(_, role)| *role == "in")
            .map(|(v, _)| v.to_string())
            .collect(),
    ))
}

fn contract_back(g: &str, meter: &mut StepMeter, reverse: bool) -> Result<String, Exhausted> {
    if g == NO {
        return Ok(NO.to_string());
    }
    Ok(match contract_gadget_cycle(g, meter)? {
        Some(mut seq) => {
            if reverse {
                seq.reverse();
            }
            canonical_cycle(&seq, true).unwrap_or_else(|_| seq.join(","))
        }
        None => g.to_string(),
    })
}

pub fn directed_to_undirected_general() -> GeneralReduction {
    GeneralReduction::new(
        "directed-to-undirected-general",
        ProblemId::DirectedHamCycle,
        ProblemId::HamCycle,
        gadget_map,
        |g, meter| contract_back(g, meter, false),
    )
}

/// Contracts correctly, then walks the cycle backwards.
pub fn broken_reverse_names() -> GeneralReduction {
    GeneralReduction::new(
        "broken-reverse-names",
        ProblemId::DirectedHamCycle,
        ProblemId::HamCycle,
        gadget_map,
        |g, meter| contract_back(g, meter, true),
    )
}

pub fn general_reductions() -> Vec<GeneralReduction> {
    vec![
        hamcycle_identity(),
        directed_to_undirected_general(),
        broken_reverse_names(),
    ]
}

pub fn general_reduction_by_name(name: &str) -> Result<GeneralReduction, ReductionError> {
    general_reductions()
        .into_iter()
        .find(|r| r.name() == name)
        .ok_or_else(|| ReductionError::UnknownReduction(name.to_string()))
}

/// `r'(G(r(w)))` with `G` the given target program.
pub fn apply_general_reduction(
    gr: &GeneralReduction,
    target: &Program,
    w: &str,
    budget: StepBudget,
) -> Result<String, ReductionError> {
    let mapped = gr.map(w)?;
    match run_program(target, &mapped, budget) {
        Outcome::Output { text, .. } => gr.map_back(&text),
        Outcome::Timeout { .. } => Err(ReductionError::BudgetExceeded(budget)),
    }
}

/// Checks `r'(g) ∈ F(w)` for every solution `g` of `r(w)`, which covers
/// every program that solves the target; negative instances must map to
/// negative instances.
pub fn check_general_reduction(
    gr: &GeneralReduction,
    space: &[String],
    oracle_budget: StepBudget,
) -> Result<ReductionReport, ReductionError> {
    let rows = space
        .par_iter()
        .map(|w| {
            let mapped = gr.map(w)?;
            let source = enumerate_solutions(gr.source, w, oracle_budget)?;
            let target = enumerate_solutions(gr.target, &mapped, oracle_budget)?;
            let mut status = if source.is_negative() == target.is_negative() {
                RowStatus::Ok
            } else {
                RowStatus::Mismatch
            };
            if status == RowStatus::Ok {
                for g in target.iter() {
                    let back = canonicalize_solution(gr.source, &gr.map_back(g)?);
                    if !source.contains(&back) {
                        status = RowStatus::BadSolution {
                            target_solution: g.clone(),
                            mapped: back,
                        };
                        break;
                    }
                }
            }
            Ok(ReductionRow {
                instance: w.clone(),
                source_verdict: verdict(!source.is_negative()),
                target_verdict: verdict(!target.is_negative()),
                status,
            })
        })
        .collect::<Result<Vec<_>, ReductionError>>()?;
    Ok(ReductionReport {
        reduction: gr.name.clone(),
        oracle_calls: 2 * rows.len() as u64,
        rows,
    })
}

// --- NP-hardness ----------------------------------------------------------

/// Problems taken as NP-complete without further evidence.
pub const CERTIFIED_SOURCES: [ProblemId; 2] = [ProblemId::HamCycleD, ProblemId::SatD];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardnessJudgment {
    pub problem: ProblemId,
    pub label: String,
    pub report: ReductionReport,
}

/// Judges `red.target` NP-hard when `red` starts from a certified problem
/// and passes its check on the source's desk-scale space.
pub fn np_hard_via(
    red: &Polyreduction,
    certified: ProblemId,
    oracle_budget: StepBudget,
) -> Result<HardnessJudgment, ReductionError> {
    if !CERTIFIED_SOURCES.contains(&certified) || red.source != certified {
        return Err(ReductionError::SourceNotCertified(
            red.source.name().to_string(),
        ));
    }
    let report = check_polyreduction(red, &desk_scale(red.source), oracle_budget)?;
    let failures = report.failures().count();
    if failures > 0 {
        return Err(ReductionError::ReductionCheckFailed { failures });
    }
    Ok(HardnessJudgment {
        problem: red.target,
        label: format!(
            "{} is NP-hard relative to shipped certifications (via {} from {}; desk-scale certification, not a proof)",
            red.target, red.name, certified
        ),
        report,
    })
}

// --- self-reductions ------------------------------------------------------

type AnswerFn = dyn Fn(&str) -> Result<bool, SolverError> + Send + Sync;

/// A yes/no oracle for one decision problem that counts its queries.
pub struct DecisionOracle {
    answer: Box<AnswerFn>,
    call_count: u64,
}

impl DecisionOracle {
    pub fn new<F>(answer: F) -> Self
    where
        F: Fn(&str) -> Result<bool, SolverError> + Send + Sync + 'static,
    {
        DecisionOracle {
            answer: Box::new(answer),
            call_count: 0,
        }
    }

    /// Brute-force answers for `p`.
    pub fn exact(p: ProblemId, budget: StepBudget) -> Self {
        DecisionOracle::new(move |w| is_positive(p, w, budget))
    }

    pub fn query(&mut self, w: &str) -> Result<bool, ReductionError> {
        self.call_count += 1;
        Ok((self.answer)(w)?)
    }

    pub fn call_count(&self) -> u64 {
        self.call_count
    }
}

/// The smallest factor of `m` by binary search over `[2, m-1]` with a
/// factor-in-range oracle, or "no".
pub fn factor_search_via_oracle(
    m: u64,
    oracle: &mut DecisionOracle,
) -> Result<String, ReductionError> {
    if m < 3 {
        return Ok(NO.to_string());
    }
    let (mut lo, mut hi) = (2, m - 1);
    if !oracle.query(&format!("{m} {lo} {hi}"))? {
        return Ok(NO.to_string());
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if oracle.query(&format!("{m} {lo} {mid}"))? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if !m.is_multiple_of(lo) {
        return Err(ReductionError::OracleInconsistent(format!(
            "{lo} does not divide {m}"
        )));
    }
    Ok(lo.to_string())
}

/// Deletes edges in lexicographic order while a Hamilton cycle survives,
/// then reads off the cycle that is left.
pub fn hamcycle_search_via_oracle(
    g: &Graph,
    oracle: &mut DecisionOracle,
) -> Result<String, ReductionError> {
    if !oracle.query(&encode_graph(g))? {
        return Ok(NO.to_string());
    }
    let mut current = g.clone();
    for (u, v) in g.edges() {
        let smaller = current.without_edge(u, v);
        if oracle.query(&encode_graph(&smaller))? {
            current = smaller;
        }
    }
    let inconsistent = || {
        ReductionError::OracleInconsistent("surviving edges do not form one Hamilton cycle".into())
    };
    let (names, adj) = current.adjacency();
    let n = names.len();
    if n < 3 || current.edge_count() != n {
        return Err(inconsistent());
    }
    let mut seq = vec![0usize];
    let mut prev = usize::MAX;
    while seq.len() < n {
        let last = *seq.last().expect("nonempty");
        let next = (0..n)
            .find(|&x| adj[last][x] && x != prev && !seq.contains(&x))
            .ok_or_else(inconsistent)?;
        prev = last;
        seq.push(next);
    }
    if !adj[seq[n - 1]][0] {
        return Err(inconsistent());
    }
    let cycle: Vec<&str> = seq.iter().map(|&i| names[i]).collect();
    Ok(canonical_cycle(&cycle, false)?)
}

/// `f` with `var` fixed, or `None` when some clause becomes empty.
fn substitute(clauses: &[Clause], var: &str, value: bool) -> Option<Vec<Clause>> {
    let mut out = Vec::new();
    for clause in clauses {
        if clause.iter().any(|l| l.var == var && l.holds_under(value)) {
            continue;
        }
        let reduced: Clause = clause.iter().filter(|l| l.var != var).cloned().collect();
        if reduced.is_empty() {
            return None;
        }
        out.push(reduced);
    }
    Some(out)
}

fn encode_clauses(clauses: &[Clause]) -> String {
    encode_cnf(&CnfFormula::from_clauses(clauses.to_vec()).expect("clauses stay nonempty"))
}

/// Fixes variables in lexicographic order, trying 1 before 0. Variables
/// that no longer occur are set to 1 without a query.
pub fn sat_search_via_oracle(
    f: &CnfFormula,
    oracle: &mut DecisionOracle,
) -> Result<String, ReductionError> {
    if !oracle.query(&encode_cnf(f))? {
        return Ok(NO.to_string());
    }
    let mut clauses: Vec<Clause> = f.clauses().to_vec();
    let mut assignment = BTreeMap::new();
    for var in f.variables() {
        let occurs = clauses.iter().any(|c| c.iter().any(|l| &l.var == var));
        let value = if !occurs {
            true
        } else {
            match substitute(&clauses, var, true) {
                Some(fixed) if oracle.query(&encode_clauses(&fixed))? => {
                    clauses = fixed;
                    true
                }
                _ => {
                    clauses = substitute(&clauses, var, false).ok_or_else(|| {
                        ReductionError::OracleInconsistent(format!(
                            "neither value of {var} keeps the formula satisfiable"
                        ))
                    })?;
                    false
                }
            }
        };
        assignment.insert(var.clone(), value);
    }
    if !f.evaluate(&assignment) {
        return Err(ReductionError::OracleInconsistent(
            "final assignment does not satisfy the formula".into(),
        ));
    }
    Ok(encode_assignment(&assignment, f.variables())?)
}

/// Parses `w` for the search problem `p` and runs its self-reduction with
/// an exact oracle. Returns the answer and the number of oracle calls.
/// Malformed instances are negative and need no calls.
pub fn search_via_exact_oracle(
    p: ProblemId,
    w: &str,
    budget: StepBudget,
) -> Result<(String, u64), ReductionError> {
    let (answer, oracle) = match p {
        ProblemId::Factor => {
            let Ok(m) = crate::encodings::Natural::parse(w) else {
                return Ok((NO.to_string(), 0));
            };
            let m = m.to_u64().ok_or(ReductionError::BudgetExceeded(budget))?;
            let mut oracle = DecisionOracle::exact(ProblemId::FactorInRangeD, budget);
            (factor_search_via_oracle(m, &mut oracle)?, oracle)
        }
        ProblemId::HamCycle => {
            let Ok(g) = parse_graph(w, false) else {
                return Ok((NO.to_string(), 0));
            };
            let mut oracle = DecisionOracle::exact(ProblemId::HamCycleD, budget);
            (hamcycle_search_via_oracle(&g, &mut oracle)?, oracle)
        }
        ProblemId::Sat => {
            let Ok(f) = parse_cnf(w) else {
                return Ok((NO.to_string(), 0));
            };
            let mut oracle = DecisionOracle::exact(ProblemId::SatD, budget);
            (sat_search_via_oracle(&f, &mut oracle)?, oracle)
        }
        other => {
            return Err(ReductionError::UnknownReduction(format!(
                "self-reduction for {other}"
            )))
        }
    };
    Ok((answer, oracle.call_count()))
}
