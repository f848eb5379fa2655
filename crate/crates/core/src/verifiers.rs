//! Verifiers `V(w, s, h)` over an instance `w`, a proposed solution `s` and
//! a hint `h`, plus an exhaustive checker for the three verifier axioms:
//!
//! 1. every positive instance is accepted for some correct `s` and some `h`;
//! 2. a negative instance is never accepted, whatever `s` and `h` are;
//! 3. an incorrect `s` (one outside `F(w)`) is never accepted, whatever `h` is.
//!
//! Verifiers read `s` and `h` through [`Tape`]s that record whether the end
//! of the string was observed. A run that never looked past byte `k` of a
//! string behaves identically on every extension of that prefix, which lets
//! the axiom checker certify the whole bounded `(s, h)` grid while running
//! the verifier only once per distinguishable prefix pair.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::budget::{Exhausted, StepBudget, StepMeter};
use crate::encodings::{
    is_name_byte, parse_cnf, parse_graph, parse_range_instance, parse_vertex_list, Natural,
};
use crate::problems::{ProblemError, ProblemId, SolutionSet, NO, YES};
use crate::solvers::{enumerate_solutions, SolverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error("verifier timed out after {0}")]
    VerifierTimeout(StepBudget),
    #[error("unknown adversarial verifier kind `{0}`")]
    UnknownKind(String),
    #[error("search space too large: about {estimated_size} (s, h) pairs per instance")]
    SearchSpaceTooLarge { estimated_size: u128 },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Read-only view of a string that remembers whether the reader looked at
/// (or past) its end.
#[derive(Debug)]
pub struct Tape<'a> {
    bytes: &'a [u8],
    saw_end: bool,
}

impl<'a> Tape<'a> {
    pub fn new(text: &'a str) -> Self {
        Tape {
            bytes: text.as_bytes(),
            saw_end: false,
        }
    }

    /// Byte at `i`, or `None` past the end (which counts as seeing the end).
    pub fn get(&mut self, i: usize) -> Option<u8> {
        let b = self.bytes.get(i).copied();
        if b.is_none() {
            self.saw_end = true;
        }
        b
    }

    /// The whole string. Marks the end as seen.
    pub fn read_all(&mut self) -> &'a str {
        self.saw_end = true;
        std::str::from_utf8(self.bytes).expect("tapes hold ASCII")
    }

    pub fn saw_end(&self) -> bool {
        self.saw_end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => YES,
            Verdict::No => NO,
        }
    }
}

impl From<bool> for Verdict {
    fn from(yes: bool) -> Self {
        if yes {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

type CheckFn = dyn Fn(&str, &mut Tape<'_>, &mut Tape<'_>, &mut StepMeter) -> Result<bool, Exhausted>
    + Send
    + Sync;

/// A three-argument yes/no procedure targeting one problem.
#[derive(Clone)]
pub struct Verifier {
    name: String,
    target: ProblemId,
    check: Arc<CheckFn>,
}

impl fmt::Debug for Verifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Verifier")
            .field("name", &self.name)
            .field("target", &self.target)
            .finish()
    }
}

impl Verifier {
    pub fn new<F>(name: impl Into<String>, target: ProblemId, check: F) -> Self
    where
        F: Fn(&str, &mut Tape<'_>, &mut Tape<'_>, &mut StepMeter) -> Result<bool, Exhausted>
            + Send
            + Sync
            + 'static,
    {
        Verifier {
            name: name.into(),
            target,
            check: Arc::new(check),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn target(&self) -> ProblemId {
        self.target
    }

    pub fn run(
        &self,
        w: &str,
        s: &mut Tape<'_>,
        h: &mut Tape<'_>,
        meter: &mut StepMeter,
    ) -> Result<bool, Exhausted> {
        (self.check)(w, s, h, meter)
    }
}

/// Runs `v` once. A timeout is an error, never a silent "no".
pub fn verify(
    v: &Verifier,
    w: &str,
    s: &str,
    h: &str,
    budget: StepBudget,
) -> Result<Verdict, VerifierError> {
    verify_counted(v, w, s, h, budget).map(|(verdict, _)| verdict)
}

/// [`verify`], also returning the steps the run used.
pub fn verify_counted(
    v: &Verifier,
    w: &str,
    s: &str,
    h: &str,
    budget: StepBudget,
) -> Result<(Verdict, u64), VerifierError> {
    let mut meter = budget.meter();
    let verdict = v
        .run(w, &mut Tape::new(s), &mut Tape::new(h), &mut meter)
        .map_err(|_| VerifierError::VerifierTimeout(budget))?;
    Ok((Verdict::from(verdict), meter.used()))
}

// --- tape readers -------------------------------------------------------

/// Reads `name(,name)*` naming vertices from the sorted list `names`.
///
/// `admit(seq, v)` decides whether vertex `v` may follow `seq`. Returns
/// `None` as soon as the bytes read so far cannot begin an admissible list,
/// so a verifier built on it stops at the first bad byte.
fn read_vertex_list(
    tape: &mut Tape<'_>,
    meter: &mut StepMeter,
    names: &[&str],
    mut admit: impl FnMut(&[usize], usize) -> bool,
) -> Result<Option<Vec<usize>>, Exhausted> {
    let mut seq: Vec<usize> = Vec::new();
    let mut current = String::new();
    let mut pos = 0;
    loop {
        meter.tick()?;
        let b = tape.get(pos);
        match b {
            Some(c) if is_name_byte(c) => {
                current.push(c as char);
                if !names.iter().any(|n| n.starts_with(current.as_str())) {
                    return Ok(None);
                }
            }
            Some(b',') | None => {
                let Ok(v) = names.binary_search(&current.as_str()) else {
                    return Ok(None);
                };
                if seq.contains(&v) || !admit(&seq, v) {
                    return Ok(None);
                }
                seq.push(v);
                current.clear();
                if b.is_none() {
                    return Ok(Some(seq));
                }
            }
            Some(_) => return Ok(None),
        }
        pos += 1;
    }
}

/// Reads a decimal without leading zeros whose value never exceeds `cap`.
fn read_bounded_decimal(
    tape: &mut Tape<'_>,
    meter: &mut StepMeter,
    cap: u64,
) -> Result<Option<u64>, Exhausted> {
    let mut value: u64 = 0;
    let mut pos = 0;
    loop {
        meter.tick()?;
        match tape.get(pos) {
            Some(b'0') if pos == 0 => return Ok(None),
            Some(d @ b'0'..=b'9') => {
                value = match value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(u64::from(d - b'0')))
                {
                    Some(v) if v <= cap => v,
                    _ => return Ok(None),
                };
            }
            None if pos > 0 => return Ok(Some(value)),
            _ => return Ok(None),
        }
        pos += 1;
    }
}

/// True iff the tape holds exactly `expected`.
fn read_exact(
    tape: &mut Tape<'_>,
    meter: &mut StepMeter,
    expected: &str,
) -> Result<bool, Exhausted> {
    for (i, b) in expected.bytes().enumerate() {
        meter.tick()?;
        if tape.get(i) != Some(b) {
            return Ok(false);
        }
    }
    meter.tick()?;
    Ok(tape.get(expected.len()).is_none())
}

// --- shipped verifiers --------------------------------------------------

fn hamcycle_check(
    directed: bool,
    w: &str,
    s: &mut Tape<'_>,
    meter: &mut StepMeter,
) -> Result<bool, Exhausted> {
    meter.charge(w.len() as u64)?;
    let Ok(g) = parse_graph(w, directed) else {
        return Ok(false);
    };
    let (names, adj) = g.adjacency();
    let n = names.len();
    if n < if directed { 2 } else { 3 } {
        return Ok(false);
    }
    // Canonical form: the smallest vertex (index 0) leads.
    let Some(seq) = read_vertex_list(s, meter, &names, |seq, v| match seq.last() {
        None => v == 0,
        Some(&last) => adj[last][v],
    })?
    else {
        return Ok(false);
    };
    Ok(seq.len() == n && adj[seq[n - 1]][0] && (directed || seq[1] < seq[n - 1]))
}

fn factor_check(w: &str, s: &mut Tape<'_>, meter: &mut StepMeter) -> Result<bool, Exhausted> {
    meter.charge(w.len() as u64)?;
    let Some(m) = Natural::parse(w).ok().and_then(|m| m.to_u64()) else {
        return Ok(false);
    };
    if m < 4 {
        return Ok(false);
    }
    Ok(matches!(read_bounded_decimal(s, meter, m - 1)?, Some(d) if d >= 2 && m % d == 0))
}

fn factor_in_range_check(
    w: &str,
    d: &mut Tape<'_>,
    meter: &mut StepMeter,
) -> Result<bool, Exhausted> {
    meter.charge(w.len() as u64)?;
    let Ok((m, lo, hi)) = parse_range_instance(w) else {
        return Ok(false);
    };
    let Some(m) = m.to_u64() else {
        return Ok(false);
    };
    let lo = lo.to_u64().unwrap_or(u64::MAX).max(2);
    let hi = hi.to_u64().unwrap_or(u64::MAX).min(m.saturating_sub(1));
    if m < 4 || lo > hi {
        return Ok(false);
    }
    Ok(matches!(read_bounded_decimal(d, meter, hi)?, Some(d) if d >= lo && m % d == 0))
}

fn sat_check(w: &str, s: &mut Tape<'_>, meter: &mut StepMeter) -> Result<bool, Exhausted> {
    meter.charge(w.len() as u64)?;
    let Ok(f) = parse_cnf(w) else {
        return Ok(false);
    };
    let vars: Vec<&String> = f.variables().iter().collect();
    let mut assignment = std::collections::BTreeMap::new();
    let mut pos = 0;
    let expect = |tape: &mut Tape<'_>,
                  meter: &mut StepMeter,
                  b: u8,
                  pos: &mut usize|
     -> Result<bool, Exhausted> {
        meter.tick()?;
        let ok = tape.get(*pos) == Some(b);
        *pos += 1;
        Ok(ok)
    };
    for (i, var) in vars.iter().enumerate() {
        if i > 0 && !expect(s, meter, b' ', &mut pos)? {
            return Ok(false);
        }
        for b in var.bytes().chain(std::iter::once(b'=')) {
            if !expect(s, meter, b, &mut pos)? {
                return Ok(false);
            }
        }
        meter.tick()?;
        let value = match s.get(pos) {
            Some(b'0') => false,
            Some(b'1') => true,
            _ => return Ok(false),
        };
        pos += 1;
        assignment.insert((*var).clone(), value);
    }
    meter.tick()?;
    if s.get(pos).is_some() {
        return Ok(false);
    }
    meter.charge(f.clauses().iter().map(|c| c.len() as u64).sum())?;
    Ok(f.evaluate(&assignment))
}

fn hamcycle_edge_check(
    w: &str,
    s: &mut Tape<'_>,
    h: &mut Tape<'_>,
    meter: &mut StepMeter,
) -> Result<bool, Exhausted> {
    meter.charge(w.len() as u64)?;
    let Ok(g) = parse_graph(w, false) else {
        return Ok(false);
    };
    let (names, adj) = g.adjacency();
    let n = names.len();
    if n < 3 {
        return Ok(false);
    }
    // s is the edge `u,v` with u < v.
    let Some(edge) = read_vertex_list(s, meter, &names, |seq, v| match seq {
        [] => true,
        [u] => v > *u && adj[*u][v],
        _ => false,
    })?
    else {
        return Ok(false);
    };
    let [u, v] = edge[..] else {
        return Ok(false);
    };
    // h continues the walk from v and must return to u.
    let Some(rest) = read_vertex_list(h, meter, &names, |seq, x| {
        x != u && x != v && adj[*seq.last().unwrap_or(&v)][x]
    })?
    else {
        return Ok(false);
    };
    Ok(rest.len() + 2 == n && adj[*rest.last().expect("nonempty")][u])
}

/// Decision verifiers take `s = "yes"` and the certificate in `h`.
fn decision_of<F>(
    inner: F,
) -> impl Fn(&str, &mut Tape<'_>, &mut Tape<'_>, &mut StepMeter) -> Result<bool, Exhausted>
where
    F: Fn(&str, &mut Tape<'_>, &mut StepMeter) -> Result<bool, Exhausted>,
{
    move |w, s, h, meter| Ok(read_exact(s, meter, YES)? && inner(w, h, meter)?)
}

/// The shipped verifier for `p`.
pub fn verifier_for(p: ProblemId) -> Verifier {
    let name = format!("{p}-verifier");
    match p {
        ProblemId::Factor => Verifier::new(name, p, |w, s, _h, m| factor_check(w, s, m)),
        ProblemId::FactorD => Verifier::new(name, p, decision_of(factor_check)),
        ProblemId::FactorInRangeD => Verifier::new(name, p, decision_of(factor_in_range_check)),
        ProblemId::HamCycle => Verifier::new(name, p, |w, s, _h, m| hamcycle_check(false, w, s, m)),
        ProblemId::HamCycleD => Verifier::new(
            name,
            p,
            decision_of(|w, c, m| hamcycle_check(false, w, c, m)),
        ),
        ProblemId::DirectedHamCycle => {
            Verifier::new(name, p, |w, s, _h, m| hamcycle_check(true, w, s, m))
        }
        ProblemId::DirectedHamCycleD => Verifier::new(
            name,
            p,
            decision_of(|w, c, m| hamcycle_check(true, w, c, m)),
        ),
        ProblemId::HamCycleEdge => Verifier::new(name, p, hamcycle_edge_check),
        ProblemId::Sat => Verifier::new(name, p, |w, s, _h, m| sat_check(w, s, m)),
        ProblemId::SatD => Verifier::new(name, p, decision_of(sat_check)),
    }
}

pub fn verifier_by_name(problem: &str) -> Result<Verifier, VerifierError> {
    Ok(verifier_for(problem.parse()?))
}

// --- adversarial verifiers ----------------------------------------------

/// Deliberately wrong verifiers for the Hamilton cycle problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversarialKind {
    /// Accepts a path that becomes a Hamilton cycle once at most two
    /// omitted vertices are appended. Violates axiom 3.
    PartialCycleAsSolution,
    /// Accepts `("", "")` on any graph with fewer than three edges, all of
    /// which are negative. Violates axiom 2.
    AcceptsNegative,
    /// Always says no. Violates axiom 1.
    RejectsEverything,
}

impl AdversarialKind {
    pub const ALL: [AdversarialKind; 3] = [
        AdversarialKind::PartialCycleAsSolution,
        AdversarialKind::AcceptsNegative,
        AdversarialKind::RejectsEverything,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdversarialKind::PartialCycleAsSolution => "partial-cycle-as-solution",
            AdversarialKind::AcceptsNegative => "accepts-negative",
            AdversarialKind::RejectsEverything => "rejects-everything",
        }
    }
}

impl FromStr for AdversarialKind {
    type Err = VerifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AdversarialKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| VerifierError::UnknownKind(s.to_string()))
    }
}

fn partial_cycle_check(
    w: &str,
    s: &mut Tape<'_>,
    meter: &mut StepMeter,
) -> Result<bool, Exhausted> {
    meter.charge(w.len() as u64)?;
    let Ok(g) = parse_graph(w, false) else {
        return Ok(false);
    };
    let (names, adj) = g.adjacency();
    let n = names.len();
    if n < 3 {
        return Ok(false);
    }
    let Some(seq) = read_vertex_list(s, meter, &names, |seq, v| {
        seq.last().is_none_or(|&u| adj[u][v])
    })?
    else {
        return Ok(false);
    };
    let missing: Vec<usize> = (0..n).filter(|v| !seq.contains(v)).collect();
    if seq.len() < 2 || missing.len() > 2 {
        return Ok(false);
    }
    let orders: Vec<Vec<usize>> = match missing[..] {
        [] => vec![vec![]],
        [a] => vec![vec![a]],
        [a, b] => vec![vec![a, b], vec![b, a]],
        _ => unreachable!(),
    };
    Ok(orders.into_iter().any(|tail| {
        let full: Vec<usize> = seq.iter().copied().chain(tail).collect();
        (0..n).all(|k| adj[full[k]][full[(k + 1) % n]])
    }))
}

pub fn adversarial_verifier(kind: &str) -> Result<Verifier, VerifierError> {
    let kind: AdversarialKind = kind.parse()?;
    let name = format!("adversarial:{}", kind.name());
    let p = ProblemId::HamCycle;
    Ok(match kind {
        AdversarialKind::PartialCycleAsSolution => {
            Verifier::new(name, p, |w, s, _h, m| partial_cycle_check(w, s, m))
        }
        AdversarialKind::AcceptsNegative => Verifier::new(name, p, |w, s, h, m| {
            let sparse = parse_graph(w, false).is_ok_and(|g| g.edge_count() < 3);
            if sparse && s.get(0).is_none() && h.get(0).is_none() {
                return Ok(true);
            }
            hamcycle_check(false, w, s, m)
        }),
        AdversarialKind::RejectsEverything => Verifier::new(name, p, |_, _, _, _| Ok(false)),
    })
}

// --- axiom checker ------------------------------------------------------

/// Knobs for [`check_verifier_axioms`].
#[derive(Debug, Clone)]
pub struct AxiomConfig {
    /// Maximum length of enumerated `s` and `h` strings.
    pub string_bound: usize,
    /// Enumeration alphabet; `None` picks [`default_alphabet`] per instance.
    pub alphabet: Option<Vec<u8>>,
    /// Step budget for each verifier run.
    pub budget: StepBudget,
    /// Step budget for each oracle call.
    pub oracle_budget: StepBudget,
    /// Ceiling on verifier runs per instance.
    pub max_runs_per_instance: u64,
    /// Require every correct solution (not just one) to be verifiable.
    pub strict: bool,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            string_bound: 8,
            alphabet: None,
            budget: StepBudget::default(),
            oracle_budget: StepBudget::default(),
            max_runs_per_instance: 1_000_000,
            strict: false,
        }
    }
}

/// Characters of `w`, the separators `,` and space, and the symbols that
/// solutions of `p` are written in.
pub fn default_alphabet(p: ProblemId, w: &str) -> Vec<u8> {
    let mut set: BTreeSet<u8> = w.bytes().collect();
    set.extend(b", ");
    match p {
        ProblemId::Factor | ProblemId::FactorD | ProblemId::FactorInRangeD => {
            set.extend(b"0123456789")
        }
        ProblemId::Sat | ProblemId::SatD => set.extend(b"=01"),
        _ => {}
    }
    set.into_iter().collect()
}

/// Hints the shipped verifier needs for solution `s` of a positive `w`.
pub fn canonical_hints(
    p: ProblemId,
    w: &str,
    s: &str,
    budget: StepBudget,
) -> Result<Vec<String>, SolverError> {
    Ok(match p {
        ProblemId::FactorInRangeD => {
            let Ok((m, lo, hi)) = parse_range_instance(w) else {
                return Ok(Vec::new());
            };
            let (Some(m), lo, hi) = (
                m.to_u64(),
                lo.to_u64().unwrap_or(u64::MAX),
                hi.to_u64().unwrap_or(u64::MAX),
            ) else {
                return Ok(Vec::new());
            };
            enumerate_solutions(ProblemId::Factor, &m.to_string(), budget)?
                .positive_members()
                .into_iter()
                .filter(|d| d.parse::<u64>().is_ok_and(|d| d >= lo && d <= hi))
                .collect()
        }
        ProblemId::HamCycleEdge => {
            let Ok(edge) = parse_vertex_list(s) else {
                return Ok(Vec::new());
            };
            let [u, v] = edge[..] else {
                return Ok(Vec::new());
            };
            let mut hints = Vec::new();
            for cycle in enumerate_solutions(ProblemId::HamCycle, w, budget)?.positive_members() {
                let seq: Vec<&str> = cycle.split(',').collect();
                let n = seq.len();
                let Some(i) = seq.iter().position(|x| *x == u) else {
                    continue;
                };
                let walk: Vec<&str> = if seq[(i + 1) % n] == v {
                    (0..n).map(|k| seq[(i + k) % n]).collect()
                } else if seq[(i + n - 1) % n] == v {
                    (0..n).map(|k| seq[(i + n - k) % n]).collect()
                } else {
                    continue;
                };
                hints.push(walk[2..].join(","));
            }
            hints
        }
        decision if decision.is_decision() => match decision.search_variant() {
            Some(q) => enumerate_solutions(q, w, budget)?
                .positive_members()
                .into_iter()
                .collect(),
            None => Vec::new(),
        },
        _ => vec![String::new()],
    })
}

/// One `(instance, s, h, verdict)` row of an axiom report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub instance: String,
    pub s: String,
    pub h: String,
    pub verdict: String,
}

/// Result of certifying a verifier on a bounded space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub verifier: String,
    pub problem: String,
    /// One accepted `(s, h)` per positive instance.
    pub axiom1_witnesses: Vec<Witness>,
    /// Positive instances where no accepted pair was found.
    pub axiom1_failures: Vec<Witness>,
    /// Correct solutions with no accepting hint (strict mode only).
    pub strict_failures: Vec<Witness>,
    pub axiom2_violations: Vec<Witness>,
    pub axiom3_violations: Vec<Witness>,
    pub timeouts: Vec<Witness>,
    pub search_bounds: String,
    pub instances_checked: usize,
    pub verifier_runs: u64,
    /// Number of `(instance, s, h)` triples certified, counting each
    /// pruned region at its full size.
    pub triples_covered: u128,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.axiom1_failures.is_empty()
            && self.strict_failures.is_empty()
            && self.axiom2_violations.is_empty()
            && self.axiom3_violations.is_empty()
            && self.timeouts.is_empty()
    }

    /// Failure rows in report order: axiom 1, strict, axiom 2, axiom 3,
    /// timeouts.
    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &Witness)> {
        let tag = |t: &'static str| move |w| (t, w);
        self.axiom1_failures
            .iter()
            .map(tag("axiom1"))
            .chain(self.strict_failures.iter().map(tag("axiom1-strict")))
            .chain(self.axiom2_violations.iter().map(tag("axiom2")))
            .chain(self.axiom3_violations.iter().map(tag("axiom3")))
            .chain(self.timeouts.iter().map(tag("timeout")))
    }

    /// Newline-delimited `axiom instance s h verdict` records, witnesses
    /// first, under a schema comment.
    pub fn to_records(&self) -> String {
        let mut out = String::from("# axiom\tinstance\ts\th\tverdict\n");
        let rows = self
            .axiom1_witnesses
            .iter()
            .map(|w| ("axiom1-witness", w))
            .chain(self.failures());
        for (axiom, w) in rows {
            out.push_str(&format!(
                "{axiom}\t{}\t{}\t{}\t{}\n",
                w.instance, w.s, w.h, w.verdict
            ));
        }
        out
    }

    /// PASS/FAIL line, counts, and the first ten failure witnesses.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} {} on {}: {} instances, {} verifier runs, {} triples covered ({})\n",
            if self.passes() { "PASS" } else { "FAIL" },
            self.verifier,
            self.problem,
            self.instances_checked,
            self.verifier_runs,
            self.triples_covered,
            self.search_bounds,
        );
        out.push_str(&format!(
            "axiom1 failures: {}, axiom2 violations: {}, axiom3 violations: {}, timeouts: {}, strict failures: {}\n",
            self.axiom1_failures.len(),
            self.axiom2_violations.len(),
            self.axiom3_violations.len(),
            self.timeouts.len(),
            self.strict_failures.len(),
        ));
        for (axiom, w) in self.failures().take(10) {
            out.push_str(&format!(
                "  {axiom}: w={:?} s={:?} h={:?} -> {}\n",
                w.instance, w.s, w.h, w.verdict
            ));
        }
        out
    }
}

/// Witnesses kept per instance and violation class.
const WITNESS_CAP: usize = 3;

#[derive(Default)]
struct InstanceResult {
    axiom1_witness: Option<Witness>,
    axiom1_failure: Option<Witness>,
    strict_failures: Vec<Witness>,
    axiom2: Vec<Witness>,
    axiom3: Vec<Witness>,
    timeouts: Vec<Witness>,
    runs: u64,
    covered: u128,
}

/// A block of the `(s, h)` grid on which one verifier run decides the
/// verdict: `s` alone when `s_exact`, otherwise every extension of `s` up
/// to the bound; likewise for `h`.
struct Region<'a> {
    s: &'a str,
    s_exact: bool,
    h: &'a str,
    h_exact: bool,
    outcome: Result<bool, Exhausted>,
}

struct Explorer<'a> {
    verifier: &'a Verifier,
    w: &'a str,
    alphabet: &'a [u8],
    bound: usize,
    budget: StepBudget,
    max_runs: u64,
    runs: u64,
    estimated: u128,
}

fn count_strings(alphabet: usize, max_len: usize) -> u128 {
    (0..=max_len as u32)
        .map(|k| (alphabet as u128).saturating_pow(k))
        .fold(0u128, u128::saturating_add)
}

impl Explorer<'_> {
    fn extensions(&self, prefix: &str) -> u128 {
        count_strings(self.alphabet.len(), self.bound.saturating_sub(prefix.len()))
    }

    fn region_size(&self, r: &Region<'_>) -> u128 {
        let s = if r.s_exact { 1 } else { self.extensions(r.s) };
        let h = if r.h_exact { 1 } else { self.extensions(r.h) };
        s.saturating_mul(h)
    }

    /// Visits a partition of `{s or its extensions} x {h or its extensions}`
    /// into regions of identical verifier behaviour.
    fn explore(
        &mut self,
        s: &str,
        s_pinned: bool,
        h: &str,
        h_pinned: bool,
        visit: &mut dyn FnMut(&Self, &Region<'_>) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, VerifierError> {
        self.runs += 1;
        if self.runs > self.max_runs {
            return Err(VerifierError::SearchSpaceTooLarge {
                estimated_size: self.estimated,
            });
        }
        let (mut st, mut ht) = (Tape::new(s), Tape::new(h));
        let mut meter = self.budget.meter();
        let outcome = self.verifier.run(self.w, &mut st, &mut ht, &mut meter);
        let s_exact = s_pinned || st.saw_end();
        let h_exact = h_pinned || ht.saw_end();
        let region = Region {
            s,
            s_exact,
            h,
            h_exact,
            outcome,
        };
        if visit(self, &region).is_break() {
            return Ok(ControlFlow::Break(()));
        }
        // Strict extensions of s, with h's domain unchanged.
        if s_exact && !s_pinned && s.len() < self.bound {
            for &c in self.alphabet {
                let longer = format!("{s}{}", c as char);
                if self.explore(&longer, false, h, h_pinned, visit)?.is_break() {
                    return Ok(ControlFlow::Break(()));
                }
            }
        }
        // Strict extensions of h, paired with the s-block just covered.
        if h_exact && !h_pinned && h.len() < self.bound {
            for &c in self.alphabet {
                let longer = format!("{h}{}", c as char);
                if self.explore(s, s_exact, &longer, false, visit)?.is_break() {
                    return Ok(ControlFlow::Break(()));
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Some `s'` in the region's s-block that is not a solution.
    fn incorrect_member(&self, r: &Region<'_>, solutions: &SolutionSet) -> Option<String> {
        if r.s_exact {
            return (!solutions.contains(r.s)).then(|| r.s.to_string());
        }
        let mut frontier = vec![r.s.to_string()];
        while let Some(s) = frontier.pop() {
            if !solutions.contains(&s) {
                return Some(s);
            }
            if s.len() < self.bound {
                frontier.extend(self.alphabet.iter().map(|&c| format!("{s}{}", c as char)));
            }
        }
        None
    }
}

fn representable(s: &str, alphabet: &[u8], bound: usize) -> bool {
    s.len() <= bound && s.bytes().all(|b| alphabet.contains(&b))
}

fn check_instance(
    v: &Verifier,
    p: ProblemId,
    w: &str,
    cfg: &AxiomConfig,
) -> Result<InstanceResult, VerifierError> {
    let solutions = enumerate_solutions(p, w, cfg.oracle_budget)?;
    let alphabet = cfg
        .alphabet
        .clone()
        .unwrap_or_else(|| default_alphabet(p, w));
    let side = count_strings(alphabet.len(), cfg.string_bound);
    let mut ex = Explorer {
        verifier: v,
        w,
        alphabet: &alphabet,
        bound: cfg.string_bound,
        budget: cfg.budget,
        max_runs: cfg.max_runs_per_instance,
        runs: 0,
        estimated: side.saturating_mul(side),
    };
    let mut result = InstanceResult::default();
    let witness = |s: &str, h: &str, verdict: &str| Witness {
        instance: w.to_string(),
        s: s.to_string(),
        h: h.to_string(),
        verdict: verdict.to_string(),
    };

    // Axiom 1: search hints for the oracle's solutions, seeds first.
    if !solutions.is_negative() {
        for s in solutions.iter() {
            let mut found: Option<Witness> = None;
            for h in canonical_hints(p, w, s, cfg.oracle_budget)? {
                ex.runs += 1;
                let mut meter = cfg.budget.meter();
                if v.run(w, &mut Tape::new(s), &mut Tape::new(&h), &mut meter) == Ok(true) {
                    found = Some(witness(s, &h, YES));
                    break;
                }
            }
            if found.is_none() {
                let _ = ex.explore(s, true, "", false, &mut |_, r| {
                    if r.outcome == Ok(true) {
                        found = Some(witness(r.s, r.h, YES));
                        return ControlFlow::Break(());
                    }
                    ControlFlow::Continue(())
                })?;
            }
            match found {
                Some(wit) => {
                    if result.axiom1_witness.is_none() {
                        result.axiom1_witness = Some(wit);
                    }
                    if !cfg.strict {
                        break;
                    }
                }
                None if cfg.strict => result.strict_failures.push(witness(s, "", "unverified")),
                None => {}
            }
        }
        if result.axiom1_witness.is_none() {
            result.axiom1_failure = Some(witness("", "", "unverified"));
            result.strict_failures.clear();
        }
    }

    // Axioms 2 and 3: the whole bounded grid, plus "yes"/"no" when the
    // alphabet cannot spell them.
    let negative = solutions.is_negative();
    let mut roots: Vec<(String, bool)> = vec![(String::new(), false)];
    for extra in [YES, NO] {
        if !representable(extra, &alphabet, cfg.string_bound) {
            roots.push((extra.to_string(), true));
        }
    }
    let mut covered: u128 = 0;
    let (mut axiom2, mut axiom3, mut timeouts) = (Vec::new(), Vec::new(), Vec::new());
    for (root, pinned) in roots {
        let _ = ex.explore(&root, pinned, "", false, &mut |ex, r| {
            covered = covered.saturating_add(ex.region_size(r));
            match r.outcome {
                Err(_) if timeouts.len() < WITNESS_CAP => {
                    timeouts.push(witness(r.s, r.h, "timeout"))
                }
                Ok(true) if negative && axiom2.len() < WITNESS_CAP => {
                    axiom2.push(witness(r.s, r.h, YES))
                }
                Ok(true) if !negative && axiom3.len() < WITNESS_CAP => {
                    if let Some(bad) = ex.incorrect_member(r, &solutions) {
                        axiom3.push(witness(&bad, r.h, YES));
                    }
                }
                _ => {}
            }
            ControlFlow::Continue(())
        })?;
    }
    result.axiom2 = axiom2;
    result.axiom3 = axiom3;
    result.timeouts = timeouts;
    result.runs = ex.runs;
    result.covered = covered;
    Ok(result)
}

/// Certifies `v` against the three axioms on every instance of `instances`.
/// Instances run in parallel; the report follows the order of `instances`.
pub fn check_verifier_axioms(
    v: &Verifier,
    p: ProblemId,
    instances: &[String],
    cfg: &AxiomConfig,
) -> Result<AxiomReport, VerifierError> {
    let results = instances
        .par_iter()
        .map(|w| check_instance(v, p, w, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let alphabet = match &cfg.alphabet {
        Some(a) => format!("alphabet {:?}", String::from_utf8_lossy(a)),
        None => "alphabet = instance characters + separators + solution symbols".to_string(),
    };
    let mut report = AxiomReport {
        verifier: v.name().to_string(),
        problem: p.name().to_string(),
        search_bounds: format!("|s|,|h| <= {}, {alphabet}", cfg.string_bound),
        instances_checked: instances.len(),
        ..AxiomReport::default()
    };
    for r in results {
        report.axiom1_witnesses.extend(r.axiom1_witness);
        report.axiom1_failures.extend(r.axiom1_failure);
        report.strict_failures.extend(r.strict_failures);
        report.axiom2_violations.extend(r.axiom2);
        report.axiom3_violations.extend(r.axiom3);
        report.timeouts.extend(r.timeouts);
        report.verifier_runs += r.runs;
        report.triples_covered = report.triples_covered.saturating_add(r.covered);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{graphs_up_to, naturals, strings_up_to};

    fn yes(v: &Verifier, w: &str, s: &str, h: &str) -> bool {
        verify(v, w, s, h, StepBudget::default()).unwrap() == Verdict::Yes
    }

    const TRIANGLE: &str = "a,b b,c c,a";
    const PENTAGON: &str = "a,b b,p p,q q,r r,a";

    #[test]
    fn hamcycle_verifier_examples() {
        let v = verifier_for(ProblemId::HamCycle);
        assert!(yes(&v, TRIANGLE, "a,b,c", ""));
        assert!(yes(&v, TRIANGLE, "a,b,c", "anything at all"));
        assert!(!yes(&v, TRIANGLE, "a,c", ""));
        assert!(!yes(&v, TRIANGLE, "a,c,b", ""));
        assert!(!yes(&v, TRIANGLE, "a,b,c,", ""));
        assert!(!yes(&v, "a,b b,c", "a,b,c", ""));
    }

    #[test]
    fn hamcycle_edge_needs_its_hint() {
        let v = verifier_for(ProblemId::HamCycleEdge);
        assert!(yes(&v, PENTAGON, "a,b", "p,q,r"));
        assert!(!yes(&v, PENTAGON, "a,b", ""));
        assert!(!yes(&v, PENTAGON, "a,b", "p,q"));
        assert!(!yes(&v, PENTAGON, "b,a", "r,q,p"));
        assert!(yes(&v, PENTAGON, "a,r", "q,p,b"));
        assert_eq!(
            canonical_hints(
                ProblemId::HamCycleEdge,
                PENTAGON,
                "a,b",
                StepBudget::default()
            )
            .unwrap(),
            ["p,q,r"]
        );
    }

    #[test]
    fn factor_and_sat_verifiers() {
        let f = verifier_for(ProblemId::Factor);
        assert!(yes(&f, "35", "7", ""));
        assert!(yes(&f, "35", "5", "ignored"));
        assert!(!yes(&f, "35", "35", ""));
        assert!(!yes(&f, "35", "1", ""));
        assert!(!yes(&f, "35", "05", ""));
        for s in strings_up_to(b"0123456789,", 4) {
            for h in ["", "5", "7,"] {
                assert!(!yes(&f, "29", &s, h), "{s:?}");
            }
        }

        let sd = verifier_for(ProblemId::SatD);
        assert!(yes(&sd, "x,!y y,z", "yes", "x=1 y=1 z=1"));
        assert!(!yes(&sd, "x,!y y,z", "yes", "x=0 y=1 z=0"));
        for h in strings_up_to(b"x=01 ", 8) {
            assert!(!yes(&sd, "x !x", "yes", &h), "{h:?}");
        }

        let fr = verifier_for(ProblemId::FactorInRangeD);
        assert!(yes(&fr, "35 6 10", "yes", "7"));
        assert!(!yes(&fr, "35 6 10", "yes", "5"));
    }

    #[test]
    fn timeouts_surface_as_errors() {
        let v = verifier_for(ProblemId::HamCycle);
        assert_eq!(
            verify(&v, TRIANGLE, "a,b,c", "", StepBudget::new(3)),
            Err(VerifierError::VerifierTimeout(StepBudget::new(3)))
        );
    }

    #[test]
    fn tape_tracks_end_observation() {
        let mut t = Tape::new("ab");
        assert_eq!(t.get(1), Some(b'b'));
        assert!(!t.saw_end());
        assert_eq!(t.get(2), None);
        assert!(t.saw_end());
    }

    #[test]
    fn adversarial_kinds() {
        assert!(matches!(
            adversarial_verifier("banana"),
            Err(VerifierError::UnknownKind(_))
        ));
        let partial = adversarial_verifier("partial-cycle-as-solution").unwrap();
        assert!(yes(&partial, TRIANGLE, "a,b", ""));
        assert!(!crate::solvers::check_solution(ProblemId::HamCycle, TRIANGLE, "a,b").unwrap());
        let neg = adversarial_verifier("accepts-negative").unwrap();
        assert!(yes(&neg, "a,b b,c", "", ""));
        let none = adversarial_verifier("rejects-everything").unwrap();
        assert!(!yes(&none, TRIANGLE, "a,b,c", ""));
    }

    /// Unpruned oracle: every (s, h) pair over the alphabet, run directly.
    fn brute_force_violations(
        v: &Verifier,
        p: ProblemId,
        w: &str,
        alphabet: &[u8],
        bound: usize,
    ) -> (bool, bool) {
        let sols = enumerate_solutions(p, w, StepBudget::default()).unwrap();
        let strings = strings_up_to(alphabet, bound);
        let (mut a2, mut a3) = (false, false);
        for s in &strings {
            for h in &strings {
                if yes(v, w, s, h) {
                    a2 |= sols.is_negative();
                    a3 |= !sols.is_negative() && !sols.contains(s);
                }
            }
        }
        (a2, a3)
    }

    #[test]
    fn pruned_search_agrees_with_full_grid() {
        let cfg = AxiomConfig {
            string_bound: 3,
            alphabet: Some(b"abc,".to_vec()),
            ..AxiomConfig::default()
        };
        for kind in AdversarialKind::ALL {
            let v = adversarial_verifier(kind.name()).unwrap();
            for w in graphs_up_to(3, false) {
                let report =
                    check_verifier_axioms(&v, ProblemId::HamCycle, std::slice::from_ref(&w), &cfg)
                        .unwrap();
                let (a2, a3) = brute_force_violations(&v, ProblemId::HamCycle, &w, b"abc,", 3);
                assert_eq!(!report.axiom2_violations.is_empty(), a2, "{kind:?} {w}");
                assert_eq!(!report.axiom3_violations.is_empty(), a3, "{kind:?} {w}");
                // Each pruned region is counted at full size.
                let side = count_strings(4, 3);
                let extra = 2 * count_strings(4, 3); // "yes" and "no" roots
                assert_eq!(report.triples_covered, side * side + extra, "{kind:?} {w}");
            }
        }
    }

    #[test]
    fn shipped_verifiers_pass_small_spaces() {
        let cfg = AxiomConfig::default();
        let graphs = graphs_up_to(4, false);
        let report = check_verifier_axioms(
            &verifier_for(ProblemId::HamCycle),
            ProblemId::HamCycle,
            &graphs,
            &cfg,
        )
        .unwrap();
        assert!(report.passes(), "{}", report.summary());

        let digits = AxiomConfig {
            string_bound: 3,
            alphabet: Some(b"0123456789".to_vec()),
            ..AxiomConfig::default()
        };
        let report = check_verifier_axioms(
            &verifier_for(ProblemId::Factor),
            ProblemId::Factor,
            &naturals(1, 60),
            &digits,
        )
        .unwrap();
        assert!(report.passes(), "{}", report.summary());
    }

    #[test]
    fn partial_cycle_verifier_fails_axiom3_on_the_triangle() {
        let v = adversarial_verifier("partial-cycle-as-solution").unwrap();
        let report = check_verifier_axioms(
            &v,
            ProblemId::HamCycle,
            &graphs_up_to(4, false),
            &AxiomConfig::default(),
        )
        .unwrap();
        assert!(!report.passes());
        assert!(report.axiom2_violations.is_empty());
        assert!(report
            .axiom3_violations
            .iter()
            .any(|w| w.instance == "a,b a,c b,c"));
    }

    #[test]
    fn strict_mode_checks_every_solution() {
        let cfg = AxiomConfig {
            strict: true,
            ..AxiomConfig::default()
        };
        let k4 = vec!["a,b a,c a,d b,c b,d c,d".to_string()];
        let report = check_verifier_axioms(
            &verifier_for(ProblemId::HamCycleEdge),
            ProblemId::HamCycleEdge,
            &k4,
            &cfg,
        )
        .unwrap();
        assert!(report.passes(), "{}", report.summary());
    }

    #[test]
    fn search_ceiling_is_enforced() {
        // A verifier that reads all of s and h defeats pruning.
        let greedy = Verifier::new("greedy", ProblemId::HamCycle, |_, s, h, _| {
            s.read_all();
            h.read_all();
            Ok(false)
        });
        let cfg = AxiomConfig {
            max_runs_per_instance: 1000,
            ..AxiomConfig::default()
        };
        assert!(matches!(
            check_verifier_axioms(&greedy, ProblemId::HamCycle, &["a,b".to_string()], &cfg),
            Err(VerifierError::SearchSpaceTooLarge { .. })
        ));
    }
}
