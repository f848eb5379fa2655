//! Computational problems: total maps from ASCII strings to finite sets of
//! ASCII strings.
//!
//! An instance whose solution set is exactly `{"no"}` is negative; every
//! other instance is positive, and `"no"` never appears among the solutions
//! of a positive instance. Strings that do not parse under a problem's
//! grammar are negative instances, which keeps every problem total.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::budget::StepBudget;
use crate::encodings::{canonical_cycle, parse_vertex_list};
use crate::solvers::{self, SolverError};

pub const NO: &str = "no";
pub const YES: &str = "yes";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("`{0}` is not a decision problem")]
    NotADecisionProblem(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// The registered problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProblemId {
    Factor,
    FactorD,
    FactorInRangeD,
    HamCycle,
    HamCycleD,
    DirectedHamCycle,
    DirectedHamCycleD,
    HamCycleEdge,
    Sat,
    SatD,
}

impl ProblemId {
    pub const ALL: [ProblemId; 10] = [
        ProblemId::Factor,
        ProblemId::FactorD,
        ProblemId::FactorInRangeD,
        ProblemId::HamCycle,
        ProblemId::HamCycleD,
        ProblemId::DirectedHamCycle,
        ProblemId::DirectedHamCycleD,
        ProblemId::HamCycleEdge,
        ProblemId::Sat,
        ProblemId::SatD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::Factor => "Factor",
            ProblemId::FactorD => "FactorD",
            ProblemId::FactorInRangeD => "FactorInRangeD",
            ProblemId::HamCycle => "HamCycle",
            ProblemId::HamCycleD => "HamCycleD",
            ProblemId::DirectedHamCycle => "DirectedHamCycle",
            ProblemId::DirectedHamCycleD => "DirectedHamCycleD",
            ProblemId::HamCycleEdge => "HamCycleEdge",
            ProblemId::Sat => "Sat",
            ProblemId::SatD => "SatD",
        }
    }

    /// Looks up a problem by name. `UndirectedHamCycleD` and
    /// `UndirectedHamCycle` are aliases for the undirected problems.
    pub fn from_name(name: &str) -> Option<ProblemId> {
        match name {
            "UndirectedHamCycleD" => Some(ProblemId::HamCycleD),
            "UndirectedHamCycle" => Some(ProblemId::HamCycle),
            _ => ProblemId::ALL.into_iter().find(|p| p.name() == name),
        }
    }

    pub fn is_decision(self) -> bool {
        matches!(
            self,
            ProblemId::FactorD
                | ProblemId::FactorInRangeD
                | ProblemId::HamCycleD
                | ProblemId::DirectedHamCycleD
                | ProblemId::SatD
        )
    }

    /// The decision problem with the same positive instances.
    pub fn decision_variant(self) -> ProblemId {
        match self {
            ProblemId::Factor => ProblemId::FactorD,
            ProblemId::HamCycle | ProblemId::HamCycleEdge => ProblemId::HamCycleD,
            ProblemId::DirectedHamCycle => ProblemId::DirectedHamCycleD,
            ProblemId::Sat => ProblemId::SatD,
            decision => decision,
        }
    }

    /// The search problem whose solutions certify a decision problem's
    /// positive instances. `FactorInRangeD` has no registered search
    /// variant; its certificates are factors inside the range.
    pub fn search_variant(self) -> Option<ProblemId> {
        match self {
            ProblemId::FactorD => Some(ProblemId::Factor),
            ProblemId::HamCycleD => Some(ProblemId::HamCycle),
            ProblemId::DirectedHamCycleD => Some(ProblemId::DirectedHamCycle),
            ProblemId::SatD => Some(ProblemId::Sat),
            _ => None,
        }
    }

    pub fn is_graph_problem(self) -> bool {
        matches!(
            self,
            ProblemId::HamCycle
                | ProblemId::HamCycleD
                | ProblemId::DirectedHamCycle
                | ProblemId::DirectedHamCycleD
                | ProblemId::HamCycleEdge
        )
    }

    pub fn is_directed(self) -> bool {
        matches!(
            self,
            ProblemId::DirectedHamCycle | ProblemId::DirectedHamCycleD
        )
    }

    pub fn description(self) -> &'static str {
        match self {
            ProblemId::Factor => "a factor of m other than 1 and m",
            ProblemId::FactorD => "yes if m has a nontrivial factor",
            ProblemId::FactorInRangeD => {
                "yes if m has a nontrivial factor in [lo, hi]; instance `m lo hi`"
            }
            ProblemId::HamCycle => "any Hamilton cycle of the undirected graph G",
            ProblemId::HamCycleD => "yes if the undirected graph G has a Hamilton cycle",
            ProblemId::DirectedHamCycle => "any directed Hamilton cycle of the digraph G",
            ProblemId::DirectedHamCycleD => "yes if the digraph G has a directed Hamilton cycle",
            ProblemId::HamCycleEdge => "any edge of G lying on some Hamilton cycle",
            ProblemId::Sat => "a satisfying assignment of the CNF formula",
            ProblemId::SatD => "yes if the CNF formula is satisfiable",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemId::from_name(s).ok_or_else(|| ProblemError::UnknownProblem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Positive,
    Negative,
}

impl Classification {
    pub fn is_positive(self) -> bool {
        self == Classification::Positive
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Positive => "positive",
            Classification::Negative => "negative",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A finite, nonempty set of solutions: either exactly `{"no"}` or a set
/// that does not contain `"no"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet(BTreeSet<String>);

impl SolutionSet {
    pub fn negative() -> Self {
        SolutionSet(BTreeSet::from([NO.to_string()]))
    }

    pub fn yes() -> Self {
        SolutionSet(BTreeSet::from([YES.to_string()]))
    }

    pub fn decision(positive: bool) -> Self {
        if positive {
            SolutionSet::yes()
        } else {
            SolutionSet::negative()
        }
    }

    /// Collects solutions; an empty collection becomes `{"no"}`.
    ///
    /// # Panics
    /// If `"no"` is among the solutions.
    pub fn from_solutions<I: IntoIterator<Item = String>>(solutions: I) -> Self {
        let set: BTreeSet<String> = solutions.into_iter().collect();
        assert!(
            !set.contains(NO),
            "\"no\" cannot be a solution of a positive instance"
        );
        if set.is_empty() {
            SolutionSet::negative()
        } else {
            SolutionSet(set)
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.len() == 1 && self.0.contains(NO)
    }

    pub fn classification(&self) -> Classification {
        if self.is_negative() {
            Classification::Negative
        } else {
            Classification::Positive
        }
    }

    pub fn contains(&self, s: &str) -> bool {
        self.0.contains(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<String> {
        &self.0
    }

    /// Solutions of a positive instance; empty for a negative one.
    pub fn positive_members(&self) -> BTreeSet<String> {
        if self.is_negative() {
            BTreeSet::new()
        } else {
            self.0.clone()
        }
    }
}

impl<'a> IntoIterator for &'a SolutionSet {
    type Item = &'a String;
    type IntoIter = std::collections::btree_set::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

type Predicate = dyn Fn(&str) -> Result<bool, SolverError> + Send + Sync;

/// Membership test for a language, i.e. a set of ASCII strings.
#[derive(Clone)]
pub struct MembershipPredicate {
    contains: Arc<Predicate>,
}

impl MembershipPredicate {
    pub fn new<F>(contains: F) -> Self
    where
        F: Fn(&str) -> Result<bool, SolverError> + Send + Sync + 'static,
    {
        MembershipPredicate {
            contains: Arc::new(contains),
        }
    }

    pub fn contains(&self, s: &str) -> Result<bool, SolverError> {
        (self.contains)(s)
    }
}

impl fmt::Debug for MembershipPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MembershipPredicate(..)")
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Registered(ProblemId),
    Language(MembershipPredicate),
}

/// A named computational problem. Registered problems are backed by the
/// brute-force oracles in [`crate::solvers`]; language problems are the
/// decision problems induced by a membership predicate.
#[derive(Debug, Clone)]
pub struct ComputationalProblem {
    name: String,
    kind: Kind,
}

impl ComputationalProblem {
    pub fn registered(id: ProblemId) -> Self {
        ComputationalProblem {
            name: id.name().to_string(),
            kind: Kind::Registered(id),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> Option<ProblemId> {
        match self.kind {
            Kind::Registered(id) => Some(id),
            Kind::Language(_) => None,
        }
    }

    pub fn is_decision(&self) -> bool {
        match self.kind {
            Kind::Registered(id) => id.is_decision(),
            Kind::Language(_) => true,
        }
    }

    pub fn classify(&self, w: &str, budget: StepBudget) -> Result<Classification, SolverError> {
        let positive = match &self.kind {
            Kind::Registered(id) => solvers::is_positive(*id, w, budget)?,
            Kind::Language(m) => m.contains(w)?,
        };
        Ok(if positive {
            Classification::Positive
        } else {
            Classification::Negative
        })
    }

    pub fn solutions(&self, w: &str, budget: StepBudget) -> Result<SolutionSet, SolverError> {
        match &self.kind {
            Kind::Registered(id) => solvers::enumerate_solutions(*id, w, budget),
            Kind::Language(m) => Ok(SolutionSet::decision(m.contains(w)?)),
        }
    }
}

pub fn get_problem(name: &str) -> Result<ComputationalProblem, ProblemError> {
    name.parse().map(ComputationalProblem::registered)
}

/// Classifies `w` under the default step budget.
pub fn classify_instance(p: &ComputationalProblem, w: &str) -> Result<Classification, SolverError> {
    p.classify(w, StepBudget::default())
}

pub fn solution_set(
    p: &ComputationalProblem,
    w: &str,
    budget: StepBudget,
) -> Result<SolutionSet, SolverError> {
    p.solutions(w, budget)
}

pub fn decision_variant(p: &ComputationalProblem) -> ComputationalProblem {
    match &p.kind {
        Kind::Registered(id) => ComputationalProblem::registered(id.decision_variant()),
        Kind::Language(_) => p.clone(),
    }
}

pub fn as_language(d: &ComputationalProblem) -> Result<MembershipPredicate, ProblemError> {
    if !d.is_decision() {
        return Err(ProblemError::NotADecisionProblem(d.name.clone()));
    }
    let d = d.clone();
    Ok(MembershipPredicate::new(move |s| {
        Ok(d.classify(s, StepBudget::default())?.is_positive())
    }))
}

pub fn from_language(name: impl Into<String>, m: MembershipPredicate) -> ComputationalProblem {
    ComputationalProblem {
        name: name.into(),
        kind: Kind::Language(m),
    }
}

/// Brings a proposed solution into the canonical form used in solution
/// sets. Cycle problems rotate and reflect; everything else is unchanged.
pub fn canonicalize_solution(p: ProblemId, s: &str) -> String {
    match p {
        ProblemId::HamCycle | ProblemId::DirectedHamCycle => parse_vertex_list(s)
            .ok()
            .and_then(|seq| canonical_cycle(&seq, p.is_directed()).ok())
            .unwrap_or_else(|| s.to_string()),
        _ => s.to_string(),
    }
}
