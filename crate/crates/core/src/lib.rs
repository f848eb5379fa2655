//! Computational problems as maps from ASCII strings to solution sets,
//! with step-counted solvers, verifiers, nondeterministic guess-and-verify
//! simulation, polyreductions and self-reductions.
//!
//! Everything is deterministic and exhaustively checkable at desk scale:
//! the instance spaces in [`spaces`] are small enough to enumerate, and the
//! checkers report concrete witnesses instead of sampled estimates.

pub mod budget;
pub mod encodings;
pub mod nondet;
pub mod problems;
pub mod reductions;
pub mod solvers;
pub mod spaces;
pub mod verifiers;

pub use budget::{Exhausted, StepBudget, StepMeter, DEFAULT_MAX_STEPS, MAX_STEPS_ENV};
pub use encodings::{AsciiString, EncodingError, Graph, Natural};
pub use nondet::{guess_and_verify, run_nondet, ComputationSummary, ExplorationOrder, NProgram};
pub use problems::{
    Classification, ComputationalProblem, ProblemError, ProblemId, SolutionSet, NO, YES,
};
pub use reductions::{DecisionOracle, GeneralReduction, Polyreduction, ReductionReport};
pub use solvers::{enumerate_solutions, run_program, Outcome, Program, SolverError};
pub use spaces::SpaceSpec;
pub use verifiers::{
    check_verifier_axioms, verifier_for, verify, AxiomConfig, AxiomReport, Verdict, Verifier,
};
