//! Fixed workloads shared by the benchmarks.

use nondec::spaces::{cycle_graph, cycle_graph_tour, unsat_cnf};

/// Sizes of the Hamilton-cycle verification family.
pub const CYCLE_SIZES: [usize; 5] = [4, 6, 8, 10, 12];

/// Variable counts of the unsatisfiable brute-force family.
pub const UNSAT_SIZES: [usize; 4] = [4, 6, 8, 10];

/// `(instance, canonical tour)` pairs for the cycle family.
pub fn cycle_workloads() -> Vec<(usize, String, String)> {
    CYCLE_SIZES
        .iter()
        .map(|&n| (n, cycle_graph(n), cycle_graph_tour(n)))
        .collect()
}

pub fn unsat_workloads() -> Vec<(usize, String)> {
    UNSAT_SIZES.iter().map(|&v| (v, unsat_cnf(v))).collect()
}
