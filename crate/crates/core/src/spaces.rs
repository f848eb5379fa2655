//! Finite instance spaces and scaling families.
//!
//! Every exhaustive check in the crate runs over one of these. Outputs are
//! canonical encodings in a fixed order, so reports built from them are
//! reproducible byte for byte.

use crate::encodings::{encode_cnf, encode_graph, Clause, CnfFormula, Graph, Literal};
use crate::problems::ProblemId;

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
const CNF_VARS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn vertex_names(n: usize) -> Vec<String> {
    assert!(n <= LETTERS.len(), "at most 26 single-letter vertices");
    LETTERS[..n]
        .iter()
        .map(|&b| (b as char).to_string())
        .collect()
}

/// Every simple graph on the vertex set `{a, b, ...}` of size `n`.
pub fn graphs_on(n: usize, directed: bool) -> Vec<String> {
    let names = vertex_names(n);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| if directed { i != j } else { i < j })
        .collect();
    assert!(pairs.len() < 32, "edge-subset space too large to enumerate");
    (0u32..(1 << pairs.len()))
        .map(|mask| {
            let mut g = Graph::new(directed);
            for v in &names {
                g.add_vertex(v.clone()).expect("valid name");
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    g.add_edge(names[i].clone(), names[j].clone())
                        .expect("simple");
                }
            }
            encode_graph(&g)
        })
        .collect()
}

/// All labeled simple graphs on vertex-set prefixes `{}`, `{a}`, `{a,b}`, ...
/// up to `n_max` vertices.
pub fn graphs_up_to(n_max: usize, directed: bool) -> Vec<String> {
    (0..=n_max).flat_map(|n| graphs_on(n, directed)).collect()
}

pub fn naturals(lo: u64, hi: u64) -> Vec<String> {
    (lo..=hi).map(|m| m.to_string()).collect()
}

/// Every `m lo hi` with `1 <= lo <= hi <= m <= m_max`.
pub fn range_instances(m_max: u64) -> Vec<String> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for lo in 1..=m {
            for hi in lo..=m {
                out.push(format!("{m} {lo} {hi}"));
            }
        }
    }
    out
}

/// Nonempty clauses over the first `vars` variables with no variable in
/// both polarities.
fn clauses_over(vars: usize) -> Vec<Clause> {
    let mut out = Vec::new();
    let total = 3usize.pow(vars as u32);
    for code in 1..total {
        let mut clause = Clause::new();
        let mut c = code;
        for var in &CNF_VARS[..vars] {
            match c % 3 {
                1 => {
                    clause.insert(Literal::positive(*var));
                }
                2 => {
                    clause.insert(Literal::negative(*var));
                }
                _ => {}
            }
            c /= 3;
        }
        out.push(clause);
    }
    out
}

/// The empty formula plus every formula of 1 to `max_clauses` distinct
/// non-tautological clauses over at most `vars` variables.
pub fn cnfs_up_to(vars: usize, max_clauses: usize) -> Vec<String> {
    assert!(vars <= CNF_VARS.len());
    let clauses = clauses_over(vars);
    let mut out = vec![String::new()];
    for k in 1..=max_clauses {
        for pick in combinations(clauses.len(), k) {
            let chosen = pick.iter().map(|&i| clauses[i].clone()).collect();
            let f = CnfFormula::from_clauses(chosen).expect("nonempty clauses");
            out.push(encode_cnf(&f));
        }
    }
    out
}

/// Every string over `alphabet` of length at most `max_len`, shortest first.
pub fn strings_up_to(alphabet: &[u8], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for s in &layer {
            for &c in alphabet {
                let mut t = s.clone();
                t.push(c as char);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn padded(prefix: &str, i: usize) -> String {
    format!("{prefix}{i:02}")
}

/// The cycle `v01 - v02 - ... - vNN - v01`, canonically encoded.
pub fn cycle_graph(n: usize) -> String {
    let mut g = Graph::new(false);
    for i in 1..=n {
        let next = if i == n { 1 } else { i + 1 };
        g.add_edge(padded("v", i), padded("v", next))
            .expect("simple cycle");
    }
    encode_graph(&g)
}

/// The canonical Hamilton cycle of [`cycle_graph`].
pub fn cycle_graph_tour(n: usize) -> String {
    (1..=n)
        .map(|i| padded("v", i))
        .collect::<Vec<_>>()
        .join(",")
}

/// An unsatisfiable formula over `v >= 1` variables, so brute force must
/// try every assignment: `!x01 x01 x01,x02,...`.
pub fn unsat_cnf(v: usize) -> String {
    let all: Vec<String> = (1..=v.max(1)).map(|i| padded("x", i)).collect();
    format!("!x01 x01 {}", all.join(","))
}

/// The desk-scale space each problem is certified on.
pub fn desk_scale(p: ProblemId) -> Vec<String> {
    let extras = ["xx--yy", "a,a", "+1", "01"].map(String::from);
    let mut space = match p {
        ProblemId::Factor | ProblemId::FactorD => naturals(0, 200),
        ProblemId::FactorInRangeD => range_instances(30),
        ProblemId::HamCycle | ProblemId::HamCycleD | ProblemId::HamCycleEdge => {
            graphs_up_to(5, false)
        }
        ProblemId::DirectedHamCycle | ProblemId::DirectedHamCycleD => graphs_up_to(4, true),
        ProblemId::Sat | ProblemId::SatD => cnfs_up_to(3, 3),
    };
    space.extend(extras);
    space
}

/// A named instance space, as written on the command line: `desk`,
/// `graphs:N`, `digraphs:N`, `naturals:A..B`, `ranges:M`, `cnf:VxC`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceSpec {
    Desk,
    Graphs(usize),
    Digraphs(usize),
    Naturals(u64, u64),
    Ranges(u64),
    Cnf(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad space `{0}`: expected desk, graphs:N, digraphs:N, naturals:A..B, ranges:M or cnf:VxC")]
pub struct SpaceSpecError(pub String);

impl std::str::FromStr for SpaceSpec {
    type Err = SpaceSpecError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || SpaceSpecError(text.to_string());
        if text == "desk" {
            return Ok(SpaceSpec::Desk);
        }
        let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
        let num = |s: &str| s.parse::<u64>().map_err(|_| bad());
        let spec = match kind {
            "graphs" => SpaceSpec::Graphs(num(arg)? as usize),
            "digraphs" => SpaceSpec::Digraphs(num(arg)? as usize),
            "ranges" => SpaceSpec::Ranges(num(arg)?),
            "naturals" => {
                let (a, b) = arg.split_once("..").ok_or_else(bad)?;
                SpaceSpec::Naturals(num(a)?, num(b)?)
            }
            "cnf" => {
                let (v, c) = arg.split_once('x').ok_or_else(bad)?;
                SpaceSpec::Cnf(num(v)? as usize, num(c)? as usize)
            }
            _ => return Err(bad()),
        };
        let too_big = match spec {
            SpaceSpec::Graphs(n) => n > 7,
            SpaceSpec::Digraphs(n) => n > 5,
            SpaceSpec::Naturals(a, b) => a > b || b - a > 10_000_000,
            SpaceSpec::Ranges(m) => m > 200,
            SpaceSpec::Cnf(v, c) => v > CNF_VARS.len() || c > 3,
            SpaceSpec::Desk => false,
        };
        if too_big {
            return Err(bad());
        }
        Ok(spec)
    }
}

impl SpaceSpec {
    pub fn instances(self, p: ProblemId) -> Vec<String> {
        match self {
            SpaceSpec::Desk => desk_scale(p),
            SpaceSpec::Graphs(n) => graphs_up_to(n, false),
            SpaceSpec::Digraphs(n) => graphs_up_to(n, true),
            SpaceSpec::Naturals(a, b) => naturals(a, b),
            SpaceSpec::Ranges(m) => range_instances(m),
            SpaceSpec::Cnf(v, c) => cnfs_up_to(v, c),
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
