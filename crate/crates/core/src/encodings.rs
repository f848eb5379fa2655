//! Grammars and canonical ASCII encodings for graphs, CNF formulas,
//! natural numbers, Hamilton cycles and truth assignments.
//!
//! Every problem in this crate is a map on ASCII strings, so every
//! mathematical object needs exactly one string form. The grammars are:
//!
//! * graph: space-separated tokens, each `u,v` (an edge) or `u` (a vertex)
//! * CNF: space-separated clauses, each a comma-separated list of literals,
//!   a literal being a variable name with an optional `!` prefix
//! * assignment: `v1=b1 v2=b2 ...` with variables in lexicographic order
//! * cycle: comma-separated vertex names
//!
//! Names are nonempty strings over `[a-z0-9]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("malformed input at byte {position}: {reason}")]
    Malformed { position: usize, reason: String },
    #[error("assignment does not fix variable `{0}`")]
    MissingVariable(String),
    #[error("vertex `{0}` occurs twice in the cycle")]
    DuplicateVertex(String),
    #[error("a cycle needs at least two vertices, got {0}")]
    CycleTooShort(usize),
}

fn malformed(position: usize, reason: impl Into<String>) -> EncodingError {
    EncodingError::Malformed {
        position,
        reason: reason.into(),
    }
}

/// Printable ASCII: codes 32 through 126.
pub fn is_printable_ascii(text: &str) -> bool {
    text.bytes().all(|b| (32..=126).contains(&b))
}

/// A string over the printable ASCII alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AsciiString(String);

impl AsciiString {
    pub fn new(text: impl Into<String>) -> Result<Self, EncodingError> {
        let text = text.into();
        match text.bytes().position(|b| !(32..=126).contains(&b)) {
            Some(position) => Err(malformed(position, "byte outside printable ASCII")),
            None => Ok(AsciiString(text)),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for AsciiString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for AsciiString {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub fn is_name_byte(b: u8) -> bool {
    b.is_ascii_lowercase() || b.is_ascii_digit()
}

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(is_name_byte)
}

/// Splits `text` on single spaces, returning each token with its byte offset.
/// Empty tokens (leading, trailing or doubled spaces) are reported as
/// malformed. The empty string yields no tokens.
fn tokens(text: &str) -> Result<Vec<(usize, &str)>, EncodingError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for token in text.split(' ') {
        if token.is_empty() {
            return Err(malformed(offset, "empty token"));
        }
        out.push((offset, token));
        offset += token.len() + 1;
    }
    Ok(out)
}

fn check_name(name: &str, position: usize, what: &str) -> Result<(), EncodingError> {
    if name.is_empty() {
        return Err(malformed(position, format!("empty {what} name")));
    }
    if let Some(i) = name.bytes().position(|b| !is_name_byte(b)) {
        return Err(malformed(
            position + i,
            format!("{what} names use only [a-z0-9]"),
        ));
    }
    Ok(())
}

/// A simple graph, directed or undirected.
///
/// Undirected edges are stored with the smaller endpoint first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    vertices: BTreeSet<String>,
    edges: BTreeSet<(String, String)>,
    directed: bool,
}

impl Graph {
    pub fn new(directed: bool) -> Self {
        Graph {
            directed,
            ..Graph::default()
        }
    }

    /// Builds a graph from explicit parts, normalizing undirected edges.
    /// Endpoints are added to the vertex set.
    pub fn from_parts<V, E, S>(vertices: V, edges: E, directed: bool) -> Result<Self, EncodingError>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut g = Graph::new(directed);
        for v in vertices {
            g.add_vertex(v.into())?;
        }
        for (u, v) in edges {
            g.add_edge(u.into(), v.into())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: String) -> Result<(), EncodingError> {
        check_name(&name, 0, "vertex")?;
        self.vertices.insert(name);
        Ok(())
    }

    /// Adds an edge. Self-loops and duplicates are rejected.
    pub fn add_edge(&mut self, u: String, v: String) -> Result<(), EncodingError> {
        check_name(&u, 0, "vertex")?;
        check_name(&v, 0, "vertex")?;
        if u == v {
            return Err(malformed(0, format!("self-loop on `{u}`")));
        }
        let key = if self.directed || u < v {
            (u, v)
        } else {
            (v, u)
        };
        if self.edges.contains(&key) {
            return Err(malformed(
                0,
                format!("duplicate edge `{},{}`", key.0, key.1),
            ));
        }
        self.vertices.insert(key.0.clone());
        self.vertices.insert(key.1.clone());
        self.edges.insert(key);
        Ok(())
    }

    pub fn vertices(&self) -> &BTreeSet<String> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(String, String)> {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        let (a, b) = if self.directed || u < v {
            (u, v)
        } else {
            (v, u)
        };
        self.edges.contains(&(a.to_string(), b.to_string()))
    }

    /// Returns a copy without the given edge (endpoints stay as vertices).
    pub fn without_edge(&self, u: &str, v: &str) -> Graph {
        let mut g = self.clone();
        let (a, b) = if self.directed || u < v {
            (u, v)
        } else {
            (v, u)
        };
        g.edges.remove(&(a.to_string(), b.to_string()));
        g
    }

    /// Vertex list in sorted order plus an adjacency matrix over indices.
    pub fn adjacency(&self) -> (Vec<&str>, Vec<Vec<bool>>) {
        let names: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut adj = vec![vec![false; names.len()]; names.len()];
        for (u, v) in &self.edges {
            let (i, j) = (index[u.as_str()], index[v.as_str()]);
            adj[i][j] = true;
            if !self.directed {
                adj[j][i] = true;
            }
        }
        (names, adj)
    }
}

/// Parses the edge-list grammar. Directedness is supplied by the caller; the
/// string itself carries no marker.
pub fn parse_graph(text: &str, directed: bool) -> Result<Graph, EncodingError> {
    if let Some(position) = text.bytes().position(|b| !(32..=126).contains(&b)) {
        return Err(malformed(position, "byte outside printable ASCII"));
    }
    let mut g = Graph::new(directed);
    for (offset, token) in tokens(text)? {
        let mut parts = token.split(',');
        let u = parts.next().unwrap_or_default();
        match (parts.next(), parts.next()) {
            (None, _) => {
                check_name(u, offset, "vertex")?;
                g.vertices.insert(u.to_string());
            }
            (Some(v), None) => {
                check_name(u, offset, "vertex")?;
                check_name(v, offset + u.len() + 1, "vertex")?;
                g.add_edge(u.to_string(), v.to_string())
                    .map_err(|e| match e {
                        EncodingError::Malformed { reason, .. } => malformed(offset, reason),
                        other => other,
                    })?;
            }
            (Some(_), Some(_)) => {
                return Err(malformed(offset, "edge token with more than two endpoints"))
            }
        }
    }
    Ok(g)
}

/// Canonical encoding: sorted edge tokens, then sorted isolated vertices.
pub fn encode_graph(g: &Graph) -> String {
    let mut covered = BTreeSet::new();
    let mut out: Vec<String> = Vec::with_capacity(g.edges.len());
    for (u, v) in &g.edges {
        covered.insert(u.as_str());
        covered.insert(v.as_str());
        out.push(format!("{u},{v}"));
    }
    out.extend(
        g.vertices
            .iter()
            .filter(|v| !covered.contains(v.as_str()))
            .cloned(),
    );
    out.join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: String,
    pub negated: bool,
}

impl Literal {
    pub fn positive(var: impl Into<String>) -> Self {
        Literal {
            var: var.into(),
            negated: false,
        }
    }

    pub fn negative(var: impl Into<String>) -> Self {
        Literal {
            var: var.into(),
            negated: true,
        }
    }

    pub fn holds_under(&self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!{}", self.var)
        } else {
            f.write_str(&self.var)
        }
    }
}

pub type Clause = BTreeSet<Literal>;

/// A conjunction of clauses. Clause order is kept as written; duplicate
/// literals inside a clause collapse.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    variables: BTreeSet<String>,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn from_clauses(clauses: Vec<Clause>) -> Result<Self, EncodingError> {
        let mut variables = BTreeSet::new();
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(malformed(i, "empty clause"));
            }
            for lit in clause {
                check_name(&lit.var, 0, "variable")?;
                variables.insert(lit.var.clone());
            }
        }
        Ok(CnfFormula { variables, clauses })
    }

    pub fn variables(&self) -> &BTreeSet<String> {
        &self.variables
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Evaluates the formula; unassigned variables count as false.
    pub fn evaluate(&self, assignment: &BTreeMap<String, bool>) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|lit| lit.holds_under(assignment.get(&lit.var).copied().unwrap_or(false)))
        })
    }
}

pub fn parse_cnf(text: &str) -> Result<CnfFormula, EncodingError> {
    if let Some(position) = text.bytes().position(|b| !(32..=126).contains(&b)) {
        return Err(malformed(position, "byte outside printable ASCII"));
    }
    let mut clauses = Vec::new();
    for (offset, token) in tokens(text)? {
        let mut clause = Clause::new();
        let mut at = offset;
        for lit in token.split(',') {
            if lit.is_empty() {
                return Err(malformed(at, "empty literal"));
            }
            let literal = match lit.strip_prefix('!') {
                Some(var) => {
                    check_name(var, at + 1, "variable")?;
                    Literal::negative(var)
                }
                None => {
                    check_name(lit, at, "variable")?;
                    Literal::positive(lit)
                }
            };
            clause.insert(literal);
            at += lit.len() + 1;
        }
        clauses.push(clause);
    }
    CnfFormula::from_clauses(clauses)
}

/// Canonical CNF encoding: clauses in order, literals sorted within each.
pub fn encode_cnf(f: &CnfFormula) -> String {
    f.clauses
        .iter()
        .map(|clause| {
            clause
                .iter()
                .map(Literal::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn encode_assignment(
    assignment: &BTreeMap<String, bool>,
    vars: &BTreeSet<String>,
) -> Result<String, EncodingError> {
    let mut parts = Vec::with_capacity(vars.len());
    for var in vars {
        let value = assignment
            .get(var)
            .ok_or_else(|| EncodingError::MissingVariable(var.clone()))?;
        parts.push(format!("{var}={}", u8::from(*value)));
    }
    Ok(parts.join(" "))
}

/// Parses an assignment string that must fix exactly `vars`, in order.
pub fn parse_assignment(
    text: &str,
    vars: &BTreeSet<String>,
) -> Result<BTreeMap<String, bool>, EncodingError> {
    let pieces = tokens(text)?;
    if pieces.len() != vars.len() {
        return Err(malformed(
            0,
            format!("expected {} variables, found {}", vars.len(), pieces.len()),
        ));
    }
    let mut out = BTreeMap::new();
    for ((offset, piece), var) in pieces.into_iter().zip(vars) {
        let value = match piece.strip_prefix(var.as_str()) {
            Some("=0") => false,
            Some("=1") => true,
            _ => {
                return Err(malformed(
                    offset,
                    format!("expected `{var}=0` or `{var}=1`"),
                ))
            }
        };
        out.insert(var.clone(), value);
    }
    Ok(out)
}

/// Canonical form of a cycle given as a vertex sequence.
///
/// Rotates so the smallest vertex leads; for undirected cycles, also picks the
/// orientation whose second vertex is the smaller neighbor of the first.
pub fn canonical_cycle<S: AsRef<str>>(seq: &[S], directed: bool) -> Result<String, EncodingError> {
    let names: Vec<&str> = seq.iter().map(AsRef::as_ref).collect();
    if names.len() < 2 {
        return Err(EncodingError::CycleTooShort(names.len()));
    }
    let mut seen = BTreeSet::new();
    for name in &names {
        if !seen.insert(*name) {
            return Err(EncodingError::DuplicateVertex(name.to_string()));
        }
    }
    let n = names.len();
    let start = (0..n).min_by_key(|&i| names[i]).unwrap_or(0);
    let forward: Vec<&str> = (0..n).map(|k| names[(start + k) % n]).collect();
    let ordered = if !directed && n > 2 && forward[n - 1] < forward[1] {
        let mut rev = vec![forward[0]];
        rev.extend(forward[1..].iter().rev());
        rev
    } else {
        forward
    };
    Ok(ordered.join(","))
}

/// Splits a comma-separated vertex list; empty input or empty names fail.
pub fn parse_vertex_list(text: &str) -> Result<Vec<&str>, EncodingError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for name in text.split(',') {
        check_name(name, offset, "vertex")?;
        out.push(name);
        offset += name.len() + 1;
    }
    Ok(out)
}

/// A nonnegative integer in canonical decimal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Natural(BigUint);

impl Natural {
    pub fn new(value: impl Into<BigUint>) -> Self {
        Natural(value.into())
    }

    /// Strict decimal: nonempty digits, no sign, no leading zero except "0".
    pub fn parse(text: &str) -> Result<Self, EncodingError> {
        if text.is_empty() {
            return Err(malformed(0, "empty number"));
        }
        if let Some(i) = text.bytes().position(|b| !b.is_ascii_digit()) {
            return Err(malformed(i, "decimal digits only"));
        }
        if text.len() > 1 && text.starts_with('0') {
            return Err(malformed(0, "leading zero"));
        }
        BigUint::parse_bytes(text.as_bytes(), 10)
            .map(Natural)
            .ok_or_else(|| malformed(0, "not a decimal number"))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural(BigUint::from(v))
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses the range-decision instance `m lo hi`: three strict decimals
/// separated by single spaces.
pub fn parse_range_instance(text: &str) -> Result<(Natural, Natural, Natural), EncodingError> {
    let parts = tokens(text)?;
    if parts.len() != 3 {
        return Err(malformed(0, "expected `m lo hi`"));
    }
    let num = |(offset, t): (usize, &str)| {
        Natural::parse(t).map_err(|e| match e {
            EncodingError::Malformed { position, reason } => malformed(offset + position, reason),
            other => other,
        })
    };
    Ok((num(parts[0])?, num(parts[1])?, num(parts[2])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triangle_parses_and_encodes_sorted() {
        let g = parse_graph("a,b b,c c,a", false).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge("a", "c"));
        assert_eq!(encode_graph(&g), "a,b a,c b,c");
    }

    #[test]
    fn empty_string_is_the_empty_graph() {
        let g = parse_graph("", false).unwrap();
        assert_eq!(g, Graph::new(false));
        assert_eq!(encode_graph(&g), "");
    }

    #[test]
    fn graph_rejections() {
        for bad in [
            "a,a", " a", "a ", "a  b", "a,b,c", "A,b", "a,", ",b", "a,b b,a", "a\tb",
        ] {
            assert!(
                matches!(
                    parse_graph(bad, false),
                    Err(EncodingError::Malformed { .. })
                ),
                "{bad:?} should be malformed"
            );
        }
        // Reverse arcs are distinct in a digraph.
        assert!(parse_graph("a,b b,a", true).is_ok());
    }

    #[test]
    fn undirected_edges_store_smaller_endpoint_first() {
        let g = parse_graph("b,a", false).unwrap();
        assert_eq!(encode_graph(&g), "a,b");
        let d = parse_graph("b,a", true).unwrap();
        assert_eq!(encode_graph(&d), "b,a");
    }

    #[test]
    fn isolated_vertices_follow_edges() {
        let g = parse_graph("z c,d a", false).unwrap();
        assert_eq!(encode_graph(&g), "c,d a z");
    }

    #[test]
    fn cnf_grammar() {
        let f = parse_cnf("x,!y y,z").unwrap();
        assert_eq!(f.clauses().len(), 2);
        assert_eq!(
            f.clauses()[0],
            Clause::from([Literal::positive("x"), Literal::negative("y")])
        );
        assert_eq!(
            f.variables().iter().cloned().collect::<Vec<_>>(),
            ["x", "y", "z"]
        );

        let g = parse_cnf("x !x").unwrap();
        assert_eq!(g.clauses().len(), 2);
        assert_eq!(g.variables().len(), 1);

        assert!(matches!(
            parse_cnf("x,,y"),
            Err(EncodingError::Malformed { .. })
        ));
        assert!(matches!(
            parse_cnf("!"),
            Err(EncodingError::Malformed { .. })
        ));
        assert!(matches!(
            parse_cnf("!!x"),
            Err(EncodingError::Malformed { .. })
        ));
        assert_eq!(parse_cnf("").unwrap().clauses().len(), 0);
        assert_eq!(encode_cnf(&parse_cnf("y,x,y !z").unwrap()), "x,y !z");
    }

    #[test]
    fn assignment_encoding() {
        let vars: BTreeSet<String> = ["x", "y", "z"].map(String::from).into();
        let all_true = vars.iter().map(|v| (v.clone(), true)).collect();
        assert_eq!(encode_assignment(&all_true, &vars).unwrap(), "x=1 y=1 z=1");
        assert_eq!(
            encode_assignment(&BTreeMap::new(), &BTreeSet::new()).unwrap(),
            ""
        );

        let xy: BTreeSet<String> = ["x", "y"].map(String::from).into();
        let a = BTreeMap::from([("y".to_string(), false), ("x".to_string(), true)]);
        assert_eq!(encode_assignment(&a, &xy).unwrap(), "x=1 y=0");
        assert_eq!(
            encode_assignment(&a, &vars),
            Err(EncodingError::MissingVariable("z".into()))
        );

        assert_eq!(parse_assignment("x=1 y=0", &xy).unwrap(), a);
        assert!(parse_assignment("y=0 x=1", &xy).is_err());
        assert!(parse_assignment("x=1", &xy).is_err());
        assert!(parse_assignment("x=2 y=0", &xy).is_err());
    }

    /// Minimum over all rotations and reflections, computed by enumeration.
    fn cycle_min_by_enumeration(seq: &[&str], directed: bool) -> String {
        let n = seq.len();
        let mut variants = Vec::new();
        for r in 0..n {
            let rot: Vec<&str> = (0..n).map(|k| seq[(r + k) % n]).collect();
            variants.push(rot.join(","));
            if !directed {
                let refl: Vec<&str> = (0..n).map(|k| seq[(r + n - k) % n]).collect();
                variants.push(refl.join(","));
            }
        }
        variants.into_iter().min().unwrap()
    }

    #[test]
    fn canonical_cycle_examples() {
        assert_eq!(cycle_min_by_enumeration(&["b", "c", "a"], false), "a,b,c");
        assert_eq!(canonical_cycle(&["b", "c", "a"], false).unwrap(), "a,b,c");
        assert_eq!(canonical_cycle(&["a", "c", "b"], false).unwrap(), "a,b,c");
        assert_eq!(canonical_cycle(&["b", "a"], true).unwrap(), "a,b");
        assert_eq!(canonical_cycle(&["a", "c", "b"], true).unwrap(), "a,c,b");
        assert_eq!(
            canonical_cycle(&["a", "b", "a"], false),
            Err(EncodingError::DuplicateVertex("a".into()))
        );
        assert_eq!(
            canonical_cycle(&["a"], false),
            Err(EncodingError::CycleTooShort(1))
        );
    }

    #[test]
    fn natural_strictness() {
        assert_eq!(Natural::parse("35").unwrap().to_u64(), Some(35));
        assert_eq!(Natural::parse("0").unwrap().to_u64(), Some(0));
        for bad in ["", "035", "+5", "-1", "3 5", "1e3"] {
            assert!(Natural::parse(bad).is_err(), "{bad:?}");
        }
        let (m, lo, hi) = parse_range_instance("35 2 34").unwrap();
        assert_eq!(
            (m.to_u64(), lo.to_u64(), hi.to_u64()),
            (Some(35), Some(2), Some(34))
        );
        assert!(parse_range_instance("35 2").is_err());
        assert!(parse_range_instance("35 02 4").is_err());
        let big = "123456789012345678901234567890";
        assert_eq!(Natural::parse(big).unwrap().to_string(), big);
        assert_eq!(Natural::parse(big).unwrap().to_u64(), None);
    }

    fn name() -> impl Strategy<Value = String> {
        "[a-f][a-z0-9]{0,2}"
    }

    proptest! {
        #[test]
        fn graph_round_trip(
            isolated in proptest::collection::vec(name(), 0..4),
            edges in proptest::collection::vec((name(), name()), 0..8),
            directed: bool,
        ) {
            let mut g = Graph::new(directed);
            for v in isolated { g.add_vertex(v).unwrap(); }
            for (u, v) in edges { let _ = g.add_edge(u, v); }
            let text = encode_graph(&g);
            prop_assert_eq!(parse_graph(&text, directed).unwrap(), g);
        }

        #[test]
        fn parsers_are_total(text in "[ -~]{0,64}") {
            let _ = parse_graph(&text, false);
            let _ = parse_graph(&text, true);
            let _ = parse_cnf(&text);
            if let Ok(g) = parse_graph(&text, false) {
                let canon = encode_graph(&g);
                prop_assert_eq!(parse_graph(&canon, false).unwrap(), g);
            }
        }

        #[test]
        fn canonical_cycle_is_rotation_and_reflection_invariant(
            perm in Just(vec!["a", "b", "c", "d", "e", "f"]).prop_shuffle(),
            len in 2usize..=6,
            shift in 0usize..6,
            reflect: bool,
        ) {
            let base: Vec<&str> = perm[..len].to_vec();
            let mut moved: Vec<&str> = (0..len).map(|k| base[(shift + k) % len]).collect();
            if reflect { moved.reverse(); }
            let a = canonical_cycle(&base, false).unwrap();
            prop_assert_eq!(&a, &canonical_cycle(&moved, false).unwrap());
            prop_assert_eq!(a, cycle_min_by_enumeration(&base, false));
            let d: Vec<&str> = (0..len).map(|k| base[(shift + k) % len]).collect();
            prop_assert_eq!(canonical_cycle(&base, true).unwrap(), canonical_cycle(&d, true).unwrap());
        }
    }

    #[test]
    fn long_inputs_do_not_crash() {
        let text = "a,b ".repeat(2500);
        assert!(parse_graph(text.trim_end(), false).is_err()); // duplicate edges
        let ok: String = (0..2000)
            .map(|i| format!("v{i}"))
            .collect::<Vec<_>>()
            .join(" ");
        assert_eq!(parse_graph(&ok, false).unwrap().vertex_count(), 2000);
    }
}
