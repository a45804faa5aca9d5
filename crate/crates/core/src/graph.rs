//! Plain graph and degree-sequence types.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered vertex pair stored canonically as `(min, max)`.
///
/// Serializes as the two-element array `[u, v]` with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Panics if `a == b`; loops are not representable.
    pub fn new(a: usize, b: usize) -> Edge {
        assert_ne!(a, b, "loop edge {a}-{a}");
        Edge {
            u: a.min(b),
            v: a.max(b),
        }
    }

    pub fn try_new(a: usize, b: usize) -> Option<Edge> {
        (a != b).then(|| Edge::new(a, b))
    }

    pub fn u(self) -> usize {
        self.u
    }

    pub fn v(self) -> usize {
        self.v
    }

    pub fn endpoints(self) -> [usize; 2] {
        [self.u, self.v]
    }

    pub fn contains(self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(self, x: usize) -> usize {
        debug_assert!(self.contains(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.contains(other.u) || self.contains(other.v)
    }

    /// Position of this pair in the row-major upper triangle of an `n`-vertex
    /// complete graph.
    pub fn index(self, n: usize) -> usize {
        debug_assert!(self.v < n);
        self.u * (2 * n - self.u - 1) / 2 + (self.v - self.u - 1)
    }

    pub fn from_index(n: usize, mut idx: usize) -> Edge {
        for u in 0..n {
            let row = n - u - 1;
            if idx < row {
                return Edge::new(u, u + 1 + idx);
            }
            idx -= row;
        }
        panic!("pair index out of range for n = {n}");
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = String;

    fn try_from(pair: [usize; 2]) -> std::result::Result<Self, Self::Error> {
        if pair[0] >= pair[1] {
            return Err(format!(
                "edge [{}, {}] is not of the form [u, v] with u < v",
                pair[0], pair[1]
            ));
        }
        Ok(Edge::new(pair[0], pair[1]))
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.u, e.v]
    }
}

/// Number of unordered pairs in `K_n`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A degree list. Entries are kept per vertex in input order; the
/// non-increasing normalization is available through [`DegreeSequence::sorted`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeSequence {
    by_vertex: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> DegreeSequence {
        DegreeSequence { by_vertex: degrees }
    }

    pub fn len(&self) -> usize {
        self.by_vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_vertex.is_empty()
    }

    /// Degree of vertex `v` in input order.
    pub fn degree(&self, v: usize) -> usize {
        self.by_vertex[v]
    }

    pub fn by_vertex(&self) -> &[usize] {
        &self.by_vertex
    }

    /// Degrees in non-increasing order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut d = self.by_vertex.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn sum(&self) -> usize {
        self.by_vertex.iter().sum()
    }

    /// `π − k`, or `None` if some entry would go negative.
    pub fn minus(&self, k: usize) -> Option<DegreeSequence> {
        self.by_vertex
            .iter()
            .map(|&d| d.checked_sub(k))
            .collect::<Option<Vec<_>>>()
            .map(DegreeSequence::new)
    }

    /// Parses comma- and/or whitespace-separated non-negative integers.
    pub fn parse(text: &str) -> Result<DegreeSequence> {
        let degrees = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("not a non-negative integer: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if degrees.is_empty() {
            return Err(Error::InvalidInput("empty degree sequence".into()));
        }
        Ok(DegreeSequence::new(degrees))
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.by_vertex.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<usize>> for DegreeSequence {
    fn from(v: Vec<usize>) -> Self {
        DegreeSequence::new(v)
    }
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> SimpleGraph {
        SimpleGraph {
            n,
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<SimpleGraph> {
        let mut g = SimpleGraph::empty(n);
        for e in edges {
            if e.v() >= n {
                return Err(Error::InvalidInput(format!(
                    "edge {e} out of range for n = {n}"
                )));
            }
            if !g.add_edge(e) {
                return Err(Error::DuplicateEdge(e));
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(Edge::new(u, v));
            }
        }
        g
    }

    /// Cycle `0-1-…-(n-1)-0`.
    pub fn cycle(n: usize) -> SimpleGraph {
        assert!(n >= 3);
        let mut g = SimpleGraph::empty(n);
        for i in 0..n {
            g.add_edge(Edge::new(i, (i + 1) % n));
        }
        g
    }

    /// Circulant graph on `n` vertices joining `i` to `i ± s` for each offset `s`.
    pub fn circulant(n: usize, offsets: &[usize]) -> SimpleGraph {
        let mut g = SimpleGraph::empty(n);
        for i in 0..n {
            for &s in offsets {
                let j = (i + s) % n;
                if j != i {
                    g.add_edge(Edge::new(i, j));
                }
            }
        }
        g
    }

    /// Disjoint union, relabelling `other` to follow `self`.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n + other.n);
        for e in self.edges() {
            g.add_edge(e);
        }
        for e in other.edges() {
            g.add_edge(Edge::new(e.u() + self.n, e.v() + self.n));
        }
        g
    }

    /// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
    pub fn petersen() -> SimpleGraph {
        let mut g = SimpleGraph::empty(10);
        for i in 0..5 {
            g.add_edge(Edge::new(i, (i + 1) % 5));
            g.add_edge(Edge::new(5 + i, 5 + (i + 2) % 5));
            g.add_edge(Edge::new(i, 5 + i));
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Returns false if the edge was already present.
    pub fn add_edge(&mut self, e: Edge) -> bool {
        let fresh = self.adj[e.u()].insert(e.v());
        self.adj[e.v()].insert(e.u());
        fresh
    }

    pub fn remove_edge(&mut self, e: Edge) -> bool {
        let had = self.adj[e.u()].remove(&e.v());
        self.adj[e.v()].remove(&e.u());
        had
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adj[a].contains(&b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(BTreeSet::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.range(u + 1..).map(move |&v| Edge::new(u, v)))
    }

    /// `Some(r)` if every vertex has degree `r`.
    pub fn regular_degree(&self) -> Option<usize> {
        let r = self.adj.first().map_or(0, BTreeSet::len);
        self.adj.iter().all(|a| a.len() == r).then_some(r)
    }

    pub fn complement(&self) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(Edge::new(u, v));
                }
            }
        }
        g
    }

    /// Vertex sets of connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                comp.push(x);
                for y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Splits a 2-regular graph into its cycles. Each cycle starts at its
    /// least vertex and continues towards the smaller of its two neighbours.
    pub fn cycles_of_two_regular(&self) -> Option<Vec<Vec<usize>>> {
        if self.regular_degree() != Some(2) {
            return None;
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut cycle = vec![s];
            seen[s] = true;
            let mut prev = s;
            let mut cur = *self.adj[s].iter().next().expect("degree 2");
            while cur != s {
                seen[cur] = true;
                cycle.push(cur);
                let next = self.neighbors(cur).find(|&x| x != prev).expect("degree 2");
                prev = cur;
                cur = next;
            }
            out.push(cycle);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 2..9 {
            let mut seen = vec![false; pair_count(n)];
            for u in 0..n {
                for v in u + 1..n {
                    let e = Edge::new(u, v);
                    let i = e.index(n);
                    assert!(!seen[i]);
                    seen[i] = true;
                    assert_eq!(Edge::from_index(n, i), e);
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn edge_serializes_as_sorted_pair() {
        let e = Edge::new(5, 2);
        assert_eq!(serde_json::to_string(&e).unwrap(), "[2,5]");
        assert!(serde_json::from_str::<Edge>("[5,2]").is_err());
        assert!(serde_json::from_str::<Edge>("[3,3]").is_err());
    }

    #[test]
    fn parse_accepts_commas_and_spaces() {
        let d = DegreeSequence::parse("3, 3 2\n1,1").unwrap();
        assert_eq!(d.by_vertex(), &[3, 3, 2, 1, 1]);
        assert_eq!(d.sorted(), vec![3, 3, 2, 1, 1]);
        assert!(DegreeSequence::parse("1,-1").is_err());
        assert!(DegreeSequence::parse("  ").is_err());
    }

    #[test]
    fn minus_rejects_negative_entries() {
        let d = DegreeSequence::new(vec![3, 2, 1]);
        assert_eq!(d.minus(1).unwrap().by_vertex(), &[2, 1, 0]);
        assert!(d.minus(2).is_none());
    }

    #[test]
    fn cycles_of_two_regular_splits_components() {
        let g = SimpleGraph::cycle(3).disjoint_union(&SimpleGraph::cycle(4));
        let cycles = g.cycles_of_two_regular().unwrap();
        assert_eq!(cycles, vec![vec![0, 1, 2], vec![3, 4, 5, 6]]);
        assert!(SimpleGraph::complete(4).cycles_of_two_regular().is_none());
    }

    #[test]
    fn petersen_graph_is_cubic() {
        let g = SimpleGraph::petersen();
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.edge_count(), 15);
    }
}
