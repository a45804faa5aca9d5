//! Maximum matchings and odd-cycle certificates for regular graphs.
//!
//! [`lemma_odd_certificate`] returns a maximum matching in which every
//! uncovered vertex `z` sits on its own odd cycle whose other vertices are
//! matched in consecutive pairs along the cycle. Cycles of distinct
//! uncovered vertices are vertex-disjoint. The alternation along cycle edges
//! is stronger than "matched to another vertex of the cycle"; later stages
//! rebuild matchings by walking cycle edges, so they rely on it.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n: usize) -> Matching {
        Matching {
            mate: vec![None; n],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Matching> {
        let mut m = Matching::empty(n);
        for e in edges {
            if e.v() >= n || m.mate[e.u()].is_some() || m.mate[e.v()].is_some() {
                return Err(Error::InvalidInitial);
            }
            m.mate[e.u()] = Some(e.v());
            m.mate[e.v()] = Some(e.u());
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    pub fn is_covered(&self, v: usize) -> bool {
        self.mate[v].is_some()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.mate[e.u()] == Some(e.v())
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(Option::is_some)
    }

    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.mate[v].is_none()).collect()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.filter(|&v| u < v).map(|v| Edge::new(u, v)))
            .collect()
    }

    pub fn insert(&mut self, e: Edge) -> Result<()> {
        if self.mate[e.u()].is_some() || self.mate[e.v()].is_some() {
            return Err(Error::InvalidInitial);
        }
        self.mate[e.u()] = Some(e.v());
        self.mate[e.v()] = Some(e.u());
        Ok(())
    }

    /// Removes the matching edge at `v`, if any.
    pub fn unmatch(&mut self, v: usize) {
        if let Some(w) = self.mate[v].take() {
            self.mate[w] = None;
        }
    }

    pub fn is_within(&self, g: &SimpleGraph) -> bool {
        self.n() == g.n() && self.edges().iter().all(|e| g.has_edge(e.u(), e.v()))
    }
}

/// Complements matching membership along `path`, moving the uncovered
/// vertex from its first to its last vertex.
///
/// The path must start at an uncovered vertex, have an even number of edges
/// and alternate non-matching / matching edges.
pub fn toggle_alternating_path(m: &Matching, path: &[usize]) -> Result<Matching> {
    if path.len() <= 1 {
        return Ok(m.clone());
    }
    if (path.len() - 1) % 2 == 1 {
        return Err(Error::OddLengthPath);
    }
    if m.is_covered(path[0]) {
        return Err(Error::NotAlternating);
    }
    for (i, w) in path.windows(2).enumerate() {
        let in_m = m.mate(w[0]) == Some(w[1]);
        if in_m != (i % 2 == 1) {
            return Err(Error::NotAlternating);
        }
    }
    let mut out = m.clone();
    for w in path.chunks(2).filter(|c| c.len() == 2) {
        // (p0,p1) joins, (p1,p2) leaves, ...
        out.unmatch(w[1]);
    }
    for w in path.chunks(2).filter(|c| c.len() == 2) {
        out.insert(Edge::new(w[0], w[1]))?;
    }
    Ok(out)
}

/// Edmonds' blossom search for an augmenting path from `root`.
struct BlossomSearch<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl<'a> BlossomSearch<'a> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut on_path = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            on_path[a] = true;
            match self.mate[a] {
                None => break,
                Some(m) => a = self.parent[m].expect("outer vertex has a parent"),
            }
        }
        loop {
            b = self.base[b];
            if on_path[b] {
                return b;
            }
            let m = self.mate[b].expect("path to root");
            b = self.parent[m].expect("outer vertex has a parent");
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = self.mate[v].expect("inner path vertex is matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("outer vertex has a parent");
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &to in &self.adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_is_outer =
                    to == root || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_is_outer {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        loop {
            let pv = self.parent[v].expect("augmenting path");
            let ppv = self.mate[pv];
            self.mate[v] = Some(pv);
            self.mate[pv] = Some(v);
            match ppv {
                None => break,
                Some(x) => v = x,
            }
        }
    }
}

/// Maximum matching of `g` grown from `initial` by blossom-aware augmenting
/// path search. The result never has fewer edges than `initial`.
pub fn maximum_matching(g: &SimpleGraph, initial: &Matching) -> Result<Matching> {
    let n = g.n();
    if !initial.is_within(g) {
        return Err(Error::InvalidInitial);
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut search = BlossomSearch {
        adj: &adj,
        mate: initial.mate.clone(),
        parent: vec![None; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
    };
    // Greedy seeding keeps the number of tree searches small.
    for (u, nbrs) in adj.iter().enumerate() {
        if search.mate[u].is_none() {
            if let Some(&v) = nbrs.iter().find(|&&v| search.mate[v].is_none()) {
                search.mate[u] = Some(v);
                search.mate[v] = Some(u);
            }
        }
    }
    for root in 0..n {
        if search.mate[root].is_none() {
            if let Some(end) = search.find_path(root) {
                search.augment(end);
            }
        }
    }
    Ok(Matching { mate: search.mate })
}

/// A maximum matching plus, for each uncovered vertex, a fully matched odd
/// cycle through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddCycleCertificate {
    pub matching: Matching,
    /// Uncovered vertex -> cycle starting at that vertex.
    pub cycles: BTreeMap<usize, Vec<usize>>,
}

impl OddCycleCertificate {
    /// Checks every structural condition except maximality (which needs an
    /// oracle). Returns a description of the first failure.
    pub fn check(&self, g: &SimpleGraph) -> std::result::Result<(), String> {
        let m = &self.matching;
        if !m.is_within(g) {
            return Err("matching uses non-edges".into());
        }
        let uncovered = m.uncovered();
        let keys: Vec<usize> = self.cycles.keys().copied().collect();
        if keys != uncovered {
            return Err(format!(
                "cycle map keys {keys:?} != uncovered {uncovered:?}"
            ));
        }
        let mut owner = vec![None; g.n()];
        for (&z, cyc) in &self.cycles {
            let len = cyc.len();
            if len < 3 || len % 2 == 0 {
                return Err(format!("cycle of {z} has length {len}"));
            }
            if cyc[0] != z {
                return Err(format!("cycle of {z} does not start at it"));
            }
            for &x in cyc {
                if owner[x].replace(z).is_some() {
                    return Err(format!("vertex {x} lies on two cycles (or repeats)"));
                }
            }
            for i in 0..len {
                let (a, b) = (cyc[i], cyc[(i + 1) % len]);
                if !g.has_edge(a, b) {
                    return Err(format!("cycle of {z} uses non-edge {a}-{b}"));
                }
            }
            // Vertices 1..len pair up as (1,2), (3,4), ... along the cycle.
            for i in (1..len).step_by(2) {
                if m.mate(cyc[i]) != Some(cyc[i + 1]) {
                    return Err(format!(
                        "cycle of {z}: {} and {} are not matched together",
                        cyc[i],
                        cyc[i + 1]
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Plain alternating BFS tree (no blossom contraction) from an uncovered
/// root. Returns the first non-matching edge joining two outer vertices.
fn find_outer_edge(
    g: &SimpleGraph,
    m: &Matching,
    root: usize,
    parent: &mut [Option<usize>],
) -> Result<(usize, usize)> {
    #[derive(Clone, Copy, PartialEq)]
    enum Label {
        None,
        Outer,
        Inner,
    }
    let mut label = vec![Label::None; g.n()];
    label[root] = Label::Outer;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            match label[y] {
                Label::Outer => return Ok((x, y)),
                Label::Inner => {}
                Label::None => {
                    let Some(my) = m.mate(y) else {
                        return Err(Error::Internal(format!(
                            "augmenting path {root}..{y} in a maximum matching"
                        )));
                    };
                    label[y] = Label::Inner;
                    parent[y] = Some(x);
                    label[my] = Label::Outer;
                    parent[my] = Some(y);
                    queue.push_back(my);
                }
            }
        }
    }
    Err(Error::Internal(format!(
        "alternating tree from {root} has no outer-outer edge in a regular graph"
    )))
}

fn tree_path(parent: &[Option<usize>], mut x: usize) -> Vec<usize> {
    let mut path = vec![x];
    while let Some(p) = parent[x] {
        path.push(p);
        x = p;
    }
    path.reverse();
    path
}

/// Maximum matching of the `r`-regular graph `g` (`r >= 1`) in which every
/// uncovered vertex lies on a disjoint fully matched odd cycle.
pub fn lemma_odd_certificate(g: &SimpleGraph, initial: &Matching) -> Result<OddCycleCertificate> {
    match g.regular_degree() {
        Some(r) if r >= 1 => {}
        _ => return Err(Error::NotRegular),
    }
    let mut m = maximum_matching(g, initial)?;
    let mut cycles = BTreeMap::new();
    for root in m.uncovered() {
        let mut parent = vec![None; g.n()];
        let (x, y) = find_outer_edge(g, &m, root, &mut parent)?;
        let px = tree_path(&parent, x);
        let py = tree_path(&parent, y);
        let common = px.iter().zip(&py).take_while(|(a, b)| a == b).count();
        let z_pos = common - 1;
        // z .. x along the tree, then y .. back up to (excluding) z.
        let mut cycle: Vec<usize> = px[z_pos..].to_vec();
        cycle.extend(py[common..].iter().rev());
        m = toggle_alternating_path(&m, &px[..=z_pos])?;
        cycles.insert(px[z_pos], cycle);
    }
    Ok(OddCycleCertificate {
        matching: m,
        cycles,
    })
}
