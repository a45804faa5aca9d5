//! Brute-force ground truth: exact matching and 1-factor searches, the
//! conjecture checker, graphic-sequence enumeration, and the certificate
//! verifier. Nothing here shares code with the constructive side except the
//! graph types and the realization enumerator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::certificate::{FactorCertificate, Mode};
use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Edge, SimpleGraph};
use crate::matching::Matching;
use crate::realize::{erdos_gallai_graphic, for_each_realization};

/// Default node budget for the brute-force searches.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Exact maximum matching by branch and bound. Meant for `n <= 20`.
pub fn bf_max_matching(g: &SimpleGraph, budget: u64) -> Result<(usize, Matching)> {
    struct Search<'g> {
        g: &'g SimpleGraph,
        mate: Vec<Option<usize>>,
        best: Vec<Option<usize>>,
        best_size: usize,
        nodes: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn go(&mut self, from: usize, size: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            if size > self.best_size {
                self.best_size = size;
                self.best = self.mate.clone();
            }
            let n = self.g.n();
            let free: Vec<usize> = (from..n)
                .filter(|&x| {
                    self.mate[x].is_none()
                        && self
                            .g
                            .neighbors(x)
                            .any(|y| y >= from && self.mate[y].is_none())
                })
                .collect();
            if size + free.len() / 2 <= self.best_size {
                return Ok(());
            }
            let Some(&v) = free.first() else {
                return Ok(());
            };
            let partners: Vec<usize> = self
                .g
                .neighbors(v)
                .filter(|&y| y > v && self.mate[y].is_none())
                .collect();
            for y in partners {
                self.mate[v] = Some(y);
                self.mate[y] = Some(v);
                self.go(v + 1, size + 1)?;
                self.mate[v] = None;
                self.mate[y] = None;
            }
            // Leave v uncovered.
            self.go(v + 1, size)
        }
    }

    let n = g.n();
    let mut s = Search {
        g,
        mate: vec![None; n],
        best: vec![None; n],
        best_size: 0,
        nodes: 0,
        budget,
    };
    s.go(0, 0)?;
    let edges = (0..n).filter_map(|x| s.best[x].filter(|&y| y > x).map(|y| Edge::new(x, y)));
    let m = Matching::from_edges(n, edges)?;
    Ok((s.best_size, m))
}

/// Looks for `t` pairwise edge-disjoint perfect matchings of `g` by
/// backtracking (most constrained vertex first). The partner of vertex 0
/// increases from one matching to the next, which removes the `t!` relabelling
/// symmetry. `Ok(None)` means the search space was exhausted.
pub fn bf_disjoint_one_factors(
    g: &SimpleGraph,
    t: usize,
    budget: u64,
) -> Result<Option<Vec<Matching>>> {
    let n = g.n();
    if t == 0 {
        return Ok(Some(Vec::new()));
    }
    if n % 2 == 1 || n == 0 {
        return Ok(None);
    }

    struct Search {
        n: usize,
        t: usize,
        avail: Vec<Vec<bool>>,
        mate: Vec<Option<usize>>,
        done: Vec<Vec<Option<usize>>>,
        nodes: u64,
        budget: u64,
    }

    impl Search {
        fn tick(&mut self) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            Ok(())
        }

        fn options(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
            (0..self.n).filter(move |&y| self.avail[x][y] && self.mate[y].is_none())
        }

        fn start_matching(&mut self) -> Result<bool> {
            if self.done.len() == self.t {
                return Ok(true);
            }
            self.tick()?;
            let floor = self.done.last().and_then(|m| m[0]).map_or(0, |p| p + 1);
            let firsts: Vec<usize> = self.options(0).filter(|&y| y >= floor).collect();
            for y in firsts {
                // Remaining matchings need distinct larger partners of 0.
                if self.n - 1 - y < self.t - self.done.len() - 1 {
                    break;
                }
                self.link(0, y);
                if self.extend()? {
                    return Ok(true);
                }
                self.unlink(0, y);
            }
            Ok(false)
        }

        fn extend(&mut self) -> Result<bool> {
            self.tick()?;
            let mut pick: Option<(usize, usize)> = None;
            for x in 0..self.n {
                if self.mate[x].is_some() {
                    continue;
                }
                let c = self.options(x).count();
                if c == 0 {
                    return Ok(false);
                }
                if pick.is_none_or(|(_, best)| c < best) {
                    pick = Some((x, c));
                }
            }
            let Some((x, _)) = pick else {
                let m = std::mem::replace(&mut self.mate, vec![None; self.n]);
                for (a, b) in m.iter().enumerate() {
                    let b = b.expect("perfect");
                    self.avail[a][b] = false;
                }
                self.done.push(m);
                if self.start_matching()? {
                    return Ok(true);
                }
                let m = self.done.pop().expect("pushed above");
                for (a, b) in m.iter().enumerate() {
                    let b = b.expect("perfect");
                    self.avail[a][b] = true;
                }
                self.mate = m;
                return Ok(false);
            };
            let ys: Vec<usize> = self.options(x).collect();
            for y in ys {
                self.link(x, y);
                if self.extend()? {
                    return Ok(true);
                }
                self.unlink(x, y);
            }
            Ok(false)
        }

        fn link(&mut self, a: usize, b: usize) {
            self.mate[a] = Some(b);
            self.mate[b] = Some(a);
        }

        fn unlink(&mut self, a: usize, b: usize) {
            self.mate[a] = None;
            self.mate[b] = None;
        }
    }

    let mut avail = vec![vec![false; n]; n];
    for e in g.edges() {
        avail[e.u()][e.v()] = true;
        avail[e.v()][e.u()] = true;
    }
    let mut s = Search {
        n,
        t,
        avail,
        mate: vec![None; n],
        done: Vec::new(),
        nodes: 0,
        budget,
    };
    if !s.start_matching()? {
        return Ok(None);
    }
    let found = s
        .done
        .iter()
        .map(|m| {
            let edges = (0..n).filter_map(|x| m[x].filter(|&y| y > x).map(|y| Edge::new(x, y)));
            Matching::from_edges(n, edges)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(found))
}

/// Outcome of [`bf_conjecture_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjectureOutcome {
    Found {
        graph: SimpleGraph,
        matchings: Vec<Matching>,
    },
    /// Every realization was checked and none holds `k` disjoint 1-factors.
    Counterexample,
}

/// Searches all labelled realizations of `pi` for one carrying `k`
/// edge-disjoint perfect matchings. `budget` bounds both the realization
/// search and each 1-factor search.
pub fn bf_conjecture_search(
    pi: &DegreeSequence,
    k: usize,
    budget: u64,
) -> Result<ConjectureOutcome> {
    if !erdos_gallai_graphic(pi) {
        return Err(Error::NotGraphic);
    }
    match pi.minus(k) {
        Some(rest) if erdos_gallai_graphic(&rest) => {}
        _ => return Err(Error::NotGraphicMinusK { k }),
    }
    if pi.len() % 2 == 1 {
        return Err(Error::OddVertexCount { n: pi.len() });
    }
    let mut found = None;
    let mut failure = None;
    let _ = for_each_realization(pi.by_vertex(), budget, |g| {
        match bf_disjoint_one_factors(g, k, budget) {
            Ok(Some(ms)) => {
                found = Some((g.clone(), ms));
                ControlFlow::Break(())
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(match found {
        Some((graph, matchings)) => ConjectureOutcome::Found { graph, matchings },
        None => ConjectureOutcome::Counterexample,
    })
}

/// All non-increasing graphic sequences of length `n` with entries at most
/// `d_max`, in lexicographic order.
pub fn enumerate_graphic(n: usize, d_max: usize) -> Vec<DegreeSequence> {
    fn rec(n: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<DegreeSequence>) {
        if cur.len() == n {
            let seq = DegreeSequence::new(cur.clone());
            if erdos_gallai_graphic(&seq) {
                out.push(seq);
            }
            return;
        }
        for d in 0..=cap {
            cur.push(d);
            rec(n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(
        n,
        d_max.min(n.saturating_sub(1)),
        &mut Vec::with_capacity(n),
        &mut out,
    );
    out.sort_by(|a, b| a.by_vertex().cmp(b.by_vertex()));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ViolationKind {
    ShapeMismatch,
    InvalidEdge,
    ClassOverlap,
    DegreeMismatch,
    NotPerfectMatching,
    NotTwoFactor,
    ResidualIrregular,
    CountMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)?;
        if !self.vertices.is_empty() {
            write!(f, " vertices {:?}", self.vertices)?;
        }
        if !self.edges.is_empty() {
            let edges: Vec<String> = self.edges.iter().map(Edge::to_string).collect();
            write!(f, " edges [{}]", edges.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyCounts {
    pub one_factors: usize,
    pub two_factors: usize,
    pub residual_degree: Option<usize>,
    pub black_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub counts: VerifyCounts,
}

/// Checks a certificate against `(pi, k)` from scratch.
pub fn verify_certificate(pi: &DegreeSequence, k: usize, cert: &FactorCertificate) -> VerifyReport {
    let mut out: Vec<Violation> = Vec::new();
    let mut push = |kind, vertices: Vec<usize>, edges: Vec<Edge>, detail: String| {
        out.push(Violation {
            kind,
            vertices,
            edges,
            detail,
        })
    };
    let n = pi.len();
    let counts = VerifyCounts {
        one_factors: cert.one_factors.len(),
        two_factors: cert.two_factors.len(),
        residual_degree: cert.residual.as_ref().map(|r| r.degree),
        black_edges: cert.black_edges.len(),
    };

    if cert.n != n || cert.pi != pi.by_vertex() || cert.k != k {
        push(
            ViolationKind::ShapeMismatch,
            vec![],
            vec![],
            format!(
                "certificate is for n={} pi={:?} k={}",
                cert.n, cert.pi, cert.k
            ),
        );
    }

    let mut classes: Vec<(String, &[Edge])> = Vec::new();
    for (i, f) in cert.one_factors.iter().enumerate() {
        classes.push((format!("one_factors[{i}]"), f));
    }
    for (i, f) in cert.two_factors.iter().enumerate() {
        classes.push((format!("two_factors[{i}]"), f));
    }
    if let Some(r) = &cert.residual {
        classes.push(("residual".into(), &r.edges));
    }
    classes.push(("black_edges".into(), &cert.black_edges));

    let mut owner: BTreeMap<Edge, &str> = BTreeMap::new();
    let mut total = vec![0usize; n];
    for (name, edges) in &classes {
        for &e in edges.iter() {
            if e.v() >= n {
                push(
                    ViolationKind::InvalidEdge,
                    vec![],
                    vec![e],
                    format!("{name} has an out-of-range edge"),
                );
                continue;
            }
            if let Some(prev) = owner.insert(e, name) {
                push(
                    ViolationKind::ClassOverlap,
                    vec![],
                    vec![e],
                    format!("edge in {prev} and {name}"),
                );
                continue;
            }
            total[e.u()] += 1;
            total[e.v()] += 1;
        }
    }
    let off: Vec<usize> = (0..n).filter(|&x| total[x] != pi.degree(x)).collect();
    if !off.is_empty() {
        push(
            ViolationKind::DegreeMismatch,
            off,
            vec![],
            "realized degrees differ from pi".into(),
        );
    }

    let degrees_of = |edges: &[Edge]| {
        let mut d = vec![0usize; n];
        for e in edges.iter().filter(|e| e.v() < n) {
            d[e.u()] += 1;
            d[e.v()] += 1;
        }
        d
    };
    for (i, f) in cert.one_factors.iter().enumerate() {
        let d = degrees_of(f);
        let bad: Vec<usize> = (0..n).filter(|&x| d[x] != 1).collect();
        if !bad.is_empty() {
            push(
                ViolationKind::NotPerfectMatching,
                bad,
                vec![],
                format!("one_factors[{i}] does not cover every vertex exactly once"),
            );
        }
    }
    for (i, f) in cert.two_factors.iter().enumerate() {
        let d = degrees_of(f);
        let bad: Vec<usize> = (0..n).filter(|&x| d[x] != 2).collect();
        if !bad.is_empty() {
            push(
                ViolationKind::NotTwoFactor,
                bad,
                vec![],
                format!("two_factors[{i}] is not spanning 2-regular"),
            );
        }
    }
    if let Some(r) = &cert.residual {
        let d = degrees_of(&r.edges);
        let bad: Vec<usize> = (0..n).filter(|&x| d[x] != r.degree).collect();
        if !bad.is_empty() {
            push(
                ViolationKind::ResidualIrregular,
                bad,
                vec![],
                format!("residual is not {}-regular", r.degree),
            );
        }
    }

    let residual = cert.residual.as_ref().map(|r| r.degree);
    let expected = match cert.mode {
        Mode::Kundu => (0, 0, Some(k)),
        Mode::FourOnes => (k.min(4), 0, Some(k.saturating_sub(4))),
        Mode::HalfK => (k / 2 + 2, 0, None),
    };
    if (cert.one_factors.len(), cert.two_factors.len(), residual) != expected {
        push(
            ViolationKind::CountMismatch,
            vec![],
            vec![],
            format!(
                "{} with k={k} expects {} one-factors, {} two-factors, residual {:?}; found {}, {}, {:?}",
                cert.mode,
                expected.0,
                expected.1,
                expected.2,
                cert.one_factors.len(),
                cert.two_factors.len(),
                residual
            ),
        );
    }

    VerifyReport {
        pass: out.is_empty(),
        violations: out,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::four_ones;

    fn two_triangles() -> SimpleGraph {
        SimpleGraph::cycle(3).disjoint_union(&SimpleGraph::cycle(3))
    }

    #[test]
    fn max_matching_examples() {
        assert_eq!(
            bf_max_matching(&SimpleGraph::cycle(3), DEFAULT_BUDGET)
                .unwrap()
                .0,
            1
        );
        assert_eq!(
            bf_max_matching(&SimpleGraph::cycle(6), DEFAULT_BUDGET)
                .unwrap()
                .0,
            3
        );
        let (size, m) = bf_max_matching(&SimpleGraph::petersen(), DEFAULT_BUDGET).unwrap();
        assert_eq!(size, 5);
        assert!(m.is_within(&SimpleGraph::petersen()));
        assert_eq!(
            bf_max_matching(&two_triangles(), DEFAULT_BUDGET).unwrap().0,
            2
        );
        assert_eq!(
            bf_max_matching(&SimpleGraph::empty(4), DEFAULT_BUDGET)
                .unwrap()
                .0,
            0
        );
    }

    #[test]
    fn max_matching_budget() {
        assert_eq!(
            bf_max_matching(&SimpleGraph::complete(12), 3),
            Err(Error::BudgetExceeded(3))
        );
    }

    #[test]
    fn disjoint_one_factor_examples() {
        let ms = bf_disjoint_one_factors(&SimpleGraph::complete(4), 3, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(ms.len(), 3);
        let ms = bf_disjoint_one_factors(&SimpleGraph::cycle(6), 2, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert!(ms.iter().all(|m| m.is_perfect()));
        assert_eq!(
            bf_disjoint_one_factors(&two_triangles(), 1, DEFAULT_BUDGET),
            Ok(None)
        );
        assert_eq!(
            bf_disjoint_one_factors(&SimpleGraph::complete(4), 4, DEFAULT_BUDGET),
            Ok(None)
        );
        // K6 has a 1-factorization.
        assert_eq!(
            bf_disjoint_one_factors(&SimpleGraph::complete(6), 5, DEFAULT_BUDGET)
                .unwrap()
                .unwrap()
                .len(),
            5
        );
    }

    #[test]
    fn petersen_graph_is_not_one_factorable() {
        // It has perfect matchings but no three disjoint ones.
        assert!(
            bf_disjoint_one_factors(&SimpleGraph::petersen(), 1, DEFAULT_BUDGET)
                .unwrap()
                .is_some()
        );
        assert_eq!(
            bf_disjoint_one_factors(&SimpleGraph::petersen(), 3, DEFAULT_BUDGET),
            Ok(None)
        );
    }

    #[test]
    fn conjecture_examples() {
        let found = |pi: Vec<usize>, k| {
            matches!(
                bf_conjecture_search(&DegreeSequence::new(pi), k, DEFAULT_BUDGET).unwrap(),
                ConjectureOutcome::Found { .. }
            )
        };
        assert!(found(vec![1, 1], 1));
        assert!(found(vec![2; 4], 2));
        assert!(found(vec![2; 6], 2));
        let ConjectureOutcome::Found { graph, matchings } =
            bf_conjecture_search(&DegreeSequence::new(vec![2; 6]), 2, DEFAULT_BUDGET).unwrap()
        else {
            panic!("expected a witness");
        };
        assert_eq!(graph.components().len(), 1, "the witness is a hexagon");
        assert_eq!(matchings.len(), 2);
        assert_eq!(
            bf_conjecture_search(&DegreeSequence::new(vec![3, 3, 1, 1]), 1, DEFAULT_BUDGET),
            Err(Error::NotGraphic)
        );
    }

    #[test]
    fn enumerate_examples() {
        let show = |v: Vec<DegreeSequence>| {
            v.into_iter()
                .map(|s| s.by_vertex().to_vec())
                .collect::<Vec<_>>()
        };
        assert_eq!(show(enumerate_graphic(2, 1)), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(
            show(enumerate_graphic(3, 2)),
            vec![vec![0, 0, 0], vec![1, 1, 0], vec![2, 1, 1], vec![2, 2, 2]]
        );
        let four = show(enumerate_graphic(4, 3));
        assert!(four.contains(&vec![3, 3, 3, 3]));
        assert!(!four.contains(&vec![3, 3, 1, 1]));
    }

    /// Counts of graphic non-increasing sequences, checked against a
    /// brute-force count over all labelled graphs.
    #[test]
    fn enumerate_matches_labelled_graphs() {
        for n in 1..=5 {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .collect();
            let mut seen = std::collections::BTreeSet::new();
            for mask in 0u32..(1 << pairs.len()) {
                let mut d = vec![0; n];
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        d[a] += 1;
                        d[b] += 1;
                    }
                }
                d.sort_unstable_by(|a, b| b.cmp(a));
                seen.insert(d);
            }
            let got: Vec<Vec<usize>> = enumerate_graphic(n, n)
                .into_iter()
                .map(|s| s.by_vertex().to_vec())
                .collect();
            assert_eq!(got, seen.into_iter().collect::<Vec<_>>(), "n={n}");
        }
    }

    #[test]
    fn verifier_accepts_and_rejects() {
        let pi = DegreeSequence::new(vec![3; 4]);
        let cert = four_ones(&pi, 3, 7).unwrap();
        let report = verify_certificate(&pi, 3, &cert);
        assert!(report.pass, "{:?}", report.violations);
        assert_eq!(report.counts.one_factors, 3);

        let mut broken = cert.clone();
        let dropped = broken.one_factors[0].remove(0);
        let report = verify_certificate(&pi, 3, &broken);
        assert!(!report.pass);
        let v = report
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::NotPerfectMatching)
            .unwrap();
        assert_eq!(v.vertices, vec![dropped.u(), dropped.v()]);

        let mut overlap = cert.clone();
        let shared = overlap.one_factors[0][0];
        overlap.one_factors[1][0] = shared;
        let report = verify_certificate(&pi, 3, &overlap);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::ClassOverlap && v.edges == vec![shared]));
    }

    #[test]
    fn verifier_checks_mode_counts() {
        let pi = DegreeSequence::new(vec![3; 4]);
        let cert = four_ones(&pi, 3, 0).unwrap();
        let report = verify_certificate(&pi, 2, &cert);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::ShapeMismatch));
        let mut half = cert.clone();
        half.mode = Mode::HalfK;
        let report = verify_certificate(&pi, 3, &half);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::CountMismatch));
    }
}
