//! Graphicality, realization construction and randomization, and
//! realizations of `π` that contain a `k`-factor.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{ColorId, ColoredRealization};
use crate::error::{Error, Result};
use crate::graph::{pair_count, DegreeSequence, Edge, SimpleGraph};
use crate::matching::{maximum_matching, Matching};

/// Erdős–Gallai test.
pub fn erdos_gallai_graphic(seq: &DegreeSequence) -> bool {
    is_graphic(seq.by_vertex())
}

pub(crate) fn is_graphic(degrees: &[usize]) -> bool {
    let n = degrees.len();
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    if d.first().is_some_and(|&m| m >= n.max(1)) {
        return false;
    }
    let mut prefix = 0;
    for k in 1..=n {
        prefix += d[k - 1];
        let tail: usize = d[k..].iter().map(|&x| x.min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

/// Havel–Hakimi: repeatedly join the vertex of largest remaining degree to
/// the next-largest ones, breaking ties by lowest vertex id.
pub fn havel_hakimi_realize(seq: &DegreeSequence) -> Result<SimpleGraph> {
    if !erdos_gallai_graphic(seq) {
        return Err(Error::NotGraphic);
    }
    let n = seq.len();
    let mut rem: Vec<usize> = seq.by_vertex().to_vec();
    let mut g = SimpleGraph::empty(n);
    while let Some(v) = (0..n)
        .filter(|&v| rem[v] > 0)
        .min_by_key(|&v| (std::cmp::Reverse(rem[v]), v))
    {
        let mut others: Vec<usize> = (0..n).filter(|&x| x != v && rem[x] > 0).collect();
        others.sort_by_key(|&x| (std::cmp::Reverse(rem[x]), x));
        let d = rem[v];
        if others.len() < d {
            return Err(Error::NotGraphic);
        }
        for &x in &others[..d] {
            g.add_edge(Edge::new(v, x));
            rem[x] -= 1;
        }
        rem[v] = 0;
    }
    Ok(g)
}

/// Attempts one random two-switch `ab, cd -> ac, bd` on `g`, never creating
/// an edge of `forbidden`. With an `anchor`, `a` is the anchor. Returns true
/// if the move was applied.
fn try_two_switch<R: Rng>(
    g: &mut SimpleGraph,
    forbidden: Option<&SimpleGraph>,
    anchor: Option<usize>,
    rng: &mut R,
) -> bool {
    let edges: Vec<Edge> = g.edges().collect();
    if edges.len() < 2 {
        return false;
    }
    let (a, b) = match anchor {
        Some(x) => {
            let nb: Vec<usize> = g.neighbors(x).collect();
            if nb.is_empty() {
                return false;
            }
            (x, nb[rng.gen_range(0..nb.len())])
        }
        None => {
            let e = edges[rng.gen_range(0..edges.len())];
            if rng.gen_bool(0.5) {
                (e.u(), e.v())
            } else {
                (e.v(), e.u())
            }
        }
    };
    let e = Edge::new(a, b);
    let f = edges[rng.gen_range(0..edges.len())];
    if e.shares_vertex(f) {
        return false;
    }
    let [c, d] = if rng.gen_bool(0.5) {
        f.endpoints()
    } else {
        [f.v(), f.u()]
    };
    if g.has_edge(a, c) || g.has_edge(b, d) {
        return false;
    }
    if forbidden.is_some_and(|h| h.has_edge(a, c) || h.has_edge(b, d)) {
        return false;
    }
    g.remove_edge(e);
    g.remove_edge(f);
    g.add_edge(Edge::new(a, c));
    g.add_edge(Edge::new(b, d));
    true
}

/// Applies up to `steps` random two-switches (invalid proposals are
/// skipped). Deterministic for a fixed seed; the degree of every vertex is
/// preserved.
pub fn switch_randomize(g: &SimpleGraph, steps: usize, seed: u64) -> SimpleGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = g.clone();
    for _ in 0..steps {
        try_two_switch(&mut out, None, None, &mut rng);
    }
    out
}

/// Result of the gadget reduction: a `k`-factor if one exists, and the
/// deficiency of the best `k`-bounded subgraph found (0 iff a factor exists).
struct FactorSearch {
    factor: Option<SimpleGraph>,
    deficiency: usize,
    /// Vertices below degree `k` in the best `k`-bounded subgraph.
    deficient: Vec<usize>,
}

/// Tutte's gadget: a `k`-factor of `h` exists iff the gadget graph has a
/// perfect matching. Each edge `ab` becomes a pair of end-nodes joined by an
/// edge; each vertex `v` gets `deg(v) - k` hub nodes joined to all of its
/// end-nodes. Edges whose two end-nodes are matched together form the factor.
fn find_k_factor(h: &SimpleGraph, k: usize) -> FactorSearch {
    let edges: Vec<Edge> = h.edges().collect();
    let n = h.n();
    let mut ends_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, e) in edges.iter().enumerate() {
        ends_at[e.u()].push(2 * j);
        ends_at[e.v()].push(2 * j + 1);
    }
    let mut shortfall = 0;
    let mut hubs: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        let d = h.degree(v);
        if d < k {
            shortfall += k - d;
        } else {
            hubs.push((v, d - k));
        }
    }
    let hub_total: usize = hubs.iter().map(|&(_, s)| s).sum();
    let size = 2 * edges.len() + hub_total;
    let mut gadget = SimpleGraph::empty(size);
    for j in 0..edges.len() {
        gadget.add_edge(Edge::new(2 * j, 2 * j + 1));
    }
    let mut next = 2 * edges.len();
    for (v, s) in hubs {
        for _ in 0..s {
            for &end in &ends_at[v] {
                gadget.add_edge(Edge::new(next, end));
            }
            next += 1;
        }
    }
    let m = maximum_matching(&gadget, &Matching::empty(size)).expect("empty initial is valid");
    let deficiency = size - 2 * m.size() + shortfall;
    let chosen = edges
        .iter()
        .enumerate()
        .filter(|&(j, _)| m.mate(2 * j) == Some(2 * j + 1))
        .map(|(_, &e)| e);
    let partial = SimpleGraph::from_edges(n, chosen).expect("distinct edges");
    let deficient = (0..n).filter(|&v| partial.degree(v) < k).collect();
    FactorSearch {
        factor: (deficiency == 0).then_some(partial),
        deficiency,
        deficient,
    }
}

/// Visits every labelled realization of `degrees` (vertex `i` gets degree
/// `degrees[i]`) in a fixed depth-first order. Prunes with Erdős–Gallai on
/// the residual demands of the undecided vertices, so every explored branch
/// extends to at least one realization. Stops after `budget` search nodes.
pub fn for_each_realization<F>(
    degrees: &[usize],
    budget: u64,
    mut visit: F,
) -> Result<ControlFlow<()>>
where
    F: FnMut(&SimpleGraph) -> ControlFlow<()>,
{
    struct Search<'f, F> {
        n: usize,
        rem: Vec<usize>,
        g: SimpleGraph,
        nodes: u64,
        budget: u64,
        visit: &'f mut F,
    }

    impl<F: FnMut(&SimpleGraph) -> ControlFlow<()>> Search<'_, F> {
        fn vertex(&mut self, i: usize) -> Result<ControlFlow<()>> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            if i == self.n {
                return Ok((self.visit)(&self.g));
            }
            let need = self.rem[i];
            let cands: Vec<usize> = (i + 1..self.n).filter(|&j| self.rem[j] > 0).collect();
            if cands.len() < need {
                return Ok(ControlFlow::Continue(()));
            }
            let mut chosen = Vec::with_capacity(need);
            self.choose(i, &cands, 0, need, &mut chosen)
        }

        fn choose(
            &mut self,
            i: usize,
            cands: &[usize],
            from: usize,
            need: usize,
            chosen: &mut Vec<usize>,
        ) -> Result<ControlFlow<()>> {
            if chosen.len() == need {
                let saved = self.rem[i];
                self.rem[i] = 0;
                for &j in chosen.iter() {
                    self.rem[j] -= 1;
                    self.g.add_edge(Edge::new(i, j));
                }
                let flow = if is_graphic(&self.rem[i + 1..]) {
                    self.vertex(i + 1)?
                } else {
                    ControlFlow::Continue(())
                };
                for &j in chosen.iter() {
                    self.rem[j] += 1;
                    self.g.remove_edge(Edge::new(i, j));
                }
                self.rem[i] = saved;
                return Ok(flow);
            }
            let left = need - chosen.len();
            for idx in from..cands.len() {
                if cands.len() - idx < left {
                    break;
                }
                chosen.push(cands[idx]);
                let flow = self.choose(i, cands, idx + 1, need, chosen)?;
                chosen.pop();
                if flow.is_break() {
                    return Ok(flow);
                }
            }
            Ok(ControlFlow::Continue(()))
        }
    }

    if !is_graphic(degrees) {
        return Ok(ControlFlow::Continue(()));
    }
    let mut s = Search {
        n: degrees.len(),
        rem: degrees.to_vec(),
        g: SimpleGraph::empty(degrees.len()),
        nodes: 0,
        budget,
        visit: &mut visit,
    };
    s.vertex(0)
}

/// Tuning for [`kundu_realize_with`].
#[derive(Clone, Debug)]
pub struct KunduOptions {
    /// Two-switch proposals per hill climb in the first round.
    pub climb_steps: usize,
    /// Rounds of the two hill climbs; the step count doubles each round.
    pub rounds: usize,
    /// Enumerate every realization of `π − k` when hill climbing fails.
    pub exact_fallback: bool,
    /// Node budget for that enumeration.
    pub exact_budget: u64,
    /// Random two-switch proposals used to diversify the output.
    pub mix_steps: usize,
}

impl KunduOptions {
    pub fn for_order(n: usize) -> KunduOptions {
        KunduOptions {
            climb_steps: 8 * n.max(4),
            rounds: 10,
            exact_fallback: true,
            exact_budget: 200_000_000,
            mix_steps: n * n,
        }
    }
}

/// A realization of `pi` whose Residual class is a spanning `k`-regular
/// subgraph; the remaining realization edges are Black.
pub fn kundu_realize(pi: &DegreeSequence, k: usize, seed: u64) -> Result<ColoredRealization> {
    kundu_realize_with(pi, k, seed, &KunduOptions::for_order(pi.len()))
}

pub fn kundu_realize_with(
    pi: &DegreeSequence,
    k: usize,
    seed: u64,
    opts: &KunduOptions,
) -> Result<ColoredRealization> {
    let n = pi.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 vertices, got {n}"
        )));
    }
    if !erdos_gallai_graphic(pi) {
        return Err(Error::NotGraphic);
    }
    let rest = pi
        .minus(k)
        .filter(erdos_gallai_graphic)
        .ok_or(Error::NotGraphicMinusK { k })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (factor, remainder) = search_k_factor_pair(&rest, k, opts, &mut rng)?;

    // Diversify: move the factor inside the complement of the remainder, then
    // the remainder inside the complement of the factor.
    let mut factor = factor;
    let mut remainder = remainder;
    for _ in 0..opts.mix_steps {
        try_two_switch(&mut factor, Some(&remainder), None, &mut rng);
    }
    for _ in 0..opts.mix_steps {
        try_two_switch(&mut remainder, Some(&factor), None, &mut rng);
    }

    let mut colors = vec![ColorId::White; pair_count(n)];
    for e in remainder.edges() {
        colors[e.index(n)] = ColorId::Black;
    }
    for e in factor.edges() {
        colors[e.index(n)] = ColorId::Residual;
    }
    let r = ColoredRealization::from_colors(n, colors, BTreeMap::from([(ColorId::Residual, k)]))?;
    if r.pi() != pi {
        return Err(Error::Internal(
            "realization degrees drifted from pi".into(),
        ));
    }
    Ok(r)
}

/// Hill climb over two-switches of `state`, never increasing the deficiency
/// reported by `eval`. Half of the proposals move an edge at a deficient
/// vertex. Returns the factor once the deficiency reaches zero.
fn climb<E>(
    state: &mut SimpleGraph,
    steps: usize,
    eval: E,
    rng: &mut ChaCha8Rng,
) -> Option<SimpleGraph>
where
    E: Fn(&SimpleGraph) -> FactorSearch,
{
    let mut cur = eval(state);
    if cur.factor.is_some() {
        return cur.factor;
    }
    for _ in 0..steps {
        let anchor = (!cur.deficient.is_empty() && rng.gen_bool(0.5))
            .then(|| cur.deficient[rng.gen_range(0..cur.deficient.len())]);
        let mut cand = state.clone();
        if !try_two_switch(&mut cand, None, anchor, rng) {
            continue;
        }
        let found = eval(&cand);
        if found.deficiency <= cur.deficiency {
            *state = cand;
            cur = found;
            if cur.factor.is_some() {
                return cur.factor;
            }
        }
    }
    None
}

/// Finds `(F, R)`: `F` a `k`-factor of `K_n`, `R` a realization of `rest`,
/// edge-disjoint.
///
/// Alternates two hill climbs with doubling step counts: over realizations
/// `R` of `π − k`, asking for a `k`-factor in the complement of `R`, and over
/// realizations `G` of `π`, asking for a `k`-factor of `G` itself.
fn search_k_factor_pair(
    rest: &DegreeSequence,
    k: usize,
    opts: &KunduOptions,
    rng: &mut ChaCha8Rng,
) -> Result<(SimpleGraph, SimpleGraph)> {
    let pi = DegreeSequence::new(rest.by_vertex().iter().map(|d| d + k).collect());
    let mut remainder = havel_hakimi_realize(rest)?;
    let mut whole = havel_hakimi_realize(&pi)?;
    let mut steps = opts.climb_steps;
    for _ in 0..opts.rounds {
        if let Some(f) = climb(
            &mut remainder,
            steps,
            |r| find_k_factor(&r.complement(), k),
            rng,
        ) {
            return Ok((f, remainder));
        }
        if let Some(f) = climb(&mut whole, steps, |g| find_k_factor(g, k), rng) {
            let mut r = whole;
            for e in f.edges() {
                r.remove_edge(e);
            }
            return Ok((f, r));
        }
        steps *= 2;
    }

    if !opts.exact_fallback {
        return Err(Error::SearchExhausted);
    }
    let mut hit = None;
    let flow = for_each_realization(
        rest.by_vertex(),
        opts.exact_budget,
        |r| match find_k_factor(&r.complement(), k).factor {
            Some(f) => {
                hit = Some((f, r.clone()));
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        },
    )?;
    match (flow, hit) {
        (ControlFlow::Break(()), Some(pair)) => Ok(pair),
        _ => Err(Error::Internal(
            "no realization of pi - k leaves room for a k-factor".into(),
        )),
    }
}
