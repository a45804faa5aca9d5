//! Random instance generators and independent checkers shared by the
//! integration and acceptance suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kfactor::graph::pair_count;
use kfactor::realize::switch_randomize;
use kfactor::{
    make_colored_realization, ColorId, ColoredRealization, Edge, MultiSwitchReport, SimpleGraph,
    SwitchMode,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random perfect matching avoiding `used`, or `None` after a few tries.
fn random_matching<R: Rng>(rng: &mut R, n: usize, used: &BTreeSet<Edge>) -> Option<Vec<Edge>> {
    for _ in 0..60 {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        let m: Vec<Edge> = p.chunks(2).map(|c| Edge::new(c[0], c[1])).collect();
        if m.iter().all(|e| !used.contains(e)) {
            return Some(m);
        }
    }
    None
}

/// Random Hamiltonian cycle avoiding `used`.
fn random_cycle<R: Rng>(rng: &mut R, n: usize, used: &BTreeSet<Edge>) -> Option<Vec<Edge>> {
    for _ in 0..60 {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        let c: Vec<Edge> = (0..n).map(|i| Edge::new(p[i], p[(i + 1) % n])).collect();
        if c.iter().all(|e| !used.contains(e)) {
            return Some(c);
        }
    }
    None
}

/// A random valid coloring of `K_n` with up to three declared classes
/// (1-factors, a 2-factor, a residual of degree 1 or 2) plus Black and White.
pub fn random_colored<R: Rng>(rng: &mut R, n: usize) -> ColoredRealization {
    let mut used = BTreeSet::new();
    let mut assign: BTreeMap<Edge, ColorId> = BTreeMap::new();
    let mut declared = BTreeMap::new();
    let classes = rng.gen_range(0..=3);
    let mut ones = 0;
    let mut twos = 0;
    let mut residual = false;
    for _ in 0..classes {
        let pick = rng.gen_range(0..3);
        let (color, edges, degree) = match pick {
            0 if n.is_multiple_of(2) => {
                (ColorId::OneFactor(ones), random_matching(rng, n, &used), 1)
            }
            1 if n >= 3 => (ColorId::TwoFactor(twos), random_cycle(rng, n, &used), 2),
            2 if !residual && n.is_multiple_of(2) => {
                let a = random_matching(rng, n, &used);
                let b = a.as_ref().and_then(|a| {
                    let mut u2 = used.clone();
                    u2.extend(a.iter().copied());
                    random_matching(rng, n, &u2)
                });
                match (a, b, rng.gen_bool(0.5)) {
                    (Some(a), Some(b), true) => (ColorId::Residual, Some([a, b].concat()), 2),
                    (Some(a), _, _) => (ColorId::Residual, Some(a), 1),
                    _ => (ColorId::Residual, None, 1),
                }
            }
            2 if !residual && n >= 3 => (ColorId::Residual, random_cycle(rng, n, &used), 2),
            _ => continue,
        };
        let Some(edges) = edges else { continue };
        match color {
            ColorId::OneFactor(_) => ones += 1,
            ColorId::TwoFactor(_) => twos += 1,
            _ => residual = true,
        }
        for e in edges {
            used.insert(e);
            assign.insert(e, color);
        }
        declared.insert(color, degree);
    }
    let black = rng.gen_range(0.1..0.9);
    let all: Vec<(Edge, ColorId)> = (0..pair_count(n))
        .map(|i| {
            let e = Edge::from_index(n, i);
            let c = assign.get(&e).copied().unwrap_or_else(|| {
                if rng.gen_bool(black) {
                    ColorId::Black
                } else {
                    ColorId::White
                }
            });
            (e, c)
        })
        .collect();
    make_colored_realization(n, &all, &declared).expect("generated coloring is valid")
}

#[derive(Clone, Debug)]
pub struct SwitchCall {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub mode: SwitchMode,
    pub z3: Option<Edge>,
    pub z2: Option<Edge>,
}

/// A random call satisfying every precondition of the multi-switch, if the
/// coloring admits one.
pub fn random_switch_call<R: Rng>(rng: &mut R, r: &ColoredRealization) -> Option<SwitchCall> {
    let n = r.n();
    let mut options = Vec::new();
    for mode in [SwitchMode::White, SwitchMode::Black] {
        let t = mode.color();
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let (du, dv) = (r.graph_degree(u), r.graph_degree(v));
                let ok = match mode {
                    SwitchMode::White => du >= dv,
                    SwitchMode::Black => du <= dv,
                };
                if !ok {
                    continue;
                }
                for w in 0..n {
                    if w == u || w == v {
                        continue;
                    }
                    if r.color_of(u, w) == t && r.color_of(w, v) != t {
                        options.push((u, v, w, mode));
                    }
                }
            }
        }
    }
    let &(u, v, w, mode) = options.choose(rng)?;
    let c = r.color_of(w, v);
    let at = |x: usize, skip: &[usize]| -> Vec<Edge> {
        (0..n)
            .filter(|&t| t != x && !skip.contains(&t) && r.color_of(x, t) == c)
            .map(|t| Edge::new(x, t))
            .collect()
    };
    let z3 = if rng.gen_bool(0.6) {
        at(v, &[w, u]).choose(rng).copied()
    } else {
        None
    };
    let z2 = if rng.gen_bool(0.6) {
        at(u, &[v]).choose(rng).copied()
    } else {
        None
    };
    Some(SwitchCall {
        u,
        v,
        w,
        mode,
        z3,
        z2,
    })
}

/// Independent post-conditions of one multi-switch. `before` and `after` are
/// the colorings around the call.
pub fn check_switch(
    before: &ColoredRealization,
    after: &ColoredRealization,
    call: &SwitchCall,
    report: &MultiSwitchReport,
) -> Result<(), String> {
    let n = before.n();
    let profile = |r: &ColoredRealization| {
        let mut p: BTreeMap<(usize, ColorId), usize> = BTreeMap::new();
        for i in 0..pair_count(n) {
            let e = Edge::from_index(n, i);
            for x in e.endpoints() {
                *p.entry((x, r.color(e))).or_insert(0) += 1;
            }
        }
        p
    };
    if profile(before) != profile(after) {
        return Err("per-vertex per-color degrees changed".into());
    }
    let changed: Vec<Edge> = (0..pair_count(n))
        .map(|i| Edge::from_index(n, i))
        .filter(|&e| before.color(e) != after.color(e))
        .collect();
    if let Some(e) = changed
        .iter()
        .find(|e| !e.contains(call.u) && !e.contains(call.v))
    {
        return Err(format!("edge {e} away from u and v was recolored"));
    }
    let x1 = Edge::new(call.u, call.w);
    let y1 = Edge::new(call.w, call.v);
    if after.color(x1) != before.color(y1) || after.color(y1) != before.color(x1) {
        return Err("x1 and y1 did not exchange colors".into());
    }
    if let Some(z3) = call.z3 {
        if before.color(z3) != after.color(z3) {
            return Err(format!("z3 = {z3} was recolored"));
        }
        let swapped_edges: BTreeSet<Edge> = report
            .swapped
            .iter()
            .flat_map(|&i| [report.chain[i].x, report.chain[i].y])
            .collect();
        if swapped_edges.contains(&z3) {
            return Err(format!("z3 = {z3} was part of a swapped link"));
        }
    }
    if let (Some(z1), Some(z2)) = (report.z1, report.z2) {
        if z1 != z2 {
            let consumed = |e: Edge| report.swapped.iter().any(|&i| report.chain[i].x == e);
            if consumed(z1) == consumed(z2) {
                return Err(format!(
                    "z1 = {z1} and z2 = {z2} were not exactly one consumed"
                ));
            }
        }
    }
    after.validate().map_err(|e| e.to_string())
}

/// Random `d`-regular graph on `n` vertices from a circulant, scrambled by
/// two-switches (which may disconnect it).
pub fn random_regular<R: Rng>(rng: &mut R, n: usize, d: usize) -> SimpleGraph {
    assert!(d < n && (n * d).is_multiple_of(2));
    let mut offsets: Vec<usize> = (1..=d / 2).collect();
    if d % 2 == 1 {
        offsets.push(n / 2);
    }
    let base = SimpleGraph::circulant(n, &offsets);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let relabelled =
        SimpleGraph::from_edges(n, base.edges().map(|e| Edge::new(perm[e.u()], perm[e.v()])))
            .expect("relabelling is a bijection");
    switch_randomize(&relabelled, 4 * n * n, rng.gen())
}

/// Size of a maximum matching by exhaustive recursion (tiny graphs only).
pub fn tiny_max_matching(g: &SimpleGraph) -> usize {
    fn go(g: &SimpleGraph, free: &mut Vec<bool>, from: usize) -> usize {
        let Some(v) = (from..g.n()).find(|&x| free[x]) else {
            return 0;
        };
        free[v] = false;
        let mut best = go(g, free, v + 1);
        let nbrs: Vec<usize> = g.neighbors(v).filter(|&y| free[y]).collect();
        for y in nbrs {
            free[y] = false;
            best = best.max(1 + go(g, free, v + 1));
            free[y] = true;
        }
        free[v] = true;
        best
    }
    go(g, &mut vec![true; g.n()], 0)
}
