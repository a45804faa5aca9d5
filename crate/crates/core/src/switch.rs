//! Degree-preserving recoloring moves: the multi-switch and the parallel
//! two-switch.
//!
//! A multi-switch flips the colors of the path `u - w - v` (edges `x1 = uw`
//! and `y1 = wv`). Whenever `y_i` has a color other than the terminal
//! color, `u` has a fresh edge `x_{i+1}` of that same color, because the
//! degree inequality between `u` and `v` guarantees `u` has at least as many
//! edges of that color as `v`. The chain `x_i, y_i` is followed until some
//! `y_r` has the terminal color (the color of `x1`); swapping every pair
//! then preserves every per-vertex per-color degree.
//!
//! Two optional protected edges refine this. `z3` is a `c`-colored edge at
//! `v` (where `c` is the color of `y1`) that must keep its color, and `z2`
//! is a `c`-colored edge at `u` that is only consumed if `z3` shows up in
//! the chain. If `z3 = y_j`, the chain continues with `x_{j+1} = z2` and
//! only links `1` and `j+1..r` are swapped.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::coloring::{params, ColorId, ColoredRealization};
use crate::error::{Error, Result};
use crate::graph::Edge;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SwitchMode {
    /// `x1` is White; requires `deg(u) >= deg(v)`.
    White,
    /// `x1` is Black; requires `deg(u) <= deg(v)`.
    Black,
}

impl SwitchMode {
    pub fn color(self) -> ColorId {
        match self {
            SwitchMode::White => ColorId::White,
            SwitchMode::Black => ColorId::Black,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub x: Edge,
    pub y: Edge,
    pub midpoint: usize,
    pub x_color: ColorId,
    pub y_color: ColorId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiSwitchReport {
    pub u: usize,
    pub v: usize,
    pub mode: SwitchMode,
    pub chain: Vec<ChainLink>,
    /// Chain indices (0-based) whose `x`/`y` colors were exchanged.
    pub swapped: Vec<usize>,
    /// `x2`, the first edge taken at `u` after `x1`.
    pub z1: Option<Edge>,
    pub z2: Option<Edge>,
    pub z2_used: bool,
    pub z3: Option<Edge>,
    /// Index of the link whose `y` is `z3`, when `z3` appeared.
    pub z3_index: Option<usize>,
    pub terminal_color: ColorId,
}

impl MultiSwitchReport {
    pub fn midpoints(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.midpoint).collect()
    }

    /// Chain length `r`.
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Edges whose color actually changed.
    pub fn recolored_edges(&self) -> BTreeSet<Edge> {
        self.swapped
            .iter()
            .map(|&i| &self.chain[i])
            .filter(|l| l.x_color != l.y_color)
            .flat_map(|l| [l.x, l.y])
            .collect()
    }

    /// The swap batch this report describes, as `(edge, new color)` pairs.
    pub fn batch(&self) -> Vec<(Edge, ColorId)> {
        self.swapped
            .iter()
            .map(|&i| &self.chain[i])
            .filter(|l| l.x_color != l.y_color)
            .flat_map(|l| [(l.x, l.y_color), (l.y, l.x_color)])
            .collect()
    }
}

fn violated(msg: impl Into<String>) -> Error {
    Error::PreconditionViolated(msg.into())
}

/// Exchanges the colors of `x1 = uw` and `y1 = wv` by a chain of paired
/// swaps on length-two paths between `u` and `v`.
///
/// Every recolored edge is incident to `u` or `v`; every vertex keeps its
/// degree in every color. `z3_hint` is never recolored, and at most one of
/// `z1` (the first chain edge at `u`) and `z2_hint` is.
pub fn multi_switch(
    r: &mut ColoredRealization,
    u: usize,
    v: usize,
    w: usize,
    mode: SwitchMode,
    z3_hint: Option<Edge>,
    z2_hint: Option<Edge>,
) -> Result<MultiSwitchReport> {
    let report = plan_multi_switch(r, u, v, w, mode, z3_hint, z2_hint)?;
    let p = params([
        ("u", u.to_string()),
        ("v", v.to_string()),
        ("w", w.to_string()),
        ("mode", format!("{mode:?}").to_lowercase()),
    ]);
    r.apply_switch(&report.batch(), "multi_switch", p, Some(report.len()))?;
    Ok(report)
}

/// Computes the chain without modifying `r`.
pub fn plan_multi_switch(
    r: &ColoredRealization,
    u: usize,
    v: usize,
    w: usize,
    mode: SwitchMode,
    z3_hint: Option<Edge>,
    z2_hint: Option<Edge>,
) -> Result<MultiSwitchReport> {
    let n = r.n();
    if u >= n || v >= n || w >= n {
        return Err(violated("vertex out of range"));
    }
    if u == v || u == w || v == w {
        return Err(violated("u, v, w must be distinct"));
    }
    let terminal = mode.color();
    let x1 = Edge::new(u, w);
    let y1 = Edge::new(w, v);
    if r.color(x1) != terminal {
        return Err(violated(format!(
            "x1 = {x1} is {}, expected {terminal}",
            r.color(x1)
        )));
    }
    let c = r.color(y1);
    if c == terminal {
        return Err(violated(format!(
            "y1 = {y1} already has the terminal color {terminal}"
        )));
    }
    let (du, dv) = (r.graph_degree(u), r.graph_degree(v));
    match mode {
        SwitchMode::White if du < dv => {
            return Err(violated(format!(
                "white mode needs deg(u) >= deg(v), got {du} < {dv}"
            )))
        }
        SwitchMode::Black if du > dv => {
            return Err(violated(format!(
                "black mode needs deg(u) <= deg(v), got {du} > {dv}"
            )))
        }
        _ => {}
    }
    let uv = Edge::new(u, v);
    if let Some(z3) = z3_hint {
        if !z3.contains(v) || z3 == y1 || z3 == uv || r.color(z3) != c {
            return Err(violated(format!(
                "z3 = {z3} is not a {c} edge at v other than y1"
            )));
        }
    }
    let mut z2 = match z2_hint {
        Some(z2) => {
            if !z2.contains(u) || z2 == uv || r.color(z2) != c {
                return Err(violated(format!("z2 = {z2} is not a {c} edge at u")));
            }
            Some(z2)
        }
        None if z3_hint.is_some() => {
            // z3 exists, so u has at least two c-colored edges besides uv;
            // reserve the one with the largest far endpoint as z2.
            let far = (0..n)
                .rev()
                .find(|&t| t != u && t != v && r.color_of(u, t) == c)
                .ok_or_else(|| Error::Internal("no c-colored edge at u to reserve as z2".into()))?;
            Some(Edge::new(u, far))
        }
        None => None,
    };

    let mut used = vec![false; n];
    used[w] = true;
    let mut chain = vec![ChainLink {
        x: x1,
        y: y1,
        midpoint: w,
        x_color: terminal,
        y_color: c,
    }];
    let mut z1 = None;
    let mut z2_used = false;
    let mut z3_index = None;

    loop {
        let last = chain.last().expect("chain is non-empty");
        let need = last.y_color;
        if need == terminal {
            break;
        }
        let fresh = |t: usize| t != u && t != v && !used[t] && r.color_of(u, t) == need;
        let z2_far = z2.filter(|_| !z2_used && need == c).map(|e| e.other(u));
        let forced = z2_far.filter(|_| z3_hint.is_some() && Some(last.y) == z3_hint);
        let next = if let Some(t) = forced {
            if !fresh(t) {
                return Err(Error::ChainStuck {
                    link: chain.len(),
                    color: need,
                });
            }
            z2_used = true;
            z3_index = Some(chain.len() - 1);
            t
        } else if let Some(t) = (0..n).find(|&t| fresh(t) && Some(t) != z2_far) {
            t
        } else if let Some(t) = z2_far.filter(|&t| fresh(t)) {
            if chain.len() == 1 {
                // z2 is the only c-colored edge available at u: it is z1.
                z2 = None;
            } else {
                // Forced: treat the current y as z3 and resume from z2.
                z2_used = true;
                z3_index = Some(chain.len() - 1);
            }
            t
        } else {
            return Err(Error::ChainStuck {
                link: chain.len(),
                color: need,
            });
        };
        used[next] = true;
        let link = ChainLink {
            x: Edge::new(u, next),
            y: Edge::new(next, v),
            midpoint: next,
            x_color: need,
            y_color: r.color_of(next, v),
        };
        if chain.len() == 1 {
            z1 = Some(link.x);
        }
        chain.push(link);
    }

    let swapped: Vec<usize> = match z3_index {
        Some(j) => std::iter::once(0).chain(j + 1..chain.len()).collect(),
        None => (0..chain.len()).collect(),
    };
    let z3 = match z3_index {
        Some(j) => Some(chain[j].y),
        None => z3_hint,
    };
    Ok(MultiSwitchReport {
        u,
        v,
        mode,
        chain,
        swapped,
        z1,
        z2,
        z2_used,
        z3,
        z3_index,
        terminal_color: terminal,
    })
}

/// Two-switch on an alternating 4-cycle: `e, f` (color α) take color β and
/// `g, h` (color β) take α.
pub fn parallel_two_switch(
    r: &mut ColoredRealization,
    e: Edge,
    f: Edge,
    g: Edge,
    h: Edge,
) -> Result<()> {
    let n = r.n();
    if [e, f, g, h].iter().any(|x| x.v() >= n) {
        return Err(violated("edge out of range"));
    }
    let alpha = r.color(e);
    let beta = r.color(g);
    if r.color(f) != alpha || r.color(h) != beta || alpha == beta {
        return Err(violated("e, f must share one color and g, h another"));
    }
    let ef: BTreeSet<usize> = e.endpoints().into_iter().chain(f.endpoints()).collect();
    let gh: BTreeSet<usize> = g.endpoints().into_iter().chain(h.endpoints()).collect();
    if ef.len() != 4 || ef != gh {
        return Err(violated("edges do not span the same four vertices"));
    }
    let shared = |a: Edge, b: Edge| a.endpoints().iter().filter(|&&x| b.contains(x)).count();
    if [(e, g), (e, h), (f, g), (f, h)]
        .iter()
        .any(|&(a, b)| shared(a, b) != 1)
    {
        return Err(violated("edges do not form an alternating 4-cycle"));
    }
    let p = params([
        ("e", e.to_string()),
        ("f", f.to_string()),
        ("g", g.to_string()),
        ("h", h.to_string()),
    ]);
    r.apply_switch(
        &[(e, beta), (f, beta), (g, alpha), (h, alpha)],
        "parallel_two_switch",
        p,
        None,
    )
}
