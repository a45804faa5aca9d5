//! Factor pipelines: peeling 1-factors out of the residual factor, splitting
//! even-regular factors into 2-factors, and turning 2-factors into 1-factors.
//!
//! Both pipelines grow a matching one pair of odd cycles at a time. Given two
//! disjoint odd cycles of the host class, a bridge edge of the host class
//! between them lets the matching cover both: match the bridge, then
//! alternate along each cycle minus its bridge endpoint. When no bridge
//! exists, a switch creates one.
//!
//! Residual context (peeling): pick monotone triples `u1,u2,u3` on `C1` and
//! `v1,v2,v3` on `C2` with `deg(u2) >= deg(v2)` (swapping the cycles if
//! needed). The cross edges `e1 = u1v2, e2 = u1v3, e3 = u2v2, e4 = u2v3`
//! resolve as follows, first match wins:
//!
//! | case  | edge `ab` (`a` on C1, `b` on C2) | move                                   |
//! |-------|-----------------------------------|----------------------------------------|
//! | White | any of e1..e4                     | multi-switch, White, `u=a, w=b`, `v` = other of `v2,v3`; `z3` = other C2 edge at `v` |
//! | Black | any of e1..e4                     | multi-switch, Black, `u=b, w=a`, `v` = other of `u1,u2`; `z3` = other C1 edge at `v` |
//! | Pair  | e1,e4 or e2,e3 share a 1-factor   | two-switch with `u1u2`, `v2v3`          |
//!
//! In every row `ab` becomes a residual bridge and the cycle edges used by the
//! rebuilt matching are untouched. With at most three 1-factors, four cross
//! edges that are all 1-factor edges must repeat a color, and a repeated
//! color can only sit on the disjoint pairs e1,e4 or e2,e3.
//!
//! Temporary-Black context (converting a 2-factor): the 2-factor is dissolved
//! into Black, and for two odd cycles with no Black edge between them a
//! Black-mode multi-switch from the lowest-degree vertex `u` (towards its
//! cycle neighbour `w`) to the highest-degree vertex `v` of the other cycle
//! makes `wv` Black. Only `x1 = uw` at `u` and one Black edge at `v` change
//! among Black edges, so both cycle paths survive.

mod petersen;

pub use petersen::petersen_two_factorize;

use std::collections::VecDeque;

use serde::Serialize;

use crate::certificate::{FactorCertificate, Mode};
use crate::coloring::{ColorId, ColoredRealization};
use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Edge};
use crate::matching::{lemma_odd_certificate, Matching};
use crate::realize::kundu_realize;
use crate::switch::{multi_switch, parallel_two_switch, MultiSwitchReport, SwitchMode};

/// Three consecutive cycle vertices with non-increasing degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleChoice {
    /// Position of the first vertex in the cycle.
    pub start: usize,
    /// True when the triple runs against the cycle's stored order.
    pub reversed: bool,
    pub vertices: [usize; 3],
}

/// Finds consecutive `a, b, c` along an odd cycle with
/// `deg(a) >= deg(b) >= deg(c)`, scanning start positions in order and the
/// forward direction before the reverse one.
pub fn monotone_triple(cycle: &[usize], degrees: &[usize]) -> Result<TripleChoice> {
    let len = cycle.len();
    if len < 3 || len.is_multiple_of(2) {
        return Err(Error::EvenCycle);
    }
    for start in 0..len {
        for reversed in [false, true] {
            let at = |step: usize| {
                let pos = if reversed {
                    (start + len * 2 - step) % len
                } else {
                    (start + step) % len
                };
                cycle[pos]
            };
            let t = [at(0), at(1), at(2)];
            if degrees[t[0]] >= degrees[t[1]] && degrees[t[1]] >= degrees[t[2]] {
                return Ok(TripleChoice {
                    start,
                    reversed,
                    vertices: t,
                });
            }
        }
    }
    Err(Error::Internal(
        "odd cycle without a monotone triple".into(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MergeContext {
    /// Cycles of the Residual class.
    Residual,
    /// Cycles of a dissolved 2-factor, now colored Black.
    TempBlack,
}

impl MergeContext {
    fn host(self) -> ColorId {
        match self {
            MergeContext::Residual => ColorId::Residual,
            MergeContext::TempBlack => ColorId::Black,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CrossResolution {
    /// A host-colored edge already joined the cycles.
    Bridge(Edge),
    WhiteSwitch(Edge),
    BlackSwitch(Edge),
    ParallelPair(Edge, Edge),
}

/// What one call to [`merge_odd_cycle_pair`] did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeStep {
    pub resolution: CrossResolution,
    /// The bridge used by the rebuilt matching.
    pub bridge: Edge,
    /// The four cross edges `e1..e4` and their colors, in Residual context.
    pub cross_edges: Option<[(Edge, ColorId); 4]>,
    pub switch: Option<MultiSwitchReport>,
}

fn cycle_edges(cycle: &[usize]) -> impl Iterator<Item = Edge> + '_ {
    (0..cycle.len()).map(move |i| Edge::new(cycle[i], cycle[(i + 1) % cycle.len()]))
}

/// The two neighbours of `x` along `cycle`.
fn cycle_neighbors(cycle: &[usize], x: usize) -> [usize; 2] {
    let len = cycle.len();
    let i = cycle.iter().position(|&y| y == x).expect("vertex on cycle");
    [cycle[(i + len - 1) % len], cycle[(i + 1) % len]]
}

/// Pairs of consecutive vertices covering `cycle` minus `skip`.
fn path_pairs_without(cycle: &[usize], skip: usize) -> Vec<Edge> {
    let len = cycle.len();
    let i = cycle
        .iter()
        .position(|&y| y == skip)
        .expect("vertex on cycle");
    let path: Vec<usize> = (1..len).map(|s| cycle[(i + s) % len]).collect();
    path.chunks(2).map(|p| Edge::new(p[0], p[1])).collect()
}

fn check_cycle_pair(
    r: &ColoredRealization,
    c1: &[usize],
    c2: &[usize],
    host: ColorId,
) -> Result<()> {
    for c in [c1, c2] {
        if c.len() < 3 || c.len() % 2 == 0 {
            return Err(Error::PreconditionViolated(
                "cycles must be odd with length >= 3".into(),
            ));
        }
        if let Some(e) = cycle_edges(c).find(|&e| r.color(e) != host) {
            return Err(Error::PreconditionViolated(format!(
                "cycle edge {e} is {} rather than {host}",
                r.color(e)
            )));
        }
    }
    if c1.iter().any(|x| c2.contains(x)) {
        return Err(Error::PreconditionViolated(
            "cycles are not disjoint".into(),
        ));
    }
    Ok(())
}

/// Rebuilds the matching over `C1 ∪ C2` around `bridge`, keeping every
/// matching edge elsewhere.
fn rebuild_matching(
    r: &ColoredRealization,
    matching: &Matching,
    c1: &[usize],
    c2: &[usize],
    bridge: Edge,
    host: ColorId,
) -> Result<Matching> {
    let (a, b) = if c1.contains(&bridge.u()) {
        (bridge.u(), bridge.v())
    } else {
        (bridge.v(), bridge.u())
    };
    let mut m = matching.clone();
    for &x in c1.iter().chain(c2) {
        m.unmatch(x);
    }
    let mut fresh = vec![bridge];
    fresh.extend(path_pairs_without(c1, a));
    fresh.extend(path_pairs_without(c2, b));
    for e in fresh {
        if r.color(e) != host {
            return Err(Error::Internal(format!(
                "rebuilt matching edge {e} is {} rather than {host}",
                r.color(e)
            )));
        }
        m.insert(e)
            .map_err(|_| Error::Internal(format!("matching conflict at {e}")))?;
    }
    Ok(m)
}

/// Covers two disjoint odd cycles of the host class with one matching,
/// switching a bridge into place when none exists.
///
/// Returns the extended matching: it covers `C1 ∪ C2` with host-colored
/// edges and keeps every matching edge outside the two cycles.
pub fn merge_odd_cycle_pair(
    r: &mut ColoredRealization,
    matching: &Matching,
    c1: &[usize],
    c2: &[usize],
    context: MergeContext,
) -> Result<(Matching, MergeStep)> {
    let host = context.host();
    check_cycle_pair(r, c1, c2, host)?;

    let direct = c1
        .iter()
        .flat_map(|&a| c2.iter().map(move |&b| Edge::new(a, b)))
        .filter(|&e| r.color(e) == host)
        .min();
    if let Some(bridge) = direct {
        let m = rebuild_matching(r, matching, c1, c2, bridge, host)?;
        let step = MergeStep {
            resolution: CrossResolution::Bridge(bridge),
            bridge,
            cross_edges: None,
            switch: None,
        };
        return Ok((m, step));
    }

    let step = match context {
        MergeContext::Residual => resolve_residual_pair(r, c1, c2)?,
        MergeContext::TempBlack => resolve_temp_black_pair(r, c1, c2)?,
    };
    let m = rebuild_matching(r, matching, c1, c2, step.bridge, host)?;
    Ok((m, step))
}

fn resolve_residual_pair(
    r: &mut ColoredRealization,
    c1: &[usize],
    c2: &[usize],
) -> Result<MergeStep> {
    let degrees = r.pi().by_vertex().to_vec();
    let mut t1 = monotone_triple(c1, &degrees)?.vertices;
    let mut t2 = monotone_triple(c2, &degrees)?.vertices;
    let (mut c1, mut c2) = (c1, c2);
    if degrees[t1[1]] < degrees[t2[1]] {
        std::mem::swap(&mut t1, &mut t2);
        std::mem::swap(&mut c1, &mut c2);
    }
    let [u1, u2, _] = t1;
    let [_, v2, v3] = t2;
    let pairs = [(u1, v2), (u1, v3), (u2, v2), (u2, v3)];
    let cross = pairs.map(|(a, b)| (Edge::new(a, b), r.color_of(a, b)));

    // The far endpoint of x's cycle edge that avoids `pair`.
    let outward = |cycle: &[usize], x: usize, pair: [usize; 2]| -> usize {
        let [p, q] = cycle_neighbors(cycle, x);
        if pair.contains(&p) {
            q
        } else {
            p
        }
    };

    for mode in [SwitchMode::White, SwitchMode::Black] {
        for &(a, b) in &pairs {
            if r.color_of(a, b) != mode.color() {
                continue;
            }
            let (u, w, v, u_cycle, v_cycle, v_pair) = match mode {
                SwitchMode::White => {
                    let v = if b == v2 { v3 } else { v2 };
                    (a, b, v, c1, c2, [v2, v3])
                }
                SwitchMode::Black => {
                    let v = if a == u1 { u2 } else { u1 };
                    (b, a, v, c2, c1, [u1, u2])
                }
            };
            let z3 = Edge::new(v, outward(v_cycle, v, v_pair));
            let u_pair = if mode == SwitchMode::White {
                [u1, u2]
            } else {
                [v2, v3]
            };
            let z2 = Edge::new(u, outward(u_cycle, u, u_pair));
            let report = multi_switch(r, u, v, w, mode, Some(z3), Some(z2))?;
            let bridge = Edge::new(a, b);
            let resolution = match mode {
                SwitchMode::White => CrossResolution::WhiteSwitch(bridge),
                SwitchMode::Black => CrossResolution::BlackSwitch(bridge),
            };
            return Ok(MergeStep {
                resolution,
                bridge,
                cross_edges: Some(cross),
                switch: Some(report),
            });
        }
    }

    let one_factor = |c: ColorId| matches!(c, ColorId::OneFactor(_));
    for (i, j) in [(0, 3), (1, 2)] {
        let (e, ce) = cross[i];
        let (f, cf) = cross[j];
        if ce == cf && one_factor(ce) {
            parallel_two_switch(r, e, f, Edge::new(u1, u2), Edge::new(v2, v3))?;
            return Ok(MergeStep {
                resolution: CrossResolution::ParallelPair(e, f),
                bridge: e,
                cross_edges: Some(cross),
                switch: None,
            });
        }
    }
    Err(Error::CaseAnalysisExhausted)
}

fn resolve_temp_black_pair(
    r: &mut ColoredRealization,
    c1: &[usize],
    c2: &[usize],
) -> Result<MergeStep> {
    let deg = |x: usize| r.pi().degree(x);
    let u = c1
        .iter()
        .chain(c2)
        .copied()
        .min_by_key(|&x| (deg(x), x))
        .expect("non-empty cycles");
    let (cu, cv) = if c1.contains(&u) { (c1, c2) } else { (c2, c1) };
    let v = cv
        .iter()
        .copied()
        .min_by_key(|&x| (std::cmp::Reverse(deg(x)), x))
        .expect("non-empty cycle");
    let w = cycle_neighbors(cu, u)
        .into_iter()
        .min()
        .expect("two neighbours");
    let report = multi_switch(r, u, v, w, SwitchMode::Black, None, None)?;
    let bridge = Edge::new(w, v);
    Ok(MergeStep {
        resolution: CrossResolution::BlackSwitch(bridge),
        bridge,
        cross_edges: None,
        switch: Some(report),
    })
}

/// Per-peel bookkeeping.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PeelReport {
    pub steps: Vec<MergeStep>,
    /// Residual matching size after each certificate computation.
    pub matching_sizes: Vec<usize>,
}

/// Turns one unit of the Residual class into a new 1-factor.
///
/// Needs `n` even, a Residual class of degree at least 1 and at most three
/// existing 1-factors (beyond that the pigeonhole step no longer applies).
pub fn peel_one_factor(r: &mut ColoredRealization) -> Result<PeelReport> {
    let ones = r.one_factor_count();
    if ones >= 4 {
        return Err(Error::TooManyOneFactors(ones));
    }
    peel_unchecked(r)
}

fn peel_unchecked(r: &mut ColoredRealization) -> Result<PeelReport> {
    let n = r.n();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount { n });
    }
    let d = match r.declared_degree(ColorId::Residual) {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::NoResidual),
    };
    let mut report = PeelReport::default();
    let mut seed = Matching::empty(n);
    let matching = loop {
        let cert = lemma_odd_certificate(&r.class_graph(ColorId::Residual), &seed)?;
        report.matching_sizes.push(cert.matching.size());
        if cert.matching.is_perfect() {
            break cert.matching;
        }
        let mut it = cert.cycles.values();
        let (Some(c1), Some(c2)) = (it.next(), it.next()) else {
            return Err(Error::Internal("odd number of uncovered vertices".into()));
        };
        let (m, step) = merge_odd_cycle_pair(r, &cert.matching, c1, c2, MergeContext::Residual)?;
        if m.size() <= cert.matching.size() {
            return Err(Error::Internal("merge did not grow the matching".into()));
        }
        report.steps.push(step);
        seed = m;
    };
    let index = r.one_factor_count();
    let color = ColorId::OneFactor(index);
    let batch: Vec<_> = matching.edges().into_iter().map(|e| (e, color)).collect();
    r.restructure(
        &batch,
        vec![(ColorId::Residual, Some(d - 1)), (color, Some(1))],
        "peel_one_factor",
    )?;
    Ok(report)
}

/// Peels up to four 1-factors (fewer when `k < 4`) out of the Residual class.
pub fn four_ones_realization(r: &mut ColoredRealization) -> Result<Vec<PeelReport>> {
    let mut reports = Vec::new();
    while r.one_factor_count() < 4 && r.declared_degree(ColorId::Residual).unwrap_or(0) > 0 {
        reports.push(peel_one_factor(r)?);
    }
    Ok(reports)
}

/// Keeps peeling past four 1-factors while the case analysis happens to
/// succeed. Carries no guarantee; a failed attempt leaves `r` untouched.
/// Returns the number of extra 1-factors obtained.
pub fn peel_extra_one_factors(r: &mut ColoredRealization) -> usize {
    let mut extra = 0;
    while r.declared_degree(ColorId::Residual).unwrap_or(0) > 0 {
        let mut attempt = r.clone();
        if peel_unchecked(&mut attempt).is_err() {
            break;
        }
        *r = attempt;
        extra += 1;
    }
    extra
}

fn check_even(pi: &DegreeSequence) -> Result<()> {
    if pi.len() % 2 == 1 {
        return Err(Error::OddVertexCount { n: pi.len() });
    }
    Ok(())
}

/// Realization of `pi` with `min(k, 4)` edge-disjoint 1-factors plus a
/// `max(k − 4, 0)`-regular residual factor, all edge-disjoint.
pub fn four_ones(pi: &DegreeSequence, k: usize, seed: u64) -> Result<FactorCertificate> {
    Ok(four_ones_traced(pi, k, seed)?.0)
}

/// [`four_ones`] plus the final realization (and thus its switch trace).
pub fn four_ones_traced(
    pi: &DegreeSequence,
    k: usize,
    seed: u64,
) -> Result<(FactorCertificate, ColoredRealization)> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let mut r = kundu_realize(pi, k, seed)?;
    check_even(pi)?;
    four_ones_realization(&mut r)?;
    Ok((FactorCertificate::from_realization(&r, Mode::FourOnes), r))
}

/// Per-conversion bookkeeping.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConvertReport {
    pub even_cycles: usize,
    pub odd_cycles: usize,
    pub steps: Vec<MergeStep>,
}

/// Replaces the 2-factor `TwoFactor(f)` with a new 1-factor. Former
/// 2-factor edges end up in the new 1-factor or Black, except where a
/// multi-switch chain recolors them at its endpoint `v`. Remaining
/// 2-factors are renumbered to stay dense.
pub fn convert_two_factor(r: &mut ColoredRealization, f: usize) -> Result<ConvertReport> {
    let n = r.n();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount { n });
    }
    let color = ColorId::TwoFactor(f);
    if r.declared_degree(color) != Some(2) {
        return Err(Error::PreconditionViolated(format!(
            "{color} is not a declared 2-factor"
        )));
    }
    let cycles = r
        .class_graph(color)
        .cycles_of_two_regular()
        .ok_or_else(|| Error::Internal(format!("{color} is not 2-regular")))?;

    // Dissolve into Black; the last 2-factor takes over index f.
    let last = r.two_factor_count() - 1;
    let mut batch: Vec<(Edge, ColorId)> = r
        .class_edges(color)
        .into_iter()
        .map(|e| (e, ColorId::Black))
        .collect();
    let mut declare = vec![(color, None)];
    if f != last {
        let last_color = ColorId::TwoFactor(last);
        batch.extend(r.class_edges(last_color).into_iter().map(|e| (e, color)));
        declare = vec![(last_color, None), (color, Some(2))];
    }
    r.restructure(&batch, declare, "dissolve_two_factor")?;

    let mut report = ConvertReport::default();
    let mut m = Matching::empty(n);
    let mut odd: VecDeque<Vec<usize>> = VecDeque::new();
    for cyc in cycles {
        if cyc.len() % 2 == 0 {
            report.even_cycles += 1;
            for p in cyc.chunks(2) {
                m.insert(Edge::new(p[0], p[1]))?;
            }
        } else {
            report.odd_cycles += 1;
            odd.push_back(cyc);
        }
    }
    while let Some(c1) = odd.pop_front() {
        let linked = odd.iter().position(|c2| {
            c1.iter()
                .any(|&a| c2.iter().any(|&b| r.color_of(a, b) == ColorId::Black))
        });
        let c2 = odd
            .remove(linked.unwrap_or(0))
            .ok_or_else(|| Error::Internal("odd number of odd cycles".into()))?;
        let (next, step) = merge_odd_cycle_pair(r, &m, &c1, &c2, MergeContext::TempBlack)?;
        m = next;
        report.steps.push(step);
    }
    if !m.is_perfect() {
        return Err(Error::Internal(
            "2-factor conversion left vertices uncovered".into(),
        ));
    }
    let index = r.one_factor_count();
    let one = ColorId::OneFactor(index);
    let promote: Vec<_> = m.edges().into_iter().map(|e| (e, one)).collect();
    r.restructure(&promote, vec![(one, Some(1))], "promote_one_factor")?;
    Ok(report)
}

/// Realization of `pi` with exactly `⌊k/2⌋ + 2` edge-disjoint 1-factors
/// (`k >= 4`). Leftover realization edges are Black.
pub fn half_k(pi: &DegreeSequence, k: usize, seed: u64) -> Result<FactorCertificate> {
    Ok(half_k_traced(pi, k, seed)?.0)
}

pub fn half_k_traced(
    pi: &DegreeSequence,
    k: usize,
    seed: u64,
) -> Result<(FactorCertificate, ColoredRealization)> {
    if k < 4 {
        return Err(Error::KTooSmall { k });
    }
    let mut r = kundu_realize(pi, k, seed)?;
    check_even(pi)?;
    half_k_realization(&mut r)?;
    Ok((FactorCertificate::from_realization(&r, Mode::HalfK), r))
}

/// Runs the half-k pipeline on a realization whose Residual class has
/// degree `k >= 4` and no other declared classes.
pub fn half_k_realization(r: &mut ColoredRealization) -> Result<()> {
    let k = r
        .declared_degree(ColorId::Residual)
        .ok_or(Error::NoResidual)?;
    if k < 4 {
        return Err(Error::KTooSmall { k });
    }
    four_ones_realization(r)?;
    if k % 2 == 1 {
        let last = ColorId::OneFactor(3);
        let batch: Vec<_> = r
            .class_edges(last)
            .into_iter()
            .map(|e| (e, ColorId::Residual))
            .collect();
        r.restructure(
            &batch,
            vec![(last, None), (ColorId::Residual, Some(k - 3))],
            "fold_one_factor",
        )?;
    }
    let d = r.declared_degree(ColorId::Residual).unwrap_or(0);
    let parts = petersen_two_factorize(&r.class_graph(ColorId::Residual), d / 2)?;
    let batch: Vec<_> = parts
        .iter()
        .enumerate()
        .flat_map(|(j, p)| p.edges().map(move |e| (e, ColorId::TwoFactor(j))))
        .collect();
    let mut declare = vec![(ColorId::Residual, None)];
    declare.extend((0..parts.len()).map(|j| (ColorId::TwoFactor(j), Some(2))));
    r.restructure(&batch, declare, "petersen_split")?;
    for f in (0..parts.len()).rev() {
        convert_two_factor(r, f)?;
    }
    Ok(())
}
