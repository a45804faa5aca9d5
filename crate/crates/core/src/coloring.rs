//! Total colorings of the pairs of `K_n` into White (non-edges), Black
//! (realization edges outside every declared factor) and declared regular
//! factor classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_count, DegreeSequence, Edge, SimpleGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ColorId {
    White,
    Black,
    /// The remaining regular factor that 1-factors are peeled from.
    Residual,
    OneFactor(usize),
    TwoFactor(usize),
}

impl ColorId {
    /// True for classes that must be regular when declared.
    pub fn is_factor(self) -> bool {
        !matches!(self, ColorId::White | ColorId::Black)
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorId::White => f.write_str("white"),
            ColorId::Black => f.write_str("black"),
            ColorId::Residual => f.write_str("residual"),
            ColorId::OneFactor(i) => write!(f, "one:{i}"),
            ColorId::TwoFactor(i) => write!(f, "two:{i}"),
        }
    }
}

impl FromStr for ColorId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let indexed = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| format!("bad color {s:?}"))
        };
        match s {
            "white" => Ok(ColorId::White),
            "black" => Ok(ColorId::Black),
            "residual" => Ok(ColorId::Residual),
            _ => {
                if let Some(rest) = s.strip_prefix("one:") {
                    indexed(rest).map(ColorId::OneFactor)
                } else if let Some(rest) = s.strip_prefix("two:") {
                    indexed(rest).map(ColorId::TwoFactor)
                } else {
                    Err(format!("bad color {s:?}"))
                }
            }
        }
    }
}

impl TryFrom<String> for ColorId {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ColorId> for String {
    fn from(c: ColorId) -> Self {
        c.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recolor {
    pub edge: Edge,
    pub from: ColorId,
    pub to: ColorId,
}

/// One atomically applied group of recolorings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceBatch {
    pub op: String,
    pub params: BTreeMap<String, String>,
    pub changes: Vec<Recolor>,
    /// Declared-degree updates; `None` removes the class.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub declare: Vec<(ColorId, Option<usize>)>,
    /// Multi-switch chain length `r`, when the batch is a multi-switch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_len: Option<usize>,
}

/// Replayable log of every batch applied to a realization since construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchTrace {
    pub n: usize,
    pub initial_colors: Vec<ColorId>,
    pub initial_declared: BTreeMap<ColorId, usize>,
    pub batches: Vec<TraceBatch>,
}

impl SwitchTrace {
    /// Replays every batch over the initial coloring, checking that each
    /// recorded `from` color matches the state being replayed.
    pub fn replay(&self) -> Result<(Vec<ColorId>, BTreeMap<ColorId, usize>)> {
        let mut colors = self.initial_colors.clone();
        let mut declared = self.initial_declared.clone();
        for (i, batch) in self.batches.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for ch in &batch.changes {
                if !seen.insert(ch.edge) {
                    return Err(Error::DuplicateEdge(ch.edge));
                }
                let slot = &mut colors[ch.edge.index(self.n)];
                if *slot != ch.from {
                    return Err(Error::Internal(format!(
                        "trace batch {i} expects {} on {} but replay has {}",
                        ch.from, ch.edge, slot
                    )));
                }
                *slot = ch.to;
            }
            for &(c, d) in &batch.declare {
                match d {
                    Some(d) => declared.insert(c, d),
                    None => declared.remove(&c),
                };
            }
        }
        Ok((colors, declared))
    }

    /// Number of batches that are switches (multi-switch or parallel two-switch).
    pub fn switch_count(&self) -> usize {
        self.batches
            .iter()
            .filter(|b| b.op == "multi_switch" || b.op == "parallel_two_switch")
            .count()
    }

    pub fn max_chain_len(&self) -> usize {
        self.batches
            .iter()
            .filter_map(|b| b.chain_len)
            .max()
            .unwrap_or(0)
    }
}

/// A realization of `pi` as a coloring of `K_n` with declared regular classes.
#[derive(Clone, Debug)]
pub struct ColoredRealization {
    n: usize,
    colors: Vec<ColorId>,
    declared: BTreeMap<ColorId, usize>,
    pi: DegreeSequence,
    k: usize,
    trace: SwitchTrace,
}

/// Per-vertex, per-color degree changes a set of recolorings would cause.
fn degree_deltas(changes: &[Recolor]) -> BTreeMap<(usize, ColorId), i64> {
    let mut delta = BTreeMap::new();
    for ch in changes {
        for x in ch.edge.endpoints() {
            *delta.entry((x, ch.from)).or_insert(0) -= 1;
            *delta.entry((x, ch.to)).or_insert(0) += 1;
        }
    }
    delta.retain(|_, d| *d != 0);
    delta
}

/// Reports a lost degree before a gained one.
fn conservation_error(changes: &[Recolor]) -> Option<Error> {
    let deltas = degree_deltas(changes);
    let (&(vertex, color), &delta) = deltas
        .iter()
        .find(|(_, &d)| d < 0)
        .or_else(|| deltas.iter().next())?;
    Some(Error::ConservationViolation {
        vertex,
        color,
        delta,
    })
}

/// Builds and validates a realization from a complete pair assignment.
///
/// `pi` is derived from the non-White degrees and `k` is set to the sum of
/// the declared degrees.
pub fn make_colored_realization(
    n: usize,
    assignments: &[(Edge, ColorId)],
    declared_degrees: &BTreeMap<ColorId, usize>,
) -> Result<ColoredRealization> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 vertices, got {n}"
        )));
    }
    let mut slots: Vec<Option<ColorId>> = vec![None; pair_count(n)];
    for &(e, c) in assignments {
        if e.v() >= n {
            return Err(Error::InvalidInput(format!(
                "edge {e} out of range for n = {n}"
            )));
        }
        let slot = &mut slots[e.index(n)];
        if slot.is_some() {
            return Err(Error::DuplicateEdge(e));
        }
        *slot = Some(c);
    }
    let colors = slots
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::MissingEdge(Edge::from_index(n, i))))
        .collect::<Result<Vec<_>>>()?;
    ColoredRealization::from_colors(n, colors, declared_degrees.clone())
}

impl ColoredRealization {
    /// Builds from a dense pair-indexed color vector.
    pub fn from_colors(
        n: usize,
        colors: Vec<ColorId>,
        declared: BTreeMap<ColorId, usize>,
    ) -> Result<ColoredRealization> {
        if colors.len() != pair_count(n) {
            return Err(Error::InvalidInput(
                "color vector length does not match n".into(),
            ));
        }
        if let Some(c) = declared.keys().find(|c| !c.is_factor()) {
            return Err(Error::InvalidInput(format!(
                "{c} cannot be declared regular"
            )));
        }
        let mut degrees = vec![0; n];
        for (i, &c) in colors.iter().enumerate() {
            if c != ColorId::White {
                let e = Edge::from_index(n, i);
                degrees[e.u()] += 1;
                degrees[e.v()] += 1;
            }
        }
        let k = declared.values().sum();
        let r = ColoredRealization {
            n,
            trace: SwitchTrace {
                n,
                initial_colors: colors.clone(),
                initial_declared: declared.clone(),
                batches: Vec::new(),
            },
            colors,
            declared,
            pi: DegreeSequence::new(degrees),
            k,
        };
        r.validate()?;
        Ok(r)
    }

    /// Realization of `g` with every edge Black and nothing declared.
    pub fn from_graph(g: &SimpleGraph) -> Result<ColoredRealization> {
        let n = g.n();
        let mut colors = vec![ColorId::White; pair_count(n)];
        for e in g.edges() {
            colors[e.index(n)] = ColorId::Black;
        }
        ColoredRealization::from_colors(n, colors, BTreeMap::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pi(&self) -> &DegreeSequence {
        &self.pi
    }

    /// Target factor degree this realization was built for.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set_k(&mut self, k: usize) {
        self.k = k;
    }

    pub fn trace(&self) -> &SwitchTrace {
        &self.trace
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn declared(&self) -> &BTreeMap<ColorId, usize> {
        &self.declared
    }

    pub fn declared_degree(&self, c: ColorId) -> Option<usize> {
        self.declared.get(&c).copied()
    }

    pub fn color(&self, e: Edge) -> ColorId {
        self.colors[e.index(self.n)]
    }

    pub fn color_of(&self, a: usize, b: usize) -> ColorId {
        self.color(Edge::new(a, b))
    }

    /// Number of edges of color `c` at `v`.
    pub fn color_degree(&self, v: usize, c: ColorId) -> usize {
        (0..self.n)
            .filter(|&x| x != v && self.color_of(v, x) == c)
            .count()
    }

    /// Degree of `v` in the realization (its non-White degree).
    pub fn graph_degree(&self, v: usize) -> usize {
        self.n - 1 - self.color_degree(v, ColorId::White)
    }

    /// Neighbours `x` of `v` with `color(vx) == c`, ascending.
    pub fn color_neighbors(&self, v: usize, c: ColorId) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| x != v && self.color_of(v, x) == c)
            .collect()
    }

    pub fn class_edges(&self, c: ColorId) -> Vec<Edge> {
        self.colors
            .iter()
            .enumerate()
            .filter(|&(_, &col)| col == c)
            .map(|(i, _)| Edge::from_index(self.n, i))
            .collect()
    }

    pub fn class_graph(&self, c: ColorId) -> SimpleGraph {
        SimpleGraph::from_edges(self.n, self.class_edges(c)).expect("class edges are distinct")
    }

    /// The realized graph (all non-White pairs).
    pub fn graph(&self) -> SimpleGraph {
        let edges = self
            .colors
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != ColorId::White)
            .map(|(i, _)| Edge::from_index(self.n, i));
        SimpleGraph::from_edges(self.n, edges).expect("distinct pairs")
    }

    pub fn one_factor_count(&self) -> usize {
        self.declared
            .keys()
            .filter(|c| matches!(c, ColorId::OneFactor(_)))
            .count()
    }

    pub fn two_factor_count(&self) -> usize {
        self.declared
            .keys()
            .filter(|c| matches!(c, ColorId::TwoFactor(_)))
            .count()
    }

    /// Per-vertex color profile: `profile[v][c]` = color degree.
    pub fn degree_profile(&self) -> Vec<BTreeMap<ColorId, usize>> {
        let mut prof = vec![BTreeMap::new(); self.n];
        for (i, &c) in self.colors.iter().enumerate() {
            let e = Edge::from_index(self.n, i);
            for x in e.endpoints() {
                *prof[x].entry(c).or_insert(0) += 1;
            }
        }
        prof
    }

    /// Full consistency check: declared classes regular, indices dense, and
    /// the realized degrees still equal `pi`.
    pub fn validate(&self) -> Result<()> {
        let prof = self.degree_profile();
        for (&c, &m) in &self.declared {
            for (v, p) in prof.iter().enumerate() {
                let found = p.get(&c).copied().unwrap_or(0);
                if found != m {
                    return Err(Error::RegularityViolation {
                        vertex: v,
                        color: c,
                        expected: m,
                        found,
                    });
                }
            }
        }
        // Undeclared factor colors must not be in use.
        for (i, &c) in self.colors.iter().enumerate() {
            if c.is_factor() && !self.declared.contains_key(&c) {
                return Err(Error::Internal(format!(
                    "edge {} has undeclared color {c}",
                    Edge::from_index(self.n, i)
                )));
            }
        }
        let ones = self.one_factor_count();
        let twos = self.two_factor_count();
        for c in self.declared.keys() {
            match *c {
                ColorId::OneFactor(i) if i >= ones => {
                    return Err(Error::Internal(format!(
                        "one-factor indices not dense: {c}"
                    )))
                }
                ColorId::TwoFactor(i) if i >= twos => {
                    return Err(Error::Internal(format!(
                        "two-factor indices not dense: {c}"
                    )))
                }
                _ => {}
            }
        }
        for (v, p) in prof.iter().enumerate() {
            let white = p.get(&ColorId::White).copied().unwrap_or(0);
            if white + self.pi.degree(v) != self.n - 1 {
                return Err(Error::Internal(format!(
                    "vertex {v} has white degree {white}, expected {}",
                    self.n - 1 - self.pi.degree(v)
                )));
            }
        }
        Ok(())
    }

    /// Applies `batch` atomically and records it in the trace.
    ///
    /// With `expect_conservation`, every per-vertex per-color degree must be
    /// unchanged or the batch is rolled back. In debug builds the full
    /// [`validate`](Self::validate) runs after every batch.
    pub fn apply_swap_batch(
        &mut self,
        batch: &[(Edge, ColorId)],
        expect_conservation: bool,
        op: &str,
        params: BTreeMap<String, String>,
    ) -> Result<()> {
        let changes = self.changes_for(batch)?;
        if expect_conservation {
            if let Some(err) = conservation_error(&changes) {
                return Err(err);
            }
        }
        self.commit(
            changes,
            Vec::new(),
            op,
            params,
            None,
            cfg!(debug_assertions),
        )
    }

    /// Like [`apply_swap_batch`](Self::apply_swap_batch) with conservation,
    /// tagging the batch with a multi-switch chain length.
    pub(crate) fn apply_switch(
        &mut self,
        batch: &[(Edge, ColorId)],
        op: &str,
        params: BTreeMap<String, String>,
        chain_len: Option<usize>,
    ) -> Result<()> {
        let changes = self.changes_for(batch)?;
        if let Some(err) = conservation_error(&changes) {
            return Err(err);
        }
        self.commit(
            changes,
            Vec::new(),
            op,
            params,
            chain_len,
            cfg!(debug_assertions),
        )
    }

    /// Re-partitions edges between factor classes and Black while updating
    /// declared degrees, e.g. splitting the residual into 2-factors. The
    /// realized graph may not change; the result is always fully validated.
    pub fn restructure(
        &mut self,
        batch: &[(Edge, ColorId)],
        declare: Vec<(ColorId, Option<usize>)>,
        op: &str,
    ) -> Result<()> {
        let changes = self.changes_for(batch)?;
        if let Some(ch) = changes
            .iter()
            .find(|ch| (ch.from == ColorId::White) != (ch.to == ColorId::White))
        {
            return Err(Error::PreconditionViolated(format!(
                "restructure would change the realized graph at {}",
                ch.edge
            )));
        }
        if let Some((c, _)) = declare.iter().find(|(c, _)| !c.is_factor()) {
            return Err(Error::InvalidInput(format!(
                "{c} cannot be declared regular"
            )));
        }
        self.commit(changes, declare, op, BTreeMap::new(), None, true)
    }

    fn changes_for(&self, batch: &[(Edge, ColorId)]) -> Result<Vec<Recolor>> {
        let mut seen = BTreeSet::new();
        batch
            .iter()
            .map(|&(edge, to)| {
                if edge.v() >= self.n {
                    return Err(Error::InvalidInput(format!("edge {edge} out of range")));
                }
                if !seen.insert(edge) {
                    return Err(Error::DuplicateEdge(edge));
                }
                let from = self.color(edge);
                if from == to {
                    return Err(Error::PreconditionViolated(format!(
                        "edge {edge} already has color {to}"
                    )));
                }
                Ok(Recolor { edge, from, to })
            })
            .collect()
    }

    fn commit(
        &mut self,
        changes: Vec<Recolor>,
        declare: Vec<(ColorId, Option<usize>)>,
        op: &str,
        params: BTreeMap<String, String>,
        chain_len: Option<usize>,
        full_check: bool,
    ) -> Result<()> {
        if changes.is_empty() && declare.is_empty() {
            return Ok(());
        }
        let saved_declared = self.declared.clone();
        for ch in &changes {
            self.colors[ch.edge.index(self.n)] = ch.to;
        }
        for &(c, d) in &declare {
            match d {
                Some(d) => self.declared.insert(c, d),
                None => self.declared.remove(&c),
            };
        }
        if full_check {
            if let Err(e) = self.validate() {
                for ch in &changes {
                    self.colors[ch.edge.index(self.n)] = ch.from;
                }
                self.declared = saved_declared;
                return Err(e);
            }
        }
        self.trace.batches.push(TraceBatch {
            op: op.to_string(),
            params,
            changes,
            declare,
            chain_len,
        });
        Ok(())
    }
}

/// Convenience for building trace parameter maps.
pub(crate) fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
