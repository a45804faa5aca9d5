use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::{ColorId, ColoredRealization};
use crate::graph::Edge;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Kundu,
    FourOnes,
    HalfK,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Kundu => "kundu",
            Mode::FourOnes => "four-ones",
            Mode::HalfK => "half-k",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualFactor {
    pub degree: usize,
    pub edges: Vec<Edge>,
}

/// A realization of `pi` split into declared factors and leftover Black
/// edges. Edge lists are sorted; factor lists are sorted by first edge, so
/// serialization is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCertificate {
    pub n: usize,
    pub pi: Vec<usize>,
    pub k: usize,
    pub mode: Mode,
    pub one_factors: Vec<Vec<Edge>>,
    pub two_factors: Vec<Vec<Edge>>,
    pub residual: Option<ResidualFactor>,
    pub black_edges: Vec<Edge>,
}

impl FactorCertificate {
    pub fn from_realization(r: &ColoredRealization, mode: Mode) -> FactorCertificate {
        let mut one_factors = Vec::new();
        let mut two_factors = Vec::new();
        let mut residual = None;
        for (&c, &degree) in r.declared() {
            let edges = r.class_edges(c);
            match c {
                ColorId::OneFactor(_) => one_factors.push(edges),
                ColorId::TwoFactor(_) => two_factors.push(edges),
                ColorId::Residual => residual = Some(ResidualFactor { degree, edges }),
                ColorId::White | ColorId::Black => unreachable!("never declared"),
            }
        }
        one_factors.sort();
        two_factors.sort();
        FactorCertificate {
            n: r.n(),
            pi: r.pi().by_vertex().to_vec(),
            k: r.k(),
            mode,
            one_factors,
            two_factors,
            residual,
            black_edges: r.class_edges(ColorId::Black),
        }
    }

    /// Single-line canonical JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<FactorCertificate> {
        serde_json::from_str(text)
    }
}
