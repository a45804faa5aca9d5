//! Realizations of degree sequences that pack edge-disjoint regular factors.
//!
//! The pipeline starts from a realization of `pi` with a `k`-regular residual
//! factor ([`kundu_realize`]), then peels perfect matchings off the residual
//! ([`four_ones`]) or splits it into 2-factors and converts those
//! ([`half_k`]). All edits go through degree-preserving color switches on a
//! coloring of the complete graph, recorded in a replayable trace.

pub mod certificate;
pub mod coloring;
pub mod error;
pub mod factorize;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod realize;
pub mod switch;

pub use certificate::{FactorCertificate, Mode, ResidualFactor};
pub use coloring::{make_colored_realization, ColorId, ColoredRealization, SwitchTrace};
pub use error::{Error, Result};
pub use factorize::{
    convert_two_factor, four_ones, half_k, merge_odd_cycle_pair, monotone_triple, peel_one_factor,
    petersen_two_factorize,
};
pub use graph::{DegreeSequence, Edge, SimpleGraph};
pub use matching::{lemma_odd_certificate, maximum_matching, Matching, OddCycleCertificate};
pub use oracle::{verify_certificate, VerifyReport};
pub use realize::{erdos_gallai_graphic, havel_hakimi_realize, kundu_realize, switch_randomize};
pub use switch::{
    multi_switch, parallel_two_switch, plan_multi_switch, MultiSwitchReport, SwitchMode,
};
