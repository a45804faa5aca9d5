//! Splitting a `2r`-regular graph into `r` edge-disjoint 2-factors.
//!
//! Orient each component along an Euler circuit so every vertex has in- and
//! out-degree `r`. The arcs then form an `r`-regular bipartite graph
//! (out-copies against in-copies), which splits into `r` perfect matchings;
//! each matching gives every vertex one successor and one predecessor, i.e. a
//! spanning 2-regular subgraph.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph};

/// Euler circuits of every component, as arcs `(tail, head)`.
fn euler_orientation(g: &SimpleGraph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut remaining: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut arcs = Vec::with_capacity(g.edge_count());
    for start in 0..n {
        if remaining[start].is_empty() {
            continue;
        }
        // Hierholzer; the circuit comes out reversed, which is still a circuit.
        let mut stack = vec![start];
        let mut circuit = Vec::new();
        while let Some(&x) = stack.last() {
            if let Some(&y) = remaining[x].iter().next() {
                remaining[x].remove(&y);
                remaining[y].remove(&x);
                stack.push(y);
            } else {
                circuit.push(stack.pop().expect("non-empty"));
            }
        }
        arcs.extend(circuit.windows(2).map(|w| (w[0], w[1])));
    }
    arcs
}

/// Kuhn's augmenting-path bipartite matching; `succ[u]` lists heads of arcs
/// out of `u`. Returns `head_of[u]`.
fn perfect_bipartite_matching(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        u: usize,
        succ: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &h in &succ[u] {
            if seen[h] {
                continue;
            }
            seen[h] = true;
            if owner[h].is_none_or(|o| augment(o, succ, owner, seen)) {
                owner[h] = Some(u);
                return true;
            }
        }
        false
    }

    for u in 0..n {
        let mut seen = vec![false; n];
        if !augment(u, succ, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut head_of = vec![0; n];
    for (h, o) in owner.iter().enumerate() {
        head_of[o.expect("perfect")] = h;
    }
    Some(head_of)
}

/// Partitions the edges of the `2r`-regular graph `g` into `r` spanning
/// 2-regular subgraphs.
pub fn petersen_two_factorize(g: &SimpleGraph, r: usize) -> Result<Vec<SimpleGraph>> {
    let n = g.n();
    if g.regular_degree() != Some(2 * r) && !(n == 0 && r == 0) {
        return Err(Error::NotEvenRegular);
    }
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, h) in euler_orientation(g) {
        succ[t].push(h);
    }
    for s in succ.iter_mut() {
        s.sort_unstable();
    }
    let mut factors = Vec::with_capacity(r);
    for _ in 0..r {
        let head_of = perfect_bipartite_matching(&succ).ok_or_else(|| {
            Error::Internal("regular bipartite graph without perfect matching".into())
        })?;
        let factor = SimpleGraph::from_edges(n, (0..n).map(|u| Edge::new(u, head_of[u])))?;
        for (u, &h) in head_of.iter().enumerate() {
            succ[u].retain(|&x| x != h);
        }
        factors.push(factor);
    }
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent check: parts are 2-regular, pairwise disjoint, and cover g.
    fn assert_partition(g: &SimpleGraph, parts: &[SimpleGraph]) {
        let mut seen = BTreeSet::new();
        for p in parts {
            assert_eq!(p.regular_degree(), Some(2));
            for e in p.edges() {
                assert!(g.has_edge(e.u(), e.v()));
                assert!(seen.insert(e), "edge {e} in two parts");
            }
        }
        assert_eq!(seen.len(), g.edge_count());
    }

    #[test]
    fn c5_is_its_own_two_factor() {
        let g = SimpleGraph::cycle(5);
        let parts = petersen_two_factorize(&g, 1).unwrap();
        assert_eq!(parts, vec![g]);
    }

    #[test]
    fn k5_splits_into_two_hamiltonian_cycles() {
        let g = SimpleGraph::complete(5);
        let parts = petersen_two_factorize(&g, 2).unwrap();
        assert_eq!(parts.len(), 2);
        assert_partition(&g, &parts);
    }

    #[test]
    fn circulant_c8_1_2() {
        let g = SimpleGraph::circulant(8, &[1, 2]);
        let parts = petersen_two_factorize(&g, 2).unwrap();
        assert_eq!(parts.len(), 2);
        assert_partition(&g, &parts);
    }

    #[test]
    fn disconnected_input() {
        let g = SimpleGraph::complete(5).disjoint_union(&SimpleGraph::circulant(7, &[1, 3]));
        let parts = petersen_two_factorize(&g, 2).unwrap();
        assert_partition(&g, &parts);
    }

    #[test]
    fn rejects_odd_or_irregular() {
        assert_eq!(
            petersen_two_factorize(&SimpleGraph::petersen(), 1),
            Err(Error::NotEvenRegular)
        );
        assert_eq!(
            petersen_two_factorize(&SimpleGraph::cycle(6), 2),
            Err(Error::NotEvenRegular)
        );
    }
}
