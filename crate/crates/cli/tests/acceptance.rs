//! Acceptance gate: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kfactor::factorize::{four_ones_traced, half_k_traced, petersen_two_factorize};
use kfactor::oracle::{bf_conjecture_search, bf_max_matching, ConjectureOutcome, DEFAULT_BUDGET};
use kfactor::realize::kundu_realize;
use kfactor::{lemma_odd_certificate, multi_switch, ColorId, Edge, Matching, Mode, SimpleGraph};
use kfactor_cli::sweep::{instances, run_rows};

struct Outcome {
    checked: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn four_ones_sweep() -> Outcome {
    let mut o = Outcome::new();
    for row in run_rows(&[4, 6, 8], &[Mode::FourOnes], 0) {
        let ok = row.ok && row.n_one_factors == row.k.min(4);
        o.check(ok, || {
            format!("pi=({}) k={}: {:?}", row.pi, row.k, row.error)
        });
    }
    o
}

fn half_k_sweep() -> Outcome {
    let mut o = Outcome::new();
    for row in run_rows(&[4, 6, 8], &[Mode::HalfK], 0) {
        let ok = row.ok && row.n_one_factors == row.k / 2 + 2;
        o.check(ok, || {
            format!("pi=({}) k={}: {:?}", row.pi, row.k, row.error)
        });
    }
    o
}

fn multi_switch_conservation() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut modes = BTreeSet::new();
    while o.checked < 10_000 {
        let n = rng.gen_range(3..=12);
        let r = common::random_colored(&mut rng, n);
        let Some(call) = common::random_switch_call(&mut rng, &r) else {
            continue;
        };
        modes.insert(format!("{:?}", call.mode));
        let mut after = r.clone();
        match multi_switch(
            &mut after, call.u, call.v, call.w, call.mode, call.z3, call.z2,
        ) {
            Ok(report) => {
                let res = common::check_switch(&r, &after, &call, &report);
                o.check(res.is_ok(), || format!("{call:?}: {}", res.unwrap_err()));
            }
            Err(e) => o.check(false, || format!("{call:?}: {e}")),
        }
    }
    o.check(modes.len() == 2, || "both modes exercised".into());
    o
}

/// All 2-regular graphs on `n` vertices up to isomorphism: cycle-length
/// partitions with parts of size at least 3.
fn cycle_partitions(n: usize, min: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in min..=n {
        for mut rest in cycle_partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn relabel<R: Rng>(rng: &mut R, g: &SimpleGraph) -> SimpleGraph {
    let mut p: Vec<usize> = (0..g.n()).collect();
    p.shuffle(rng);
    SimpleGraph::from_edges(g.n(), g.edges().map(|e| Edge::new(p[e.u()], p[e.v()]))).unwrap()
}

fn lemma_odd_equivalence() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let check = |o: &mut Outcome, g: &SimpleGraph, label: &str| {
        let cert = lemma_odd_certificate(g, &Matching::empty(g.n()));
        let bf = bf_max_matching(g, DEFAULT_BUDGET);
        match (cert, bf) {
            (Ok(cert), Ok((size, _))) => {
                let valid = cert.check(g);
                o.check(valid.is_ok() && cert.matching.size() == size, || {
                    format!(
                        "{label}: size {} vs {size}, {valid:?}",
                        cert.matching.size()
                    )
                });
            }
            (c, b) => o.check(false, || format!("{label}: {:?} / {:?}", c.err(), b.err())),
        }
    };
    let mut graphs = Vec::new();
    for n in 3..=10 {
        for parts in cycle_partitions(n, 3) {
            let mut g = SimpleGraph::empty(0);
            for &len in &parts {
                g = g.disjoint_union(&SimpleGraph::cycle(len));
            }
            graphs.push((relabel(&mut rng, &g), format!("cycles {parts:?}")));
        }
    }
    let k5 = SimpleGraph::complete(5);
    graphs.push((k5.disjoint_union(&k5), "K5+K5".into()));
    graphs.push((
        k5.disjoint_union(&SimpleGraph::circulant(7, &[1, 2])),
        "K5+C7(1,2)".into(),
    ));
    graphs.push((SimpleGraph::petersen(), "Petersen".into()));
    let mut random = 0;
    while random < 600 {
        let d = if random % 2 == 0 { 3 } else { 4 };
        let n = rng.gen_range(d + 1..=14);
        if (n * d) % 2 == 1 {
            continue;
        }
        graphs.push((
            common::random_regular(&mut rng, n, d),
            format!("random {d}-regular n={n}"),
        ));
        random += 1;
    }
    for (g, label) in &graphs {
        check(&mut o, g, label);
    }
    o
}

fn petersen_exactness() -> Outcome {
    let mut o = Outcome::new();
    let check = |o: &mut Outcome, g: &SimpleGraph, r: usize, label: &str| {
        match petersen_two_factorize(g, r) {
            Ok(parts) => {
                let mut seen = BTreeSet::new();
                let mut ok = parts.len() == r;
                for p in &parts {
                    ok &= p.n() == g.n() && p.regular_degree() == Some(2);
                    for e in p.edges() {
                        ok &= g.has_edge(e.u(), e.v()) && seen.insert(e);
                    }
                }
                ok &= seen.len() == g.edge_count();
                o.check(ok, || format!("{label}: not an exact partition"));
            }
            Err(e) => o.check(false, || format!("{label}: {e}")),
        }
    };
    check(&mut o, &SimpleGraph::cycle(5), 1, "C5");
    check(&mut o, &SimpleGraph::complete(5), 2, "K5");
    check(&mut o, &SimpleGraph::circulant(8, &[1, 2]), 2, "C8(1,2)");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    while count < 150 {
        let r = rng.gen_range(1..=4);
        let n = rng.gen_range(2 * r + 1..=16);
        let g = common::random_regular(&mut rng, n, 2 * r);
        check(&mut o, &g, r, &format!("random {}-regular n={n}", 2 * r));
        count += 1;
    }
    o
}

fn kundu_totality() -> Outcome {
    let mut o = Outcome::new();
    let ns: Vec<usize> = (2..=8).collect();
    for (pi, k, _) in instances(&ns, &[Mode::Kundu]) {
        match kundu_realize(&pi, k, 0) {
            Ok(r) => {
                let ok = r.validate().is_ok()
                    && r.pi() == &pi
                    && r.class_graph(ColorId::Residual).regular_degree() == Some(k);
                o.check(ok, || format!("{pi} k={k}: invalid realization"));
            }
            Err(e) => o.check(false, || format!("{pi} k={k}: {e}")),
        }
    }
    o
}

fn conjecture_spot_check() -> Outcome {
    let mut o = Outcome::new();
    for (pi, k, _) in instances(&[4, 6], &[Mode::Kundu]) {
        match bf_conjecture_search(&pi, k, DEFAULT_BUDGET) {
            Ok(ConjectureOutcome::Found { graph, matchings }) => {
                let ok = graph.degrees() == pi.by_vertex()
                    && matchings.len() == k
                    && matchings
                        .iter()
                        .all(|m| m.is_perfect() && m.is_within(&graph))
                    && matchings
                        .iter()
                        .flat_map(|m| m.edges())
                        .collect::<BTreeSet<_>>()
                        .len()
                        == k * pi.len() / 2;
                o.check(ok, || format!("{pi} k={k}: witness does not check out"));
            }
            Ok(ConjectureOutcome::Counterexample) => {
                let path = std::env::temp_dir().join("kfactor-counterexample.txt");
                let _ = std::fs::write(&path, format!("pi={pi} k={k}\n"));
                o.check(false, || {
                    format!("COUNTEREXAMPLE {pi} k={k} (written to {})", path.display())
                });
            }
            Err(e) => o.check(false, || format!("{pi} k={k}: {e}")),
        }
    }
    o
}

fn determinism() -> Outcome {
    let mut o = Outcome::new();
    let bin = env!("CARGO_BIN_EXE_kfactor");
    let runs: &[&[&str]] = &[
        &["graphic", "--pi", "4,4,3,3,2,2", "--k", "2"],
        &["realize", "--pi", "4,4,3,3,2,2", "--seed", "9"],
        &[
            "kundu",
            "--pi",
            "5,5,4,4,4,4,3,3",
            "--k",
            "3",
            "--seed",
            "11",
        ],
        &[
            "four-ones",
            "--pi",
            "7,7,6,6,6,6,5,5",
            "--k",
            "5",
            "--seed",
            "3",
        ],
        &[
            "half-k",
            "--pi",
            "7,7,7,7,7,7,7,7",
            "--k",
            "7",
            "--seed",
            "5",
            "--format",
            "text",
        ],
        &[
            "petersen",
            "--edges",
            "0-1 1-2 2-3 3-4 4-5 5-6 6-7 0-7 0-2 1-3 2-4 3-5 4-6 5-7 0-6 1-7",
        ],
        &["conjecture", "--pi", "3,3,3,3,3,3", "--k", "3"],
        &["sweep", "--n", "4,6", "--seed", "1"],
    ];
    for args in runs {
        let go = || {
            Command::new(bin)
                .args(*args)
                .env("KFACTOR_THREADS", "4")
                .output()
                .unwrap()
        };
        let (a, b) = (go(), go());
        o.check(
            a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty(),
            || format!("{args:?} output differs between runs or failed"),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (pi, k, _) in instances(&[6, 8], &[Mode::FourOnes]).choose_multiple(&mut rng, 200) {
        let res = if *k >= 4 {
            half_k_traced(pi, *k, 1)
        } else {
            four_ones_traced(pi, *k, 1)
        };
        match res {
            Ok((_, r)) => {
                let replay = r.trace().replay();
                let ok = matches!(&replay, Ok((c, d)) if c[..] == *r.colors() && d == r.declared());
                o.check(ok, || format!("{pi} k={k}: replay differs"));
            }
            Err(e) => o.check(false, || format!("{pi} k={k}: {e}")),
        }
    }
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("four-ones sweep, n in {4,6,8}", four_ones_sweep),
        ("half-k sweep, n in {4,6,8}, k >= 4", half_k_sweep),
        (
            "multi-switch conservation, 10^4 random calls",
            multi_switch_conservation,
        ),
        (
            "lemma-odd certificate vs brute-force matching",
            lemma_odd_equivalence,
        ),
        ("Petersen 2-factorization exactness", petersen_exactness),
        ("Kundu realizer totality, n <= 8", kundu_totality),
        ("conjecture spot-check, n in {4,6}", conjecture_spot_check),
        ("determinism and trace replay", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let status = if outcome.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "criterion {}: {status} {name} ({} checks, {} failures, {secs:.1}s)",
            i + 1,
            outcome.checked,
            outcome.failures.len()
        );
        for f in outcome.failures.iter().take(10) {
            println!("    {f}");
        }
        if !outcome.failures.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
