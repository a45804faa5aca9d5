//! Exhaustive sweeps: every graphic sequence of the requested lengths, every
//! `k >= 1` with `pi - k` graphic, every requested mode. Odd lengths only run
//! the Kundu realizer.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use kfactor::oracle::{enumerate_graphic, verify_certificate};
use kfactor::realize::erdos_gallai_graphic;
use kfactor::{DegreeSequence, Mode};

use crate::{emit, json_line, run_pipeline, Failure, Outcome, EXIT_INTERNAL, EXIT_OK};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "KFACTOR_THREADS";

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Sequence lengths, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 6, 8])]
    pub n: Vec<usize>,
    /// Pipelines to run, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [ModeArg::FourOnes, ModeArg::HalfK])]
    pub modes: Vec<ModeArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-instance CSV report
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Kundu,
    FourOnes,
    HalfK,
}

impl std::fmt::Display for ModeArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModeArg::Kundu => "kundu",
            ModeArg::FourOnes => "four-ones",
            ModeArg::HalfK => "half-k",
        })
    }
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Kundu => Mode::Kundu,
            ModeArg::FourOnes => Mode::FourOnes,
            ModeArg::HalfK => Mode::HalfK,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub pi: String,
    pub k: usize,
    pub mode: String,
    pub ok: bool,
    pub n_one_factors: usize,
    pub n_switches: usize,
    pub max_chain_r: usize,
    pub millis: u128,
    #[serde(skip)]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub ok: usize,
    pub failed: usize,
    pub total_switches: usize,
    pub max_chain_r: usize,
    pub failures: Vec<String>,
}

/// The `(pi, k, mode)` triples of a sweep, in canonical order.
pub fn instances(ns: &[usize], modes: &[Mode]) -> Vec<(DegreeSequence, usize, Mode)> {
    let mut out = Vec::new();
    for &n in ns {
        if n == 0 {
            continue;
        }
        for pi in enumerate_graphic(n, n - 1) {
            let min = pi.by_vertex().iter().copied().min().unwrap_or(0);
            for k in 1..=min {
                if !pi.minus(k).is_some_and(|rest| erdos_gallai_graphic(&rest)) {
                    continue;
                }
                for &mode in modes {
                    if (mode == Mode::HalfK && k < 4) || (mode != Mode::Kundu && n % 2 == 1) {
                        continue;
                    }
                    out.push((pi.clone(), k, mode));
                }
            }
        }
    }
    out
}

pub fn run_instance(pi: &DegreeSequence, k: usize, mode: Mode, seed: u64) -> SweepRow {
    let start = Instant::now();
    let result = run_pipeline(mode, pi, k, seed);
    let millis = start.elapsed().as_millis();
    let mut row = SweepRow {
        n: pi.len(),
        pi: pi
            .by_vertex()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        k,
        mode: mode.to_string(),
        ok: false,
        n_one_factors: 0,
        n_switches: 0,
        max_chain_r: 0,
        millis,
        error: None,
    };
    match result {
        Ok((cert, r)) => {
            let report = verify_certificate(pi, k, &cert);
            row.ok = report.pass;
            row.n_one_factors = cert.one_factors.len();
            row.n_switches = r.trace().switch_count();
            row.max_chain_r = r.trace().max_chain_len();
            if !report.pass {
                let v: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
                row.error = Some(v.join("; "));
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs all instances, in parallel when more than one worker is available.
/// Rows come back in canonical order.
pub fn run_rows(ns: &[usize], modes: &[Mode], seed: u64) -> Vec<SweepRow> {
    let work = instances(ns, modes);
    let go = || {
        work.par_iter()
            .map(|(pi, k, mode)| run_instance(pi, *k, *mode, seed))
            .collect::<Vec<_>>()
    };
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok());
    match threads.and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().ok()) {
        Some(pool) => pool.install(go),
        None => go(),
    }
}

pub fn summarize(rows: &[SweepRow]) -> SweepSummary {
    let failures: Vec<String> = rows
        .iter()
        .filter(|r| !r.ok)
        .map(|r| {
            format!(
                "{} pi=({}) k={}: {}",
                r.mode,
                r.pi,
                r.k,
                r.error.as_deref().unwrap_or("failed")
            )
        })
        .collect();
    SweepSummary {
        instances: rows.len(),
        ok: rows.iter().filter(|r| r.ok).count(),
        failed: failures.len(),
        total_switches: rows.iter().map(|r| r.n_switches).sum(),
        max_chain_r: rows.iter().map(|r| r.max_chain_r).max().unwrap_or(0),
        failures,
    }
}

pub fn write_csv(path: &PathBuf, rows: &[SweepRow]) -> std::result::Result<(), Failure> {
    let fail = |e: csv::Error| Failure::usage(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(fail)?;
    for row in rows {
        w.serialize(row).map_err(fail)?;
    }
    w.flush()
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn run(args: &SweepArgs, out: &mut dyn Write) -> Outcome {
    let modes: Vec<Mode> = args.modes.iter().map(|&m| m.into()).collect();
    let rows = run_rows(&args.n, &modes, args.seed);
    if let Some(path) = &args.report {
        write_csv(path, &rows)?;
    }
    let summary = summarize(&rows);
    emit(out, &json_line(&summary))?;
    Ok(if summary.failed == 0 {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    })
}
