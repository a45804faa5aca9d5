//! Command-line front end for `kfactor`.
//!
//! Exit codes: 0 success, 1 `pi` not graphic, 2 `pi - k` not graphic, 3 odd
//! length where an even one is required, 4 internal failure or a rejected
//! certificate, 5 usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kfactor::factorize::{four_ones_traced, half_k_traced, petersen_two_factorize};
use kfactor::oracle::{
    bf_conjecture_search, verify_certificate, ConjectureOutcome, DEFAULT_BUDGET,
};
use kfactor::realize::{
    erdos_gallai_graphic, havel_hakimi_realize, kundu_realize, switch_randomize,
};
use kfactor::{
    ColoredRealization, DegreeSequence, Edge, Error, FactorCertificate, Mode, SimpleGraph,
};

pub mod sweep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_GRAPHIC: i32 = 1;
pub const EXIT_NOT_GRAPHIC_MINUS_K: i32 = 2;
pub const EXIT_ODD_LENGTH: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;
pub const EXIT_USAGE: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "kfactor",
    version,
    about = "Realize degree sequences that pack edge-disjoint 1-factors",
    after_help = "EXAMPLES:\n\
                  \n  kfactor graphic --pi 3,3,2,2,1,1\
                  \n  kfactor four-ones --pi 3,3,3,3 --k 3 --seed 7\
                  \n  kfactor half-k --pi @pi.txt --k 6 --trace trace.json\
                  \n  kfactor four-ones --pi 5,5,5,5,5,5 --k 5 > cert.json\
                  \n  kfactor verify --pi 5,5,5,5,5,5 --k 5 --cert cert.json\
                  \n  kfactor sweep --n 4,6,8 --report sweep.csv"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Erdős–Gallai test for pi (and pi - k when --k is given)
    Graphic {
        #[command(flatten)]
        pi: PiArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Havel–Hakimi realization, shuffled by random two-switches
    Realize {
        #[command(flatten)]
        pi: PiArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Two-switch proposals; defaults to n^2
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Realization of pi with a k-regular spanning subgraph
    Kundu(PipelineArgs),
    /// min(k,4) disjoint 1-factors plus a (k-4)-regular residual
    FourOnes(PipelineArgs),
    /// floor(k/2)+2 disjoint 1-factors (k >= 4)
    HalfK(PipelineArgs),
    /// Split a 2r-regular graph into r 2-factors
    Petersen {
        /// Edge list "0-1 1-2 ..." (or [[0,1],...] JSON), or @file
        #[arg(long)]
        edges: String,
        /// Vertex count; defaults to one more than the largest endpoint
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a certificate against pi and k
    Verify {
        #[command(flatten)]
        pi: PiArg,
        #[arg(long)]
        k: usize,
        /// Certificate JSON file, or - for standard input
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exhaustive run over all graphic sequences of the given lengths
    Sweep(sweep::SweepArgs),
    /// Brute-force search for k disjoint 1-factors over all realizations
    Conjecture {
        #[command(flatten)]
        pi: PiArg,
        #[arg(long)]
        k: usize,
        /// Node budget for each backtracking search
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct PiArg {
    /// Degree sequence: comma or space separated, or @file
    #[arg(long)]
    pi: String,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[command(flatten)]
    pi: PiArg,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the switch trace as JSON
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotGraphic => EXIT_NOT_GRAPHIC,
        Error::NotGraphicMinusK { .. } => EXIT_NOT_GRAPHIC_MINUS_K,
        Error::OddVertexCount { .. } => EXIT_ODD_LENGTH,
        Error::KTooSmall { .. } | Error::InvalidInput(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the CLI with process stdio.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI, writing normal output to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Graphic { pi, k, format } => graphic(&read_pi(&pi)?, k, format, out),
        Command::Realize {
            pi,
            seed,
            steps,
            format,
        } => realize(&read_pi(&pi)?, seed, steps, format, out),
        Command::Kundu(a) => pipeline(Mode::Kundu, a, out),
        Command::FourOnes(a) => pipeline(Mode::FourOnes, a, out),
        Command::HalfK(a) => pipeline(Mode::HalfK, a, out),
        Command::Petersen { edges, n, format } => petersen(&edges, n, format, out),
        Command::Verify {
            pi,
            k,
            cert,
            format,
        } => verify(&read_pi(&pi)?, k, &cert, format, out),
        Command::Sweep(a) => sweep::run(&a, out),
        Command::Conjecture {
            pi,
            k,
            budget,
            format,
        } => conjecture(&read_pi(&pi)?, k, budget, format, out),
    }
}

/// Reads `text`, or the contents of the file it names after a leading `@`.
fn inline_or_file(text: &str) -> std::result::Result<String, Failure> {
    match text.strip_prefix('@') {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))
        }
        None => Ok(text.to_string()),
    }
}

fn read_pi(arg: &PiArg) -> std::result::Result<DegreeSequence, Failure> {
    Ok(DegreeSequence::parse(&inline_or_file(&arg.pi)?)?)
}

fn emit(out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::internal(format!("write failed: {e}")))
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output serializes");
    s.push('\n');
    s
}

fn edge_list(edges: &[Edge]) -> String {
    edges
        .iter()
        .map(|e| format!("{}-{}", e.u(), e.v()))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct GraphicReport {
    pi: Vec<usize>,
    graphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minus_k_graphic: Option<bool>,
}

fn graphic(pi: &DegreeSequence, k: Option<usize>, format: Format, out: &mut dyn Write) -> Outcome {
    let is = erdos_gallai_graphic(pi);
    let minus = k.map(|k| pi.minus(k).is_some_and(|r| erdos_gallai_graphic(&r)));
    let report = GraphicReport {
        pi: pi.by_vertex().to_vec(),
        graphic: is,
        k,
        minus_k_graphic: minus,
    };
    match format {
        Format::Json => emit(out, &json_line(&report))?,
        Format::Text => {
            let mut s = format!("{pi} graphic: {is}\n");
            if let (Some(k), Some(m)) = (k, minus) {
                s.push_str(&format!("pi - {k} graphic: {m}\n"));
            }
            emit(out, &s)?;
        }
    }
    Ok(if !is {
        EXIT_NOT_GRAPHIC
    } else if minus == Some(false) {
        EXIT_NOT_GRAPHIC_MINUS_K
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct RealizationOut {
    n: usize,
    pi: Vec<usize>,
    edges: Vec<Edge>,
}

fn realize(
    pi: &DegreeSequence,
    seed: u64,
    steps: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let n = pi.len();
    let base = havel_hakimi_realize(pi)?;
    let g = switch_randomize(&base, steps.unwrap_or(n * n), seed);
    let edges: Vec<Edge> = g.edges().collect();
    match format {
        Format::Json => emit(
            out,
            &json_line(&RealizationOut {
                n,
                pi: pi.by_vertex().to_vec(),
                edges,
            }),
        )?,
        Format::Text => emit(
            out,
            &format!("n {n}\npi {pi}\nedges {}\n", edge_list(&edges)),
        )?,
    }
    Ok(EXIT_OK)
}

/// Runs one pipeline and returns the certificate with its realization.
pub fn run_pipeline(
    mode: Mode,
    pi: &DegreeSequence,
    k: usize,
    seed: u64,
) -> kfactor::Result<(FactorCertificate, ColoredRealization)> {
    match mode {
        Mode::Kundu => {
            let r = kundu_realize(pi, k, seed)?;
            Ok((FactorCertificate::from_realization(&r, Mode::Kundu), r))
        }
        Mode::FourOnes => four_ones_traced(pi, k, seed),
        Mode::HalfK => half_k_traced(pi, k, seed),
    }
}

pub fn certificate_text(cert: &FactorCertificate) -> String {
    let mut s = format!(
        "mode {}\nn {}\npi {}\nk {}\n",
        cert.mode,
        cert.n,
        DegreeSequence::new(cert.pi.clone()),
        cert.k
    );
    for (i, f) in cert.one_factors.iter().enumerate() {
        s.push_str(&format!("one-factor {i}: {}\n", edge_list(f)));
    }
    for (i, f) in cert.two_factors.iter().enumerate() {
        s.push_str(&format!("two-factor {i}: {}\n", edge_list(f)));
    }
    if let Some(r) = &cert.residual {
        s.push_str(&format!(
            "residual ({}-regular): {}\n",
            r.degree,
            edge_list(&r.edges)
        ));
    }
    s.push_str(&format!("black: {}\n", edge_list(&cert.black_edges)));
    s
}

fn pipeline(mode: Mode, a: PipelineArgs, out: &mut dyn Write) -> Outcome {
    let pi = read_pi(&a.pi)?;
    let (cert, r) = run_pipeline(mode, &pi, a.k, a.seed)?;
    if let Some(path) = &a.trace {
        write_file(path, &json_line(r.trace()))?;
    }
    let report = verify_certificate(&pi, a.k, &cert);
    if !report.pass {
        let what: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::internal(format!(
            "emitted certificate fails verification: {}",
            what.join("; ")
        )));
    }
    match a.format {
        Format::Json => emit(out, &cert.to_json())?,
        Format::Text => emit(out, &certificate_text(&cert))?,
    }
    Ok(EXIT_OK)
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_edges(text: &str) -> std::result::Result<Vec<Edge>, Failure> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| Failure::usage(format!("bad edge JSON: {e}")));
    }
    t.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|tok| {
            let (a, b) = tok
                .split_once('-')
                .ok_or_else(|| Failure::usage(format!("edge {tok:?} is not of the form a-b")))?;
            let a: usize = a
                .parse()
                .map_err(|_| Failure::usage(format!("bad vertex in {tok:?}")))?;
            let b: usize = b
                .parse()
                .map_err(|_| Failure::usage(format!("bad vertex in {tok:?}")))?;
            Edge::try_new(a, b).ok_or_else(|| Failure::usage(format!("loop {tok:?}")))
        })
        .collect()
}

#[derive(Serialize)]
struct PetersenOut {
    n: usize,
    r: usize,
    two_factors: Vec<Vec<Edge>>,
}

fn petersen(edges: &str, n: Option<usize>, format: Format, out: &mut dyn Write) -> Outcome {
    let edges = parse_edges(&inline_or_file(edges)?)?;
    let n = n.unwrap_or_else(|| edges.iter().map(|e| e.v() + 1).max().unwrap_or(0));
    let g = SimpleGraph::from_edges(n, edges.iter().copied())?;
    let degree = g.regular_degree().ok_or(Error::NotEvenRegular)?;
    if degree % 2 == 1 {
        return Err(Error::NotEvenRegular.into());
    }
    let parts = petersen_two_factorize(&g, degree / 2)?;
    let two_factors: Vec<Vec<Edge>> = parts.iter().map(|p| p.edges().collect()).collect();
    match format {
        Format::Json => emit(
            out,
            &json_line(&PetersenOut {
                n,
                r: degree / 2,
                two_factors,
            }),
        )?,
        Format::Text => {
            let mut s = String::new();
            for (i, f) in two_factors.iter().enumerate() {
                s.push_str(&format!("two-factor {i}: {}\n", edge_list(f)));
            }
            emit(out, &s)?;
        }
    }
    Ok(EXIT_OK)
}

fn verify(
    pi: &DegreeSequence,
    k: usize,
    cert: &Path,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let text = if cert == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(cert)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", cert.display())))?
    };
    let cert = FactorCertificate::from_json(&text)
        .map_err(|e| Failure::usage(format!("bad certificate: {e}")))?;
    let report = verify_certificate(pi, k, &cert);
    match format {
        Format::Json => emit(out, &json_line(&report))?,
        Format::Text => {
            let mut s = format!("{}\n", if report.pass { "PASS" } else { "FAIL" });
            for v in &report.violations {
                s.push_str(&format!("  {v}\n"));
            }
            emit(out, &s)?;
        }
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_INTERNAL })
}

#[derive(Serialize)]
struct ConjectureOut {
    pi: Vec<usize>,
    k: usize,
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<Edge>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    one_factors: Option<Vec<Vec<Edge>>>,
}

fn conjecture(
    pi: &DegreeSequence,
    k: usize,
    budget: u64,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let outcome = bf_conjecture_search(pi, k, budget)?;
    let report = match &outcome {
        ConjectureOutcome::Found { graph, matchings } => ConjectureOut {
            pi: pi.by_vertex().to_vec(),
            k,
            found: true,
            edges: Some(graph.edges().collect()),
            one_factors: Some(matchings.iter().map(|m| m.edges()).collect()),
        },
        ConjectureOutcome::Counterexample => ConjectureOut {
            pi: pi.by_vertex().to_vec(),
            k,
            found: false,
            edges: None,
            one_factors: None,
        },
    };
    match format {
        Format::Json => emit(out, &json_line(&report))?,
        Format::Text => {
            let mut s = format!("{pi} k={k}: ");
            match (&report.edges, &report.one_factors) {
                (Some(edges), Some(ms)) => {
                    s.push_str(&format!("found\nedges {}\n", edge_list(edges)));
                    for (i, m) in ms.iter().enumerate() {
                        s.push_str(&format!("one-factor {i}: {}\n", edge_list(m)));
                    }
                }
                _ => s.push_str("COUNTEREXAMPLE: no realization has k disjoint 1-factors\n"),
            }
            emit(out, &s)?;
        }
    }
    match outcome {
        ConjectureOutcome::Found { .. } => Ok(EXIT_OK),
        ConjectureOutcome::Counterexample => Err(Failure::internal(format!(
            "counterexample: {pi} with k={k} has no realization with {k} disjoint 1-factors"
        ))),
    }
}
