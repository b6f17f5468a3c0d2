//! Command-line front end: edge-list files in, text or JSON out.
//!
//! Exit codes: 0 when everything succeeded and every check passed, 1 when a
//! verification check failed, 2 for input and usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use antirainbow_core::audit::{rainbow_copy_search, rainbow_subgraph_audit, DEFAULT_AUDIT_BUDGET};
use antirainbow_core::experiments::{
    coloring_sweep, summarize, triangle_sweep, write_csv, Probability, TrialConfig, ASYMPTOTIC_NOTE,
};
use antirainbow_core::{
    anti_rainbow_coloring_with, audit::certificate_check, color_decomposition, degeneracy_ordering,
    degenerate_decomposition_with, is_proper_coloring, max_density, max_two_density, parse_graph,
    verify_decomposition, ColoringDocument, DecomposeOptions, Decomposition, EdgeColoring, Error,
    Graph, LayerTag, Rational,
};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "antirainbow",
    version,
    about = "Degenerate forest decompositions and anti-rainbow edge colourings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the maximum density m(G) and a densest vertex set.
    Density(GraphArgs),
    /// Print the maximum 2-density m2(H) and a witness.
    TwoDensity(GraphArgs),
    /// Print the degeneracy and a degeneracy ordering.
    Degeneracy(GraphArgs),
    /// Emit the forest decomposition as JSON.
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        /// Peel layer i against m(J_i) instead of m(G).
        #[arg(long)]
        tight_mu: bool,
    },
    /// Emit the anti-rainbow colouring as JSON.
    Color {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        tight_mu: bool,
        /// Refuse graphs with m(G) < 18, where no guarantee holds.
        #[arg(long)]
        guarantee_only: bool,
    },
    /// Verify a decomposition and/or colouring of a graph.
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        /// Decomposition JSON as written by `decompose`.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        /// Colouring JSON as written by `color`.
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Print the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Search a coloured host for rainbow copies of a pattern, or audit its
    /// small rainbow subgraphs.
    Rainbow {
        #[command(flatten)]
        graph: GraphArgs,
        /// Pattern graph, same edge-list format as the host.
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// Colouring JSON; the anti-rainbow colouring is computed when absent.
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Audit every connected rainbow subgraph with at most this many edges.
        #[arg(long)]
        max_edges: Option<usize>,
        /// Candidate subgraphs the audit may visit before giving up.
        #[arg(long, default_value_t = DEFAULT_AUDIT_BUDGET)]
        budget: u64,
        #[arg(long)]
        tight_mu: bool,
    },
    /// Run a seeded G(n, p) sweep described by a JSON config file.
    Experiment {
        config: PathBuf,
        /// Per-trial CSV destination; the JSON summary always goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's trial count.
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Edge-list file: one `u v` pair per line, `#` comments, optional `n <count>` header.
    pub input: PathBuf,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Sweep description read by `experiment`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub p: Vec<Probability>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Pattern edge-list path, relative to the config file. Defaults to K3.
    pub pattern: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Triangle,
    Coloring,
}

#[derive(Debug)]
enum Failure {
    /// Bad input, usage or I/O; exit 2.
    Input(String),
    /// A verification check failed; exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return EXIT_USAGE;
    }
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Check(message)) => {
            eprintln!("check failed: {message}");
            EXIT_CHECK_FAILED
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
    }
}

/// `RS_THREADS` caps the rayon pool.
fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("RS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("RS_THREADS must be a positive integer, got {raw:?}"))?;
    // a pool may already exist when run() is called twice in one process
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Density(args) => density(&args),
        Command::TwoDensity(args) => two_density(&args),
        Command::Degeneracy(args) => degeneracy(&args),
        Command::Decompose { graph, tight_mu } => decompose(&graph, tight_mu),
        Command::Color {
            graph,
            tight_mu,
            guarantee_only,
        } => color(&graph, tight_mu, guarantee_only),
        Command::Check {
            graph,
            decomposition,
            coloring,
            json,
        } => check(&graph, decomposition.as_deref(), coloring.as_deref(), json),
        Command::Rainbow {
            graph,
            pattern,
            coloring,
            max_edges,
            budget,
            tight_mu,
        } => rainbow(
            &graph,
            pattern.as_deref(),
            coloring.as_deref(),
            max_edges,
            budget,
            tight_mu,
        ),
        Command::Experiment {
            config,
            out,
            seed,
            trials,
        } => experiment(&config, out.as_deref(), seed, trials),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?;
    text.push('\n');
    emit(out, &text)
}

fn join(ids: &[usize]) -> String {
    ids.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn density(args: &GraphArgs) -> Outcome {
    let g = read_graph(&args.input)?;
    let w = max_density(&g)?;
    emit(
        args.out.as_deref(),
        &format!(
            "m = {}\nwitness: {} edges on {} vertices: {}\n",
            w.value,
            w.edge_count,
            w.vertex_count,
            join(&w.vertices)
        ),
    )
}

fn two_density(args: &GraphArgs) -> Outcome {
    let g = read_graph(&args.input)?;
    let m2 = max_two_density(&g)?;
    let witness = match &m2.witness {
        Some(w) => format!(
            "witness: {} edges on {} vertices: {}",
            w.edge_count,
            w.vertex_count,
            join(&w.vertices)
        ),
        None => "witness: none, no subgraph on 3 or more vertices exceeds 1/2".to_string(),
    };
    emit(
        args.out.as_deref(),
        &format!("m2 = {}\n{witness}\n", m2.value),
    )
}

fn degeneracy(args: &GraphArgs) -> Outcome {
    let g = read_graph(&args.input)?;
    let ord = degeneracy_ordering(&g);
    emit(
        args.out.as_deref(),
        &format!(
            "degeneracy = {}\norder: {}\n",
            ord.degeneracy,
            join(&ord.order)
        ),
    )
}

fn decompose(args: &GraphArgs, tight_mu: bool) -> Outcome {
    let g = read_graph(&args.input)?;
    let dec = degenerate_decomposition_with(&g, DecomposeOptions { tight_mu })?;
    emit_json(args.out.as_deref(), &dec)
}

fn color(args: &GraphArgs, tight_mu: bool, guarantee_only: bool) -> Outcome {
    let g = read_graph(&args.input)?;
    if guarantee_only {
        let m = max_density(&g)?.value;
        if m < Rational::from_int(antirainbow_core::GUARANTEE_THRESHOLD) {
            return Err(Failure::Input(format!(
                "m(G) = {m} is below {}; refusing because of --guarantee-only",
                antirainbow_core::GUARANTEE_THRESHOLD
            )));
        }
    }
    let (col, _) = anti_rainbow_coloring_with(&g, DecomposeOptions { tight_mu })?;
    for w in &col.warnings {
        eprintln!("warning: {w}");
    }
    emit_json(args.out.as_deref(), &col.to_document(&g))
}

/// Decomposition implied by the layer tags of a colouring, with `m` and the
/// ordering recomputed from the graph.
fn decomposition_from_coloring(g: &Graph, col: &EdgeColoring) -> Result<Decomposition, Failure> {
    let m = max_density(g)?.value;
    let k = m.floor() as usize;
    let big_k = (m * 2).floor() as usize;
    let mut forests: std::collections::BTreeMap<usize, Vec<usize>> =
        (k + 1..=big_k).map(|i| (i, Vec::new())).collect();
    let mut residual = Vec::new();
    for (id, tag) in col.layer_of.iter().enumerate() {
        match tag {
            LayerTag::Forest(i) => forests.entry(*i).or_default().push(id),
            LayerTag::Residual => residual.push(id),
        }
    }
    Ok(Decomposition {
        m_value: m,
        k,
        big_k,
        order: degeneracy_ordering(g).order,
        forests,
        residual,
    })
}

fn check(
    args: &GraphArgs,
    decomposition: Option<&Path>,
    coloring: Option<&Path>,
    json: bool,
) -> Outcome {
    let g = read_graph(&args.input)?;
    let col = match coloring {
        Some(path) => {
            let doc: ColoringDocument = read_json(path)?;
            Some(EdgeColoring::from_document(&g, &doc)?)
        }
        None => None,
    };
    let dec = match (decomposition, &col) {
        (Some(path), _) => read_json::<Decomposition>(path)?,
        (None, Some(col)) => decomposition_from_coloring(&g, col)?,
        (None, None) => degenerate_decomposition_with(&g, DecomposeOptions::default())?,
    };

    let mut report = verify_decomposition(&g, &dec);
    let col = match col {
        Some(col) => Some(col),
        None if report.passed() => match color_decomposition(&g, &dec) {
            Ok(col) => Some(col),
            Err(e) => {
                report.record("coloring/build", false, e.to_string());
                None
            }
        },
        None => None,
    };
    if let Some(col) = &col {
        let proper = is_proper_coloring(&g, &col.colour)?;
        report.record(
            "coloring/proper",
            proper,
            format!(
                "{} colours on {} edges",
                col.distinct_colours(),
                g.edge_count()
            ),
        );
        report.extend(certificate_check(&g, &dec, col));
    }

    if json {
        emit_json(args.out.as_deref(), &report)?;
    } else {
        emit(args.out.as_deref(), &report.to_string())?;
    }
    let failed: Vec<&str> = report.failures().map(|f| f.check.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}

#[derive(Serialize)]
struct RainbowOutput {
    m: Rational,
    guarantee: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pattern: Option<PatternResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<AuditResult>,
}

#[derive(Serialize)]
struct PatternResult {
    found: bool,
    embedding: Option<antirainbow_core::audit::Embedding>,
}

#[derive(Serialize)]
struct AuditResult {
    max_edges: usize,
    violations: Vec<antirainbow_core::audit::Violation>,
}

fn rainbow(
    args: &GraphArgs,
    pattern: Option<&Path>,
    coloring: Option<&Path>,
    max_edges: Option<usize>,
    budget: u64,
    tight_mu: bool,
) -> Outcome {
    if pattern.is_none() && max_edges.is_none() {
        return Err(Failure::Input(
            "rainbow needs --pattern, --max-edges, or both".into(),
        ));
    }
    let g = read_graph(&args.input)?;
    let col = match coloring {
        Some(path) => EdgeColoring::from_document(&g, &read_json(path)?)?,
        None => anti_rainbow_coloring_with(&g, DecomposeOptions { tight_mu })?.0,
    };
    let pattern = match pattern {
        Some(path) => {
            let h = read_graph(path)?;
            let embedding = rainbow_copy_search(&g, &col, &h)?;
            Some(PatternResult {
                found: embedding.is_some(),
                embedding,
            })
        }
        None => None,
    };
    let audit = match max_edges {
        Some(max_edges) => {
            let violations = match rainbow_subgraph_audit(&g, &col, max_edges, budget) {
                Ok(v) => v,
                Err(Error::BudgetExceeded { budget, partial }) => {
                    return Err(Failure::Input(format!(
                        "audit budget of {budget} subgraphs exhausted with {} violations so far; \
                         lower --max-edges or raise --budget",
                        partial.len()
                    )));
                }
                Err(e) => return Err(e.into()),
            };
            Some(AuditResult {
                max_edges,
                violations,
            })
        }
        None => None,
    };
    let violated = audit.as_ref().is_some_and(|a| !a.violations.is_empty());
    emit_json(
        args.out.as_deref(),
        &RainbowOutput {
            m: col.m_value,
            guarantee: col.guarantee,
            pattern,
            audit,
        },
    )?;
    if violated && col.guarantee {
        return Err(Failure::Check(
            "rainbow subgraph with 2-density >= m(G) under a guaranteed colouring".into(),
        ));
    }
    if violated {
        eprintln!("note: violations found, but m(G) < 18 so none are excluded");
    }
    Ok(())
}

#[derive(Serialize)]
struct TriangleSummary {
    kind: &'static str,
    seed: u64,
    points: Vec<antirainbow_core::experiments::SweepPoint>,
    note: &'static str,
}

#[derive(Serialize)]
struct ColoringSummary {
    kind: &'static str,
    seed: u64,
    points: Vec<antirainbow_core::experiments::SweepSummary>,
}

fn experiment(
    config_path: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    trials: Option<usize>,
) -> Outcome {
    let config: ExperimentConfig = read_json(config_path)?;
    let seed = seed.unwrap_or(config.seed);
    let trials = trials.unwrap_or(config.trials);
    if config.p.is_empty() {
        return Err(Failure::Input(
            "experiment config lists no probabilities".into(),
        ));
    }
    let pattern = match &config.pattern {
        Some(rel) => {
            let base = config_path.parent().unwrap_or(Path::new("."));
            read_graph(&base.join(rel))?
        }
        None => Graph::complete(3),
    };

    match config.kind {
        ExperimentKind::Triangle => {
            if pattern != Graph::complete(3) {
                return Err(Failure::Input(
                    "the triangle experiment uses the pattern K3".into(),
                ));
            }
            let points = triangle_sweep(config.n, &config.p, trials, seed)?;
            if let Some(path) = out {
                let mut csv = String::from("n,p,trials,hits,rate\n");
                for pt in &points {
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        pt.n, pt.p, pt.trials, pt.hits, pt.rate
                    ));
                }
                emit(Some(path), &csv)?;
            }
            emit_json(
                None,
                &TriangleSummary {
                    kind: "triangle",
                    seed,
                    points,
                    note: ASYMPTOTIC_NOTE,
                },
            )
        }
        ExperimentKind::Coloring => {
            let mut all = Vec::new();
            let mut points = Vec::new();
            for p in &config.p {
                let cfg = TrialConfig {
                    n: config.n,
                    p: p.clone(),
                    trials,
                    master_seed: seed,
                    pattern: pattern.clone(),
                };
                let records = coloring_sweep(&cfg)?;
                points.push(summarize(&cfg, &records));
                all.extend(records);
            }
            if let Some(path) = out {
                let mut csv = Vec::new();
                write_csv(&all, &mut csv)?;
                emit(Some(path), &String::from_utf8_lossy(&csv))?;
            }
            let broken = points.iter().any(|s| {
                let reached = s.trials - s.skipped;
                s.errors > 0 || s.proper != reached || s.decomposition_ok != reached
            });
            emit_json(
                None,
                &ColoringSummary {
                    kind: "coloring",
                    seed,
                    points,
                },
            )?;
            if broken {
                return Err(Failure::Check(
                    "a sampled graph failed the pipeline, properness or decomposition checks"
                        .into(),
                ));
            }
            Ok(())
        }
    }
}
