//! Command-line front end for the `maxcut-sdp` library.
//!
//! Every subcommand builds a serializable report, which is then written as
//! JSON, CSV or plain text. Exit codes: 0 on success, 1 on domain errors
//! (bad graph, failed precondition, solver failure), 2 on usage errors.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use maxcut_sdp::experiments::{
    distribution_report, probe_edge_sum_conjecture, SampleConfig, WeightMode,
};
use maxcut_sdp::graph::{vertex_sum, CliqueSumSpec, NamedGraph, WeightedGraph};
use maxcut_sdp::linalg::SymMatrix;
use maxcut_sdp::maxcut::{
    brute_force_maxcut, gw_round, recover_cut_if_rank1, sdp_value, CutResult, CutVector,
};
use maxcut_sdp::sdp::{
    check_optimality, numerical_rank, rank_report, solve, OptimalityReport, RankReport, SdpProblem,
    SdpSolution, SolveStatus, DEFAULT_MAX_ITER, DEFAULT_RANK_TOL, DEFAULT_TOL,
};
use maxcut_sdp::structure::{
    compose_vertex_sum, cycle_rank1_analysis, diamond_analysis, vertex_sum_low_rank_completion,
    CycleAnalysis, DiamondAnalysis, DiamondRegime, DiamondWeights,
};

/// Brute force is attached to reports only up to this many vertices.
pub const REPORT_BRUTE_FORCE_MAX_N: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "maxcut-sdp",
    version,
    about = "Max-cut SDP relaxation: solve, analyze, sample"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report format (default: csv for `sample`, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for sampling. Output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the SDP relaxation and report values, ranks and optimality residuals.
    Solve(SolveArgs),
    /// Decide whether a weighted cycle has a rank-1 optimum.
    AnalyzeCycle(CycleArgs),
    /// Classify a diamond (two triangles sharing an edge) and build its dual.
    AnalyzeDiamond(DiamondArgs),
    /// Solve two graphs and glue their optimal pairs into one for the vertex sum.
    ComposeVertexSum(ComposeArgs),
    /// Rank distribution of the optimum over random weights on a named graph.
    Sample(SampleArgs),
    /// Test the conjectured edge-sum dual on random weights.
    ProbeConjecture(ProbeArgs),
    /// Hyperplane rounding of the SDP optimum.
    Round(RoundArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Named graph (k3, c4, c5, c6, diamond, butterfly, fish, kN, cN) or a
    /// path to a graph JSON file.
    #[arg(
        long,
        required_unless_present = "graph_file",
        conflicts_with = "graph_file"
    )]
    pub graph: Option<String>,
    /// Graph JSON file.
    #[arg(long)]
    pub graph_file: Option<PathBuf>,
    /// Comma-separated edge weights, in the graph's edge order.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Solver tolerance on the duality gap and feasibility.
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
    pub tol: f64,
    /// Relative eigenvalue cutoff for ranks.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL, value_parser = positive)]
    pub rank_tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Tolerance for the reported optimality check.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub check_tol: f64,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    /// Comma-separated cycle weights; edge i joins i and i+1 mod n.
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub weights: Vec<f64>,
    /// Also solve the SDP and report the numerical rank.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct DiamondArgs {
    /// Five weights for edges (0,1), (0,2), (1,2), (1,3), (2,3).
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required_unless_present = "graph_file"
    )]
    pub weights: Option<Vec<f64>>,
    /// Diamond graph JSON file.
    #[arg(long, conflicts_with = "weights")]
    pub graph_file: Option<PathBuf>,
    /// Only evaluate the weight inequalities; skip the triangle precondition
    /// and the certificate.
    #[arg(long)]
    pub condition_only: bool,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// First graph (name or JSON path); glued at its last vertex.
    #[arg(long)]
    pub g1: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights1: Option<Vec<f64>>,
    /// Second graph (name or JSON path); glued at its first vertex.
    #[arg(long)]
    pub g2: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights2: Option<Vec<f64>>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Tolerance for the optimality checks of the inputs and the result.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub check_tol: f64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Named graph.
    #[arg(long)]
    pub graph: NamedGraph,
    #[arg(long, default_value = "arbitrary")]
    pub mode: WeightMode,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL, value_parser = positive)]
    pub rank_tol: f64,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, default_value = "k3")]
    pub g1: String,
    #[arg(long, default_value = "k3")]
    pub g2: String,
    /// Shared edge in g1.
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "1,2")]
    pub map1: Vec<usize>,
    /// Shared edge in g2, matched position by position with `map1`.
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0,1")]
    pub map2: Vec<usize>,
    #[arg(long, default_value = "arbitrary")]
    pub mode: WeightMode,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RoundArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

fn positive(s: &str) -> Result<f64, String> {
    let v = f64::from_str(s).map_err(|e| e.to_string())?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a positive number, got {s}"))
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub graph: WeightedGraph,
    pub status: SolveStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub rank: RankReport,
    pub optimality: OptimalityReport,
    /// The cut read off a rank-1 optimum.
    pub cut: Option<CutVector>,
    pub brute_force: Option<CutResult>,
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub s: SymMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleReport {
    pub weights: Vec<f64>,
    pub analysis: CycleAnalysis,
    /// Numerical rank of the solved optimum, with `--verify`.
    pub solver_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiamondReport {
    pub weights: DiamondWeights,
    /// Regime from the weight inequalities alone.
    pub condition_regime: DiamondRegime,
    pub aligned_bound: f64,
    /// The weaker `min(h₁, h₂)` form of the aligned bound.
    pub stated_aligned_bound: f64,
    pub flipped_bound: Option<f64>,
    /// Full analysis; absent with `--condition-only`.
    pub analysis: Option<DiamondAnalysis>,
    pub brute_force: CutResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeReport {
    pub graph: WeightedGraph,
    pub rank_x1: usize,
    pub rank_x2: usize,
    pub rank_formula_value: usize,
    pub rank_composed: usize,
    /// Optimality of the composed pair on the summed graph.
    pub optimality: OptimalityReport,
    /// Rank of the low-rank optimum built from the same blocks.
    pub min_rank: usize,
    pub min_rank_optimality: OptimalityReport,
    pub x_composed: SymMatrix,
    pub s_composed: SymMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundReport {
    pub graph: WeightedGraph,
    pub trials: usize,
    pub seed: u64,
    pub cut: CutResult,
    pub sdp_value: f64,
    pub brute_force: Option<CutResult>,
    /// Rounded value over the brute-force optimum, when that is positive.
    pub ratio: Option<f64>,
}

// ---------------------------------------------------------------------------
// Running

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => f.write_str(m),
        }
    }
}

fn domain(e: impl fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let threads = cli.output.threads.map(usize::from).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(domain)?;
    let (value, custom) = pool.install(|| execute(&cli.command))?;
    let default = if matches!(cli.command, Command::Sample(_)) {
        Format::Csv
    } else {
        Format::Json
    };
    let text = render(
        &value,
        custom.as_ref(),
        cli.output.format.unwrap_or(default),
    );
    match &cli.output.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Custom CSV and text renderings; other reports use the generic flattening.
struct Custom {
    csv: String,
    text: String,
}

type Outcome = (Value, Option<Custom>);

fn to_value<T: Serialize>(r: &T) -> Result<Value, Failure> {
    serde_json::to_value(r).map_err(domain)
}

fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Solve(a) => {
            let g = load_graph(&a.graph)?;
            let p = SdpProblem::maxcut(&g);
            let sol = run_solver(&p, &a.solver)?;
            let rank = rank_report(&sol, a.solver.rank_tol);
            let optimality = check_optimality(&p, &sol.x, &sol.s, a.check_tol).map_err(domain)?;
            let cut = if rank.rank_x == 1 {
                recover_cut_if_rank1(&sol, a.solver.rank_tol)
            } else {
                None
            };
            let brute_force = small_brute_force(&g)?;
            let report = SolveReport {
                graph: g,
                status: sol.status,
                primal_value: sol.primal_value,
                dual_value: sol.dual_value,
                gap: sol.gap,
                iterations: sol.iterations,
                rank,
                optimality,
                cut,
                brute_force,
                x: sol.x,
                y: sol.y,
                s: sol.s,
            };
            Ok((to_value(&report)?, None))
        }
        Command::AnalyzeCycle(a) => {
            let analysis = cycle_rank1_analysis(&a.weights).map_err(domain)?;
            let solver_rank = if a.verify {
                let g = maxcut_sdp::graph::weighted_cycle(&a.weights).map_err(domain)?;
                let sol = run_solver(&SdpProblem::maxcut(&g), &a.solver)?;
                Some(numerical_rank(&sol.x, a.solver.rank_tol))
            } else {
                None
            };
            Ok((
                to_value(&CycleReport {
                    weights: a.weights.clone(),
                    analysis,
                    solver_rank,
                })?,
                None,
            ))
        }
        Command::AnalyzeDiamond(a) => {
            let weights = match (&a.weights, &a.graph_file) {
                (Some(w), _) => {
                    if w.len() != 5 {
                        return Err(Failure::Usage(format!(
                            "a diamond has 5 edges, got {} weights",
                            w.len()
                        )));
                    }
                    DiamondWeights {
                        w01: w[0],
                        w02: w[1],
                        w12: w[2],
                        w13: w[3],
                        w23: w[4],
                    }
                }
                (None, Some(path)) => {
                    DiamondWeights::from_graph(&read_graph_file(path)?).map_err(domain)?
                }
                (None, None) => {
                    return Err(Failure::Usage(
                        "--weights or --graph-file is required".into(),
                    ))
                }
            };
            let g = weights.graph();
            let analysis = if a.condition_only {
                None
            } else {
                Some(diamond_analysis(&g).map_err(domain)?)
            };
            let report = DiamondReport {
                weights,
                condition_regime: weights.regime(),
                aligned_bound: weights.aligned_bound(),
                stated_aligned_bound: weights.stated_aligned_bound(),
                flipped_bound: weights.flipped_bound(),
                analysis,
                brute_force: brute_force_maxcut(&g).map_err(domain)?,
            };
            Ok((to_value(&report)?, None))
        }
        Command::ComposeVertexSum(a) => {
            let g1 = graph_from_spec(&a.g1, a.weights1.as_deref())?;
            let g2 = graph_from_spec(&a.g2, a.weights2.as_deref())?;
            let spec = CliqueSumSpec {
                g1: g1.clone(),
                g2: g2.clone(),
                map1: vec![g1.n() - 1],
                map2: vec![0],
            };
            let sum = vertex_sum(&spec).map_err(domain)?.graph;
            let s1 = run_solver(&SdpProblem::maxcut(&g1), &a.solver)?;
            let s2 = run_solver(&SdpProblem::maxcut(&g2), &a.solver)?;
            let c = compose_vertex_sum(&s1.x, &s1.s, &s2.x, &s2.s, a.check_tol, a.solver.rank_tol)
                .map_err(domain)?;
            let p = SdpProblem::maxcut(&sum);
            let optimality =
                check_optimality(&p, &c.x_composed, &c.s_composed, a.check_tol).map_err(domain)?;
            let low = vertex_sum_low_rank_completion(&s1.x, &s2.x, a.solver.rank_tol);
            let min_rank_optimality =
                check_optimality(&p, &low, &c.s_composed, a.check_tol).map_err(domain)?;
            let report = ComposeReport {
                graph: sum,
                rank_x1: c.rank_x1,
                rank_x2: c.rank_x2,
                rank_formula_value: c.rank_formula_value,
                rank_composed: numerical_rank(&c.x_composed, a.solver.rank_tol),
                optimality,
                min_rank: numerical_rank(&low, a.solver.rank_tol),
                min_rank_optimality,
                x_composed: c.x_composed,
                s_composed: c.s_composed,
            };
            Ok((to_value(&report)?, None))
        }
        Command::Sample(a) => {
            let mut cfg = SampleConfig::new(a.graph, a.mode, a.samples as usize, a.seed);
            cfg.solver_tol = a.tol;
            cfg.rank_tol = a.rank_tol;
            let report = distribution_report(&cfg).map_err(domain)?;
            let custom = Custom {
                csv: report.to_csv(),
                text: report.to_text(),
            };
            Ok((to_value(&report)?, Some(custom)))
        }
        Command::ProbeConjecture(a) => {
            if a.map1.len() != 2 || a.map2.len() != 2 {
                return Err(Failure::Usage(
                    "--map1 and --map2 must each name two vertices".into(),
                ));
            }
            let spec = CliqueSumSpec {
                g1: graph_from_spec(&a.g1, None)?,
                g2: graph_from_spec(&a.g2, None)?,
                map1: a.map1.clone(),
                map2: a.map2.clone(),
            };
            let report = probe_edge_sum_conjecture(&spec, a.mode, a.samples as usize, a.seed)
                .map_err(domain)?;
            Ok((to_value(&report)?, None))
        }
        Command::Round(a) => {
            let g = load_graph(&a.graph)?;
            let sol = run_solver(&SdpProblem::maxcut(&g), &a.solver)?;
            let cut = gw_round(&g, &sol, a.trials as usize, a.seed).map_err(domain)?;
            let brute_force = small_brute_force(&g)?;
            let ratio = brute_force
                .as_ref()
                .filter(|b| b.value > 0.0)
                .map(|b| cut.value / b.value);
            let report = RoundReport {
                sdp_value: sdp_value(&g, &sol),
                graph: g,
                trials: a.trials as usize,
                seed: a.seed,
                cut,
                brute_force,
                ratio,
            };
            Ok((to_value(&report)?, None))
        }
    }
}

fn run_solver(p: &SdpProblem, a: &SolverArgs) -> Result<SdpSolution, Failure> {
    let sol = solve(p, a.tol, a.max_iter).map_err(domain)?;
    if !sol.converged() {
        return Err(Failure::Domain(format!(
            "solver stopped with status {:?} after {} iterations (gap {:e})",
            sol.status, sol.iterations, sol.gap
        )));
    }
    Ok(sol)
}

fn small_brute_force(g: &WeightedGraph) -> Result<Option<CutResult>, Failure> {
    if g.n() <= REPORT_BRUTE_FORCE_MAX_N {
        brute_force_maxcut(g).map(Some).map_err(domain)
    } else {
        Ok(None)
    }
}

fn read_graph_file(path: &Path) -> Result<WeightedGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    WeightedGraph::from_json_str(&text)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

/// A graph name, or failing that a path to a graph JSON file.
fn graph_from_spec(spec: &str, weights: Option<&[f64]>) -> Result<WeightedGraph, Failure> {
    let g = match NamedGraph::from_str(spec) {
        Ok(named) => named.build(None).map_err(domain)?,
        Err(_) if Path::new(spec).exists() => read_graph_file(Path::new(spec))?,
        Err(e) => return Err(Failure::Domain(format!("{e}, and no file of that name"))),
    };
    match weights {
        Some(w) => g.with_weights(w).map_err(domain),
        None => Ok(g),
    }
}

fn load_graph(a: &GraphArgs) -> Result<WeightedGraph, Failure> {
    match (&a.graph, &a.graph_file) {
        (Some(spec), _) => graph_from_spec(spec, a.weights.as_deref()),
        (None, Some(path)) => {
            let g = read_graph_file(path)?;
            match &a.weights {
                Some(w) => g.with_weights(w).map_err(domain),
                None => Ok(g),
            }
        }
        (None, None) => Err(Failure::Usage("--graph or --graph-file is required".into())),
    }
}

// ---------------------------------------------------------------------------
// Rendering

fn render(value: &Value, custom: Option<&Custom>, format: Format) -> String {
    match (format, custom) {
        (Format::Json, _) => {
            let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
            s.push('\n');
            s
        }
        (Format::Csv, Some(c)) => c.csv.clone(),
        (Format::Text, Some(c)) => c.text.clone(),
        (Format::Csv, None) => {
            let mut out = String::from("field,value\n");
            for (k, v) in flatten(value) {
                out.push_str(&format!("{k},{v}\n"));
            }
            out
        }
        (Format::Text, None) => {
            let rows = flatten(value);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter()
                .map(|(k, v)| format!("{k:width$}  {}\n", v.replace(';', " ")))
                .collect()
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Dotted paths to leaves. Arrays of scalars become one `;`-joined value.
fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => {
                for (k, child) in m {
                    go(&key(k), child, out);
                }
            }
            Value::Array(items) => {
                let flat: Option<Vec<String>> = items.iter().map(scalar).collect();
                match flat {
                    Some(parts) => out.push((prefix.to_string(), parts.join(";"))),
                    None => {
                        for (i, child) in items.iter().enumerate() {
                            go(&key(&i.to_string()), child, out);
                        }
                    }
                }
            }
            leaf => out.push((prefix.to_string(), scalar(leaf).unwrap_or_default())),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}
