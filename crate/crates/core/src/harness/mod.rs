//! Command-line driver: one subcommand per library operation, a JSON
//! document per run, and an append-only JSONL run log.
//!
//! Exit statuses: 0 success (including computational failures reported as
//! `success: false`), 1 such a failure under `--strict` or an invalid
//! certificate in `validate`, 2 usage error, 3 bad input or internal error.

pub mod bench;

use std::ffi::OsString;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::absorbers::{build_absorbing_path, classify_all, AbsorberConfig};
use crate::discrepancy::{validate_certificate, Certificate, Spanning};
use crate::exact::{max_discrepancy_cycle, verify_small, Algorithm, Claim, Condition, CycleSearch, SolveOptions, VerifyOptions};
use crate::extremal::extremal_graph;
use crate::graph::{parse_graph, random_oriented, random_tournament, sample_with_sigma2, serialize_graph, OrientedGraph};
use crate::heuristic::{heuristic_max_discrepancy, HeuristicError, LocalSearchBudget};
use crate::pipeline::{run_pipeline, CoverMode, PipelineConfig};
use crate::tilings::{find_tiling, tiling_plan, TilingSearch, DEFAULT_NODE_LIMIT};
use bench::{run_bench, to_csv, BenchAlgorithm, BenchSpec, Family};

/// Environment variable naming the default run log.
pub const LOG_ENV: &str = "ORIDISC_LOG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "oridisc", version, about = "Hamilton-cycle discrepancy in oriented graphs")]
struct Cli {
    /// Print the JSON document instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Append a run record to this JSONL file (default: $ORIDISC_LOG).
    #[arg(long, global = true, value_name = "FILE")]
    log: Option<PathBuf>,
    /// Exit with status 1 when the result document has success = false.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Write an extremal graph and its parameter sidecar.
    GenExtremal(GenExtremalArgs),
    /// Write a seeded random oriented graph or tournament.
    GenRandom(GenRandomArgs),
    /// Exact maximum-discrepancy Hamilton cycle.
    SolveExact(SolveExactArgs),
    /// Construction plus local search.
    SolveHeur(SolveHeurArgs),
    /// Check a claim on every oriented graph of a given order.
    Verify(VerifyArgs),
    /// Tournament tiling plan and search.
    Tile(TileArgs),
    /// Classify vertices by absorber counts.
    AnalyzeAbsorbers(AnalyzeArgs),
    /// Build an absorbing path.
    BuildAbsorbing(BuildAbsorbingArgs),
    /// Run the staged construction.
    Pipeline(PipelineArgs),
    /// Benchmark table over an instance family.
    Bench(BenchArgs),
    /// Check a certificate against a graph.
    Validate(ValidateArgs),
}

#[derive(Debug, Args, Serialize)]
struct GenExtremalArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    h: usize,
    /// Graph file; the sidecar goes to FILE.params.json. Prints the graph when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct GenRandomArgs {
    #[arg(long)]
    n: usize,
    /// Probability that a pair is joined; the orientation is a fair coin.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Orient every pair (ignores --p).
    #[arg(long)]
    tournament: bool,
    /// Resample until sigma2 reaches this value.
    #[arg(long)]
    min_sigma2: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    max_attempts: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AlgoArg {
    Auto,
    Dp,
    Bb,
}

#[derive(Debug, Args, Serialize)]
struct SolveExactArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
    algo: AlgoArg,
    /// Branch-and-bound node budget.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Branch-and-bound time budget in milliseconds.
    #[arg(long)]
    time_limit_ms: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
struct SolveHeurArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Improving moves per restart.
    #[arg(long, default_value_t = 1_000_000)]
    moves: u64,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    /// `sigma2>=n` or `sigma2>=K`.
    #[arg(long, default_value = "sigma2>=n")]
    condition: String,
    /// `half-sigma2` (sigma_max >= ceil(sigma2/2)), `half-n` or `hamiltonian`.
    #[arg(long, default_value = "half-sigma2")]
    claim: String,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Permit n = 6.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug, Args, Serialize)]
struct TileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Plan for this sigma2 instead of the graph's own.
    #[arg(long)]
    sigma2: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: u64,
}

#[derive(Debug, Args, Serialize, Clone, Copy)]
struct AbsorberArgs {
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
}

impl AbsorberArgs {
    fn config(&self) -> AbsorberConfig {
        let d = AbsorberConfig::default();
        AbsorberConfig {
            alpha1: self.alpha1.unwrap_or(d.alpha1),
            alpha2: self.alpha2.unwrap_or(d.alpha2),
            eta: self.eta.unwrap_or(d.eta),
            mu: self.mu.unwrap_or(d.mu),
            tau: self.tau.unwrap_or(d.tau),
            connectors: d.connectors,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct AnalyzeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    absorbers: AbsorberArgs,
}

#[derive(Debug, Args, Serialize)]
struct BuildAbsorbingArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    absorbers: AbsorberArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CoverArg {
    Greedy,
    Tiling,
}

#[derive(Debug, Args, Serialize)]
struct PipelineArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = CoverArg::Greedy)]
    cover: CoverArg,
    /// Report failure instead of handing over to the heuristic.
    #[arg(long)]
    no_fallback: bool,
    #[command(flatten)]
    #[serde(flatten)]
    absorbers: AbsorberArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyArg {
    Extremal,
    RandomTournament,
    RandomP,
}

#[derive(Debug, Args, Serialize)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Extremal)]
    family: FamilyArg,
    /// Comma-separated sizes, or `start..=end:step`.
    #[arg(long, default_value = "10,12,14")]
    sizes: String,
    #[arg(long, default_value_t = 1)]
    instances: usize,
    /// Comma-separated subset of dp, bb, heuristic, pipeline.
    #[arg(long, default_value = "dp,bb")]
    algos: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability for random-p.
    #[arg(long, default_value_t = 0.7)]
    p: f64,
    /// Extremal family: target sigma2 as a multiple of n.
    #[arg(long, default_value_t = 1.2)]
    h_ratio: f64,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long)]
    time_limit_ms: Option<u64>,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Also write the table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ValidateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    cert: PathBuf,
    /// Accept a non-spanning path or cycle.
    #[arg(long)]
    partial: bool,
}

/// One line of the run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub command: String,
    /// Every parsed parameter, defaults included.
    pub params: Value,
    /// SHA-256 of the canonical serialisation of the input graph.
    pub input_digest: Option<String>,
    pub result: Value,
    pub wall_time_ms: u128,
    pub seed: Option<u64>,
}

impl RunRecord {
    /// The result with every `wall_time_ms` field removed. Two runs with the
    /// same parameters and input digest have equal comparable results.
    pub fn comparable_result(&self) -> Value {
        let mut v = self.result.clone();
        strip_timing(&mut v);
        v
    }
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_time_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

/// Hex SHA-256 of `serialize_graph(g)`.
pub fn graph_digest(g: &OrientedGraph) -> String {
    hex::encode(Sha256::digest(serialize_graph(g).as_bytes()))
}

/// Reads every record of a run log, failing on a truncated or malformed line.
pub fn read_log(path: &Path) -> Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if !text.is_empty() && !text.ends_with('\n') {
        bail!("{}: last record is not newline-terminated", path.display());
    }
    text.lines()
        .enumerate()
        .map(|(i, line)| serde_json::from_str(line).with_context(|| format!("{}:{}", path.display(), i + 1)))
        .collect()
}

fn append_record(path: &Path, record: &RunRecord) -> Result<()> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening log {}", path.display()))?;
    file.write_all(line.as_bytes())
        .with_context(|| format!("writing log {}", path.display()))
}

/// What a subcommand produced.
struct Outcome {
    summary: String,
    document: Value,
    success: bool,
    /// Printed instead of the summary when not in JSON mode (e.g. a graph).
    artifact: Option<String>,
    input_digest: Option<String>,
    seed: Option<u64>,
}

impl Outcome {
    fn new(summary: String, document: Value, success: bool) -> Self {
        Self {
            summary,
            document,
            success,
            artifact: None,
            input_digest: None,
            seed: None,
        }
    }

    fn input(mut self, g: &OrientedGraph) -> Self {
        self.input_digest = Some(graph_digest(g));
        self
    }

    fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit status. Documents go to `out`, diagnostics to `err`.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    let outcome = run_command(&cli.command)?;
    let wall_time_ms = started.elapsed().as_millis();
    check_embedded_certificates(&cli.command, &outcome)?;

    if cli.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&outcome.document)?)?;
    } else if let Some(artifact) = &outcome.artifact {
        out.write_all(artifact.as_bytes())?;
        writeln!(err, "{}", outcome.summary)?;
    } else {
        writeln!(out, "{}", outcome.summary)?;
    }

    let log = cli.log.clone().or_else(|| std::env::var_os(LOG_ENV).map(PathBuf::from));
    if let Some(path) = log {
        let params = serde_json::to_value(&cli.command)?;
        let record = RunRecord {
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            command: params["command"].as_str().unwrap_or_default().to_string(),
            params,
            input_digest: outcome.input_digest.clone(),
            result: outcome.document.clone(),
            wall_time_ms,
            seed: outcome.seed,
        };
        append_record(&path, &record)?;
    }

    Ok(match &cli.command {
        Command::Validate(_) if !outcome.success => EXIT_FAILURE,
        _ if cli.strict && !outcome.success => EXIT_FAILURE,
        _ => EXIT_OK,
    })
}

/// Re-validates every certificate in the document against the input graph.
fn check_embedded_certificates(command: &Command, outcome: &Outcome) -> Result<()> {
    let input = match command {
        Command::SolveExact(a) => &a.input,
        Command::SolveHeur(a) => &a.input,
        Command::BuildAbsorbing(a) => &a.input,
        Command::Pipeline(a) => &a.input,
        _ => return Ok(()),
    };
    let g = read_graph(input)?;
    let mut found = Vec::new();
    collect_certificates(&outcome.document, &mut found);
    for cert in found {
        let check = validate_certificate(&g, &cert, Spanning::NotRequired);
        if !check.valid {
            bail!("internal error: emitted certificate failed validation: {:?}", check.violations);
        }
    }
    Ok(())
}

fn collect_certificates(v: &Value, found: &mut Vec<Certificate>) {
    match v {
        Value::Object(map) => {
            if map.contains_key("sigma_plus") && map.contains_key("cycle") {
                if let Ok(cert) = serde_json::from_value::<Certificate>(v.clone()) {
                    found.push(cert);
                    return;
                }
            }
            map.values().for_each(|x| collect_certificates(x, found));
        }
        Value::Array(items) => items.iter().for_each(|x| collect_certificates(x, found)),
        _ => {}
    }
}

fn read_graph(path: &Path) -> Result<OrientedGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn with_success(mut doc: Value, success: bool) -> Value {
    if let Value::Object(map) = &mut doc {
        map.insert("success".into(), Value::Bool(success));
    }
    doc
}

fn sigma2_text(g: &OrientedGraph) -> String {
    g.sigma2().map_or("undefined".into(), |s| s.to_string())
}

fn run_command(command: &Command) -> Result<Outcome> {
    match command {
        Command::GenExtremal(a) => gen_extremal(a),
        Command::GenRandom(a) => gen_random(a),
        Command::SolveExact(a) => solve_exact(a),
        Command::SolveHeur(a) => solve_heur(a),
        Command::Verify(a) => verify(a),
        Command::Tile(a) => tile(a),
        Command::AnalyzeAbsorbers(a) => analyze(a),
        Command::BuildAbsorbing(a) => build_absorbing(a),
        Command::Pipeline(a) => pipeline(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Validate(a) => validate(a),
    }
}

fn gen_extremal(a: &GenExtremalArgs) -> Result<Outcome> {
    let (params, g) = extremal_graph(a.n, a.h)?;
    let sidecar = json!({
        "params": params,
        "predicted": { "sigma2": a.h, "sigma_max_upper": params.sigma_max_upper() },
    });
    let text = serialize_graph(&g);
    let mut doc = sidecar.clone();
    doc["edges"] = json!(g.edge_count());
    let summary = format!(
        "extremal graph {params}: {} edges, sigma2 = {}, sigma_max <= {}",
        g.edge_count(),
        a.h,
        params.sigma_max_upper()
    );
    let mut outcome = Outcome::new(summary, Value::Null, true);
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            let side = sidecar_path(path);
            write_file(&side, &serde_json::to_string_pretty(&sidecar)?)?;
            doc["graph_file"] = json!(path);
            doc["params_file"] = json!(side);
        }
        None => {
            doc["graph"] = json!(text);
            outcome.artifact = Some(text);
        }
    }
    outcome.document = with_success(doc, true);
    Ok(outcome.input(&g))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".params.json");
    PathBuf::from(s)
}

fn gen_random(a: &GenRandomArgs) -> Result<Outcome> {
    let p = if a.tournament { 1.0 } else { a.p };
    let (g, attempts) = match a.min_sigma2 {
        Some(t) => match sample_with_sigma2(a.n, p, t, a.seed, a.max_attempts)? {
            Ok(s) => (s.graph, s.attempts),
            Err(f) => {
                let doc = json!({ "n": a.n, "p": p, "seed": a.seed, "min_sigma2": t, "failure": f });
                let summary = format!(
                    "no sample reached sigma2 >= {t} in {} attempts (best {:?})",
                    f.attempts, f.best_sigma2
                );
                return Ok(Outcome::new(summary, with_success(doc, false), false).seed(a.seed));
            }
        },
        None if a.tournament => (random_tournament(a.n, a.seed), 1),
        None => (random_oriented(a.n, p, a.seed)?, 1),
    };
    let text = serialize_graph(&g);
    let mut doc = json!({
        "n": a.n, "p": p, "seed": a.seed, "attempts": attempts,
        "edges": g.edge_count(), "sigma2": g.sigma2().ok(),
    });
    let summary = format!(
        "random graph n = {} p = {p}: {} edges, sigma2 = {}, {attempts} attempt(s)",
        a.n,
        g.edge_count(),
        sigma2_text(&g)
    );
    let mut outcome = Outcome::new(summary, Value::Null, true);
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            doc["graph_file"] = json!(path);
        }
        None => {
            doc["graph"] = json!(text);
            outcome.artifact = Some(text);
        }
    }
    outcome.document = with_success(doc, true);
    Ok(outcome.input(&g).seed(a.seed))
}

fn solve_exact(a: &SolveExactArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    let opts = SolveOptions {
        algorithm: match a.algo {
            AlgoArg::Auto => Algorithm::Auto,
            AlgoArg::Dp => Algorithm::SubsetDp,
            AlgoArg::Bb => Algorithm::BranchAndBound,
        },
        node_limit: a.node_limit,
        time_limit: a.time_limit_ms.map(Duration::from_millis),
    };
    let result = max_discrepancy_cycle(&g, &opts)?;
    let (status, cert) = match &result.search {
        CycleSearch::Found(c) => ("found", Some(c.clone())),
        CycleSearch::NotHamiltonian => ("not-hamiltonian", None),
        CycleSearch::Undecided => ("undecided", None),
    };
    let success = cert.is_some();
    let summary = match &cert {
        Some(c) => format!(
            "{}: sigma_max = {} (sigma+ = {}, sigma- = {}){}, {} work units",
            algorithm_label(result.algorithm),
            c.sigma_max,
            c.sigma_plus,
            c.sigma_minus,
            if c.optimal { ", optimal" } else { ", limit reached" },
            result.work
        ),
        None => format!("{}: {status} after {} work units", algorithm_label(result.algorithm), result.work),
    };
    let doc = json!({
        "status": status,
        "algorithm": result.algorithm,
        "sigma2": g.sigma2().ok(),
        "work": result.work,
        "wall_time_ms": result.elapsed.as_millis(),
        "certificate": cert,
    });
    Ok(Outcome::new(summary, with_success(doc, success), success).input(&g))
}

fn algorithm_label(a: Algorithm) -> &'static str {
    match a {
        Algorithm::SubsetDp => "subset dp",
        Algorithm::BranchAndBound => "branch and bound",
        Algorithm::Auto => "auto",
    }
}

fn solve_heur(a: &SolveHeurArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    let budget = LocalSearchBudget {
        max_moves: a.moves,
        restarts: a.restarts,
        seed: a.seed,
    };
    match heuristic_max_discrepancy(&g, &budget) {
        Ok(res) => {
            let summary = format!(
                "heuristic: sigma_max = {} of n = {} (restart {}, {} restarts, {} moves)",
                res.certificate.sigma_max,
                g.n(),
                res.best_restart,
                res.restarts_run,
                res.moves
            );
            let doc = serde_json::to_value(&res)?;
            Ok(Outcome::new(summary, with_success(doc, true), true).input(&g).seed(a.seed))
        }
        Err(HeuristicError::NoCycle { restarts, last }) => {
            let doc = json!({ "restarts": restarts, "last_failure": last });
            let summary = format!("heuristic found no Hamilton cycle in {restarts} restarts ({last:?})");
            Ok(Outcome::new(summary, with_success(doc, false), false).input(&g).seed(a.seed))
        }
        Err(e) => Err(e.into()),
    }
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let condition: Condition = a.condition.parse().map_err(anyhow::Error::msg)?;
    let claim: Claim = a.claim.parse().map_err(anyhow::Error::msg)?;
    let opts = VerifyOptions {
        parallel: a.parallel,
        allow_large: a.allow_large,
    };
    let report = verify_small(a.n, condition, claim, &opts)?;
    let summary = format!(
        "n = {}, {condition}, claim {claim}: {} graphs scanned, {} meet the condition, {} counterexample(s)",
        report.n,
        report.graphs_scanned,
        report.graphs_meeting_condition,
        report.counterexamples.len()
    );
    let success = report.holds();
    let doc = serde_json::to_value(&report)?;
    Ok(Outcome::new(summary, with_success(doc, success), success))
}

fn tile(a: &TileArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    let sigma2 = match a.sigma2 {
        Some(s) => s,
        None => g.sigma2()?,
    };
    let plan = match tiling_plan(g.n(), sigma2) {
        Ok(plan) => plan,
        Err(e) => {
            let doc = json!({ "n": g.n(), "sigma2": sigma2, "plan": null, "error": e.to_string() });
            return Ok(Outcome::new(format!("no tiling plan: {e}"), with_success(doc, false), false).input(&g));
        }
    };
    let search = find_tiling(&g, &plan, a.node_limit)?;
    let (success, summary) = match &search {
        TilingSearch::Found(cert) => {
            cert.validate(&g, &plan)
                .map_err(|v| anyhow::anyhow!("internal error: tiling failed validation: {v}"))?;
            (true, format!("plan {plan}: found {} tiles", cert.tiles.len()))
        }
        TilingSearch::NotFound { nodes, exhausted } => (
            false,
            format!(
                "plan {plan}: no tiling ({nodes} nodes, {})",
                if *exhausted { "search exhausted" } else { "node limit reached" }
            ),
        ),
    };
    let doc = json!({ "plan": plan, "search": search });
    Ok(Outcome::new(summary, with_success(doc, success), success).input(&g))
}

fn analyze(a: &AnalyzeArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    let report = classify_all(&g, &a.absorbers.config())?;
    let summary = format!(
        "n = {}, sigma2 = {}: {} strong, {} weak, {} neither (degree condition {})",
        report.n,
        sigma2_text(&g),
        report.strong,
        report.weak,
        report.neither,
        if report.meets_degree_condition { "met" } else { "not met" }
    );
    let doc = serde_json::to_value(&report)?;
    Ok(Outcome::new(summary, with_success(doc, true), true).input(&g))
}

fn build_absorbing(a: &BuildAbsorbingArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    match build_absorbing_path(&g, &a.absorbers.config(), a.seed) {
        Ok(path) => {
            let summary = format!(
                "absorbing path: {} vertices (budget {}), {} gadgets ({} strong), {} warning(s)",
                path.path.len(),
                path.budget,
                path.gadgets.len(),
                path.strong_gadgets(),
                path.warnings.len()
            );
            let doc = serde_json::to_value(&path)?;
            Ok(Outcome::new(summary, with_success(doc, true), true).input(&g).seed(a.seed))
        }
        Err(e @ crate::absorbers::AbsorberError::InvalidConfig(_)) => Err(e.into()),
        Err(e) => {
            let doc = json!({ "error": e });
            Ok(Outcome::new(format!("absorbing path failed: {e}"), with_success(doc, false), false)
                .input(&g)
                .seed(a.seed))
        }
    }
}

fn pipeline(a: &PipelineArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    let config = PipelineConfig {
        absorbers: a.absorbers.config(),
        cover: match a.cover {
            CoverArg::Greedy => CoverMode::Greedy,
            CoverArg::Tiling => CoverMode::Tiling,
        },
        fallback: !a.no_fallback,
        seed: a.seed,
        ..PipelineConfig::default()
    };
    let report = run_pipeline(&g, &config)?;
    let success = report.succeeded();
    let summary = match (&report.final_sigma_max, &report.failure) {
        (Some(v), failure) => format!(
            "pipeline: sigma_max = {v} (target {:.1}){}",
            report.target,
            match failure {
                Some(f) if report.fallback_used => format!(", via fallback after {:?} failed: {}", f.stage, f.message),
                _ => String::new(),
            }
        ),
        (None, Some(f)) => format!("pipeline failed at {:?}: {}", f.stage, f.message),
        (None, None) => "pipeline produced no cycle".to_string(),
    };
    let doc = serde_json::to_value(&report)?;
    Ok(Outcome::new(summary, with_success(doc, success), success).input(&g).seed(a.seed))
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    if let Some((range, step)) = s.split_once(':') {
        let (lo, hi) = range
            .split_once("..=")
            .with_context(|| format!("expected start..=end:step, got {s:?}"))?;
        let (lo, hi, step): (usize, usize, usize) = (lo.trim().parse()?, hi.trim().parse()?, step.trim().parse()?);
        if step == 0 || lo > hi {
            bail!("empty size range {s:?}");
        }
        return Ok((lo..=hi).step_by(step).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().with_context(|| format!("invalid size {x:?}")))
        .collect()
}

fn bench_cmd(a: &BenchArgs) -> Result<Outcome> {
    let algorithms = a
        .algos
        .split(',')
        .map(|s| s.parse::<BenchAlgorithm>().map_err(anyhow::Error::msg))
        .collect::<Result<Vec<_>>>()?;
    let spec = BenchSpec {
        family: match a.family {
            FamilyArg::Extremal => Family::Extremal { h_ratio: a.h_ratio },
            FamilyArg::RandomTournament => Family::RandomTournament,
            FamilyArg::RandomP => Family::RandomP { p: a.p },
        },
        sizes: parse_sizes(&a.sizes)?,
        instances: a.instances.max(1),
        algorithms,
        seed: a.seed,
        node_limit: a.node_limit,
        time_limit_ms: a.time_limit_ms,
        restarts: a.restarts,
        parallel: a.parallel,
    };
    if let Family::RandomP { p } = spec.family {
        if !(0.0..=1.0).contains(&p) {
            bail!("p = {p} is outside [0, 1]");
        }
    }
    let rows = run_bench(&spec);
    let csv = to_csv(&rows);
    if let Some(path) = &a.csv {
        write_file(path, &csv)?;
    }
    let flagged = rows.iter().filter(|r| r.status != bench::RowStatus::Ok).count();
    let doc = json!({ "spec": spec, "rows": rows, "flagged": flagged });
    Ok(Outcome::new(csv.trim_end().to_string(), with_success(doc, flagged == 0), flagged == 0).seed(a.seed))
}

fn validate(a: &ValidateArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?;
    let text = fs::read_to_string(&a.cert).with_context(|| format!("reading {}", a.cert.display()))?;
    let cert: Certificate = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.cert.display()))?;
    let spanning = if a.partial { Spanning::NotRequired } else { Spanning::Required };
    let check = validate_certificate(&g, &cert, spanning);
    let summary = if check.valid {
        format!("valid: sigma+ = {}, sigma- = {}, sigma_max = {}", cert.sigma_plus, cert.sigma_minus, cert.sigma_max)
    } else {
        let reasons: Vec<String> = check.violations.iter().map(|v| v.to_string()).collect();
        format!("invalid: {}", reasons.join("; "))
    };
    let doc = serde_json::to_value(&check)?;
    Ok(Outcome::new(summary, with_success(doc, check.valid), check.valid).input(&g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("oridisc").chain(args.iter().copied());
        let code = dispatch(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&["verify", "--n", "4", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(run(&[]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("solve-exact"));
    }

    #[test]
    fn bad_input_exits_3() {
        let (code, _, err) = run(&["solve-exact", "--in", "/nonexistent/graph.txt"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("reading"));
        assert_eq!(run(&["verify", "--n", "4", "--claim", "nonsense"]).0, EXIT_ERROR);
    }

    #[test]
    fn verify_n4_holds() {
        let (code, out, _) = run(&["verify", "--n", "4", "--claim", "half-sigma2", "--json"]);
        assert_eq!(code, EXIT_OK);
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["success"], true);
        assert_eq!(doc["counterexamples"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_sizes("10,12, 14").unwrap(), vec![10, 12, 14]);
        assert_eq!(parse_sizes("40..=200:40").unwrap(), vec![40, 80, 120, 160, 200]);
        assert!(parse_sizes("5..=1:1").is_err());
    }

    #[test]
    fn timing_is_stripped_recursively() {
        let mut v = json!({ "a": 1, "wall_time_ms": 5, "rows": [{ "wall_time_ms": 3, "b": 2 }] });
        strip_timing(&mut v);
        assert_eq!(v, json!({ "a": 1, "rows": [{ "b": 2 }] }));
    }
}
