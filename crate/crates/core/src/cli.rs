//! Command-line front end: `generate`, `order`, `experiment`, `verify` and `bench`.
//!
//! Exit codes: 0 success, 1 failed verification, 2 bad usage or parameters, 3 I/O failure.

use std::ffi::OsString;
use std::fs;
use std::hint::black_box;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::csvio::{read_counts, save_labels, save_matrix};
use crate::error::{Error, Result};
use crate::gain::{BidModel, PaperGain, ReviewerGain};
use crate::generators::{
    gen_community, gen_community_preset, gen_homogeneous, gen_interdisciplinary, gen_lowrank, gen_worstcase_bid,
    gen_worstcase_sim, load_similarity_csv, CommunityConfig, WorstCaseConfig,
};
use crate::oracle::expected_immediate_gain;
use crate::policy::{Algorithm, AlgorithmPolicy, Policy};
use crate::rng::{SeedStreams, Stream};
use crate::simulator::{run_experiment, Experiment, MatrixSource, MeanSem, Scenario};
use crate::superstar::{find_paper_order, zero_heuristic, PathChoice};
use crate::types::{HeuristicKind, ModelConfig, SimilarityMatrix};
use crate::verify::{all_passed, run_suite, Suite, VerifyParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "superstar", version, about = "Paper orderings for peer-review bidding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports printed to stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic similarity matrix to CSV.
    Generate(GenerateArgs),
    /// Print the ordering one reviewer would be shown.
    Order(OrderArgs),
    /// Repeated simulations over algorithms and lambda values.
    Experiment(ExperimentArgs),
    /// Run a numerical verification suite.
    Verify(VerifyArgs),
    /// Time the general and efficient ordering paths.
    Bench(BenchArgs),
}

/// Model flags, named after the `ModelConfig` fields.
#[derive(Args, Debug, Clone)]
struct ModelArgs {
    #[arg(long = "paper-gain", default_value = "capped:6")]
    paper_gain: PaperGain,
    #[arg(long = "reviewer-gain", default_value = "dcg-log")]
    reviewer_gain: ReviewerGain,
    #[arg(long = "bid-model", default_value = "log-position")]
    bid_model: BidModel,
    #[arg(long, default_value_t = 0.8)]
    lambda: f64,
    /// Heuristic used by the `super` algorithm alias.
    #[arg(long, value_enum, default_value_t = HeuristicArg::Zero)]
    heuristic: HeuristicArg,
}

impl ModelArgs {
    fn config(&self) -> Result<ModelConfig> {
        let config = ModelConfig::new(self.paper_gain, self.reviewer_gain.clone(), self.bid_model.clone(), self.lambda)
            .with_heuristic(self.heuristic.into());
        config.validate()?;
        Ok(config)
    }

    /// Accepts the algorithm names plus `super`, which picks the heuristic from `--heuristic`.
    fn algorithm(&self, name: &str) -> Result<Algorithm> {
        match (name.trim(), self.heuristic) {
            ("super", HeuristicArg::Zero) => Ok(Algorithm::SuperZero),
            ("super", HeuristicArg::Mean) => Ok(Algorithm::SuperMean),
            (other, _) => other.parse(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HeuristicArg {
    Zero,
    Mean,
}

impl From<HeuristicArg> for HeuristicKind {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::Zero => HeuristicKind::Zero,
            HeuristicArg::Mean => HeuristicKind::Mean,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PathArg {
    Auto,
    General,
    Efficient,
}

impl From<PathArg> for PathChoice {
    fn from(p: PathArg) -> Self {
        match p {
            PathArg::Auto => PathChoice::Auto,
            PathArg::General => PathChoice::General,
            PathArg::Efficient => PathChoice::Efficient,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GeneratorKind {
    Homogeneous,
    Lowrank,
    Community,
    CommunityPreset,
    Interdisciplinary,
    WorstcaseSim,
    WorstcaseBid,
}

#[derive(Args, Debug)]
struct GeneratorArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 15.0)]
    beta: f64,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, default_value_t = 0.7)]
    s: f64,
    #[arg(long, default_value_t = 0.0)]
    xi: f64,
}

impl GeneratorArgs {
    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::config("this generator needs --n"))
    }

    fn d(&self) -> Result<usize> {
        self.d.ok_or_else(|| Error::config("this generator needs --d"))
    }

    fn community(&self) -> CommunityConfig {
        CommunityConfig { m: self.m, q: self.q, s: self.s, xi: self.xi }
    }

    fn source(&self, kind: GeneratorKind) -> Result<MatrixSource> {
        Ok(match kind {
            GeneratorKind::Homogeneous => {
                MatrixSource::Homogeneous { n: self.n()?, d: self.d()?, alpha: self.alpha, beta: self.beta }
            }
            GeneratorKind::Lowrank => MatrixSource::LowRank { n: self.n()?, d: self.d()? },
            GeneratorKind::Community => MatrixSource::Community(self.community()),
            GeneratorKind::CommunityPreset => MatrixSource::CommunityPreset { n: self.n()?, d: self.d()? },
            GeneratorKind::Interdisciplinary => MatrixSource::Interdisciplinary { n: self.n()?, d: self.d()? },
            GeneratorKind::WorstcaseSim | GeneratorKind::WorstcaseBid => {
                return Err(Error::config("worst-case instances are single reviewers and cannot drive an experiment"))
            }
        })
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GeneratorKind,
    #[command(flatten)]
    params: GeneratorArgs,
    /// Lambda for the worst-case similarity instance.
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Required for randomized generators.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Paper labels (1-based paper index, label) for community and interdisciplinary matrices.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Reviewer labels for community matrices.
    #[arg(long)]
    reviewer_labels: Option<PathBuf>,
    /// Bid counts for the worst-case instances; defaults to `<out>.bids.csv`.
    #[arg(long)]
    bids_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OrderArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// 1-based row of the reviewer.
    #[arg(long)]
    reviewer: usize,
    /// One row of bid counts per paper; all zero when omitted.
    #[arg(long)]
    bids: Option<PathBuf>,
    #[arg(long, default_value = "super")]
    algorithm: String,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value_t = PathArg::Auto)]
    path: PathArg,
    /// Breaks ties in baseline orderings; required only when ties occur.
    #[arg(long)]
    seed: Option<u64>,
    /// Also print the exact expected immediate gain of the ordering.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Similarity matrix CSV; mutually exclusive with --generator.
    #[arg(long, conflicts_with = "generator")]
    matrix: Option<PathBuf>,
    #[arg(long, value_enum)]
    generator: Option<GeneratorKind>,
    #[command(flatten)]
    params: GeneratorArgs,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', default_value = "super-zero,super-mean,sim,bid,rand")]
    algorithms: Vec<String>,
    #[arg(long, default_value = "faithful")]
    scenario: Scenario,
    /// Comma-separated lambda values; overrides --lambda.
    #[arg(long = "lambda-grid", value_delimiter = ',')]
    lambda_grid: Vec<f64>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 20)]
    runs: usize,
    #[arg(long)]
    seed: u64,
    /// Directory for `runs.csv` and `summary.json`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Largest paper count for random single-reviewer instances.
    #[arg(long, default_value_t = 7)]
    d: usize,
    /// Largest paper count for the worst-case gap sweep.
    #[arg(long, default_value_t = 64)]
    dmax: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    q: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    LocalOpt,
    PathEquiv,
    WorstcaseGaps,
    Community,
    LinearGain,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::LocalOpt => Suite::LocalOpt,
            SuiteArg::PathEquiv => Suite::PathEquiv,
            SuiteArg::WorstcaseGaps => Suite::WorstcaseGaps,
            SuiteArg::Community => Suite::Community,
            SuiteArg::LinearGain => Suite::LinearGain,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BenchPath {
    General,
    Efficient,
    Both,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long = "d-list", value_delimiter = ',', default_value = "1,10,100,500,1000,5000")]
    d_list: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BenchPath::Both)]
    path: BenchPath,
    /// The general path is skipped above this size.
    #[arg(long, default_value_t = 500)]
    general_max_d: usize,
    /// Minimum wall time spent per measurement.
    #[arg(long, default_value_t = 50)]
    min_time_ms: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut out = io::stdout().lock();
    match dispatch(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                EXIT_IO
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let format = cli.format;
    match cli.command {
        Command::Generate(args) => cmd_generate(&args, format, out),
        Command::Order(args) => cmd_order(&args, format, out),
        Command::Experiment(args) => cmd_experiment(&args, format, out),
        Command::Verify(args) => cmd_verify(&args, format, out),
        Command::Bench(args) => cmd_bench(&args, format, out),
    }
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::config(format!("{what} is randomized; pass --seed")))
}

fn default_bids_path(out: &Path) -> PathBuf {
    out.with_extension("bids.csv")
}

fn write_counts(counts: &[u32], path: &Path) -> Result<()> {
    let line: Vec<String> = counts.iter().map(u32::to_string).collect();
    fs::write(path, format!("{}\n", line.join(",")))?;
    Ok(())
}

#[derive(Serialize)]
struct GenerateReport {
    kind: String,
    n: usize,
    d: usize,
    matrix: String,
    labels: Option<String>,
    reviewer_labels: Option<String>,
    bids: Option<String>,
}

fn cmd_generate(args: &GenerateArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let p = &args.params;
    let rng = || -> Result<ChaCha8Rng> {
        let seed = require_seed(args.seed, "this generator")?;
        Ok(SeedStreams::new(seed).rng(Stream::Matrix, 0))
    };
    let mut paper_labels = None;
    let mut reviewer_labels = None;
    let mut bids = None;
    let matrix = match args.kind {
        GeneratorKind::Homogeneous => gen_homogeneous(p.n()?, p.d()?, p.alpha, p.beta, &mut rng()?)?,
        GeneratorKind::Lowrank => gen_lowrank(p.n()?, p.d()?, &mut rng()?)?,
        GeneratorKind::Community => {
            let inst = gen_community(&p.community(), &mut rng()?)?;
            paper_labels = Some(inst.paper_labels);
            reviewer_labels = Some(inst.reviewer_labels);
            inst.matrix
        }
        GeneratorKind::CommunityPreset => {
            let inst = gen_community_preset(p.n()?, p.d()?, &mut rng()?)?;
            paper_labels = Some(inst.paper_labels);
            reviewer_labels = Some(inst.reviewer_labels);
            inst.matrix
        }
        GeneratorKind::Interdisciplinary => {
            let (matrix, groups) = gen_interdisciplinary(p.n()?, p.d()?)?;
            paper_labels = Some(groups);
            matrix
        }
        GeneratorKind::WorstcaseSim | GeneratorKind::WorstcaseBid => {
            let inst = if args.kind == GeneratorKind::WorstcaseSim {
                gen_worstcase_sim(&WorstCaseConfig { d: p.d()?, lambda: args.lambda })?
            } else {
                gen_worstcase_bid(p.d()?)?
            };
            bids = Some(inst.bids.counts);
            SimilarityMatrix::from_rows(vec![inst.row])?
        }
    };

    save_matrix(&matrix, &args.out)?;
    let mut report = GenerateReport {
        kind: args.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default(),
        n: matrix.n(),
        d: matrix.d(),
        matrix: args.out.display().to_string(),
        labels: None,
        reviewer_labels: None,
        bids: None,
    };
    if let (Some(labels), Some(path)) = (&paper_labels, &args.labels) {
        save_labels(labels, path)?;
        report.labels = Some(path.display().to_string());
    }
    if let (Some(labels), Some(path)) = (&reviewer_labels, &args.reviewer_labels) {
        save_labels(labels, path)?;
        report.reviewer_labels = Some(path.display().to_string());
    }
    if let Some(counts) = &bids {
        let path = args.bids_out.clone().unwrap_or_else(|| default_bids_path(&args.out));
        write_counts(counts, &path)?;
        report.bids = Some(path.display().to_string());
    }

    match format {
        Format::Text => {
            writeln!(out, "wrote {}x{} matrix to {}", report.n, report.d, report.matrix)?;
            for (what, path) in
                [("labels", &report.labels), ("reviewer labels", &report.reviewer_labels), ("bids", &report.bids)]
            {
                if let Some(path) = path {
                    writeln!(out, "wrote {what} to {path}")?;
                }
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Csv => writeln!(out, "n,d\n{},{}", report.n, report.d)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OrderReport {
    algorithm: String,
    reviewer: usize,
    positions: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_immediate_gain: Option<f64>,
}

fn cmd_order(args: &OrderArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let config = args.model.config()?;
    let algorithm = args.model.algorithm(&args.algorithm)?;
    let matrix = load_similarity_csv(&args.matrix)?;
    let d = matrix.d();
    if args.reviewer == 0 || args.reviewer > matrix.n() {
        return Err(Error::config(format!("--reviewer must be in 1..={}, got {}", matrix.n(), args.reviewer)));
    }
    let reviewer = args.reviewer - 1;
    let bids = match &args.bids {
        Some(path) => read_counts(fs::File::open(path)?)?,
        None => vec![0; d],
    };
    if bids.len() != d {
        return Err(Error::DimensionMismatch { what: "bid counts", expected: d, found: bids.len() });
    }

    let policy = AlgorithmPolicy::new(algorithm, &matrix, &config).with_path(args.path.into());
    let ranking = policy.ranking(reviewer, reviewer, &bids)?;
    let ordering = if ranking.is_deterministic() {
        ranking.first()
    } else {
        let seed = require_seed(args.seed, "this ordering has ties and")?;
        ranking.sample(&mut SeedStreams::new(seed).rng(Stream::TieBreak, reviewer as u64))
    };
    let gain = args.oracle.then(|| expected_immediate_gain(&ordering, matrix.row(reviewer), &bids, &config));

    let report = OrderReport {
        algorithm: algorithm.name().to_string(),
        reviewer: args.reviewer,
        positions: ordering.positions().to_vec(),
        expected_immediate_gain: gain,
    };
    match format {
        Format::Text | Format::Csv => {
            writeln!(out, "{ordering}")?;
            if let Some(g) = gain {
                writeln!(out, "expected_immediate_gain,{g}")?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
    }
    Ok(EXIT_OK)
}

fn cmd_experiment(args: &ExperimentArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let config = args.model.config()?;
    let algorithms = args.algorithms.iter().map(|a| args.model.algorithm(a)).collect::<Result<Vec<_>>>()?;
    let source = match (&args.matrix, args.generator) {
        (Some(path), _) => MatrixSource::Fixed(load_similarity_csv(path)?),
        (None, Some(kind)) => args.params.source(kind)?,
        (None, None) => return Err(Error::config("pass --matrix or --generator")),
    };
    let lambda_grid = if args.lambda_grid.is_empty() { vec![config.lambda] } else { args.lambda_grid.clone() };
    let experiment = Experiment {
        source,
        algorithms,
        scenario: args.scenario.clone(),
        config,
        lambda_grid,
        runs: args.runs,
        seed: args.seed,
    };
    let report = run_experiment(&experiment)?;

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
        report.write_csv(fs::File::create(dir.join("runs.csv"))?)?;
        fs::write(dir.join("summary.json"), report.summary_json()? + "\n")?;
    }

    match format {
        Format::Json => writeln!(out, "{}", report.summary_json()?)?,
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(out);
            wtr.write_record([
                "algorithm",
                "lambda",
                "runs",
                "total_gain",
                "total_gain_sem",
                "paper_gain",
                "reviewer_gain",
            ])?;
            for s in &report.summary {
                wtr.write_record([
                    s.algorithm.clone(),
                    s.lambda.to_string(),
                    s.runs.to_string(),
                    s.total_gain.mean.to_string(),
                    s.total_gain.sem.map_or_else(String::new, |v| v.to_string()),
                    s.paper_gain.mean.to_string(),
                    s.reviewer_gain.mean.to_string(),
                ])?;
            }
            wtr.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "{:<11} {:>7} {:>22} {:>12} {:>13} {:>24}",
                "algorithm", "lambda", "total gain", "paper gain", "reviewer gain", "papers by bids 0-2/3-5/6-8/9+"
            )?;
            for s in &report.summary {
                let hist: Vec<String> = s.histogram.iter().map(|h| format!("{:.1}", h.mean)).collect();
                writeln!(
                    out,
                    "{:<11} {:>7} {:>22} {:>12.3} {:>13.3} {:>24}",
                    s.algorithm,
                    s.lambda,
                    fmt_mean_sem(&s.total_gain),
                    s.paper_gain.mean,
                    s.reviewer_gain.mean,
                    hist.join("/")
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn fmt_mean_sem(v: &MeanSem) -> String {
    match v.sem {
        Some(sem) => format!("{:.3} ± {:.3}", v.mean, sem),
        None => format!("{:.3}", v.mean),
    }
}

fn cmd_verify(args: &VerifyArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let params =
        VerifyParams { seed: args.seed, cases: args.cases, d_max: args.d, gap_d_max: args.dmax, m: args.m, q: args.q };
    let suite: Suite = args.suite.into();
    let checks = run_suite(suite, &params)?;
    match format {
        Format::Text => {
            for c in &checks {
                writeln!(out, "{}  {}  ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&checks)?)?,
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(out);
            for c in &checks {
                wtr.serialize(c)?;
            }
            wtr.flush()?;
        }
    }
    Ok(if all_passed(&checks) { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Clone, Debug, Serialize)]
struct BenchRow {
    path: &'static str,
    d: usize,
    seconds_per_reviewer: f64,
}

fn time_per_call(min_time: Duration, mut f: impl FnMut()) -> Duration {
    let start = Instant::now();
    let mut reps = 0u32;
    while reps == 0 || (start.elapsed() < min_time && reps < 100_000) {
        f();
        reps += 1;
    }
    start.elapsed() / reps
}

/// Least-squares slope of log(time) against log(d).
fn growth_exponent(points: &[(usize, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(d, t)| ((d as f64).ln(), t.ln())).collect();
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

// Growth below this size is dominated by constant overheads.
const GROWTH_MIN_D: usize = 100;

fn cmd_bench(args: &BenchArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    if args.d_list.contains(&0) {
        return Err(Error::config("--d-list entries must be positive"));
    }
    let config = ModelConfig::default();
    let min_time = Duration::from_millis(args.min_time_ms);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = Vec::new();
    for &d in &args.d_list {
        let row: Vec<f64> = (0..d).map(|_| rng.random()).collect();
        let bids: Vec<u32> = (0..d).map(|_| rng.random_range(0..=5)).collect();
        let h = zero_heuristic(d);
        let mut paths = Vec::new();
        if matches!(args.path, BenchPath::General | BenchPath::Both) && d <= args.general_max_d {
            paths.push(("general", PathChoice::General));
        }
        if matches!(args.path, BenchPath::Efficient | BenchPath::Both) {
            paths.push(("efficient", PathChoice::Efficient));
        }
        for (name, path) in paths {
            let t = time_per_call(min_time, || {
                black_box(
                    find_paper_order(black_box(&row), &bids, &h, &config, path).expect("default model decomposes"),
                );
            });
            rows.push(BenchRow { path: name, d, seconds_per_reviewer: t.as_secs_f64().max(1e-9) });
        }
    }

    let efficient: Vec<(usize, f64)> = rows
        .iter()
        .filter(|r| r.path == "efficient" && r.d >= GROWTH_MIN_D)
        .map(|r| (r.d, r.seconds_per_reviewer))
        .collect();
    let exponent = growth_exponent(&efficient);
    let subquadratic = exponent.is_none_or(|e| e < 2.0);

    match format {
        Format::Text => {
            writeln!(out, "{:<10} {:>8} {:>16}", "path", "d", "per reviewer")?;
            for r in &rows {
                writeln!(out, "{:<10} {:>8} {:>14.3e} s", r.path, r.d, r.seconds_per_reviewer)?;
            }
            match exponent {
                Some(e) => writeln!(
                    out,
                    "efficient growth exponent {e:.2} ({})",
                    if subquadratic { "subquadratic" } else { "NOT subquadratic" }
                )?,
                None => writeln!(out, "efficient growth exponent: needs two sizes >= {GROWTH_MIN_D}")?,
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct BenchReport<'a> {
                rows: &'a [BenchRow],
                efficient_growth_exponent: Option<f64>,
                subquadratic: bool,
            }
            let report = BenchReport { rows: &rows, efficient_growth_exponent: exponent, subquadratic };
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(out);
            for r in &rows {
                wtr.serialize(r)?;
            }
            wtr.flush()?;
        }
    }
    Ok(if subquadratic { EXIT_OK } else { EXIT_CHECK_FAILED })
}
