//! Sequential-arrival bidding simulation and the repeated-experiment driver.
//!
//! Randomness comes from [`SeedStreams`]: arrival slot `t` always reads its
//! bid coins from `(Bids, t)`, its tie-breaks from `(TieBreak, t)` and so
//! on, so two algorithms run under the same seed face the same coin flips
//! for every (reviewer, paper) decision.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gain::{bid_probability, reviewer_gain, BidModel};
use crate::generators::{
    gen_community, gen_community_preset, gen_homogeneous, gen_interdisciplinary, gen_lowrank, CommunityConfig,
};
use crate::policy::{Algorithm, AlgorithmPolicy, Policy};
use crate::rng::{SeedStreams, Stream};
use crate::types::{BidState, History, HistoryEntry, ModelConfig, PaperOrdering, SimilarityMatrix, SimulationResult};

/// Bids for one reviewer: paper `j` is bid on with probability `f(position(j), S_j)`.
///
/// Draws exactly one uniform per paper, in paper order.
pub fn sample_bids<R: Rng + ?Sized>(
    ordering: &PaperOrdering,
    row: &[f64],
    bid_model: &BidModel,
    rng: &mut R,
) -> Vec<bool> {
    let probs: Vec<f64> =
        row.iter().enumerate().map(|(j, &s)| bid_probability(bid_model, ordering.position(j), s)).collect();
    coin_flips(&probs, rng)
}

fn coin_flips<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Vec<bool> {
    probs.iter().map(|&p| rng.random::<f64>() < p.clamp(0.0, 1.0)).collect()
}

/// Lower bounds of the second, third and fourth histogram bins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HistogramBins(pub [u32; 3]);

impl Default for HistogramBins {
    /// `{0-2}, {3-5}, {6-8}, {9+}`.
    fn default() -> Self {
        HistogramBins([3, 6, 9])
    }
}

pub fn histogram(final_bids: &BidState) -> [usize; 4] {
    histogram_with(final_bids, HistogramBins::default())
}

pub fn histogram_with(final_bids: &BidState, bins: HistogramBins) -> [usize; 4] {
    let mut out = [0; 4];
    for &c in &final_bids.counts {
        out[bins.0.iter().filter(|&&edge| c >= edge).count()] += 1;
    }
    out
}

/// Departures from the idealized arrival-and-bidding model.
#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    Faithful,
    /// Orderings assume the configured bid model; bids follow this one.
    BidModelMismatch(BidModel),
    /// Bid probabilities use similarities perturbed by `N(0, sigma^2)`.
    SimilarityNoise(f64),
    /// Only the first `ceil(fraction * n)` reviewers arrive.
    PartialArrival(f64),
    /// Reviewers arrive in batches of `Poisson(rate)` and see the pre-batch bids.
    ConcurrentPoisson(f64),
    /// Each reviewer sees only a random `ceil(fraction * d)` papers.
    SearchSubset(f64),
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        match *self {
            Scenario::SimilarityNoise(sigma) if !(sigma >= 0.0 && sigma.is_finite()) => {
                bad(format!("sigma {sigma} must be >= 0"))
            }
            Scenario::PartialArrival(f) | Scenario::SearchSubset(f) if !(f > 0.0 && f <= 1.0) => {
                bad(format!("fraction {f} must lie in (0, 1]"))
            }
            Scenario::ConcurrentPoisson(rate) if !(rate > 0.0 && rate.is_finite()) => {
                bad(format!("rate {rate} must be > 0"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Faithful => write!(f, "faithful"),
            Scenario::BidModelMismatch(m) => write!(f, "mismatch:{m}"),
            Scenario::SimilarityNoise(s) => write!(f, "noise:{s}"),
            Scenario::PartialArrival(x) => write!(f, "partial:{x}"),
            Scenario::ConcurrentPoisson(r) => write!(f, "poisson:{r}"),
            Scenario::SearchSubset(x) => write!(f, "subset:{x}"),
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    /// `faithful`, `mismatch:<bid model>`, `noise:<sigma>`, `partial:<fraction>`,
    /// `poisson:<rate>` or `subset:<fraction>`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = s.split_once(':').unwrap_or((s, ""));
        let number =
            || param.parse::<f64>().map_err(|_| Error::InvalidScenario(format!("`{s}` needs a numeric parameter")));
        let scenario = match name {
            "faithful" => Scenario::Faithful,
            "mismatch" => {
                Scenario::BidModelMismatch(param.parse().map_err(|e: Error| Error::InvalidScenario(e.to_string()))?)
            }
            "noise" => Scenario::SimilarityNoise(number()?),
            "partial" => Scenario::PartialArrival(number()?),
            "poisson" => Scenario::ConcurrentPoisson(number()?),
            "subset" => Scenario::SearchSubset(number()?),
            _ => return Err(Error::InvalidScenario(format!("unknown scenario `{s}`"))),
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Batching {
    Sequential,
    Poisson(f64),
    #[cfg_attr(not(test), allow(dead_code))]
    Fixed(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Plan<'a> {
    pub sampling: &'a BidModel,
    pub noise_sigma: f64,
    pub arrivals: usize,
    pub subset_fraction: f64,
    pub batching: Batching,
}

impl<'a> Plan<'a> {
    pub fn new(scenario: &'a Scenario, config: &'a ModelConfig, n: usize) -> Result<Self> {
        scenario.validate()?;
        let mut plan = Plan {
            sampling: &config.bid_model,
            noise_sigma: 0.0,
            arrivals: n,
            subset_fraction: 1.0,
            batching: Batching::Sequential,
        };
        match scenario {
            Scenario::Faithful => {}
            Scenario::BidModelMismatch(actual) => plan.sampling = actual,
            Scenario::SimilarityNoise(sigma) => plan.noise_sigma = *sigma,
            Scenario::PartialArrival(f) => plan.arrivals = ceil_fraction(*f, n),
            Scenario::ConcurrentPoisson(rate) => plan.batching = Batching::Poisson(*rate),
            Scenario::SearchSubset(f) => plan.subset_fraction = *f,
        }
        Ok(plan)
    }
}

fn ceil_fraction(fraction: f64, total: usize) -> usize {
    ((fraction * total as f64).ceil() as usize).clamp(1, total)
}

/// Runs reviewers `0..plan.arrivals` of `matrix` in row order under `policy`.
pub(crate) fn simulate(
    matrix: &SimilarityMatrix,
    policy: &dyn Policy,
    config: &ModelConfig,
    plan: &Plan<'_>,
    streams: &SeedStreams,
) -> Result<(SimulationResult, History)> {
    let d = matrix.d();
    let mut bids = BidState::zeros(d);
    let mut history = History::default();
    let mut reviewer_total = 0.0;
    let mut batch_rng = streams.rng(Stream::Batch, 0);
    let poisson = match plan.batching {
        Batching::Poisson(rate) => Some(Poisson::new(rate).map_err(|e| Error::InvalidScenario(e.to_string()))?),
        _ => None,
    };
    let noise = if plan.noise_sigma > 0.0 {
        Some(Normal::new(0.0, plan.noise_sigma).map_err(|e| Error::InvalidScenario(e.to_string()))?)
    } else {
        None
    };
    let shown_count = ceil_fraction(plan.subset_fraction, d);

    let mut start = 0;
    while start < plan.arrivals {
        let size = match (plan.batching, &poisson) {
            (Batching::Sequential, _) => 1,
            (Batching::Fixed(k), _) => k.max(1),
            (Batching::Poisson(_), Some(dist)) => dist.sample(&mut batch_rng) as usize,
            (Batching::Poisson(_), None) => unreachable!("poisson distribution built above"),
        };
        if size == 0 {
            continue;
        }
        let end = (start + size).min(plan.arrivals);
        let mut batch_bids = Vec::with_capacity(end - start);
        for t in start..end {
            let row = matrix.row(t);
            let papers: Vec<usize> = if shown_count < d {
                let mut picked = index::sample(&mut streams.rng(Stream::Subset, t as u64), d, shown_count).into_vec();
                picked.sort_unstable();
                picked
            } else {
                (0..d).collect()
            };
            let tied = if shown_count < d {
                policy.ranking_subset(t, start, &bids.counts, &papers)?
            } else {
                policy.ranking(t, start, &bids.counts)?
            };
            let local = tied.sample(&mut streams.rng(Stream::TieBreak, t as u64));
            let mut ranking: Vec<usize> = local.ranking().into_iter().map(|k| papers[k]).collect();
            if shown_count < d {
                let mut hidden = vec![true; d];
                papers.iter().for_each(|&j| hidden[j] = false);
                ranking.extend((0..d).filter(|&j| hidden[j]));
            }
            let ordering = PaperOrdering::from_ranking_unchecked(&ranking);

            let perturbed: Option<Vec<f64>> = noise.map(|dist| {
                let mut rng = streams.rng(Stream::Noise, t as u64);
                row.iter().map(|&s| s + dist.sample(&mut rng)).collect()
            });
            let probs: Vec<f64> = (0..d)
                .map(|j| {
                    let pos = ordering.position(j);
                    if pos > shown_count {
                        return 0.0;
                    }
                    let s = perturbed.as_ref().map_or(row[j], |p| p[j]);
                    bid_probability(plan.sampling, pos, s)
                })
                .collect();
            let reviewer_bids = coin_flips(&probs, &mut streams.rng(Stream::Bids, t as u64));
            reviewer_total += shown_reviewer_gain(config, &ordering, row, shown_count);
            batch_bids.push(reviewer_bids.clone());
            history.entries.push(HistoryEntry { reviewer: t, ordering, bids: reviewer_bids, shown: shown_count });
        }
        for b in &batch_bids {
            bids.apply(b);
        }
        start = end;
    }

    let paper_total: f64 = bids.counts.iter().map(|&g| config.paper_gain.value(g as f64)).sum();
    let result = SimulationResult {
        total_gain: paper_total + config.lambda * reviewer_total,
        paper_gain: paper_total,
        reviewer_gain: reviewer_total,
        histogram: histogram(&bids),
        final_bids: bids,
    };
    Ok((result, history))
}

fn shown_reviewer_gain(config: &ModelConfig, ordering: &PaperOrdering, row: &[f64], shown: usize) -> f64 {
    row.iter()
        .enumerate()
        .filter(|&(j, _)| ordering.position(j) <= shown)
        .map(|(j, &s)| reviewer_gain(&config.reviewer_gain, ordering.position(j), s))
        .sum()
}

/// Recomputes total gain from final bids and a run's history.
pub fn recompute_total_gain(
    matrix: &SimilarityMatrix,
    config: &ModelConfig,
    final_bids: &BidState,
    history: &History,
) -> f64 {
    let paper: f64 = final_bids.counts.iter().map(|&g| config.paper_gain.value(g as f64)).sum();
    let reviewer: f64 =
        history.entries.iter().map(|e| shown_reviewer_gain(config, &e.ordering, matrix.row(e.reviewer), e.shown)).sum();
    paper + config.lambda * reviewer
}

/// One faithful run over the rows of `matrix` in order.
pub fn run_simulation(
    matrix: &SimilarityMatrix,
    algorithm: Algorithm,
    config: &ModelConfig,
    streams: &SeedStreams,
) -> Result<SimulationResult> {
    run_scenario(matrix, algorithm, &Scenario::Faithful, config, streams)
}

pub fn run_scenario(
    matrix: &SimilarityMatrix,
    algorithm: Algorithm,
    scenario: &Scenario,
    config: &ModelConfig,
    streams: &SeedStreams,
) -> Result<SimulationResult> {
    Ok(run_scenario_logged(matrix, algorithm, scenario, config, streams)?.0)
}

/// Like [`run_scenario`], also returning every ordering shown and every bid placed.
pub fn run_scenario_logged(
    matrix: &SimilarityMatrix,
    algorithm: Algorithm,
    scenario: &Scenario,
    config: &ModelConfig,
    streams: &SeedStreams,
) -> Result<(SimulationResult, History)> {
    config.validate()?;
    let policy = AlgorithmPolicy::new(algorithm, matrix, config);
    simulate_policy(matrix, &policy, config, scenario, streams)
}

/// Runs an arbitrary policy; gains are accounted with `config`.
pub fn simulate_policy(
    matrix: &SimilarityMatrix,
    policy: &dyn Policy,
    config: &ModelConfig,
    scenario: &Scenario,
    streams: &SeedStreams,
) -> Result<(SimulationResult, History)> {
    let plan = Plan::new(scenario, config, matrix.n())?;
    simulate(matrix, policy, config, &plan, streams)
}

/// Where each experiment repetition gets its similarity matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSource {
    Fixed(SimilarityMatrix),
    Homogeneous { n: usize, d: usize, alpha: f64, beta: f64 },
    LowRank { n: usize, d: usize },
    CommunityPreset { n: usize, d: usize },
    Community(CommunityConfig),
    Interdisciplinary { n: usize, d: usize },
}

impl MatrixSource {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SimilarityMatrix> {
        match self {
            MatrixSource::Fixed(m) => Ok(m.clone()),
            MatrixSource::Homogeneous { n, d, alpha, beta } => gen_homogeneous(*n, *d, *alpha, *beta, rng),
            MatrixSource::LowRank { n, d } => gen_lowrank(*n, *d, rng),
            MatrixSource::CommunityPreset { n, d } => Ok(gen_community_preset(*n, *d, rng)?.matrix),
            MatrixSource::Community(cfg) => Ok(gen_community(cfg, rng)?.matrix),
            MatrixSource::Interdisciplinary { n, d } => Ok(gen_interdisciplinary(*n, *d)?.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub source: MatrixSource,
    pub algorithms: Vec<Algorithm>,
    pub scenario: Scenario,
    /// Gain functions and bid model; `lambda` is overridden by each grid value.
    pub config: ModelConfig,
    pub lambda_grid: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub algorithm: String,
    pub lambda: f64,
    pub run: usize,
    pub total_gain: f64,
    pub paper_gain: f64,
    pub reviewer_gain: f64,
    pub hist_0_2: usize,
    pub hist_3_5: usize,
    pub hist_6_8: usize,
    pub hist_9_plus: usize,
}

impl ExperimentRow {
    pub fn histogram(&self) -> [usize; 4] {
        [self.hist_0_2, self.hist_3_5, self.hist_6_8, self.hist_9_plus]
    }
}

/// Mean and standard error of the mean; the error is absent for fewer than two samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanSem {
    pub mean: f64,
    pub sem: Option<f64>,
}

impl MeanSem {
    pub fn of(values: &[f64]) -> Self {
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let sem = (values.len() >= 2).then(|| {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
            (var / k).sqrt()
        });
        Self { mean, sem }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub algorithm: String,
    pub lambda: f64,
    pub runs: usize,
    pub total_gain: MeanSem,
    pub paper_gain: MeanSem,
    pub reviewer_gain: MeanSem,
    pub histogram: [MeanSem; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentReport {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        for row in &self.rows {
            wtr.serialize(row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary)?)
    }

    pub fn summary_for(&self, algorithm: Algorithm, lambda: f64) -> Option<&SummaryRow> {
        self.summary.iter().find(|s| s.algorithm == algorithm.name() && s.lambda == lambda)
    }

    pub fn rows_for(&self, algorithm: Algorithm, lambda: f64) -> impl Iterator<Item = &ExperimentRow> {
        self.rows.iter().filter(move |r| r.algorithm == algorithm.name() && r.lambda == lambda)
    }
}

/// Repeats the simulation `runs` times for every algorithm and lambda.
///
/// Repetition `r` draws its matrix and arrival order from child seed `r`, and
/// every algorithm and lambda in that repetition shares those streams. Runs
/// execute in parallel; output order is (algorithm, lambda, run).
pub fn run_experiment(exp: &Experiment) -> Result<ExperimentReport> {
    if exp.runs == 0 {
        return Err(Error::config("an experiment needs at least one run"));
    }
    if exp.algorithms.is_empty() || exp.lambda_grid.is_empty() {
        return Err(Error::config("an experiment needs at least one algorithm and one lambda"));
    }
    exp.scenario.validate()?;
    for &lambda in &exp.lambda_grid {
        exp.config.clone().with_lambda(lambda).validate()?;
    }
    let base = SeedStreams::new(exp.seed);
    let per_run: Vec<Vec<(usize, usize, ExperimentRow)>> = (0..exp.runs)
        .into_par_iter()
        .map(|run| -> Result<_> {
            let streams = base.child(run as u64);
            let drawn = exp.source.draw(&mut streams.rng(Stream::Matrix, 0))?;
            let mut order: Vec<usize> = (0..drawn.n()).collect();
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut streams.rng(Stream::Arrival, 0));
            let matrix = drawn.select_rows(&order);
            let mut out = Vec::new();
            for (ai, &alg) in exp.algorithms.iter().enumerate() {
                for (li, &lambda) in exp.lambda_grid.iter().enumerate() {
                    let config = exp.config.clone().with_lambda(lambda);
                    let res = run_scenario(&matrix, alg, &exp.scenario, &config, &streams)?;
                    out.push((ai, li, experiment_row(alg, lambda, run, &res)));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut keyed: Vec<(usize, usize, ExperimentRow)> = per_run.into_iter().flatten().collect();
    keyed.sort_by_key(|(ai, li, row)| (*ai, *li, row.run));
    let rows: Vec<ExperimentRow> = keyed.into_iter().map(|(_, _, r)| r).collect();

    let mut summary = Vec::new();
    for &alg in &exp.algorithms {
        for &lambda in &exp.lambda_grid {
            let group: Vec<&ExperimentRow> =
                rows.iter().filter(|r| r.algorithm == alg.name() && r.lambda == lambda).collect();
            let stat = |f: &dyn Fn(&ExperimentRow) -> f64| MeanSem::of(&group.iter().map(|r| f(r)).collect::<Vec<_>>());
            summary.push(SummaryRow {
                algorithm: alg.name().to_string(),
                lambda,
                runs: group.len(),
                total_gain: stat(&|r| r.total_gain),
                paper_gain: stat(&|r| r.paper_gain),
                reviewer_gain: stat(&|r| r.reviewer_gain),
                histogram: [0, 1, 2, 3].map(|b| stat(&|r| r.histogram()[b] as f64)),
            });
        }
    }
    Ok(ExperimentReport { rows, summary })
}

fn experiment_row(alg: Algorithm, lambda: f64, run: usize, res: &SimulationResult) -> ExperimentRow {
    ExperimentRow {
        algorithm: alg.name().to_string(),
        lambda,
        run,
        total_gain: res.total_gain,
        paper_gain: res.paper_gain,
        reviewer_gain: res.reviewer_gain,
        hist_0_2: res.histogram[0],
        hist_3_5: res.histogram[1],
        hist_6_8: res.histogram[2],
        hist_9_plus: res.histogram[3],
    }
}
