//! Named numerical verification suites, each a list of pass/fail checks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gain::{BidModel, PaperGain, ReviewerGain};
use crate::generators::{gen_community, CommunityConfig};
use crate::oracle::{
    bid_gap_bound, brute_force_local, community_optimum_analytic, expected_immediate_gain, global_optimum_exact,
    policy_value_exact, rand_gap_bound, sim_gap_bound, worstcase_gaps,
};
use crate::policy::{Algorithm, AlgorithmPolicy};
use crate::superstar::{find_paper_order, zero_heuristic, MeanHeuristic, PathChoice};
use crate::types::{HeuristicVector, ModelConfig, SimilarityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    LocalOpt,
    PathEquiv,
    WorstcaseGaps,
    Community,
    LinearGain,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::LocalOpt, Suite::PathEquiv, Suite::WorstcaseGaps, Suite::Community, Suite::LinearGain];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LocalOpt => "local-opt",
            Suite::PathEquiv => "path-equiv",
            Suite::WorstcaseGaps => "worstcase-gaps",
            Suite::Community => "community",
            Suite::LinearGain => "linear-gain",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::config(format!("unknown suite `{s}`")))
    }
}

/// Size knobs shared by the suites; each suite reads the ones it needs.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyParams {
    pub seed: u64,
    /// Random instances for local-opt, path-equiv and linear-gain.
    pub cases: usize,
    /// Largest paper count for the random single-reviewer instances.
    pub d_max: usize,
    /// Largest paper count for the worst-case gap sweep.
    pub gap_d_max: usize,
    pub m: usize,
    pub q: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self { seed: 0, cases: 200, d_max: 7, gap_d_max: 64, m: 2, q: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<Vec<Check>> {
    match suite {
        Suite::LocalOpt => local_opt(params),
        Suite::PathEquiv => path_equiv(params),
        Suite::WorstcaseGaps => worstcase(params),
        Suite::Community => community(params),
        Suite::LinearGain => linear_gain(params),
    }
}

/// A random single-reviewer instance: uniform similarities, bids in 0..=5.
#[derive(Clone, Debug)]
pub struct LocalCase {
    pub row: Vec<f64>,
    pub bids: Vec<u32>,
    pub config: ModelConfig,
}

pub fn random_local_cases(cases: usize, d_max: usize, seed: u64) -> Vec<LocalCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambdas = [0.0, 0.5, 1.0, 2.0];
    (0..cases)
        .map(|_| {
            let d = rng.random_range(2..=d_max.max(2));
            LocalCase {
                row: (0..d).map(|_| rng.random::<f64>()).collect(),
                bids: (0..d).map(|_| rng.random_range(0..=5)).collect(),
                config: ModelConfig::new(
                    PaperGain::Sqrt,
                    ReviewerGain::DcgLog,
                    BidModel::LogPosition,
                    lambdas[rng.random_range(0..lambdas.len())],
                ),
            }
        })
        .collect()
}

fn local_opt(p: &VerifyParams) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for case in random_local_cases(p.cases, p.d_max, p.seed) {
        let h = zero_heuristic(case.row.len());
        let o = find_paper_order(&case.row, &case.bids, &h, &case.config, PathChoice::Auto)?;
        let got = expected_immediate_gain(&o, &case.row, &case.bids, &case.config);
        let best = brute_force_local(&case.row, &case.bids, &case.config)?.1;
        worst = worst.max((best - got).abs());
    }
    Ok(vec![Check::new(
        format!("zero-heuristic ordering is locally optimal ({} cases, d <= {})", p.cases, p.d_max),
        worst <= 1e-9,
        format!("max |brute force - ordering| = {worst:.3e}"),
    )])
}

fn path_equiv(p: &VerifyParams) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for case in random_local_cases(p.cases, p.d_max, p.seed) {
        let h = zero_heuristic(case.row.len());
        let value = |path| -> Result<f64> {
            let o = find_paper_order(&case.row, &case.bids, &h, &case.config, path)?;
            Ok(expected_immediate_gain(&o, &case.row, &case.bids, &case.config))
        };
        worst = worst.max((value(PathChoice::General)? - value(PathChoice::Efficient)?).abs());
    }
    Ok(vec![Check::new(
        format!("general and efficient paths agree ({} cases)", p.cases),
        worst <= 1e-9,
        format!("max |difference| = {worst:.3e}"),
    )])
}

fn worstcase(p: &VerifyParams) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for lambda in [0.0, 1.0] {
        let mut failures = [Vec::new(), Vec::new(), Vec::new()];
        let mut min_ratio = [f64::INFINITY; 3];
        for d in 2..=p.gap_d_max {
            let g = worstcase_gaps(d, lambda)?;
            let pairs =
                [(g.sim, sim_gap_bound(d)), (g.bid, bid_gap_bound(d, lambda)), (g.rand, rand_gap_bound(d, lambda))];
            for (k, (gap, bound)) in pairs.into_iter().enumerate() {
                min_ratio[k] = min_ratio[k].min(gap / bound);
                if gap < bound {
                    failures[k].push(d);
                }
            }
        }
        for (k, name) in ["sim", "bid", "rand"].iter().enumerate() {
            checks.push(Check::new(
                format!("{name} gap >= bound for d in 2..={}, lambda = {lambda}", p.gap_d_max),
                failures[k].is_empty(),
                if failures[k].is_empty() {
                    format!("min gap/bound = {:.3}", min_ratio[k])
                } else {
                    format!("fails at d = {:?}", failures[k])
                },
            ));
        }
    }
    Ok(checks)
}

/// Threshold bidding, square-root paper gain, log-discounted DCG.
pub fn community_model(cfg: &CommunityConfig, lambda: f64) -> ModelConfig {
    ModelConfig::new(PaperGain::Sqrt, ReviewerGain::DcgLog, BidModel::ThresholdIndicator(cfg.s), lambda)
}

fn community(p: &VerifyParams) -> Result<Vec<Check>> {
    let cfg = CommunityConfig::noiseless(p.m, p.q, 0.7);
    let inst = gen_community(&cfg, &mut ChaCha8Rng::seed_from_u64(p.seed))?;
    let mq = cfg.size() as f64;
    let mut checks = Vec::new();
    for lambda in [0.0, 1.0] {
        let config = community_model(&cfg, lambda);
        let optimum = community_optimum_analytic(&cfg, lambda)?;
        let value = |alg| policy_value_exact(&inst.matrix, &AlgorithmPolicy::new(alg, &inst.matrix, &config), &config);
        for alg in [Algorithm::SuperZero, Algorithm::Sim] {
            let v = value(alg)?;
            checks.push(Check::new(
                format!("{alg} optimal on {}x{} community, lambda = {lambda}", p.m, p.q),
                (v - optimum).abs() <= 1e-9,
                format!("value {v:.9}, optimum {optimum:.9}"),
            ));
        }
        let bid = value(Algorithm::Bid)?;
        let bid_margin = lambda * mq / (3000.0 * mq.log2().powi(2));
        checks.push(Check::new(
            format!("bid suboptimal, lambda = {lambda}"),
            optimum - bid >= bid_margin,
            format!("gap {:.6} vs required {bid_margin:.6}", optimum - bid),
        ));
        let rand = value(Algorithm::Rand)?;
        checks.push(Check::new(
            format!("rand suboptimal, lambda = {lambda}"),
            optimum - rand >= mq / 2.0,
            format!("gap {:.6} vs required {:.6}", optimum - rand, mq / 2.0),
        ));
    }
    Ok(checks)
}

/// A tiny random matrix for exact evaluation.
pub fn random_tiny_matrix(rng: &mut impl Rng, n_max: usize, d_max: usize) -> SimilarityMatrix {
    let n = rng.random_range(1..=n_max);
    let d = rng.random_range(1..=d_max);
    let scores = (0..n * d).map(|_| rng.random::<f64>()).collect();
    SimilarityMatrix::from_flat(n, d, scores).expect("scores in [0, 1)")
}

fn linear_gain(p: &VerifyParams) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let cases = p.cases.max(1);
    let mut variant_orderings = 0usize;
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let matrix = random_tiny_matrix(&mut rng, 4, 3);
        let lambda = [0.0, 0.5, 1.0][rng.random_range(0..3)];
        let config = ModelConfig::new(PaperGain::Linear(1.0), ReviewerGain::DcgLog, BidModel::LogPosition, lambda);
        let d = matrix.d();
        let mean = MeanHeuristic::new(&matrix, &config.bid_model);
        for i in 0..matrix.n() {
            let row = matrix.row(i);
            let reference = find_paper_order(row, &vec![0; d], &zero_heuristic(d), &config, PathChoice::Auto)?;
            for _ in 0..5 {
                let bids: Vec<u32> = (0..d).map(|_| rng.random_range(0..=6)).collect();
                let noise = HeuristicVector { values: (0..d).map(|_| rng.random_range(0.0..3.0)).collect() };
                for h in [zero_heuristic(d), mean.estimate(i), noise] {
                    for path in [PathChoice::General, PathChoice::Efficient] {
                        if find_paper_order(row, &bids, &h, &config, path)? != reference {
                            variant_orderings += 1;
                        }
                    }
                }
            }
        }
        let policy = AlgorithmPolicy::new(Algorithm::SuperZero, &matrix, &config);
        let value = policy_value_exact(&matrix, &policy, &config)?;
        let optimum = global_optimum_exact(&matrix, &config)?;
        worst = worst.max((optimum - value).abs());
    }
    Ok(vec![
        Check::new(
            format!("orderings ignore bids and heuristic under linear paper gain ({cases} matrices)"),
            variant_orderings == 0,
            format!("{variant_orderings} differing orderings"),
        ),
        Check::new(
            format!("zero-heuristic policy attains the global optimum ({cases} matrices)"),
            worst <= 1e-9,
            format!("max |optimum - policy value| = {worst:.3e}"),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let params = VerifyParams { cases: 20, d_max: 5, gap_d_max: 12, ..VerifyParams::default() };
        for suite in Suite::ALL {
            let checks = run_suite(suite, &params).unwrap();
            assert!(all_passed(&checks), "{suite}: {checks:#?}");
        }
    }
}
