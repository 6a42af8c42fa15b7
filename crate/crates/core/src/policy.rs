//! A uniform interface over all ordering algorithms.
//!
//! A policy maps (reviewer, current bids) to a [`TiedRanking`]. Deterministic
//! algorithms return rankings without ties; the baselines return their tie
//! groups so both the simulator (which samples) and the oracle (which
//! averages exactly) can use the same code path.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{bid_ranking, rand_ranking, sim_ranking, TiedRanking};
use crate::error::{Error, Result};
use crate::superstar::{find_paper_order, zero_heuristic, MeanHeuristic, PathChoice};
use crate::types::{HeuristicVector, ModelConfig, SimilarityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    SuperZero,
    SuperMean,
    Sim,
    Bid,
    Rand,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::SuperZero, Algorithm::SuperMean, Algorithm::Sim, Algorithm::Bid, Algorithm::Rand];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SuperZero => "super-zero",
            Algorithm::SuperMean => "super-mean",
            Algorithm::Sim => "sim",
            Algorithm::Bid => "bid",
            Algorithm::Rand => "rand",
        }
    }

    pub fn is_super(self) -> bool {
        matches!(self, Algorithm::SuperZero | Algorithm::SuperMean)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            Error::config(format!("unknown algorithm `{s}` (expected one of super-zero, super-mean, sim, bid, rand)"))
        })
    }
}

/// Ranking of one reviewer's papers given the bid counts on those papers.
///
/// `row`, `bids` and `h` may be restricted to a subset of papers; the
/// returned ranking indexes into that subset.
pub fn rank(
    algorithm: Algorithm,
    row: &[f64],
    bids: &[u32],
    h: &HeuristicVector,
    config: &ModelConfig,
    path: PathChoice,
) -> Result<TiedRanking> {
    Ok(match algorithm {
        Algorithm::SuperZero | Algorithm::SuperMean => {
            TiedRanking::fixed(&find_paper_order(row, bids, h, config, path)?)
        }
        Algorithm::Sim => sim_ranking(row, bids),
        Algorithm::Bid => bid_ranking(bids, row),
        Algorithm::Rand => rand_ranking(row.len()),
    })
}

pub trait Policy: Sync {
    /// Ranking for the reviewer in row `reviewer`, when rows `first_pending..`
    /// have not yet had their bids recorded (`first_pending <= reviewer`).
    fn ranking(&self, reviewer: usize, first_pending: usize, bids: &[u32]) -> Result<TiedRanking>;

    /// Same, restricted to `papers` (sorted 0-based indices); the result indexes into `papers`.
    fn ranking_subset(
        &self,
        reviewer: usize,
        first_pending: usize,
        bids: &[u32],
        papers: &[usize],
    ) -> Result<TiedRanking>;
}

/// One of the five algorithms bound to a matrix and model configuration.
#[derive(Clone, Debug)]
pub struct AlgorithmPolicy<'a> {
    pub algorithm: Algorithm,
    pub matrix: &'a SimilarityMatrix,
    pub config: &'a ModelConfig,
    pub path: PathChoice,
    mean: Option<MeanHeuristic>,
}

impl<'a> AlgorithmPolicy<'a> {
    pub fn new(algorithm: Algorithm, matrix: &'a SimilarityMatrix, config: &'a ModelConfig) -> Self {
        let mean = (algorithm == Algorithm::SuperMean).then(|| MeanHeuristic::new(matrix, &config.bid_model));
        Self { algorithm, matrix, config, path: PathChoice::Auto, mean }
    }

    pub fn with_path(mut self, path: PathChoice) -> Self {
        self.path = path;
        self
    }

    pub fn heuristic(&self, reviewer: usize, first_pending: usize) -> HeuristicVector {
        match &self.mean {
            Some(mean) => mean.estimate_pending(reviewer, first_pending),
            None => zero_heuristic(self.matrix.d()),
        }
    }
}

impl Policy for AlgorithmPolicy<'_> {
    fn ranking(&self, reviewer: usize, first_pending: usize, bids: &[u32]) -> Result<TiedRanking> {
        let h = self.heuristic(reviewer, first_pending);
        rank(self.algorithm, self.matrix.row(reviewer), bids, &h, self.config, self.path)
    }

    fn ranking_subset(
        &self,
        reviewer: usize,
        first_pending: usize,
        bids: &[u32],
        papers: &[usize],
    ) -> Result<TiedRanking> {
        let full_row = self.matrix.row(reviewer);
        let h_full = self.heuristic(reviewer, first_pending);
        let row: Vec<f64> = papers.iter().map(|&j| full_row[j]).collect();
        let sub_bids: Vec<u32> = papers.iter().map(|&j| bids[j]).collect();
        let h = HeuristicVector { values: papers.iter().map(|&j| h_full.values[j]).collect() };
        rank(self.algorithm, &row, &sub_bids, &h, self.config, self.path)
    }
}
