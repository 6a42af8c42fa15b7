//! Per-reviewer paper ordering that trades off spreading bids against relevance.
//!
//! For each arriving reviewer the ordering maximizes the expected one-step
//! gain given current bids plus a heuristic estimate of bids still to come.
//! The general path solves an assignment problem over (paper, position)
//! weights; when the bid model and reviewer gain share a position discount
//! the problem collapses to sorting one score per paper.

use std::cmp::Ordering;

use crate::assignment::{solve_assignment, WeightMatrix};
use crate::error::{Error, Result};
use crate::gain::{bid_probability, decompose, reviewer_gain, BidModel, Decomposition, PositionDecay};
use crate::types::{BidState, HeuristicKind, HeuristicVector, ModelConfig, PaperOrdering, SimilarityMatrix};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PathChoice {
    /// Efficient path when the model decomposes, general otherwise.
    #[default]
    Auto,
    General,
    Efficient,
}

pub fn zero_heuristic(d: usize) -> HeuristicVector {
    HeuristicVector::zeros(d)
}

/// Expected future bids per paper if every remaining reviewer saw a uniformly random ordering.
///
/// Precomputes, for each reviewer and paper, the bid probability averaged over
/// positions, then suffix sums over reviewers so each query is O(d).
#[derive(Clone, Debug)]
pub struct MeanHeuristic {
    n: usize,
    d: usize,
    // suffix[i * d + j] = sum over reviewers i' >= i of the position-averaged bid probability.
    suffix: Vec<f64>,
}

impl MeanHeuristic {
    pub fn new(matrix: &SimilarityMatrix, bid_model: &BidModel) -> Self {
        let (n, d) = (matrix.n(), matrix.d());
        let avg = position_average(bid_model, d);
        let mut suffix = vec![0.0; (n + 1) * d];
        for i in (0..n).rev() {
            let row = matrix.row(i);
            for j in 0..d {
                suffix[i * d + j] = suffix[(i + 1) * d + j] + avg(row[j]);
            }
        }
        Self { n, d, suffix }
    }

    /// Heuristic for the reviewer at row `reviewer`, counting rows after it as still to come.
    pub fn estimate(&self, reviewer: usize) -> HeuristicVector {
        self.estimate_pending(reviewer, reviewer)
    }

    /// Heuristic when rows `first_pending..` (other than `reviewer` itself) have
    /// not yet contributed bids, as for reviewers arriving in the same batch.
    pub fn estimate_pending(&self, reviewer: usize, first_pending: usize) -> HeuristicVector {
        debug_assert!(first_pending <= reviewer && reviewer < self.n);
        let d = self.d;
        let cap = (self.n - first_pending - 1) as f64;
        let values = (0..d)
            .map(|j| {
                if first_pending == reviewer {
                    return self.suffix[(reviewer + 1) * d + j].clamp(0.0, cap);
                }
                let own = self.suffix[reviewer * d + j] - self.suffix[(reviewer + 1) * d + j];
                (self.suffix[first_pending * d + j] - own).clamp(0.0, cap)
            })
            .collect();
        HeuristicVector { values }
    }
}

/// `s -> (1/d) * sum_k f(k, s)` for the given bid model.
fn position_average(bid_model: &BidModel, d: usize) -> Box<dyn Fn(f64) -> f64 + '_> {
    let decay_mean = |decay: PositionDecay| (1..=d).map(|k| decay.at(k)).sum::<f64>() / d as f64;
    match bid_model {
        BidModel::LogPosition => {
            let m = decay_mean(PositionDecay::InverseLog2);
            Box::new(move |s| s * m)
        }
        BidModel::SqrtPosition => {
            let m = decay_mean(PositionDecay::InverseSqrt);
            Box::new(move |s| s * m)
        }
        BidModel::ThresholdIndicator(_) => Box::new(move |s| bid_probability(bid_model, 1, s) / d as f64),
        BidModel::Tabulated(_) => {
            Box::new(move |s| (1..=d).map(|k| bid_probability(bid_model, k, s)).sum::<f64>() / d as f64)
        }
    }
}

fn check_lengths(row: &[f64], bids: &[u32], h: &HeuristicVector) -> Result<()> {
    let d = row.len();
    if bids.len() != d {
        return Err(Error::DimensionMismatch { what: "bid counts", expected: d, found: bids.len() });
    }
    if h.values.len() != d {
        return Err(Error::DimensionMismatch { what: "heuristic vector", expected: d, found: h.values.len() });
    }
    Ok(())
}

fn marginals<'a>(bids: &'a [u32], h: &'a HeuristicVector, config: &ModelConfig) -> impl Iterator<Item = f64> + 'a {
    let gain = config.paper_gain;
    bids.iter().zip(h.values.iter()).map(move |(&g, &hj)| gain.marginal(g as f64 + hj))
}

/// `w[j][k] = lambda * gamma_r(k, S_j) + f(k, S_j) * (gamma_p(g_j + h_j + 1) - gamma_p(g_j + h_j))`.
pub fn build_weight_matrix(
    row: &[f64],
    bids: &[u32],
    h: &HeuristicVector,
    config: &ModelConfig,
) -> Result<WeightMatrix> {
    check_lengths(row, bids, h)?;
    let d = row.len();
    let mut data = Vec::with_capacity(d * d);
    for (&s, m) in row.iter().zip(marginals(bids, h, config)) {
        for k in 1..=d {
            let w = config.lambda * reviewer_gain(&config.reviewer_gain, k, s)
                + bid_probability(&config.bid_model, k, s) * m;
            data.push(w);
        }
    }
    WeightMatrix::from_flat(d, data)
}

pub fn find_paper_order_general(
    row: &[f64],
    bids: &[u32],
    h: &HeuristicVector,
    config: &ModelConfig,
) -> Result<PaperOrdering> {
    let w = build_weight_matrix(row, bids, h, config)?;
    Ok(solve_assignment(&w).0)
}

fn decomposition(config: &ModelConfig) -> Result<Decomposition> {
    decompose(&config.bid_model, &config.reviewer_gain).ok_or(Error::NotDecomposable)
}

/// `alpha_j = f_s(S_j) * (gamma_p(g_j + h_j + 1) - gamma_p(g_j + h_j)) + lambda * gamma_s(S_j)`.
pub fn build_alpha_weights(row: &[f64], bids: &[u32], h: &HeuristicVector, config: &ModelConfig) -> Result<Vec<f64>> {
    check_lengths(row, bids, h)?;
    let dec = decomposition(config)?;
    Ok(row
        .iter()
        .zip(marginals(bids, h, config))
        .map(|(&s, m)| dec.bid_factor(s) * m + config.lambda * dec.reviewer_factor(s))
        .collect())
}

/// Papers by decreasing weight, ties to the lower paper index.
pub fn order_by_weight(alpha: &[f64]) -> PaperOrdering {
    let mut ranking: Vec<usize> = (0..alpha.len()).collect();
    ranking.sort_by(|&a, &b| alpha[b].partial_cmp(&alpha[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    PaperOrdering::from_ranking_unchecked(&ranking)
}

pub fn find_paper_order_efficient(
    row: &[f64],
    bids: &[u32],
    h: &HeuristicVector,
    config: &ModelConfig,
) -> Result<PaperOrdering> {
    Ok(order_by_weight(&build_alpha_weights(row, bids, h, config)?))
}

pub fn find_paper_order(
    row: &[f64],
    bids: &[u32],
    h: &HeuristicVector,
    config: &ModelConfig,
    path: PathChoice,
) -> Result<PaperOrdering> {
    let efficient = match path {
        PathChoice::Auto => decompose(&config.bid_model, &config.reviewer_gain).is_some(),
        PathChoice::General => false,
        PathChoice::Efficient => true,
    };
    if efficient {
        find_paper_order_efficient(row, bids, h, config)
    } else {
        find_paper_order_general(row, bids, h, config)
    }
}

/// Bids observed so far plus the full similarity matrix, from which orderings are drawn.
#[derive(Clone, Debug)]
pub struct SuperState {
    pub config: ModelConfig,
    pub matrix: SimilarityMatrix,
    pub bids: BidState,
    pub arrived: Vec<bool>,
    pub path: PathChoice,
    mean: Option<MeanHeuristic>,
}

impl SuperState {
    pub fn new(matrix: SimilarityMatrix, config: ModelConfig) -> Result<Self> {
        config.validate()?;
        let mean = match config.heuristic {
            HeuristicKind::Mean => Some(MeanHeuristic::new(&matrix, &config.bid_model)),
            HeuristicKind::Zero => None,
        };
        Ok(Self {
            bids: BidState::zeros(matrix.d()),
            arrived: vec![false; matrix.n()],
            path: PathChoice::Auto,
            config,
            matrix,
            mean,
        })
    }

    pub fn heuristic(&self, reviewer: usize) -> HeuristicVector {
        match &self.mean {
            Some(mean) => mean.estimate(reviewer),
            None => zero_heuristic(self.matrix.d()),
        }
    }

    /// Ordering for `reviewer` under the current bids. Does not change the state.
    pub fn super_step(&self, reviewer: usize) -> Result<PaperOrdering> {
        if reviewer >= self.matrix.n() {
            return Err(Error::config(format!("reviewer {reviewer} out of range for {} rows", self.matrix.n())));
        }
        if self.arrived[reviewer] {
            return Err(Error::config(format!("reviewer {reviewer} has already arrived")));
        }
        let h = self.heuristic(reviewer);
        find_paper_order(self.matrix.row(reviewer), &self.bids.counts, &h, &self.config, self.path)
    }

    pub fn record(&mut self, reviewer: usize, bids: &[bool]) {
        self.arrived[reviewer] = true;
        self.bids.apply(bids);
    }
}
