//! Value types shared by the ordering algorithms, the simulator and the oracles.

use std::fmt;

use crate::error::{Error, Result};
use crate::gain::{BidModel, PaperGain, ReviewerGain};

/// Reviewer-by-paper similarity scores in `[0, 1]`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    d: usize,
    scores: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        validate_matrix(rows)
    }

    /// Builds from a flat row-major buffer of length `n * d`.
    pub fn from_flat(n: usize, d: usize, scores: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::EmptyMatrix);
        }
        if scores.len() != n * d {
            return Err(Error::DimensionMismatch { what: "flat score buffer", expected: n * d, found: scores.len() });
        }
        for (idx, &value) in scores.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange { row: idx / d, col: idx % d, value });
            }
        }
        Ok(Self { n, d, scores })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, reviewer: usize) -> &[f64] {
        &self.scores[reviewer * self.d..(reviewer + 1) * self.d]
    }

    pub fn get(&self, reviewer: usize, paper: usize) -> f64 {
        self.scores[reviewer * self.d + paper]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.scores.chunks_exact(self.d)
    }

    /// New matrix whose row `k` is row `order[k]` of `self`.
    pub fn select_rows(&self, order: &[usize]) -> Self {
        let mut scores = Vec::with_capacity(order.len() * self.d);
        for &r in order {
            scores.extend_from_slice(self.row(r));
        }
        Self { n: order.len(), d: self.d, scores }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }
}

pub fn validate_matrix(raw: Vec<Vec<f64>>) -> Result<SimilarityMatrix> {
    let n = raw.len();
    let d = raw.first().map_or(0, Vec::len);
    if n == 0 || d == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut scores = Vec::with_capacity(n * d);
    for (row, values) in raw.into_iter().enumerate() {
        if values.len() != d {
            return Err(Error::RaggedRows { row, expected: d, found: values.len() });
        }
        scores.extend(values);
    }
    SimilarityMatrix::from_flat(n, d, scores)
}

/// A permutation of papers: `position(j)` is the 1-based display rank of paper `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PaperOrdering {
    positions: Vec<usize>,
}

impl PaperOrdering {
    pub fn identity(d: usize) -> Self {
        Self { positions: (1..=d).collect() }
    }

    pub fn from_positions(positions: Vec<usize>) -> Result<Self> {
        let d = positions.len();
        let mut seen = vec![false; d];
        for &p in &positions {
            if p == 0 || p > d || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::config(format!("positions {positions:?} are not a permutation of 1..={d}")));
            }
        }
        Ok(Self { positions })
    }

    /// From a ranking: `ranking[k]` is the 0-based paper shown at position `k + 1`.
    pub fn from_ranking(ranking: &[usize]) -> Result<Self> {
        let d = ranking.len();
        let mut positions = vec![0; d];
        for (k, &paper) in ranking.iter().enumerate() {
            if paper >= d || positions[paper] != 0 {
                return Err(Error::config(format!("ranking {ranking:?} is not a permutation of 0..{d}")));
            }
            positions[paper] = k + 1;
        }
        Ok(Self { positions })
    }

    pub(crate) fn from_ranking_unchecked(ranking: &[usize]) -> Self {
        let mut positions = vec![0; ranking.len()];
        for (k, &paper) in ranking.iter().enumerate() {
            positions[paper] = k + 1;
        }
        Self { positions }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, paper: usize) -> usize {
        self.positions[paper]
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// 0-based papers in display order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut ranking = vec![0; self.positions.len()];
        for (paper, &p) in self.positions.iter().enumerate() {
            ranking[p - 1] = paper;
        }
        ranking
    }
}

/// Comma-separated 1-based positions, e.g. `2,1,3`.
impl fmt::Display for PaperOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.positions.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Bids received so far by each paper.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BidState {
    pub counts: Vec<u32>,
}

impl BidState {
    pub fn zeros(d: usize) -> Self {
        Self { counts: vec![0; d] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn apply(&mut self, bids: &[bool]) {
        debug_assert_eq!(bids.len(), self.counts.len());
        for (c, &b) in self.counts.iter_mut().zip(bids) {
            *c += u32::from(b);
        }
    }
}

/// Estimated number of future bids per paper.
#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicVector {
    pub values: Vec<f64>,
}

impl HeuristicVector {
    pub fn zeros(d: usize) -> Self {
        Self { values: vec![0.0; d] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HeuristicKind {
    #[default]
    Zero,
    Mean,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub paper_gain: PaperGain,
    pub reviewer_gain: ReviewerGain,
    pub bid_model: BidModel,
    pub lambda: f64,
    pub heuristic: HeuristicKind,
}

impl Default for ModelConfig {
    /// Capped(6) paper gain, log-discounted DCG, log-position bidding, lambda 0.8.
    fn default() -> Self {
        Self {
            paper_gain: PaperGain::Capped(6),
            reviewer_gain: ReviewerGain::DcgLog,
            bid_model: BidModel::LogPosition,
            lambda: 0.8,
            heuristic: HeuristicKind::Zero,
        }
    }
}

impl ModelConfig {
    pub fn new(paper_gain: PaperGain, reviewer_gain: ReviewerGain, bid_model: BidModel, lambda: f64) -> Self {
        Self { paper_gain, reviewer_gain, bid_model, lambda, heuristic: HeuristicKind::Zero }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_heuristic(mut self, heuristic: HeuristicKind) -> Self {
        self.heuristic = heuristic;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::config(format!("lambda must be a nonnegative number, got {}", self.lambda)));
        }
        self.paper_gain.validate()?;
        self.bid_model.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HistoryEntry {
    /// Row index of the reviewer in the matrix the run was given.
    pub reviewer: usize,
    pub ordering: PaperOrdering,
    pub bids: Vec<bool>,
    /// Number of papers actually shown; positions beyond it were not displayed.
    pub shown: usize,
}

/// Orderings shown and bids observed, one entry per arrived reviewer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct History {
    pub entries: Vec<HistoryEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub total_gain: f64,
    pub paper_gain: f64,
    pub reviewer_gain: f64,
    pub final_bids: BidState,
    pub histogram: [usize; 4],
}
