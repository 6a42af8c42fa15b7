//! Similarity-matrix generators: random synthetic structures, block
//! community models, and single-reviewer instances on which the baselines
//! do badly.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};
use crate::types::{BidState, SimilarityMatrix};

/// I.i.d. `Beta(alpha, beta)` scores.
pub fn gen_homogeneous<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    alpha: f64,
    beta: f64,
    rng: &mut R,
) -> Result<SimilarityMatrix> {
    let dist = Beta::new(alpha, beta).map_err(|e| Error::config(format!("Beta({alpha}, {beta}): {e}")))?;
    let scores = (0..n * d).map(|_| dist.sample(rng)).collect();
    SimilarityMatrix::from_flat(n, d, scores)
}

pub const LOWRANK_BLOCKS: usize = 10;

/// Ten equal blocks of identical reviewers; block `l` (1-based) has paper scores drawn from `Beta(l, 60)`.
pub fn gen_lowrank<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<SimilarityMatrix> {
    if n == 0 || !n.is_multiple_of(LOWRANK_BLOCKS) {
        return Err(Error::Divisibility { what: "reviewer count", value: n, divisor: LOWRANK_BLOCKS });
    }
    let per_block = n / LOWRANK_BLOCKS;
    let mut scores = Vec::with_capacity(n * d);
    for block in 1..=LOWRANK_BLOCKS {
        let dist = Beta::new(block as f64, 60.0).expect("positive shape parameters");
        let v: Vec<f64> = (0..d).map(|_| dist.sample(rng)).collect();
        for _ in 0..per_block {
            scores.extend_from_slice(&v);
        }
    }
    SimilarityMatrix::from_flat(n, d, scores)
}

/// `m` communities of `q` reviewers and `q` papers each, block similarity `s`, noise bound `xi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommunityConfig {
    pub m: usize,
    pub q: usize,
    pub s: f64,
    pub xi: f64,
}

impl CommunityConfig {
    pub fn noiseless(m: usize, q: usize, s: f64) -> Self {
        Self { m, q, s, xi: 0.0 }
    }

    pub fn size(&self) -> usize {
        self.m * self.q
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.q < 2 {
            return Err(Error::config(format!("community model needs m, q >= 2, got m={} q={}", self.m, self.q)));
        }
        if !(0.01..=1.0).contains(&self.s) {
            return Err(Error::config(format!("block similarity {} outside [0.01, 1]", self.s)));
        }
        if !(self.xi >= 0.0 && self.xi <= self.s / 2.0) {
            return Err(Error::config(format!("noise bound {} must lie in [0, s/2]", self.xi)));
        }
        Ok(())
    }

    /// Largest noise level for which near-optimality of the zero-heuristic ordering is guaranteed.
    pub fn noise_bound(m: usize, q: usize, lambda: f64) -> f64 {
        (-(std::f64::consts::E * (m * q) as f64)).exp() / (1.0 + lambda)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommunityInstance {
    pub matrix: SimilarityMatrix,
    /// Block of each reviewer (row).
    pub reviewer_labels: Vec<usize>,
    /// Block of each paper (column).
    pub paper_labels: Vec<usize>,
}

impl CommunityInstance {
    pub fn on_block(&self, reviewer: usize, paper: usize) -> bool {
        self.reviewer_labels[reviewer] == self.paper_labels[paper]
    }
}

fn shuffled_labels<R: Rng + ?Sized>(m: usize, q: usize, rng: &mut R) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..m * q).map(|i| i / q).collect();
    labels.shuffle(rng);
    labels
}

// Draws from the open interval (0, xi).
fn open_uniform<R: Rng + ?Sized>(xi: f64, rng: &mut R) -> f64 {
    loop {
        let v = rng.random_range(0.0..xi);
        if v > 0.0 {
            return v;
        }
    }
}

/// Block-diagonal `s` scores under random row and column permutations.
///
/// With `xi > 0`, on-block entries become `s - nu` and off-block entries `nu`,
/// with independent `nu ~ U(0, xi)`.
pub fn gen_community<R: Rng + ?Sized>(cfg: &CommunityConfig, rng: &mut R) -> Result<CommunityInstance> {
    cfg.validate()?;
    let size = cfg.size();
    let reviewer_labels = shuffled_labels(cfg.m, cfg.q, rng);
    let paper_labels = shuffled_labels(cfg.m, cfg.q, rng);
    let mut scores = Vec::with_capacity(size * size);
    for &rl in &reviewer_labels {
        for &pl in &paper_labels {
            let on = rl == pl;
            let value = if cfg.xi == 0.0 {
                if on {
                    cfg.s
                } else {
                    0.0
                }
            } else {
                let nu = open_uniform(cfg.xi, rng);
                if on {
                    cfg.s - nu
                } else {
                    nu
                }
            };
            scores.push(value);
        }
    }
    Ok(CommunityInstance { matrix: SimilarityMatrix::from_flat(size, size, scores)?, reviewer_labels, paper_labels })
}

/// Unpermuted block diagonal with square blocks of side `block`, plus `U[0, noise_max]` on every entry.
///
/// Scores are clipped to 1. Requires `n` and `d` divisible by `block`.
pub fn gen_community_additive<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    block: usize,
    s: f64,
    noise_max: f64,
    rng: &mut R,
) -> Result<CommunityInstance> {
    for (what, value) in [("reviewer count", n), ("paper count", d)] {
        if value == 0 || block == 0 || value % block != 0 {
            return Err(Error::Divisibility { what, value, divisor: block });
        }
    }
    let reviewer_labels: Vec<usize> = (0..n).map(|i| i / block).collect();
    let paper_labels: Vec<usize> = (0..d).map(|j| j / block).collect();
    let mut scores = Vec::with_capacity(n * d);
    for &rl in &reviewer_labels {
        for &pl in &paper_labels {
            let base = if rl == pl { s } else { 0.0 };
            let noise = if noise_max > 0.0 { rng.random_range(0.0..=noise_max) } else { 0.0 };
            scores.push((base + noise).min(1.0));
        }
    }
    Ok(CommunityInstance { matrix: SimilarityMatrix::from_flat(n, d, scores)?, reviewer_labels, paper_labels })
}

/// The synthetic community preset: 25x25 blocks at 0.7 with `U[0, 0.05]` additive noise.
pub fn gen_community_preset<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<CommunityInstance> {
    gen_community_additive(n, d, 25, 0.7, 0.05, rng)
}

pub const INTERDISCIPLINARY_ON: f64 = 0.17;
pub const INTERDISCIPLINARY_OFF: f64 = 0.005;
pub const INTERDISCIPLINARY_SHARED: f64 = 0.085;

/// Two equal reviewer groups; papers split 40/40/20 into group-1, group-2 and shared topics.
///
/// Returns the matrix and the paper group of each paper (0, 1, or 2 for shared).
pub fn gen_interdisciplinary(n: usize, d: usize) -> Result<(SimilarityMatrix, Vec<usize>)> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Divisibility { what: "reviewer count", value: n, divisor: 2 });
    }
    if d == 0 || !d.is_multiple_of(5) {
        return Err(Error::Divisibility { what: "paper count", value: d, divisor: 5 });
    }
    let cut = 2 * d / 5;
    let groups: Vec<usize> = (0..d)
        .map(|j| {
            if j < cut {
                0
            } else if j < 2 * cut {
                1
            } else {
                2
            }
        })
        .collect();
    let mut scores = Vec::with_capacity(n * d);
    for i in 0..n {
        let reviewer_group = usize::from(i >= n / 2);
        scores.extend(groups.iter().map(|&g| match g {
            2 => INTERDISCIPLINARY_SHARED,
            g if g == reviewer_group => INTERDISCIPLINARY_ON,
            _ => INTERDISCIPLINARY_OFF,
        }));
    }
    Ok((SimilarityMatrix::from_flat(n, d, scores)?, groups))
}

/// Parameters for the near-tied similarity instance that defeats similarity sorting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorstCaseConfig {
    pub d: usize,
    pub lambda: f64,
}

impl WorstCaseConfig {
    /// `(1 + lambda) * e^(e^e)`, about 3.81e6 for `lambda = 0`.
    pub fn epsilon(&self) -> f64 {
        let e = std::f64::consts::E;
        (1.0 + self.lambda) * e.powf(e).exp()
    }
}

/// One reviewer's similarity row together with the bids accumulated before it arrives.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalInstance {
    pub row: Vec<f64>,
    pub bids: BidState,
}

fn check_worstcase_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::config(format!("worst-case instances need d >= 2, got {d}")));
    }
    Ok(())
}

/// Scores `1 - 1/(j * epsilon)` for `j = 1..=d`, no bids on the first half and one on the second.
///
/// Odd `d` builds the even instance on `d - 1` papers and appends a paper with
/// zero similarity and one bid.
pub fn gen_worstcase_sim(cfg: &WorstCaseConfig) -> Result<LocalInstance> {
    check_worstcase_d(cfg.d)?;
    let even = cfg.d - cfg.d % 2;
    let eps = cfg.epsilon();
    let mut row: Vec<f64> = (1..=even).map(|j| 1.0 - 1.0 / (j as f64 * eps)).collect();
    let mut counts: Vec<u32> = (0..even).map(|j| u32::from(j >= even / 2)).collect();
    if cfg.d % 2 == 1 {
        row.push(0.0);
        counts.push(1);
    }
    Ok(LocalInstance { row, bids: BidState::from_counts(counts) })
}

/// Similarity 1 and one bid on the first half, similarity 0 and no bids on the second.
///
/// Odd `d` appends a paper with zero similarity and one bid. The same instance
/// serves for the random-ordering baseline.
pub fn gen_worstcase_bid(d: usize) -> Result<LocalInstance> {
    check_worstcase_d(d)?;
    let even = d - d % 2;
    let mut row: Vec<f64> = (0..even).map(|j| if j < even / 2 { 1.0 } else { 0.0 }).collect();
    let mut counts: Vec<u32> = (0..even).map(|j| u32::from(j < even / 2)).collect();
    if d % 2 == 1 {
        row.push(0.0);
        counts.push(1);
    }
    Ok(LocalInstance { row, bids: BidState::from_counts(counts) })
}

pub fn load_similarity_csv(path: impl AsRef<Path>) -> Result<SimilarityMatrix> {
    crate::csvio::load_matrix(path)
}
