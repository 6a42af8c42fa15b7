//! Exact reference values: expected one-step gains, brute-force local
//! optima, exact policy evaluation by forward recursion over bid states,
//! the optimal adaptive value by dynamic programming, and closed forms for
//! the community model and the adversarial single-reviewer instances.
//!
//! Nothing here samples. These functions are deliberately written without
//! reusing the ordering code they are used to check.

use std::collections::{BTreeMap, HashMap};

use crate::baselines::{bid_ranking, sim_ranking, TiedRanking};
use crate::error::{Error, Result};
use crate::gain::{bid_probability, reviewer_gain, BidModel, PaperGain, ReviewerGain};
use crate::generators::{gen_worstcase_bid, gen_worstcase_sim, CommunityConfig, WorstCaseConfig};
use crate::policy::Policy;
use crate::types::{ModelConfig, PaperOrdering, SimilarityMatrix};

pub const BRUTE_FORCE_MAX_D: usize = 8;
/// Largest tie group whose joint bid distribution is computed exactly.
pub const MAX_TIE_GROUP: usize = 12;
/// Default cap on (state, outcome) pairs visited by the exact evaluators.
pub const DEFAULT_WORK_BUDGET: usize = 200_000_000;

fn paper_increment(config: &ModelConfig, g: u32) -> f64 {
    config.paper_gain.value(g as f64 + 1.0) - config.paper_gain.value(g as f64)
}

/// Expected gain from one reviewer shown `ordering`, excluding the constant `sum_j gamma_p(g_j)`.
pub fn expected_immediate_gain(ordering: &PaperOrdering, row: &[f64], bids: &[u32], config: &ModelConfig) -> f64 {
    row.iter()
        .enumerate()
        .map(|(j, &s)| {
            let k = ordering.position(j);
            config.lambda * reviewer_gain(&config.reviewer_gain, k, s)
                + bid_probability(&config.bid_model, k, s) * paper_increment(config, bids[j])
        })
        .sum()
}

/// Expected immediate gain of a ranking whose tie groups are shuffled uniformly.
pub fn expected_ranking_gain(ranking: &TiedRanking, row: &[f64], bids: &[u32], config: &ModelConfig) -> f64 {
    let mut total = 0.0;
    let mut start = 0;
    for group in ranking.groups() {
        let positions = start + 1..=start + group.len();
        for &j in group {
            let s = row[j];
            let sum: f64 = positions
                .clone()
                .map(|k| {
                    config.lambda * reviewer_gain(&config.reviewer_gain, k, s)
                        + bid_probability(&config.bid_model, k, s) * paper_increment(config, bids[j])
                })
                .sum();
            total += sum / group.len() as f64;
        }
        start += group.len();
    }
    total
}

/// Lexicographic successor of a permutation; false once the last one is reached.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("a larger element exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Best ordering by exhaustive search over all `d!` permutations.
pub fn brute_force_local(row: &[f64], bids: &[u32], config: &ModelConfig) -> Result<(PaperOrdering, f64)> {
    let d = row.len();
    if d > BRUTE_FORCE_MAX_D {
        return Err(Error::TooLarge { what: "paper count for brute force", size: d, limit: BRUTE_FORCE_MAX_D });
    }
    let mut positions: Vec<usize> = (1..=d).collect();
    let mut best: Option<(PaperOrdering, f64)> = None;
    loop {
        let ordering = PaperOrdering::from_positions(positions.clone())?;
        let value = expected_immediate_gain(&ordering, row, bids, config);
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((ordering, value));
        }
        if !next_permutation(&mut positions) {
            break;
        }
    }
    Ok(best.expect("at least one permutation"))
}

/// Expected immediate gain of a uniformly random ordering.
///
/// Each paper lands in each position with probability `1/d`, so the
/// expectation is the average of the per-(paper, position) gains.
pub fn rand_expected_immediate_gain(row: &[f64], bids: &[u32], config: &ModelConfig) -> f64 {
    expected_ranking_gain(&TiedRanking::uniform(row.len()), row, bids, config)
}

/// Joint bid distribution for papers shuffled uniformly over consecutive positions.
///
/// Returns `(mask, probability)` pairs, bit `r` of the mask set when
/// `papers[r]` is bid on. Dynamic programme over partial placements where
/// each paper is unplaced, placed without a bid, or placed with a bid.
fn group_bid_distribution(papers: &[usize], first_position: usize, row: &[f64], model: &BidModel) -> Vec<(u64, f64)> {
    let m = papers.len();
    let probs: Vec<Vec<f64>> = papers
        .iter()
        .map(|&j| (0..m).map(|r| bid_probability(model, first_position + r, row[j]).clamp(0.0, 1.0)).collect())
        .collect();
    let pow3: Vec<usize> = (0..m)
        .scan(1usize, |acc, _| {
            let v = *acc;
            *acc *= 3;
            Some(v)
        })
        .collect();
    let states = 3usize.pow(m as u32);
    let mut weight = vec![0.0f64; states];
    weight[0] = 1.0;
    let mut out = Vec::new();
    let mut digits = vec![0u8; m];
    for code in 0..states {
        let w = weight[code];
        if w == 0.0 {
            continue;
        }
        let mut rest = code;
        let mut placed = 0;
        for digit in digits.iter_mut() {
            *digit = (rest % 3) as u8;
            rest /= 3;
            placed += usize::from(*digit != 0);
        }
        if placed == m {
            let mask = digits.iter().enumerate().filter(|(_, &dg)| dg == 2).fold(0u64, |acc, (r, _)| acc | 1 << r);
            out.push((mask, w));
            continue;
        }
        let share = w / (m - placed) as f64;
        for r in 0..m {
            if digits[r] != 0 {
                continue;
            }
            let p = probs[r][placed];
            if p < 1.0 {
                weight[code + pow3[r]] += share * (1.0 - p);
            }
            if p > 0.0 {
                weight[code + 2 * pow3[r]] += share * p;
            }
        }
    }
    out
}

type GroupKey = (usize, usize, Vec<usize>);

/// Expected reviewer gain and joint bid distribution (over all papers) for one ranking.
struct OutcomeCache<'a> {
    matrix: &'a SimilarityMatrix,
    config: &'a ModelConfig,
    groups: HashMap<GroupKey, Vec<(u64, f64)>>,
}

impl<'a> OutcomeCache<'a> {
    fn new(matrix: &'a SimilarityMatrix, config: &'a ModelConfig) -> Self {
        Self { matrix, config, groups: HashMap::new() }
    }

    fn outcomes(&mut self, reviewer: usize, ranking: &TiedRanking) -> Result<(f64, Vec<(u64, f64)>)> {
        let row = self.matrix.row(reviewer);
        let mut rg = 0.0;
        let mut joint: Vec<(u64, f64)> = vec![(0, 1.0)];
        let mut start = 0;
        for group in ranking.groups() {
            let m = group.len();
            if m > MAX_TIE_GROUP {
                return Err(Error::TooLarge { what: "tie group for exact evaluation", size: m, limit: MAX_TIE_GROUP });
            }
            for &j in group {
                let sum: f64 =
                    (start + 1..=start + m).map(|k| reviewer_gain(&self.config.reviewer_gain, k, row[j])).sum();
                rg += sum / m as f64;
            }
            let key = (reviewer, start, group.to_vec());
            let model = &self.config.bid_model;
            let dist = self.groups.entry(key).or_insert_with(|| group_bid_distribution(group, start + 1, row, model));
            let mut next = Vec::with_capacity(joint.len() * dist.len());
            for &(mask, p) in &joint {
                for &(local, q) in dist.iter() {
                    let mut full = mask;
                    for (r, &j) in group.iter().enumerate() {
                        if local >> r & 1 == 1 {
                            full |= 1 << j;
                        }
                    }
                    next.push((full, p * q));
                }
            }
            joint = next;
            start += m;
        }
        Ok((rg, joint))
    }
}

fn check_paper_count(d: usize) -> Result<()> {
    if d > 64 {
        return Err(Error::TooLarge { what: "paper count for exact evaluation", size: d, limit: 64 });
    }
    Ok(())
}

fn spend(budget: &mut usize, amount: usize) -> Result<()> {
    *budget = budget.checked_sub(amount).ok_or(Error::TooLarge {
        what: "exact evaluation step (remaining work budget)",
        size: amount,
        limit: *budget,
    })?;
    Ok(())
}

/// Exact expected total gain of `policy` with reviewers arriving in row order.
pub fn policy_value_exact(matrix: &SimilarityMatrix, policy: &dyn Policy, config: &ModelConfig) -> Result<f64> {
    policy_value_exact_with_budget(matrix, policy, config, DEFAULT_WORK_BUDGET)
}

/// As [`policy_value_exact`], failing with `TooLarge` once `budget` (state, outcome) pairs are exceeded.
pub fn policy_value_exact_with_budget(
    matrix: &SimilarityMatrix,
    policy: &dyn Policy,
    config: &ModelConfig,
    budget: usize,
) -> Result<f64> {
    let (n, d) = (matrix.n(), matrix.d());
    check_paper_count(d)?;
    let mut budget = budget;
    let mut cache = OutcomeCache::new(matrix, config);
    let mut dist: BTreeMap<Vec<u32>, f64> = BTreeMap::from([(vec![0; d], 1.0)]);
    let mut reviewer_total = 0.0;
    for i in 0..n {
        let mut next: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (state, &p) in &dist {
            let ranking = policy.ranking(i, i, state)?;
            let (rg, outcomes) = cache.outcomes(i, &ranking)?;
            spend(&mut budget, outcomes.len())?;
            reviewer_total += p * rg;
            for (mask, q) in outcomes {
                if q == 0.0 {
                    continue;
                }
                let succ: Vec<u32> = state.iter().enumerate().map(|(j, &g)| g + (mask >> j & 1) as u32).collect();
                *next.entry(succ).or_insert(0.0) += p * q;
            }
        }
        dist = next;
    }
    let paper_total: f64 =
        dist.iter().map(|(state, &p)| p * state.iter().map(|&g| config.paper_gain.value(g as f64)).sum::<f64>()).sum();
    Ok(paper_total + config.lambda * reviewer_total)
}

pub const GLOBAL_MAX_D: usize = 7;

/// Optimal expected total gain over all adaptive policies, by backward induction.
///
/// `V_i(g) = max_pi [lambda * sum_j gamma_r(pi(j), S_ij) + E V_{i+1}(g + bids)]`
/// with terminal value `sum_j gamma_p(g_j)`. Counts are capped where the
/// paper gain saturates.
pub fn global_optimum_exact(matrix: &SimilarityMatrix, config: &ModelConfig) -> Result<f64> {
    global_optimum_exact_with_budget(matrix, config, DEFAULT_WORK_BUDGET)
}

pub fn global_optimum_exact_with_budget(matrix: &SimilarityMatrix, config: &ModelConfig, budget: usize) -> Result<f64> {
    let (n, d) = (matrix.n(), matrix.d());
    if d > GLOBAL_MAX_D {
        return Err(Error::TooLarge { what: "paper count for the global optimum", size: d, limit: GLOBAL_MAX_D });
    }
    // Per reviewer and permutation: reviewer gain and independent-bid outcome distribution.
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut p: Vec<usize> = (0..d).collect();
    loop {
        perms.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    let mut budget = budget;
    spend(&mut budget, n * perms.len() * (1 << d))?;
    let stages: Vec<Vec<Outcome>> = (0..n)
        .map(|i| {
            let row = matrix.row(i);
            perms
                .iter()
                .map(|ranking| {
                    let mut rg = 0.0;
                    let mut joint: Vec<(u64, f64)> = vec![(0, 1.0)];
                    for (slot, &j) in ranking.iter().enumerate() {
                        rg += reviewer_gain(&config.reviewer_gain, slot + 1, row[j]);
                        let q = bid_probability(&config.bid_model, slot + 1, row[j]).clamp(0.0, 1.0);
                        let mut next = Vec::with_capacity(joint.len() * 2);
                        for &(mask, w) in &joint {
                            if q < 1.0 {
                                next.push((mask, w * (1.0 - q)));
                            }
                            if q > 0.0 {
                                next.push((mask | 1 << j, w * q));
                            }
                        }
                        joint = next;
                    }
                    (rg, joint)
                })
                .collect()
        })
        .collect();

    let cap = config.paper_gain.saturation().unwrap_or(u32::MAX);
    let mut memo: Vec<HashMap<Vec<u32>, f64>> = vec![HashMap::new(); n + 1];
    let mut solver = GlobalDp { stages: &stages, config, cap, memo: &mut memo, budget };
    solver.value(0, vec![0; d])
}

/// Reviewer gain of one ordering and its joint bid distribution as (bitmask, probability) pairs.
type Outcome = (f64, Vec<(u64, f64)>);

struct GlobalDp<'a> {
    stages: &'a [Vec<Outcome>],
    config: &'a ModelConfig,
    cap: u32,
    memo: &'a mut Vec<HashMap<Vec<u32>, f64>>,
    budget: usize,
}

impl GlobalDp<'_> {
    fn value(&mut self, i: usize, state: Vec<u32>) -> Result<f64> {
        if i == self.stages.len() {
            return Ok(state.iter().map(|&g| self.config.paper_gain.value(g as f64)).sum());
        }
        if let Some(&v) = self.memo[i].get(&state) {
            return Ok(v);
        }
        let mut best = f64::NEG_INFINITY;
        for (rg, outcomes) in &self.stages[i] {
            spend(&mut self.budget, outcomes.len())?;
            let mut v = self.config.lambda * rg;
            for &(mask, q) in outcomes {
                let succ: Vec<u32> =
                    state.iter().enumerate().map(|(j, &g)| (g + (mask >> j & 1) as u32).min(self.cap)).collect();
                v += q * self.value(i + 1, succ)?;
            }
            best = best.max(v);
        }
        self.memo[i].insert(state, best);
        Ok(best)
    }
}

/// Optimal expected gain on a noiseless community instance with threshold bidding,
/// square-root paper gain and log-discounted DCG.
///
/// Every paper can receive exactly one bid (from a reviewer in its community
/// shown it first), and every reviewer's `q` on-block papers fill its top slots.
pub fn community_optimum_analytic(cfg: &CommunityConfig, lambda: f64) -> Result<f64> {
    if cfg.xi > 0.0 {
        return Err(Error::NoiselessOnly);
    }
    let mq = cfg.size() as f64;
    let top_slots: f64 = (1..=cfg.q).map(|k| 1.0 / ((k + 1) as f64).log2()).sum();
    Ok(mq * PaperGain::Sqrt.value(1.0) + lambda * mq * (cfg.s.exp2() - 1.0) * top_slots)
}

/// Model under which the single-reviewer gap bounds are stated.
pub fn worstcase_model(lambda: f64) -> ModelConfig {
    ModelConfig::new(PaperGain::Sqrt, ReviewerGain::DcgLog, BidModel::LogPosition, lambda)
}

/// Exact expected-gain shortfall of each baseline against the best ordering on its adversarial instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorstCaseGaps {
    pub d: usize,
    pub lambda: f64,
    pub sim: f64,
    pub bid: f64,
    pub rand: f64,
}

/// Best achievable expected immediate gain, by sorting the decomposed per-paper scores.
///
/// Valid for the log-position model: with a common position discount the
/// rearrangement inequality makes the sorted order optimal.
fn best_local_value(row: &[f64], bids: &[u32], config: &ModelConfig) -> f64 {
    let mut scores: Vec<f64> = row
        .iter()
        .zip(bids)
        .map(|(&s, &g)| s * paper_increment(config, g) + config.lambda * (s.exp2() - 1.0))
        .collect();
    scores.sort_by(|a, b| b.total_cmp(a));
    scores.iter().enumerate().map(|(k, a)| a / ((k + 2) as f64).log2()).sum()
}

pub fn worstcase_gaps(d: usize, lambda: f64) -> Result<WorstCaseGaps> {
    let config = worstcase_model(lambda);
    let sim_inst = gen_worstcase_sim(&WorstCaseConfig { d, lambda })?;
    let sim_best = best_local_value(&sim_inst.row, &sim_inst.bids.counts, &config);
    let sim_value = expected_ranking_gain(
        &sim_ranking(&sim_inst.row, &sim_inst.bids.counts),
        &sim_inst.row,
        &sim_inst.bids.counts,
        &config,
    );

    let bid_inst = gen_worstcase_bid(d)?;
    let (row, bids) = (&bid_inst.row, &bid_inst.bids.counts);
    let bid_best = best_local_value(row, bids, &config);
    let bid_value = expected_ranking_gain(&bid_ranking(bids, row), row, bids, &config);
    let rand_value = rand_expected_immediate_gain(row, bids, &config);

    Ok(WorstCaseGaps { d, lambda, sim: sim_best - sim_value, bid: bid_best - bid_value, rand: bid_best - rand_value })
}

fn log2_sq(d: usize) -> f64 {
    (d as f64).log2().powi(2)
}

pub fn sim_gap_bound(d: usize) -> f64 {
    d as f64 / (64.0 * log2_sq(d))
}

pub fn bid_gap_bound(d: usize, lambda: f64) -> f64 {
    (1.0 / 96.0 + lambda / 32.0) * d as f64 / log2_sq(d)
}

pub fn rand_gap_bound(d: usize, lambda: f64) -> f64 {
    (1.0 / 1728.0 + lambda / 576.0) * d as f64 / log2_sq(d)
}
