//! Paper-side gains, reviewer-side gains and bidding probabilities.
//!
//! Positions are 1-based throughout: `position = 1` is the top of the list.
//! Every function family here is non-increasing in position and
//! non-decreasing in similarity.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Gain a paper collects from its final bid count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PaperGain {
    /// `sqrt(g)`.
    Sqrt,
    /// `min(g, r)`.
    Capped(u32),
    /// `slope * g`.
    Linear(f64),
}

impl PaperGain {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PaperGain::Capped(r) if r < 1 => Err(Error::config("capped paper gain needs r >= 1")),
            PaperGain::Linear(slope) if !(slope >= 0.0 && slope.is_finite()) => {
                Err(Error::config(format!("linear slope must be a nonnegative number, got {slope}")))
            }
            _ => Ok(()),
        }
    }

    /// Gain at a real-valued count; `g` may carry a fractional heuristic offset.
    pub fn value(&self, g: f64) -> f64 {
        match *self {
            PaperGain::Sqrt => g.sqrt(),
            PaperGain::Capped(r) => g.min(r as f64),
            PaperGain::Linear(slope) => slope * g,
        }
    }

    /// `value(g + 1) - value(g)`.
    pub fn marginal(&self, g: f64) -> f64 {
        match *self {
            PaperGain::Linear(slope) => slope,
            _ => self.value(g + 1.0) - self.value(g),
        }
    }

    /// Count above which extra bids no longer change the gain.
    pub fn saturation(&self) -> Option<u32> {
        match *self {
            PaperGain::Capped(r) => Some(r),
            _ => None,
        }
    }
}

pub fn paper_gain(kind: &PaperGain, g: u32) -> f64 {
    kind.value(g as f64)
}

pub fn marginal_paper_gain(kind: &PaperGain, g: f64) -> f64 {
    kind.marginal(g)
}

/// A user-supplied function of (position, similarity), looked up from a grid.
///
/// `values[k - 1][i]` is the value at position `k` and similarity
/// `similarity_grid[i]`. A similarity between grid points takes the value of
/// the largest grid point not above it; positions past the last row reuse the
/// last row.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedFunction {
    similarity_grid: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TabulatedFunction {
    pub fn new(similarity_grid: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if similarity_grid.first() != Some(&0.0) {
            return Err(Error::config("tabulated grid must start at similarity 0"));
        }
        if similarity_grid.windows(2).any(|w| w[0] >= w[1] || w[0].is_nan() || w[1].is_nan())
            || similarity_grid.iter().any(|&s| s > 1.0)
        {
            return Err(Error::config("tabulated grid must be strictly increasing within [0, 1]"));
        }
        if values.is_empty() {
            return Err(Error::config("tabulated function needs at least one position row"));
        }
        for row in &values {
            if row.len() != similarity_grid.len() {
                return Err(Error::DimensionMismatch {
                    what: "tabulated row",
                    expected: similarity_grid.len(),
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::config("tabulated values must be finite and nonnegative"));
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::config("tabulated values must be non-decreasing in similarity"));
            }
        }
        for pair in values.windows(2) {
            if pair[0].iter().zip(&pair[1]).any(|(a, b)| b > a) {
                return Err(Error::config("tabulated values must be non-increasing in position"));
            }
        }
        Ok(Self { similarity_grid, values })
    }

    pub fn eval(&self, position: usize, s: f64) -> f64 {
        let row = &self.values[position.clamp(1, self.values.len()) - 1];
        let idx = self.similarity_grid.partition_point(|&g| g <= s);
        if idx == 0 {
            0.0
        } else {
            row[idx - 1]
        }
    }

    fn max_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReviewerGain {
    /// `(2^s - 1) / log2(position + 1)`.
    DcgLog,
    /// `(2^s - 1) / sqrt(position)`.
    DcgSqrtPos,
    /// `1{position = 1} * 1{s > block / 2}`.
    ThresholdIndicator(f64),
    Tabulated(Arc<TabulatedFunction>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum BidModel {
    /// `s / log2(position + 1)`.
    LogPosition,
    /// `s / sqrt(position)`.
    SqrtPosition,
    /// `1{position = 1} * 1{s > block / 2}`; the parameter is the block similarity.
    ThresholdIndicator(f64),
    Tabulated(Arc<TabulatedFunction>),
}

impl BidModel {
    pub fn tabulated(table: TabulatedFunction) -> Result<Self> {
        if table.max_value() > 1.0 {
            return Err(Error::config("tabulated bid probabilities must not exceed 1"));
        }
        Ok(BidModel::Tabulated(Arc::new(table)))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BidModel::ThresholdIndicator(s) if !(0.01..=1.0).contains(s) => {
                Err(Error::config(format!("threshold block similarity {s} outside [0.01, 1]")))
            }
            _ => Ok(()),
        }
    }
}

fn inv_log2(position: usize) -> f64 {
    1.0 / ((position as f64) + 1.0).log2()
}

fn threshold(position: usize, s: f64, block: f64) -> f64 {
    if position == 1 && s > block / 2.0 {
        1.0
    } else {
        0.0
    }
}

pub fn reviewer_gain(kind: &ReviewerGain, position: usize, s: f64) -> f64 {
    debug_assert!(position >= 1);
    match kind {
        ReviewerGain::DcgLog => (s.exp2() - 1.0) / ((position as f64) + 1.0).log2(),
        ReviewerGain::DcgSqrtPos => (s.exp2() - 1.0) / (position as f64).sqrt(),
        ReviewerGain::ThresholdIndicator(block) => threshold(position, s, *block),
        ReviewerGain::Tabulated(t) => t.eval(position, s),
    }
}

/// Probability that a reviewer bids on a paper shown at `position`.
///
/// Not clamped: callers perturbing `s` outside `[0, 1]` clamp the result.
pub fn bid_probability(kind: &BidModel, position: usize, s: f64) -> f64 {
    debug_assert!(position >= 1);
    match kind {
        BidModel::LogPosition => s / ((position as f64) + 1.0).log2(),
        BidModel::SqrtPosition => s / (position as f64).sqrt(),
        BidModel::ThresholdIndicator(block) => threshold(position, s, *block),
        BidModel::Tabulated(t) => t.eval(position, s),
    }
}

/// Position discount shared by a decomposable bid model and reviewer gain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositionDecay {
    InverseLog2,
    InverseSqrt,
}

impl PositionDecay {
    pub fn at(&self, position: usize) -> f64 {
        match self {
            PositionDecay::InverseLog2 => inv_log2(position),
            PositionDecay::InverseSqrt => 1.0 / (position as f64).sqrt(),
        }
    }
}

/// Factorisation `f(k, s) = f_s(s) * decay(k)` and `gamma_r(k, s) = gamma_s(s) * decay(k)`.
///
/// Both supported families use `f_s(s) = s` and `gamma_s(s) = 2^s - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub decay: PositionDecay,
}

impl Decomposition {
    pub fn bid_factor(&self, s: f64) -> f64 {
        s
    }

    pub fn reviewer_factor(&self, s: f64) -> f64 {
        s.exp2() - 1.0
    }
}

pub fn decompose(bid: &BidModel, reviewer: &ReviewerGain) -> Option<Decomposition> {
    match (bid, reviewer) {
        (BidModel::LogPosition, ReviewerGain::DcgLog) => Some(Decomposition { decay: PositionDecay::InverseLog2 }),
        (BidModel::SqrtPosition, ReviewerGain::DcgSqrtPos) => Some(Decomposition { decay: PositionDecay::InverseSqrt }),
        _ => None,
    }
}

// Text forms used by the CLI and the experiment reports.

impl fmt::Display for PaperGain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PaperGain::Sqrt => write!(f, "sqrt"),
            PaperGain::Capped(r) => write!(f, "capped:{r}"),
            PaperGain::Linear(slope) => write!(f, "linear:{slope}"),
        }
    }
}

impl fmt::Display for ReviewerGain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReviewerGain::DcgLog => write!(f, "dcg-log"),
            ReviewerGain::DcgSqrtPos => write!(f, "dcg-sqrt-pos"),
            ReviewerGain::ThresholdIndicator(s) => write!(f, "threshold:{s}"),
            ReviewerGain::Tabulated(_) => write!(f, "tabulated"),
        }
    }
}

impl fmt::Display for BidModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BidModel::LogPosition => write!(f, "log-position"),
            BidModel::SqrtPosition => write!(f, "sqrt-position"),
            BidModel::ThresholdIndicator(s) => write!(f, "threshold:{s}"),
            BidModel::Tabulated(_) => write!(f, "tabulated"),
        }
    }
}

fn split_param(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((name, param)) => (name, Some(param)),
        None => (s, None),
    }
}

fn parse_param<T: FromStr>(name: &str, param: Option<&str>) -> Result<T> {
    let raw = param.ok_or_else(|| Error::config(format!("`{name}` needs a parameter, e.g. {name}:1")))?;
    raw.parse().map_err(|_| Error::config(format!("bad parameter `{raw}` for `{name}`")))
}

impl FromStr for PaperGain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = split_param(s);
        let kind = match name {
            "sqrt" => PaperGain::Sqrt,
            "capped" => PaperGain::Capped(parse_param(name, param)?),
            "linear" => PaperGain::Linear(parse_param(name, param)?),
            _ => return Err(Error::config(format!("unknown paper gain `{s}`"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl FromStr for ReviewerGain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = split_param(s);
        match name {
            "dcg-log" => Ok(ReviewerGain::DcgLog),
            "dcg-sqrt-pos" => Ok(ReviewerGain::DcgSqrtPos),
            "threshold" => Ok(ReviewerGain::ThresholdIndicator(parse_param(name, param)?)),
            _ => Err(Error::config(format!("unknown reviewer gain `{s}`"))),
        }
    }
}

impl FromStr for BidModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = split_param(s);
        let model = match name {
            "log-position" => BidModel::LogPosition,
            "sqrt-position" => BidModel::SqrtPosition,
            "threshold" => BidModel::ThresholdIndicator(parse_param(name, param)?),
            _ => return Err(Error::config(format!("unknown bid model `{s}`"))),
        };
        model.validate()?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn similarity_grid() -> Vec<f64> {
        (0..=10).map(|i| i as f64 / 10.0).collect()
    }

    #[test]
    fn paper_gain_examples() {
        assert_eq!(paper_gain(&PaperGain::Sqrt, 4), 2.0);
        assert_eq!(paper_gain(&PaperGain::Capped(6), 7), 6.0);
        assert_eq!(paper_gain(&PaperGain::Linear(1.0), 0), 0.0);
    }

    #[test]
    fn marginal_examples() {
        assert_eq!(marginal_paper_gain(&PaperGain::Sqrt, 0.0), 1.0);
        assert!((marginal_paper_gain(&PaperGain::Sqrt, 1.0) - 0.41421356).abs() < 1e-8);
        assert_eq!(marginal_paper_gain(&PaperGain::Capped(6), 6.0), 0.0);
    }

    #[test]
    fn marginal_is_exact_difference() {
        for kind in [PaperGain::Sqrt, PaperGain::Capped(6), PaperGain::Capped(1), PaperGain::Linear(1.0)] {
            for g in 0..=20u32 {
                assert_eq!(
                    marginal_paper_gain(&kind, g as f64),
                    paper_gain(&kind, g + 1) - paper_gain(&kind, g),
                    "{kind} at {g}"
                );
            }
        }
    }

    #[test]
    fn concave_kinds_have_nonincreasing_marginals() {
        for kind in [PaperGain::Sqrt, PaperGain::Capped(3)] {
            let mut prev = f64::INFINITY;
            for step in 0..200 {
                let m = kind.marginal(step as f64 * 0.1);
                assert!(m <= prev + TOL);
                prev = m;
            }
        }
    }

    #[test]
    fn reviewer_gain_examples() {
        assert!((reviewer_gain(&ReviewerGain::DcgLog, 1, 1.0) - 1.0).abs() < TOL);
        assert!((reviewer_gain(&ReviewerGain::DcgLog, 3, 1.0) - 0.5).abs() < TOL);
        assert_eq!(reviewer_gain(&ReviewerGain::DcgLog, 1, 0.0), 0.0);
    }

    #[test]
    fn bid_probability_examples() {
        assert!((bid_probability(&BidModel::LogPosition, 1, 0.5) - 0.5).abs() < TOL);
        assert!((bid_probability(&BidModel::LogPosition, 3, 1.0) - 0.5).abs() < TOL);
        let th = BidModel::ThresholdIndicator(0.7);
        assert_eq!(bid_probability(&th, 1, 0.7), 1.0);
        assert_eq!(bid_probability(&th, 2, 0.7), 0.0);
        assert_eq!(bid_probability(&th, 1, 0.35), 0.0);
    }

    #[test]
    fn monotonicity_sweep() {
        let bids = [
            BidModel::LogPosition,
            BidModel::SqrtPosition,
            BidModel::ThresholdIndicator(0.7),
            BidModel::ThresholdIndicator(0.01),
        ];
        let gains = [ReviewerGain::DcgLog, ReviewerGain::DcgSqrtPos, ReviewerGain::ThresholdIndicator(0.5)];
        let grid = similarity_grid();
        for pos in 1..=50usize {
            for (si, &s) in grid.iter().enumerate() {
                for b in &bids {
                    let p = bid_probability(b, pos, s);
                    assert!((0.0..=1.0).contains(&p));
                    assert!(bid_probability(b, pos + 1, s) <= p + TOL, "{b} position {pos}");
                    if si + 1 < grid.len() {
                        assert!(bid_probability(b, pos, grid[si + 1]) + TOL >= p, "{b} similarity {s}");
                    }
                }
                for g in &gains {
                    let v = reviewer_gain(g, pos, s);
                    assert!(v >= 0.0);
                    assert!(reviewer_gain(g, pos + 1, s) <= v + TOL);
                    if si + 1 < grid.len() {
                        assert!(reviewer_gain(g, pos, grid[si + 1]) + TOL >= v);
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let log = decompose(&BidModel::LogPosition, &ReviewerGain::DcgLog).unwrap();
        assert_eq!(log.decay, PositionDecay::InverseLog2);
        assert!((log.decay.at(3) - 0.5).abs() < TOL);
        let sqrt = decompose(&BidModel::SqrtPosition, &ReviewerGain::DcgSqrtPos).unwrap();
        assert!((sqrt.decay.at(4) - 0.5).abs() < TOL);
        assert!(decompose(&BidModel::ThresholdIndicator(0.7), &ReviewerGain::DcgLog).is_none());
        assert!(decompose(&BidModel::LogPosition, &ReviewerGain::DcgSqrtPos).is_none());
    }

    #[test]
    fn decomposition_reproduces_both_functions() {
        let pairs = [(BidModel::LogPosition, ReviewerGain::DcgLog), (BidModel::SqrtPosition, ReviewerGain::DcgSqrtPos)];
        for (bid, rev) in pairs {
            let dec = decompose(&bid, &rev).unwrap();
            for k in 1..=50 {
                for &s in &similarity_grid() {
                    let fac = dec.bid_factor(s) * dec.decay.at(k);
                    assert!((fac - bid_probability(&bid, k, s)).abs() < TOL);
                    let gam = dec.reviewer_factor(s) * dec.decay.at(k);
                    assert!((gam - reviewer_gain(&rev, k, s)).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn tabulated_lookup_and_validation() {
        let table = TabulatedFunction::new(vec![0.0, 0.5], vec![vec![0.0, 0.8], vec![0.0, 0.4]]).unwrap();
        let model = BidModel::tabulated(table).unwrap();
        assert_eq!(bid_probability(&model, 1, 0.5), 0.8);
        assert_eq!(bid_probability(&model, 1, 0.7), 0.8);
        assert_eq!(bid_probability(&model, 2, 0.49), 0.0);
        assert_eq!(bid_probability(&model, 9, 1.0), 0.4);

        // increasing in position is rejected
        assert!(TabulatedFunction::new(vec![0.0], vec![vec![0.1], vec![0.2]]).is_err());
        // decreasing in similarity is rejected
        assert!(TabulatedFunction::new(vec![0.0, 1.0], vec![vec![0.5, 0.1]]).is_err());
        let too_big = TabulatedFunction::new(vec![0.0], vec![vec![2.0]]).unwrap();
        assert!(BidModel::tabulated(too_big).is_err());
    }

    #[test]
    fn text_forms_round_trip() {
        for s in ["sqrt", "capped:6", "linear:0.5"] {
            assert_eq!(s.parse::<PaperGain>().unwrap().to_string(), s);
        }
        for s in ["log-position", "sqrt-position", "threshold:0.7"] {
            assert_eq!(s.parse::<BidModel>().unwrap().to_string(), s);
        }
        for s in ["dcg-log", "dcg-sqrt-pos", "threshold:0.7"] {
            assert_eq!(s.parse::<ReviewerGain>().unwrap().to_string(), s);
        }
        assert!("capped:0".parse::<PaperGain>().is_err());
        assert!("threshold:2".parse::<BidModel>().is_err());
        assert!("cubic".parse::<PaperGain>().is_err());
    }
}
