//! Comparison orderings: by similarity, by fewest bids, and uniformly at random.
//!
//! Each baseline first produces a [`TiedRanking`], a sorted list of papers
//! cut into groups of tied papers. A concrete ordering shuffles each group
//! independently. The oracle consumes the tied form directly to evaluate
//! baselines exactly.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::types::PaperOrdering;

/// Papers in display order, with ties resolved uniformly at random inside each group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiedRanking {
    /// 0-based papers, best first.
    pub order: Vec<usize>,
    /// Exclusive end index of each group in `order`; the last entry is `order.len()`.
    pub group_ends: Vec<usize>,
}

impl TiedRanking {
    /// A ranking with no ties.
    pub fn fixed(ordering: &PaperOrdering) -> Self {
        let order = ordering.ranking();
        let group_ends = (1..=order.len()).collect();
        Self { order, group_ends }
    }

    /// All papers in one group.
    pub fn uniform(d: usize) -> Self {
        Self { order: (0..d).collect(), group_ends: vec![d] }
    }

    /// Sorts papers with `cmp` and groups neighbours that compare equal.
    pub fn from_comparator(d: usize, cmp: impl Fn(usize, usize) -> Ordering) -> Self {
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| cmp(a, b).then(a.cmp(&b)));
        let mut group_ends = Vec::new();
        for k in 1..d {
            if cmp(order[k - 1], order[k]) != Ordering::Equal {
                group_ends.push(k);
            }
        }
        if d > 0 {
            group_ends.push(d);
        }
        Self { order, group_ends }
    }

    pub fn groups(&self) -> impl Iterator<Item = &[usize]> {
        let mut start = 0;
        self.group_ends.iter().map(move |&end| {
            let g = &self.order[start..end];
            start = end;
            g
        })
    }

    pub fn is_deterministic(&self) -> bool {
        self.group_ends.len() == self.order.len()
    }

    /// Draws a concrete ordering. Consumes randomness only for groups of two or more.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PaperOrdering {
        let mut ranking = self.order.clone();
        let mut start = 0;
        for &end in &self.group_ends {
            if end - start > 1 {
                ranking[start..end].shuffle(rng);
            }
            start = end;
        }
        PaperOrdering::from_ranking_unchecked(&ranking)
    }

    /// The ordering obtained by keeping every group in its sorted order.
    pub fn first(&self) -> PaperOrdering {
        PaperOrdering::from_ranking_unchecked(&self.order)
    }
}

fn desc(a: f64, b: f64) -> Ordering {
    b.partial_cmp(&a).unwrap_or(Ordering::Equal)
}

/// Highest similarity first; equal similarity goes to fewer bids; remaining ties are random.
pub fn sim_ranking(row: &[f64], bids: &[u32]) -> TiedRanking {
    debug_assert_eq!(row.len(), bids.len());
    TiedRanking::from_comparator(row.len(), |a, b| desc(row[a], row[b]).then(bids[a].cmp(&bids[b])))
}

/// Fewest bids first; equal bids go to higher similarity; remaining ties are random.
pub fn bid_ranking(bids: &[u32], row: &[f64]) -> TiedRanking {
    debug_assert_eq!(row.len(), bids.len());
    TiedRanking::from_comparator(row.len(), |a, b| bids[a].cmp(&bids[b]).then(desc(row[a], row[b])))
}

pub fn rand_ranking(d: usize) -> TiedRanking {
    TiedRanking::uniform(d)
}

pub fn sim_order<R: Rng + ?Sized>(row: &[f64], bids: &[u32], rng: &mut R) -> PaperOrdering {
    sim_ranking(row, bids).sample(rng)
}

pub fn bid_order<R: Rng + ?Sized>(bids: &[u32], row: &[f64], rng: &mut R) -> PaperOrdering {
    bid_ranking(bids, row).sample(rng)
}

pub fn rand_order<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PaperOrdering {
    rand_ranking(d).sample(rng)
}
