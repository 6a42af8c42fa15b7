//! Dense linear sum assignment, maximizing `sum_j w[j][pos(j)]`.
//!
//! Shortest augmenting path Hungarian method with row/column potentials,
//! O(d^3). Maximization is done by minimizing the negated weights.

use crate::error::{Error, Result};
use crate::types::PaperOrdering;

/// Square matrix where `get(j, k)` is the weight of showing paper `j` at position `k + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix {
    d: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        let mut data = Vec::with_capacity(d * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch { what: "weight matrix row", expected: d, found: row.len() });
            }
            data.extend(row);
        }
        Self::from_flat(d, data)
    }

    pub fn from_flat(d: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != d * d {
            return Err(Error::DimensionMismatch { what: "weight matrix", expected: d * d, found: data.len() });
        }
        if let Some(idx) = data.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite { row: idx / d, col: idx % d });
        }
        Ok(Self { d, data })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, paper: usize, slot: usize) -> f64 {
        self.data[paper * self.d + slot]
    }

    pub fn row(&self, paper: usize) -> &[f64] {
        &self.data[paper * self.d..(paper + 1) * self.d]
    }

    /// Objective of an ordering under these weights.
    pub fn objective(&self, ordering: &PaperOrdering) -> f64 {
        (0..self.d).map(|j| self.get(j, ordering.position(j) - 1)).sum()
    }
}

/// Returns a maximizing ordering and its objective value.
///
/// Deterministic: the same matrix always yields the same ordering.
pub fn solve_assignment(w: &WeightMatrix) -> (PaperOrdering, f64) {
    let n = w.d;
    if n == 0 {
        return (PaperOrdering::identity(0), 0.0);
    }
    // 1-based arrays; index 0 is the virtual source column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);

        loop {
            used[j0] = true;
            let i0 = p[j0];
            let row = w.row(i0 - 1);
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;

            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = -row[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }

            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }

            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }

        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut ranking = vec![0usize; n];
    for slot in 1..=n {
        ranking[slot - 1] = p[slot] - 1;
    }
    let ordering = PaperOrdering::from_ranking_unchecked(&ranking);
    let value = w.objective(&ordering);
    (ordering, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Heap's algorithm over all permutations; independent of the solver.
    fn brute_force(w: &WeightMatrix) -> f64 {
        let d = w.d();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut best = f64::NEG_INFINITY;
        let mut c = vec![0usize; d];
        let eval = |perm: &[usize]| (0..d).map(|j| w.get(j, perm[j])).sum::<f64>();
        best = best.max(eval(&perm));
        let mut i = 0;
        while i < d {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                best = best.max(eval(&perm));
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        best
    }

    #[test]
    fn identity_and_swap() {
        let (o, v) = solve_assignment(&WeightMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap());
        assert_eq!(o.positions(), &[1, 2]);
        assert_eq!(v, 2.0);
        let (o, v) = solve_assignment(&WeightMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        assert_eq!(o.positions(), &[2, 1]);
        assert_eq!(v, 2.0);
    }

    #[test]
    fn integer_5x5_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows: Vec<Vec<f64>> = (0..5).map(|_| (0..5).map(|_| rng.random_range(0..20) as f64).collect()).collect();
        let w = WeightMatrix::from_rows(rows).unwrap();
        assert_eq!(solve_assignment(&w).1, brute_force(&w));
    }

    #[test]
    fn random_matrices_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..500 {
            let d = 2 + case % 6;
            let rows: Vec<Vec<f64>> =
                (0..d).map(|_| (0..d).map(|_| rng.random_range(-50..50) as f64).collect()).collect();
            let w = WeightMatrix::from_rows(rows).unwrap();
            let (ordering, value) = solve_assignment(&w);
            assert_eq!(value, brute_force(&w), "case {case}");
            assert_eq!(w.objective(&ordering), value);
        }
    }

    #[test]
    fn row_shift_changes_value_by_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let d = rng.random_range(2..7);
            let mut rows: Vec<Vec<f64>> =
                (0..d).map(|_| (0..d).map(|_| rng.random_range(0..100) as f64).collect()).collect();
            let base = solve_assignment(&WeightMatrix::from_rows(rows.clone()).unwrap()).1;
            let r = rng.random_range(0..d);
            rows[r].iter_mut().for_each(|x| *x += 7.0);
            let shifted = WeightMatrix::from_rows(rows).unwrap();
            let (_, v) = solve_assignment(&shifted);
            assert_eq!(v, base + 7.0);
            assert_eq!(v, brute_force(&shifted));
        }
    }

    #[test]
    fn deterministic_on_ties() {
        let w = WeightMatrix::from_rows(vec![vec![1.0; 4]; 4]).unwrap();
        let a = solve_assignment(&w).0;
        for _ in 0..5 {
            assert_eq!(solve_assignment(&w).0, a);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let err = WeightMatrix::from_rows(vec![vec![1.0, f64::NAN], vec![0.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, col: 1 }));
        assert!(WeightMatrix::from_rows(vec![vec![f64::INFINITY]]).is_err());
    }

    #[test]
    fn single_entry() {
        let (o, v) = solve_assignment(&WeightMatrix::from_rows(vec![vec![-3.5]]).unwrap());
        assert_eq!(o.positions(), &[1]);
        assert_eq!(v, -3.5);
    }
}
