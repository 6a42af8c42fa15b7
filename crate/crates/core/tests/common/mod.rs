//! Reference computations written directly from the model definitions, kept
//! separate from the library so the two can be compared.
#![allow(dead_code)]

use std::time::Duration;

/// All permutations of `0..d` in lexicographic order.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                extend(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(d), &mut vec![false; d], &mut out);
    out
}

pub fn sqrt_gain(g: f64) -> f64 {
    g.sqrt()
}

/// Expected immediate gain of showing `ranking` (papers, best first) under
/// log-position bidding and log-discounted DCG, with paper gain `gamma`.
pub fn log_position_gain(row: &[f64], bids: &[u32], ranking: &[usize], lambda: f64, gamma: impl Fn(f64) -> f64) -> f64 {
    ranking
        .iter()
        .enumerate()
        .map(|(k, &j)| {
            let discount = ((k + 2) as f64).log2();
            let s = row[j];
            let g = f64::from(bids[j]);
            let bid_prob = s / discount;
            bid_prob * (gamma(g + 1.0) - gamma(g)) + lambda * (2f64.powf(s) - 1.0) / discount
        })
        .sum()
}

/// Largest expected immediate gain over every ordering.
pub fn brute_force_best(row: &[f64], bids: &[u32], lambda: f64, gamma: impl Fn(f64) -> f64 + Copy) -> f64 {
    permutations(row.len())
        .iter()
        .map(|r| log_position_gain(row, bids, r, lambda, gamma))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Expected value of `sum_k score[ranking[k]] * weight[k]` when `keys` sorts
/// the papers and papers with equal keys are shuffled uniformly.
pub fn tied_sort_value<K: PartialOrd>(score: &[f64], weight: &[f64], key: impl Fn(usize) -> K) -> f64 {
    let mut idx: Vec<usize> = (0..score.len()).collect();
    idx.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap());
    let mut total = 0.0;
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && key(idx[end]).partial_cmp(&key(idx[start])) == Some(std::cmp::Ordering::Equal) {
            end += 1;
        }
        let mean_score = idx[start..end].iter().map(|&j| score[j]).sum::<f64>() / (end - start) as f64;
        total += mean_score * weight[start..end].iter().sum::<f64>();
        start = end;
    }
    total
}

pub fn fmt_duration(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Prints one result line and returns `passed`.
pub fn report(name: &str, passed: bool, detail: &str, elapsed: Duration) -> bool {
    println!("{} {name}: {detail} [{}]", if passed { "PASS" } else { "FAIL" }, fmt_duration(elapsed));
    passed
}
