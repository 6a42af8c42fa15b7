//! The assignment solver on its own, checked against every permutation of a small matrix.
//!
//! `cargo run --example assignment_solver`

use peer_bidding::assignment::{solve_assignment, WeightMatrix};
use peer_bidding::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let d = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let weights: Vec<f64> = (0..d * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let w = WeightMatrix::from_flat(d, weights)?;

    let (ordering, value) = solve_assignment(&w);
    println!("best positions {ordering}, total weight {value:.6}");

    let mut perm: Vec<usize> = (0..d).collect();
    let mut best = f64::NEG_INFINITY;
    permute(&mut perm, 0, &mut |p| {
        best = best.max(p.iter().enumerate().map(|(paper, &slot)| w.get(paper, slot)).sum());
    });
    println!("exhaustive max              {best:.6}");
    Ok(())
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}
