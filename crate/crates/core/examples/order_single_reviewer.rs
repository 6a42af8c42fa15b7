//! One reviewer's ordering under each algorithm, with its exact expected immediate gain.
//!
//! `cargo run --example order_single_reviewer`

use peer_bidding::baselines::TiedRanking;
use peer_bidding::oracle::{expected_immediate_gain, expected_ranking_gain};
use peer_bidding::policy::Policy;
use peer_bidding::{Algorithm, AlgorithmPolicy, ModelConfig, Result, SimilarityMatrix};

fn main() -> Result<()> {
    let matrix = SimilarityMatrix::from_rows(vec![
        vec![0.90, 0.85, 0.30, 0.10, 0.05, 0.60],
        vec![0.20, 0.70, 0.65, 0.40, 0.10, 0.05],
        vec![0.50, 0.10, 0.80, 0.75, 0.30, 0.20],
    ])?;
    let bids = [5, 0, 2, 0, 1, 7];
    let reviewer = 0;
    let config = ModelConfig::default().with_lambda(0.5);

    println!("similarities {:?}", matrix.row(reviewer));
    println!("bids so far  {bids:?}\n");
    for alg in Algorithm::ALL {
        let policy = AlgorithmPolicy::new(alg, &matrix, &config);
        let ranking: TiedRanking = policy.ranking(reviewer, reviewer, &bids)?;
        let gain = expected_ranking_gain(&ranking, matrix.row(reviewer), &bids, &config);
        if ranking.is_deterministic() {
            let o = ranking.first();
            debug_assert!((expected_immediate_gain(&o, matrix.row(reviewer), &bids, &config) - gain).abs() < 1e-12);
            println!("{alg:<11} positions {o}  expected gain {gain:.4}");
        } else {
            println!("{alg:<11} random within ties    expected gain {gain:.4}");
        }
    }
    Ok(())
}
