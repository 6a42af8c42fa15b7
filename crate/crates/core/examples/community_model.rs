//! Exact values of every algorithm on block-structured matrices, against the closed-form optimum.
//!
//! `cargo run --release --example community_model`

use peer_bidding::generators::{gen_community, CommunityConfig};
use peer_bidding::oracle::{community_optimum_analytic, global_optimum_exact, policy_value_exact};
use peer_bidding::{Algorithm, AlgorithmPolicy, BidModel, ModelConfig, PaperGain, Result, ReviewerGain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let lambda = 1.0;
    for (m, q) in [(2, 2), (2, 3), (3, 3)] {
        let cfg = CommunityConfig::noiseless(m, q, 0.7);
        let config =
            ModelConfig::new(PaperGain::Sqrt, ReviewerGain::DcgLog, BidModel::ThresholdIndicator(cfg.s), lambda);
        let inst = gen_community(&cfg, &mut ChaCha8Rng::seed_from_u64(0))?;
        println!("{m} blocks of {q}: optimum {:.4}", community_optimum_analytic(&cfg, lambda)?);
        for alg in Algorithm::ALL {
            let v = policy_value_exact(&inst.matrix, &AlgorithmPolicy::new(alg, &inst.matrix, &config), &config)?;
            println!("  {alg:<11} {v:.4}");
        }
    }

    let xi = CommunityConfig::noise_bound(2, 2, lambda);
    let noisy = CommunityConfig { xi, ..CommunityConfig::noiseless(2, 2, 0.7) };
    let config = ModelConfig::new(PaperGain::Sqrt, ReviewerGain::DcgLog, BidModel::ThresholdIndicator(0.7), lambda);
    let inst = gen_community(&noisy, &mut ChaCha8Rng::seed_from_u64(1))?;
    let policy = AlgorithmPolicy::new(Algorithm::SuperZero, &inst.matrix, &config);
    println!(
        "noise up to {xi:.2e}: super-zero {:.6}, best adaptive policy {:.6}",
        policy_value_exact(&inst.matrix, &policy, &config)?,
        global_optimum_exact(&inst.matrix, &config)?
    );
    Ok(())
}
