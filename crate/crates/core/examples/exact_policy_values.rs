//! Exact policy values on a tiny matrix next to Monte Carlo estimates from the simulator.
//!
//! `cargo run --release --example exact_policy_values`

use peer_bidding::oracle::{global_optimum_exact, policy_value_exact};
use peer_bidding::simulator::MeanSem;
use peer_bidding::{
    run_simulation, Algorithm, AlgorithmPolicy, ModelConfig, PaperGain, Result, SeedStreams, SimilarityMatrix,
};

fn main() -> Result<()> {
    let matrix = SimilarityMatrix::from_rows(vec![
        vec![0.9, 0.4, 0.1],
        vec![0.8, 0.7, 0.2],
        vec![0.3, 0.9, 0.6],
        vec![0.7, 0.2, 0.5],
    ])?;
    let config = ModelConfig { paper_gain: PaperGain::Sqrt, ..ModelConfig::default() };
    let base = SeedStreams::new(5);

    println!("best adaptive policy {:.5}", global_optimum_exact(&matrix, &config)?);
    for alg in Algorithm::ALL {
        let exact = policy_value_exact(&matrix, &AlgorithmPolicy::new(alg, &matrix, &config), &config)?;
        let samples = (0..20_000)
            .map(|r| run_simulation(&matrix, alg, &config, &base.child(r)).map(|s| s.total_gain))
            .collect::<Result<Vec<f64>>>()?;
        let mc = MeanSem::of(&samples);
        println!("{alg:<11} exact {exact:.5}  simulated {:.5} ± {:.5}", mc.mean, mc.sem.unwrap());
    }
    Ok(())
}
