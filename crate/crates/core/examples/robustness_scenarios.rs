//! Each deviation from the bidding model, on the same matrices and random streams.
//!
//! `cargo run --release --example robustness_scenarios`

use peer_bidding::simulator::MatrixSource;
use peer_bidding::{run_experiment, Algorithm, BidModel, Experiment, ModelConfig, Result, Scenario};

fn main() -> Result<()> {
    let scenarios = [
        Scenario::Faithful,
        Scenario::BidModelMismatch(BidModel::SqrtPosition),
        Scenario::SimilarityNoise(0.01),
        Scenario::PartialArrival(0.75),
        Scenario::ConcurrentPoisson(4.0),
        Scenario::SearchSubset(0.3),
    ];
    println!("{:<24} {}", "scenario", Algorithm::ALL.map(|a| format!("{a:>11}")).join(""));
    for scenario in scenarios {
        let report = run_experiment(&Experiment {
            source: MatrixSource::LowRank { n: 200, d: 200 },
            algorithms: Algorithm::ALL.to_vec(),
            scenario: scenario.clone(),
            config: ModelConfig::default(),
            lambda_grid: vec![0.8],
            runs: 10,
            seed: 3,
        })?;
        let cells = Algorithm::ALL.map(|a| format!("{:>11.1}", report.summary_for(a, 0.8).unwrap().total_gain.mean));
        println!("{:<24} {}", scenario.to_string(), cells.join(""));
    }
    Ok(())
}
