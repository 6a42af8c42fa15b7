//! Paper orderings for peer-review bidding.
//!
//! Each arriving reviewer is shown the papers in an order chosen to trade off
//! two goals: every paper should collect enough bids, and the reviewer should
//! see the papers they are most similar to first. [`superstar`] computes that
//! ordering greedily per reviewer, either through a linear sum assignment or,
//! when the bid model factors by position, by a single sort.
//!
//! Around it sit similarity-sorted, bid-sorted and random baselines
//! ([`baselines`]), synthetic matrix generators ([`generators`]), a Monte Carlo
//! simulator with robustness scenarios ([`simulator`]) and exact dynamic
//! programs for small instances ([`oracle`]).

pub mod assignment;
pub mod baselines;
pub mod cli;
pub mod csvio;
pub mod error;
pub mod gain;
pub mod generators;
pub mod oracle;
pub mod policy;
pub mod rng;
pub mod simulator;
pub mod superstar;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use gain::{BidModel, PaperGain, ReviewerGain};
pub use policy::{Algorithm, AlgorithmPolicy, Policy};
pub use rng::SeedStreams;
pub use simulator::{run_experiment, run_scenario, run_simulation, Experiment, Scenario};
pub use superstar::{find_paper_order, PathChoice, SuperState};
pub use types::{BidState, HeuristicKind, ModelConfig, PaperOrdering, SimilarityMatrix};
