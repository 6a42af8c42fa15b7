//! Exact shortfall of each baseline on its adversarial single-reviewer instance.
//!
//! `cargo run --example worst_case_gaps`

use peer_bidding::oracle::{bid_gap_bound, rand_gap_bound, sim_gap_bound, worstcase_gaps};
use peer_bidding::Result;

fn main() -> Result<()> {
    for lambda in [0.0, 1.0] {
        println!("lambda = {lambda}");
        println!(
            "{:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "d", "sim", "bound", "bid", "bound", "rand", "bound"
        );
        for d in [2, 4, 8, 16, 32, 64, 128] {
            let g = worstcase_gaps(d, lambda)?;
            println!(
                "{d:>5} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
                g.sim,
                sim_gap_bound(d),
                g.bid,
                bid_gap_bound(d, lambda),
                g.rand,
                rand_gap_bound(d, lambda)
            );
        }
        println!();
    }
    Ok(())
}
