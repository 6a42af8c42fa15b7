//! Draws each synthetic similarity structure and prints a few summary numbers.
//!
//! `cargo run --example generate_similarity`

use peer_bidding::generators::{
    gen_community, gen_community_preset, gen_homogeneous, gen_interdisciplinary, gen_lowrank, CommunityConfig,
};
use peer_bidding::rng::Stream;
use peer_bidding::{Result, SeedStreams, SimilarityMatrix};

fn describe(name: &str, m: &SimilarityMatrix) {
    let total: f64 = m.rows().flatten().sum();
    let max = m.rows().flatten().fold(0.0f64, |a, &b| a.max(b));
    println!("{name:<18} {:>4}x{:<4} mean {:.4}  max {:.4}", m.n(), m.d(), total / (m.n() * m.d()) as f64, max);
}

fn main() -> Result<()> {
    let streams = SeedStreams::new(7);
    let mut rng = streams.rng(Stream::Matrix, 0);

    describe("homogeneous", &gen_homogeneous(250, 250, 1.0, 15.0, &mut rng)?);
    describe("low rank", &gen_lowrank(200, 200, &mut rng)?);
    describe("community preset", &gen_community_preset(100, 100, &mut rng)?.matrix);
    let (inter, groups) = gen_interdisciplinary(60, 90)?;
    describe("interdisciplinary", &inter);
    println!("  paper groups: {:?}", [0, 1, 2].map(|g| groups.iter().filter(|&&x| x == g).count()));

    let community = gen_community(&CommunityConfig::noiseless(3, 2, 0.7), &mut rng)?;
    describe("community", &community.matrix);
    for (i, row) in community.matrix.rows().enumerate() {
        let cells: Vec<String> = row.iter().map(|s| format!("{s:.1}")).collect();
        println!("  reviewer {} (block {}): {}", i + 1, community.reviewer_labels[i], cells.join(" "));
    }
    Ok(())
}
