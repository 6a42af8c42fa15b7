//! Named, independent random streams derived from one master seed.
//!
//! Every consumer asks for `(stream, index)`; two runs that share a master
//! seed see the same numbers for the same request regardless of what else
//! they drew. This is what lets algorithms be compared under common random
//! numbers.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    /// Shuffle of reviewer arrival order.
    Arrival,
    /// Bid coin flips, one stream per arrival slot.
    Bids,
    /// Random tie-breaking inside baseline orderings, one stream per arrival slot.
    TieBreak,
    /// Arrival batch sizes.
    Batch,
    /// Papers found by search, one stream per arrival slot.
    Subset,
    /// Perturbation of similarities when sampling bids, one stream per arrival slot.
    Noise,
    /// Drawing a fresh similarity matrix.
    Matrix,
    /// Derivation of per-run child seeds.
    Child,
}

impl Stream {
    fn tag(self) -> u64 {
        let t = match self {
            Stream::Arrival => 1,
            Stream::Bids => 2,
            Stream::TieBreak => 3,
            Stream::Batch => 4,
            Stream::Subset => 5,
            Stream::Noise => 6,
            Stream::Matrix => 7,
            Stream::Child => 8,
        };
        t << 48
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedStreams {
    pub master: u64,
}

impl SeedStreams {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    /// Generator for `index` within `stream`; `index` must be below 2^48.
    pub fn rng(&self, stream: Stream, index: u64) -> ChaCha8Rng {
        debug_assert!(index < 1 << 48);
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(stream.tag() | index);
        rng
    }

    /// Independent streams for repetition `run` of an experiment.
    pub fn child(&self, run: u64) -> SeedStreams {
        SeedStreams { master: self.rng(Stream::Child, run).next_u64() }
    }
}
