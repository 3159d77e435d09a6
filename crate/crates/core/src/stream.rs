//! Counter-based random substreams.
//!
//! Every random draw in the crate comes from a generator keyed by
//! `(seed, purpose, i, j)`, where `i` and `j` are work-unit coordinates such as
//! replicate and classifier index. The key is mixed with SplitMix64 into the
//! 128-bit state of a PCG64 (MCG variant) generator. Results therefore depend
//! only on the key, not on which thread ran a work unit or in which order.

use rand_pcg::Pcg64Mcg;

/// Generator type handed out for every substream.
pub type StreamRng = Pcg64Mcg;

/// What a substream is used for; keeps different consumers of the same
/// `(i, j)` coordinates from sharing draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    /// Reference-variable draws of one replicate.
    Reference = 1,
    /// One classifier's outcomes within one replicate.
    Classifier = 2,
    /// Resampling of teams for one bootstrap sample.
    Bootstrap = 3,
    /// Seeds of the simulations nested inside one bootstrap sample.
    BootstrapSimulation = 4,
    /// One team's labelled score sample within one replicate.
    Scores = 5,
    /// Synthetic leaderboard generation.
    Synthetic = 6,
    /// Placement of fixed reference successes.
    Placement = 7,
}

const fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Root of a family of substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    seed: u64,
}

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Key of a derived family, e.g. the simulations nested in bootstrap sample `b`.
    pub fn derive(&self, purpose: Purpose, index: u64) -> StreamKey {
        StreamKey::new(self.mix(purpose, index, 0).0)
    }

    fn mix(&self, purpose: Purpose, i: u64, j: u64) -> (u64, u64) {
        let a = splitmix64(self.seed ^ splitmix64(purpose as u64));
        let b = splitmix64(a ^ i);
        let c = splitmix64(b ^ splitmix64(j.wrapping_add(0x5851_F42D_4C95_7F2D)));
        (c, splitmix64(c ^ 0xD1B5_4A32_D192_ED03))
    }

    /// Generator for work unit `(i, j)` of the given purpose.
    pub fn rng(&self, purpose: Purpose, i: u64, j: u64) -> StreamRng {
        let (hi, lo) = self.mix(purpose, i, j);
        Pcg64Mcg::new(((hi as u128) << 64) | lo as u128)
    }
}
