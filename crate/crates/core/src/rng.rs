//! Keyed random streams.
//!
//! Every random quantity in a simulation is drawn from a ChaCha8 stream whose
//! key is derived from the experiment seed, a domain tag (innovations,
//! coefficients, limit points, ...) and one or more indices such as the
//! replication number. Results therefore do not depend on how replications
//! are scheduled across worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags separating independent families of random draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Innovations = 1,
    Coefficients = 2,
    LimitPoints = 3,
    LimitCoefficients = 4,
    Diagnostics = 5,
    Fixtures = 6,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hierarchical stream key: `StreamKey::new(seed).with(Domain::Innovations).index(rep)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        StreamKey(splitmix64(seed))
    }

    pub fn with(self, domain: Domain) -> Self {
        self.index(0x5eed_0000_0000_0000 ^ domain as u64)
    }

    pub fn index(self, i: u64) -> Self {
        StreamKey(splitmix64(self.0 ^ splitmix64(i.wrapping_add(0x632b_e59b_d9b4_e019))))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

/// Stream for `domain` and replication `rep` under experiment `seed`.
pub fn stream(seed: u64, domain: Domain, rep: u64) -> ChaCha8Rng {
    StreamKey::new(seed).with(domain).index(rep).rng()
}
