//! Deterministic, splittable random streams.
//!
//! A [`RngStream`] is a ChaCha8 generator addressed by `(master_seed,
//! stream_id)`. ChaCha8 keys carry 2^64 independent streams, so distinct
//! stream ids give statistically independent sequences under one master seed,
//! and a stream's output is bit-reproducible across runs and platforms.
//!
//! The variate contract, shared by every sampler and by the reference
//! interpreters in the test suites:
//!
//! * one `u64` per uniform: `uniform = ((bits >> 11) + 0.5) * 2^-53`, which
//!   lies strictly inside (0, 1);
//! * exactly one uniform per standard normal, via the inverse CDF
//!   ([`normal_quantile`](super::special::normal_quantile));
//! * substreams are derived by hashing the parent stream id with a text
//!   label (FNV-1a 64), so derivation order never matters.
//!
//! A stream is owned by exactly one run at a time; there is no shared state.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::special::normal_quantile;

const TWO_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

/// A seedable, splittable random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    stream_id: u64,
}

impl RngStream {
    /// Stream addressed by `(master_seed, stream_id)`.
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RngStream { rng, stream_id }
    }

    /// Stream whose id is the FNV-1a hash of a text label, e.g.
    /// `"policy=mots;rep=17"`.
    pub fn from_label(master_seed: u64, label: &str) -> Self {
        Self::new(master_seed, fnv1a(FNV_BASIS, label.as_bytes()))
    }

    /// Derive an independent child stream keyed by `(parent id, label)`.
    ///
    /// The child starts at position zero of its own ChaCha stream regardless
    /// of how much of the parent has been consumed, so `substream("env")` and
    /// `substream("policy")` can be taken in any order.
    pub fn substream(&self, label: &str) -> Self {
        let seeded = fnv1a(FNV_BASIS, &self.stream_id.to_le_bytes());
        let id = fnv1a(seeded, label.as_bytes());
        let mut rng = ChaCha8Rng::from_seed(self.rng.get_seed());
        rng.set_stream(id);
        RngStream { rng, stream_id: id }
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in the open interval (0, 1). Consumes one `u64`.
    ///
    /// The 53-bit mapping is symmetric about 1/2 and never returns an
    /// endpoint, so downstream logs and quantiles are always finite.
    #[inline]
    pub fn uniform_open01(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * TWO_NEG_53
    }

    /// Standard normal draw by inverse transform. Consumes one uniform.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        normal_quantile(self.uniform_open01())
    }
}

const FNV_BASIS: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv1a(basis: u64, bytes: &[u8]) -> u64 {
    let mut h = basis;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}
