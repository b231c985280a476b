//! Seeded random streams, the truncated exponential distribution and uniform
//! node selection.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSubset};
use crate::scalar::Scalar;

/// Deterministic seed derivation. A run draws every random value from a
/// stream derived from one root seed by a sequence of `(tag, index)` steps,
/// so each phase of an algorithm is reproducible on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stream {
    key: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

impl Stream {
    pub fn new(root_seed: u64) -> Self {
        Self {
            key: splitmix64(root_seed),
        }
    }

    pub fn child(&self, tag: &str, index: u64) -> Stream {
        let k = splitmix64(self.key ^ fnv1a(tag.as_bytes()));
        Stream {
            key: splitmix64(k ^ splitmix64(index)),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key)
    }
}

/// Parameters of `scale · Texp(lambda)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TexpParams<F> {
    pub lambda: f64,
    pub scale: F,
}

impl<F: Scalar> TexpParams<F> {
    pub fn new(lambda: f64, scale: F) -> Result<Self> {
        if !(lambda > 1.0) || !lambda.is_finite() {
            return Err(Error::param("lambda", format!("must exceed 1, got {lambda}")));
        }
        if !(scale >= F::zero()) {
            return Err(Error::param("scale", "must be non-negative"));
        }
        Ok(Self { lambda, scale })
    }
}

/// Inverse CDF of `Texp(lambda)` on `[0, 1]`: maps `u ∈ [0,1)` to
/// `-ln(1 - u(1 - e^{-λ})) / λ`.
pub fn texp_from_uniform(lambda: f64, u: f64) -> f64 {
    let x = -(-u * (-(-lambda).exp_m1())).ln_1p() / lambda;
    x.clamp(0.0, 1.0)
}

/// CDF `(1 - e^{-λx}) / (1 - e^{-λ})` for `x ∈ [0, 1]`.
pub fn texp_cdf(lambda: f64, x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    (-lambda * x).exp_m1() / (-lambda).exp_m1()
}

/// Mean `1/λ - e^{-λ}/(1 - e^{-λ})`.
pub fn texp_mean(lambda: f64) -> f64 {
    1.0 / lambda - (-lambda).exp() / (-(-lambda).exp_m1())
}

/// Draws `scale · X` with `X ~ Texp(lambda)`.
pub fn sample_texp<F: Scalar, R: Rng + ?Sized>(p: &TexpParams<F>, rng: &mut R) -> F {
    let u: f64 = rng.gen();
    p.scale * F::lit(texp_from_uniform(p.lambda, u))
}

/// Uniform choice from `candidates`: every candidate draws a random 64-bit
/// label and the largest label wins (ties go to the smaller id).
pub fn pick_uniform<R: RngCore + ?Sized>(candidates: &NodeSubset, rng: &mut R) -> Result<NodeId> {
    let mut best: Option<(u64, NodeId)> = None;
    for v in candidates.iter() {
        let label = rng.next_u64();
        if best.is_none_or(|(b, _)| label > b) {
            best = Some((label, v));
        }
    }
    best.map(|(_, v)| v).ok_or(Error::EmptyCandidates)
}
