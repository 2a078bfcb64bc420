//! Seeded Bernoulli reward environment.
//!
//! Draws come from a single ChaCha8 stream seeded with `ChaCha8Rng::seed_from_u64`.
//! A reward for arm `i` is `1` iff `u < μ_i` for `u` uniform on `[0, 1)`.
//! Streams are bit-identical for a given seed and call order within this crate;
//! nothing is promised across other implementations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Generator used for rewards and randomized learners.
pub type SimRng = ChaCha8Rng;

/// Stream tag for a learner's private generator, mixed into the run seed.
pub(crate) const LEARNER_STREAM: u64 = 0x6c65_6172_6e65_7221;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replication `rep` under base seed `seed`: `splitmix64(seed ^ splitmix64(rep))`.
pub fn mix_seed(seed: u64, rep: u64) -> u64 {
    splitmix64(seed ^ splitmix64(rep))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bernoulli arms sharing one seeded generator.
#[derive(Debug, Clone)]
pub struct BernoulliEnvironment {
    means: Vec<f64>,
    rng: SimRng,
}

/// Builds an environment whose draw stream is a pure function of `(seed, call order)`.
pub fn make_env(means: &[f64], seed: u64) -> Result<BernoulliEnvironment> {
    BernoulliEnvironment::new(means.to_vec(), seed)
}

impl BernoulliEnvironment {
    pub fn new(means: Vec<f64>, seed: u64) -> Result<Self> {
        if let Some((arm, &mean)) = means
            .iter()
            .enumerate()
            .find(|(_, m)| !(0.0..=1.0).contains(*m))
        {
            return Err(Error::MeanOutOfRange { arm, mean });
        }
        Ok(Self {
            means,
            rng: rng_from_seed(seed),
        })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Pulls `arm` and returns its reward in `{0, 1}`.
    pub fn draw_reward(&mut self, arm: usize) -> Result<u8> {
        let k = self.means.len();
        let mean = *self
            .means
            .get(arm)
            .ok_or(Error::IndexOutOfRange { index: arm, k })?;
        let u: f64 = self.rng.random();
        Ok(u8::from(u < mean))
    }
}
