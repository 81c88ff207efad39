//! Seeded, splittable randomness.
//!
//! A [`RandomSource`] is a ChaCha8 stream addressed by `(seed, stream)`.
//! Children produced by [`RandomSource::split`] depend only on the parent's
//! address and the child key, never on how much of the parent stream has been
//! consumed, so Monte Carlo work can be cut into chunks and handed to workers
//! in any order with identical results.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Independent child source for worker / chunk `key`.
    pub fn split(&self, key: u64) -> RandomSource {
        let child_seed = splitmix64(self.seed ^ splitmix64(self.stream.wrapping_add(1)));
        Self::with_stream(child_seed, key)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        let xs: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(RandomSource::new(8).next_u64(), xs[0]);
    }

    #[test]
    fn split_ignores_parent_consumption() {
        let parent = RandomSource::new(42);
        let mut used = parent.clone();
        for _ in 0..100 {
            used.random::<f64>();
        }
        let mut c1 = parent.split(3);
        let mut c2 = used.split(3);
        assert_eq!(c1.next_u64(), c2.next_u64());
    }

    #[test]
    fn children_differ() {
        let parent = RandomSource::new(42);
        let a = parent.split(0).next_u64();
        let b = parent.split(1).next_u64();
        let c = parent.split(0).split(0).next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
