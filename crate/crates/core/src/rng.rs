//! Seeded randomness for the generators.
//!
//! The stream is ChaCha8 (`rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64`. Both are specified to be portable and
//! value-stable, so a seed reproduces the same trees on every platform.

use num_bigint::BigUint;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Name and version of the generator, printed by `--verbose` output.
pub const GENERATOR_ID: &str = "chacha8/seed_from_u64 (rand_chacha 0.9)";

/// A single-owner stream of random draws.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random mantissa bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `0..bound` without modulo bias.
    ///
    /// Multiply-shift with rejection: the low half of `x * bound` falls
    /// below `2^64 mod bound` for exactly the draws that would bias the
    /// high half, and those are redrawn.
    pub fn next_below(&mut self, bound: u64) -> Result<u64> {
        if bound == 0 {
            return Err(Error::ZeroBound);
        }
        let mut wide = u128::from(self.rng.next_u64()) * u128::from(bound);
        if (wide as u64) < bound {
            // only now can the draw be in the biased zone
            let threshold = bound.wrapping_neg() % bound;
            while (wide as u64) < threshold {
                wide = u128::from(self.rng.next_u64()) * u128::from(bound);
            }
        }
        Ok((wide >> 64) as u64)
    }

    /// `next_below` for `usize` bounds.
    pub fn next_index(&mut self, bound: usize) -> Result<usize> {
        self.next_below(bound as u64).map(|x| x as usize)
    }

    /// Uniform on `0..bound` for an arbitrary-precision bound.
    ///
    /// Draws `bits(bound)` random bits, least significant word first, and
    /// rejects values `>= bound`; fewer than two attempts on average.
    pub fn next_below_big(&mut self, bound: &BigUint) -> Result<BigUint> {
        let bits = bound.bits();
        if bits == 0 {
            return Err(Error::ZeroBound);
        }
        let words = bits.div_ceil(64) as usize;
        let top_mask = match bits % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        };
        let mut digits = vec![0u64; words];
        loop {
            for d in digits.iter_mut() {
                *d = self.rng.next_u64();
            }
            digits[words - 1] &= top_mask;
            let candidate = BigUint::from_slice(&to_u32_digits(&digits));
            if &candidate < bound {
                return Ok(candidate);
            }
        }
    }
}

fn to_u32_digits(words: &[u64]) -> Vec<u32> {
    words
        .iter()
        .flat_map(|&w| [w as u32, (w >> 32) as u32])
        .collect()
}
