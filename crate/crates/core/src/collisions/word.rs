use num_bigint::{BigInt, BigUint};
use rand::Rng;

use crate::diffusion::CayleyWalk;
use crate::error::Result;
use crate::ntheory::{Modulus, ResidueRing};

/// One step ε·2^t of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    /// +1 or −1
    pub sign: i8,
    pub t: u32,
}

impl Letter {
    /// Generator slot in [`CayleyWalk`] layout.
    pub fn slot(&self, m: u32) -> usize {
        let base = if self.sign > 0 { 0 } else { m as usize + 1 };
        base + self.t as usize
    }

    pub fn from_slot(slot: usize, m: u32) -> Self {
        let width = m as usize + 1;
        Self {
            sign: if slot < width { 1 } else { -1 },
            t: (slot % width) as u32,
        }
    }
}

/// A non-lazy word in the dyadic generators; its endpoint is a^E(w).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DyadicWord {
    pub letters: Vec<Letter>,
}

impl DyadicWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// E(w) = Σ ε_i 2^(t_i).
    pub fn exponent(&self) -> BigInt {
        let top = self.letters.iter().map(|l| l.t).max().unwrap_or(0);
        let mut counts = vec![0i64; top as usize + 1];
        for l in &self.letters {
            counts[l.t as usize] += l.sign as i64;
        }
        exponent_from_counts(&counts)
    }
}

/// Σ counts[t]·2^t, exact.
pub fn exponent_from_counts(counts: &[i64]) -> BigInt {
    // |counts[t]| < 2^63 and t < 64 keeps every partial sum inside i128
    if counts.len() <= 63 {
        let e: i128 = counts
            .iter()
            .enumerate()
            .map(|(t, &c)| (c as i128) << t)
            .sum();
        return BigInt::from(e);
    }
    let mut e = BigInt::from(0);
    for &c in counts.iter().rev() {
        e <<= 1;
        e += c;
    }
    e
}

/// Draw L letters, each from a uniform generator slot in [0, 2(M+1)), which
/// makes sign and t uniform and independent.
pub fn sample_word<G: Rng + ?Sized>(rng: &mut G, length: usize, m: u32) -> DyadicWord {
    let slots = 2 * (m as usize + 1);
    DyadicWord::new(
        (0..length)
            .map(|_| Letter::from_slot(rng.gen_range(0..slots), m))
            .collect(),
    )
}

/// (a^E(w) mod N, E(w)) by one multiplication per letter.
pub fn word_endpoint(a: &BigUint, modulus: &Modulus, word: &DyadicWord) -> Result<(BigUint, BigInt)> {
    crate::with_ring!(modulus, |ring| endpoint_in(&CayleyWalk::new(ring, a)?, word))
}

pub(crate) fn endpoint_in<R: ResidueRing>(walk: &CayleyWalk<R>, word: &DyadicWord) -> Result<(BigUint, BigInt)> {
    let ring = walk.ring();
    let gens = walk.generators();
    let m = walk.dyadic_bound();
    let mut x = ring.one();
    for letter in &word.letters {
        x = ring.mul(&x, &gens[letter.slot(m)]);
    }
    Ok((ring.leave(&x), word.exponent()))
}
