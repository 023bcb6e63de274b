use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::error::{Error, Result};
use crate::ntheory::{
    is_probable_prime, mod_inv, mod_pow_u, perfect_power, split_by_root, two_adic_valuation, Modulus,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    TooSmall,
    Even,
    Prime,
    PrimePower { base: BigUint, k: u32 },
    Composite,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::TooSmall => write!(f, "TooSmall"),
            Classification::Even => write!(f, "Even"),
            Classification::Prime => write!(f, "Prime"),
            Classification::PrimePower { base, k } => write!(f, "PrimePower({base}, {k})"),
            Classification::Composite => write!(f, "Composite"),
        }
    }
}

/// Only odd composites that are not prime powers go on to the factoring loop.
pub fn pre_check(n: &BigUint) -> Classification {
    if *n < BigUint::from(3u32) {
        return Classification::TooSmall;
    }
    if !n.bit(0) {
        return Classification::Even;
    }
    if is_probable_prime(n) {
        return Classification::Prime;
    }
    match perfect_power(n) {
        Some((base, k)) if is_probable_prime(&base) => Classification::PrimePower { base, k },
        _ => Classification::Composite,
    }
}

/// One entry ±2^t of the doubling multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    /// +1 or −1
    pub sign: i8,
    pub t: u32,
}

impl Slot {
    fn value(&self) -> BigInt {
        BigInt::from(self.sign) << self.t
    }
}

/// Two entries of S(a) that coincide: a^(σ 2^t) ≡ a^(σ' 2^t').
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Repetition {
    /// the entry reached later in scan order
    pub later: Slot,
    pub earlier: Slot,
}

impl Repetition {
    /// |σ 2^t − σ' 2^t'|, an exponent that annihilates a.
    pub fn exponent(&self) -> BigUint {
        (self.later.value() - self.earlier.value()).magnitude().clone()
    }

    /// (s₀, q) with exponent = 2^s₀·q and q odd.
    pub fn relation(&self) -> (u32, BigUint) {
        let e = self.exponent();
        let s0 = two_adic_valuation(&e) as u32;
        (s0, e >> s0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublingMultiset {
    /// a^(2^t) for t = 0..=M, then a^(−2^t) for t = 0..=M
    pub residues: Vec<BigUint>,
    pub repetition: Option<Repetition>,
}

/// S(a) by squaring and one inversion. The scan visits a^(2^t) for
/// increasing t, then a^(−2^t) for increasing t, and reports the first entry
/// equal to an earlier one.
pub fn doubling_multiset(a: &BigUint, modulus: &Modulus) -> Result<DoublingMultiset> {
    let m = modulus.dyadic_bound();
    let n = modulus.value();
    let mut residues = Vec::with_capacity(2 * (m as usize + 1));
    let mut slots = Vec::with_capacity(residues.capacity());
    for (sign, start) in [(1i8, a % n), (-1i8, mod_inv(a, modulus)?)] {
        let mut x = start;
        for t in 0..=m {
            let next = (&x * &x) % n;
            residues.push(std::mem::replace(&mut x, next));
            slots.push(Slot { sign, t });
        }
    }
    let repetition = (0..residues.len()).find_map(|j| {
        (0..j)
            .find(|&i| residues[i] == residues[j])
            .map(|i| Repetition {
                later: slots[j],
                earlier: slots[i],
            })
    });
    Ok(DoublingMultiset { residues, repetition })
}

/// Least s ≤ s₀ with a^(2^s q) ≡ 1, given that s₀ works.
pub fn least_two_power(a: &BigUint, q: &BigUint, s0: u32, modulus: &Modulus) -> Result<u32> {
    if !mod_pow_u(a, &(q << s0), modulus).is_one() {
        return Err(Error::ContractViolation(format!("a^(2^{s0} * {q}) is not 1 mod {modulus}")));
    }
    let mut s = s0;
    while s > 0 && mod_pow_u(a, &(q << (s - 1)), modulus).is_one() {
        s -= 1;
    }
    Ok(s)
}

/// (s, q) from a repetition in S(a): q odd, s least with a^(2^s q) ≡ 1.
pub fn extract_sq(a: &BigUint, modulus: &Modulus, repetition: &Repetition) -> Result<(u32, BigUint)> {
    let (s0, q) = repetition.relation();
    let s = least_two_power(a, &q, s0, modulus)?;
    Ok((s, q))
}

/// b = a^(2^M); its order is the odd part of ord_N(a).
pub fn oddify(a: &BigUint, modulus: &Modulus) -> BigUint {
    let e = BigUint::one() << modulus.dyadic_bound();
    mod_pow_u(a, &e, modulus)
}

/// Least k ≤ M with a^(2^k r_b) ≡ 1; returns (k, 2^k r_b).
pub fn lift_order(a: &BigUint, r_b: &BigUint, modulus: &Modulus) -> Result<(u32, BigUint)> {
    for k in 0..=modulus.dyadic_bound() {
        let r = r_b << k;
        if mod_pow_u(a, &r, modulus).is_one() {
            return Ok((k, r));
        }
    }
    Err(Error::ContractViolation(format!(
        "no k ≤ {} with a^(2^k * {r_b}) = 1",
        modulus.dyadic_bound()
    )))
}

/// x = a^half; when x² ≡ 1 and x ≢ ±1 this splits N as
/// (gcd(x−1, N), gcd(x+1, N)).
pub fn sqrt_attack(a: &BigUint, half: &BigUint, modulus: &Modulus) -> Option<(BigUint, BigUint)> {
    let x = mod_pow_u(a, half, modulus);
    split_by_root(&x, modulus)
}
