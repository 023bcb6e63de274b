//! Residue arithmetic backends for the hot loops (walk steps, word
//! endpoints). The public number-theory surface works on `BigUint`; these
//! backends trade that generality for speed when N fits in a machine word.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::arith::mod_inv;
use super::Modulus;
use crate::error::Result;

/// Multiplication in (ℤ/Nℤ) on some internal representation of residues.
pub trait ResidueRing: Clone + Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn modulus(&self) -> &Modulus;
    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Map a canonical residue into the ring (reducing it mod N first).
    fn enter(&self, x: &BigUint) -> Self::Elem;
    /// Canonical residue in [0, N).
    fn leave(&self, x: &Self::Elem) -> BigUint;

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let inv = mod_inv(&self.leave(a), self.modulus())?;
        Ok(self.enter(&inv))
    }

    fn pow(&self, base: &Self::Elem, exp: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.square(&acc);
            if exp.bit(i) {
                acc = self.mul(&acc, base);
            }
        }
        acc
    }
}

/// Montgomery multiplication for odd N < 2^64.
#[derive(Debug, Clone)]
pub struct Montgomery64 {
    modulus: Modulus,
    n: u64,
    /// N⁻¹ mod 2^64
    n_inv: u64,
    /// 2^128 mod N
    r2: u64,
    /// 2^64 mod N, the Montgomery image of 1
    one: u64,
}

impl Montgomery64 {
    pub fn new(modulus: &Modulus) -> Option<Self> {
        let n = modulus.to_u64()?;
        if n % 2 == 0 {
            return None;
        }
        // Newton iteration doubles the number of correct low bits each round.
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        let one = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((one as u128 * one as u128) % n as u128) as u64;
        Some(Self {
            modulus: modulus.clone(),
            n,
            n_inv: inv,
            r2,
            one,
        })
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let lo = t as u64;
        let hi = (t >> 64) as u64;
        let m = lo.wrapping_mul(self.n_inv);
        let mn_hi = ((m as u128 * self.n as u128) >> 64) as u64;
        // t − m·N has zero low word, so the high words differ by the result
        let (res, borrow) = hi.overflowing_sub(mn_hi);
        if borrow {
            res.wrapping_add(self.n)
        } else {
            res
        }
    }

    #[inline(always)]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    pub fn to_mont(&self, x: u64) -> u64 {
        self.mul_raw(x % self.n, self.r2)
    }

    pub fn from_mont(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }
}

impl ResidueRing for Montgomery64 {
    type Elem = u64;

    fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    #[inline(always)]
    fn one(&self) -> u64 {
        self.one
    }

    #[inline(always)]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }

    fn enter(&self, x: &BigUint) -> u64 {
        let reduced = (x % self.modulus.value()).to_u64().expect("reduced below N < 2^64");
        self.to_mont(reduced)
    }

    fn leave(&self, x: &u64) -> BigUint {
        BigUint::from(self.from_mont(*x))
    }
}

/// Plain `BigUint` arithmetic for any N.
#[derive(Debug, Clone)]
pub struct BigRing {
    modulus: Modulus,
}

impl BigRing {
    pub fn new(modulus: &Modulus) -> Self {
        Self {
            modulus: modulus.clone(),
        }
    }
}

impl ResidueRing for BigRing {
    type Elem = BigUint;

    fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    fn one(&self) -> BigUint {
        BigUint::from(1u32)
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % self.modulus.value()
    }

    fn enter(&self, x: &BigUint) -> BigUint {
        x % self.modulus.value()
    }

    fn leave(&self, x: &BigUint) -> BigUint {
        x.clone()
    }
}

/// Run `$body` with `$ring` bound to the fastest backend for `$modulus`.
#[macro_export]
macro_rules! with_ring {
    ($modulus:expr, |$ring:ident| $body:expr) => {
        match $crate::ntheory::Montgomery64::new($modulus) {
            Some($ring) => $body,
            None => {
                let $ring = $crate::ntheory::BigRing::new($modulus);
                $body
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn check_against_big(n: u64, a: u64, b: u64) {
        let modulus = Modulus::from_u64(n).unwrap();
        let mont = Montgomery64::new(&modulus).unwrap();
        let big = BigRing::new(&modulus);
        let (ba, bb) = (BigUint::from(a), BigUint::from(b));
        let want = big.mul(&big.enter(&ba), &big.enter(&bb));
        let got = mont.leave(&mont.mul(&mont.enter(&ba), &mont.enter(&bb)));
        assert_eq!(got, want, "n={n} a={a} b={b}");
    }

    #[test]
    fn montgomery_edges() {
        for n in [3u64, 299, 4294967297, u64::MAX, u64::MAX - 2, (1 << 63) + 1] {
            for (a, b) in [(0, 0), (1, 1), (n - 1, n - 1), (n - 1, 2), (12345 % n, n.saturating_sub(7))] {
                check_against_big(n, a, b);
            }
        }
        assert!(Montgomery64::new(&Modulus::from_u64(10).unwrap()).is_none());
    }

    #[test]
    fn ring_pow_and_inverse() {
        let modulus = Modulus::from_u64(299).unwrap();
        let ring = Montgomery64::new(&modulus).unwrap();
        let three = ring.enter(&BigUint::from(3u32));
        assert!(ring.is_one(&ring.pow(&three, &BigUint::from(33u32))));
        let inv = ring.inverse(&three).unwrap();
        assert_eq!(ring.leave(&inv), BigUint::from(100u32));
        assert!(ring.inverse(&ring.enter(&BigUint::from(13u32))).is_err());
    }

    proptest! {
        #[test]
        fn montgomery_matches_bigint(n in (3u64..).prop_map(|n| n | 1), a: u64, b: u64) {
            check_against_big(n, a % n, b % n);
        }
    }
}
