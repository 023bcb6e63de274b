use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// A modulus N ≥ 3 together with its dyadic bound M = ⌊log₂N⌋ + 1.
///
/// M is the bit length of N, so 2^(M-1) ≤ N < 2^M.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    n: BigUint,
    m: u32,
}

impl Modulus {
    pub fn new(n: BigUint) -> Result<Self> {
        if n < BigUint::from(3u32) {
            return Err(Error::ModulusTooSmall(n));
        }
        let m = n.bits() as u32;
        Ok(Self { n, m })
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        Self::new(BigUint::from(n))
    }

    #[inline]
    pub fn value(&self) -> &BigUint {
        &self.n
    }

    /// ⌊log₂N⌋ + 1.
    #[inline]
    pub fn dyadic_bound(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn bit_len(&self) -> u64 {
        self.n.bits()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.n.to_u64()
    }

    pub fn is_odd(&self) -> bool {
        self.n.bit(0)
    }

    /// log₂N as a float. Exact enough for step budgets; callers round up.
    pub fn log2(&self) -> f64 {
        let bits = self.n.bits();
        if bits <= 53 {
            return self.n.to_f64().unwrap_or(f64::INFINITY).log2();
        }
        // keep the top 53 bits, shift the rest into the exponent
        let shift = bits - 53;
        let top = (&self.n >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.log2() + shift as f64
    }

    /// N − 1, the residue of −1.
    pub fn minus_one(&self) -> BigUint {
        &self.n - 1u32
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.n.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_bound_brackets_n() {
        for n in 3u64..5000 {
            let modulus = Modulus::from_u64(n).unwrap();
            let m = modulus.dyadic_bound();
            assert!(1u64 << (m - 1) <= n && n < 1u64 << m, "n = {n}");
        }
        assert_eq!(Modulus::from_u64(299).unwrap().dyadic_bound(), 9);
        assert_eq!(Modulus::from_u64(1022117).unwrap().dyadic_bound(), 20);
        assert_eq!(Modulus::from_u64(4294967297).unwrap().dyadic_bound(), 33);
    }

    #[test]
    fn rejects_tiny() {
        assert!(matches!(Modulus::from_u64(2), Err(Error::ModulusTooSmall(_))));
        assert!(Modulus::from_u64(0).is_err());
    }

    #[test]
    fn log2_large() {
        let n = BigUint::from(1u32) << 200u32;
        let modulus = Modulus::new(n + 1u32).unwrap();
        assert!((modulus.log2() - 200.0).abs() < 1e-12);
        assert!((Modulus::from_u64(299).unwrap().log2() - 299f64.log2()).abs() < 1e-15);
    }
}
