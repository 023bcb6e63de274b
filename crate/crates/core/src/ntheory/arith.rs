use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Modulus;
use crate::error::{Error, Result};

/// `base^exp mod N` for a signed exponent.
///
/// A negative exponent inverts the base once and raises the inverse to |exp|.
pub fn mod_pow(base: &BigUint, exp: &BigInt, modulus: &Modulus) -> Result<BigUint> {
    let magnitude = exp.magnitude();
    if exp.sign() == Sign::Minus {
        let inv = mod_inv(base, modulus)?;
        Ok(inv.modpow(magnitude, modulus.value()))
    } else {
        Ok(base.modpow(magnitude, modulus.value()))
    }
}

/// `base^exp mod N` for a nonnegative exponent.
#[inline]
pub fn mod_pow_u(base: &BigUint, exp: &BigUint, modulus: &Modulus) -> BigUint {
    base.modpow(exp, modulus.value())
}

/// Multiplicative inverse by the extended Euclidean algorithm.
pub fn mod_inv(a: &BigUint, modulus: &Modulus) -> Result<BigUint> {
    let n = BigInt::from(modulus.value().clone());
    let a_red = BigInt::from(a % modulus.value());
    let ext = a_red.extended_gcd(&n);
    if !ext.gcd.is_one() {
        return Err(Error::NonInvertible {
            value: a.clone(),
            modulus: modulus.value().clone(),
            gcd: ext.gcd.magnitude().clone(),
        });
    }
    let x = ext.x.mod_floor(&n);
    Ok(x.magnitude().clone())
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Is `x ≡ ±1 (mod N)`?
pub fn is_plus_minus_one(x: &BigUint, modulus: &Modulus) -> bool {
    x.is_one() || *x == modulus.minus_one()
}

/// For x² ≡ 1 with x ≢ ±1 (mod N), the split (gcd(x−1, N), gcd(x+1, N)).
/// Both parts are proper divisors of N; `None` for a trivial root.
pub fn split_by_root(x: &BigUint, modulus: &Modulus) -> Option<(BigUint, BigUint)> {
    let n = modulus.value();
    let x = x % n;
    if is_plus_minus_one(&x, modulus) || (&x * &x) % n != BigUint::one() {
        return None;
    }
    let d1 = (&x - 1u32).gcd(n);
    let d2 = (&x + 1u32).gcd(n);
    for d in [&d1, &d2] {
        assert!(!d.is_one() && d != n && (n % d).is_zero(), "nontrivial root must split N");
    }
    Some((d1, d2))
}

/// Residue of a signed integer modulo N, in [0, N).
pub fn reduce_signed(x: &BigInt, modulus: &Modulus) -> BigUint {
    let n = BigInt::from(modulus.value().clone());
    let r = x.mod_floor(&n);
    debug_assert!(!r.is_negative());
    r.magnitude().clone()
}

/// Largest power of two dividing `x` (x ≠ 0).
pub fn two_adic_valuation(x: &BigUint) -> u64 {
    if x.is_zero() {
        return 0;
    }
    x.trailing_zeros().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::from_u64(n).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn pow_examples() {
        assert_eq!(mod_pow(&big(3), &BigInt::from(33), &m(299)).unwrap(), big(1));
        assert_eq!(mod_pow(&big(17), &BigInt::from(0), &m(299)).unwrap(), big(1));
        // 2^32 ≡ −1 mod F5
        assert_eq!(
            mod_pow(&big(2), &BigInt::from(32), &m(4294967297)).unwrap(),
            big(4294967296)
        );
    }

    #[test]
    fn pow_negative_exponent() {
        let r = mod_pow(&big(3), &BigInt::from(-1), &m(299)).unwrap();
        assert_eq!(r, big(100));
        let r = mod_pow(&big(3), &BigInt::from(-5), &m(299)).unwrap();
        assert_eq!((r * big(243)) % big(299), big(1));
        let err = mod_pow(&big(13), &BigInt::from(-2), &m(299)).unwrap_err();
        assert!(matches!(err, Error::NonInvertible { ref gcd, .. } if *gcd == big(13)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inv(&big(1), &m(299)).unwrap(), big(1));
        assert_eq!(mod_inv(&big(3), &m(299)).unwrap(), big(100));
        match mod_inv(&big(5), &m(15)) {
            Err(Error::NonInvertible { gcd, .. }) => assert_eq!(gcd, big(5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inverse_brute_force_small() {
        for n in 3u64..200 {
            let modulus = m(n);
            for a in 0..n {
                let brute = (1..n).find(|x| a * x % n == 1);
                match (mod_inv(&big(a), &modulus), brute) {
                    (Ok(x), Some(y)) => assert_eq!(x, big(y)),
                    (Err(Error::NonInvertible { gcd, .. }), None) => {
                        assert_eq!(gcd, big(a.gcd(&n)))
                    }
                    (got, want) => panic!("n={n} a={a}: {got:?} vs {want:?}"),
                }
            }
        }
    }

    #[test]
    fn signed_reduction() {
        assert_eq!(reduce_signed(&BigInt::from(-1), &m(299)), big(298));
        assert_eq!(reduce_signed(&BigInt::from(600), &m(299)), big(2));
    }

    #[test]
    fn valuation() {
        assert_eq!(two_adic_valuation(&big(6700416)), 7);
        assert_eq!(two_adic_valuation(&big(33)), 0);
    }
}
