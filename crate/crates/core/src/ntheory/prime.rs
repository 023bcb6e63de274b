use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bases that make Miller–Rabin deterministic for every n < 2^64.
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra random witnesses used above 2^64 (error ≤ 4^-64 = 2^-128).
const RANDOM_WITNESSES: usize = 64;

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    DETERMINISTIC_BASES
        .iter()
        .all(|&a| miller_rabin_u64(n, a, d, s))
}

fn miller_rabin_big(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let n_minus_one = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Miller–Rabin primality test.
///
/// Deterministic below 2^64. Above, the fixed bases are followed by 64 random
/// witnesses drawn from a stream seeded by `n` itself, so the answer for a
/// given `n` never changes between runs.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    for &a in &DETERMINISTIC_BASES {
        if !miller_rabin_big(n, &BigUint::from(a), &d, s) {
            return false;
        }
    }
    let seed = n.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |h, w| {
        h.rotate_left(17) ^ w.wrapping_mul(0xff51_afd7_ed55_8ccd)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bytes = n.bits().div_ceil(8) as usize + 8;
    let mut buf = vec![0u8; bytes];
    let span = n - 3u32;
    for _ in 0..RANDOM_WITNESSES {
        rng.fill(&mut buf[..]);
        let a = BigUint::from_bytes_le(&buf) % &span + 2u32;
        if !miller_rabin_big(n, &a, &d, s) {
            return false;
        }
    }
    true
}

/// If `n = base^k` with k ≥ 2, returns the pair with the largest k (hence the
/// smallest base).
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if *n < BigUint::from(4u32) {
        return None;
    }
    let max_k = n.bits() as u32;
    (2..=max_k).rev().find_map(|k| {
        let root = n.nth_root(k);
        (root > BigUint::one() && root.pow(k) == *n).then_some((root, k))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn named_values() {
        assert!(is_probable_prime(&big(1009)));
        assert!(is_probable_prime(&big(1013)));
        assert!(!is_probable_prime(&big(299)));
        assert!(is_probable_prime(&big(2)));
        assert!(!is_probable_prime(&big(0)));
        assert!(!is_probable_prime(&big(1)));
        assert!(!is_probable_prime(&big(4294967297)));
        assert!(is_probable_prime(&big(6700417)));
    }

    #[test]
    fn agrees_with_sieve_below_one_million() {
        let limit = 1_000_000usize;
        let mut composite = vec![false; limit + 1];
        composite[0] = true;
        composite[1] = true;
        let mut i = 2;
        while i * i <= limit {
            if !composite[i] {
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        for (n, &is_comp) in composite.iter().enumerate() {
            assert_eq!(is_probable_prime(&big(n as u64)), !is_comp, "n = {n}");
        }
    }

    #[test]
    fn large_values() {
        // 2^89 − 1 and 2^127 − 1 are Mersenne primes
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_probable_prime(&m89));
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m89 * &m127)));
        // strong pseudoprime to bases 2..37 products stay composite
        let carmichael_like = big(3825123056546413051);
        assert!(!is_probable_prime(&carmichael_like));
        assert!(!is_probable_prime(&(big(18446744073709551557) * big(3))));
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(&big(8)), Some((big(2), 3)));
        assert_eq!(perfect_power(&big(121)), Some((big(11), 2)));
        assert_eq!(perfect_power(&big(64)), Some((big(2), 6)));
        assert_eq!(perfect_power(&big(1022117)), None);
        assert_eq!(perfect_power(&big(2)), None);
        assert_eq!(perfect_power(&big(225)), Some((big(15), 2)));
        let big_power = BigUint::from(1_000_003u64).pow(7);
        assert_eq!(perfect_power(&big_power), Some((big(1_000_003), 7)));
    }
}
