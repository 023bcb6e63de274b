use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::One;
use rand::Rng;

use crate::error::Result;
use crate::ntheory::{is_plus_minus_one, mod_pow_u, Modulus, OrderOracle};

/// Lower bound 1 − (m+1)/2^m on the chance that a uniform unit modulo a
/// product of m distinct odd primes has even order r and a^(r/2) ≢ ±1.
pub fn success_probability(m: u32) -> f64 {
    1.0 - (m as f64 + 1.0) / 2f64.powi(m as i32)
}

/// Frequency of that event over uniform units, with exact orders.
pub fn monte_carlo_success<G: Rng>(modulus: &Modulus, trials: u64, rng: &mut G) -> Result<f64> {
    let oracle = OrderOracle::new(modulus)?;
    let n = modulus.value();
    let mut hits = 0u64;
    for _ in 0..trials {
        let a = loop {
            let a = rng.gen_biguint_range(&BigUint::one(), n);
            if a.gcd(n).is_one() {
                break a;
            }
        };
        let r = oracle.order(a.iter_u64_digits().next().unwrap_or(0))?;
        if r % 2 == 0 {
            let x = mod_pow_u(&a, &BigUint::from(r / 2), modulus);
            if !is_plus_minus_one(&x, modulus) {
                hits += 1;
            }
        }
    }
    Ok(hits as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_form() {
        assert_eq!(success_probability(2), 0.25);
        assert_eq!(success_probability(3), 0.5);
        assert_eq!(success_probability(4), 0.6875);
    }

    #[test]
    fn fifteen_frequency() {
        // of the 8 units, 1 (odd order) and 14 (≡ −1) fail; the other 6 succeed
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = monte_carlo_success(&Modulus::from_u64(15).unwrap(), 40_000, &mut rng).unwrap();
        assert!((f - 0.75).abs() < 0.02, "{f}");
    }
}
