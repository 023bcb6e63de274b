use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::arith::mod_pow_u;
use super::prime::{is_probable_prime, mul_mod_u64, perfect_power, pow_mod_u64};
use super::Modulus;
use crate::error::{Error, Result};

/// Trial division bound used before switching to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Largest modulus the order oracle accepts (2^48).
pub const ORACLE_LIMIT: u64 = 1 << 48;

/// Effort budget for [`factorize`]: the total number of rho iterations
/// across all splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            rho_iterations: 50_000_000,
        }
    }
}

/// Complete factorization `source = ∏ prime^exponent`, primes increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleFactorization {
    factors: Vec<(BigUint, u32)>,
    source: BigUint,
}

impl OracleFactorization {
    fn from_map(map: BTreeMap<BigUint, u32>, source: BigUint) -> Self {
        let factors: Vec<_> = map.into_iter().collect();
        let out = Self { factors, source };
        debug_assert_eq!(out.product(), out.source);
        out
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn source(&self) -> &BigUint {
        &self.source
    }

    /// Number of distinct prime factors.
    pub fn distinct(&self) -> usize {
        self.factors.len()
    }

    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Euler's totient together with its own factorization, assembled from
    /// the factorizations of each p − 1.
    pub fn totient(&self, budget: FactorBudget) -> Result<OracleFactorization> {
        let mut map = BTreeMap::new();
        let mut phi = BigUint::one();
        for (p, e) in &self.factors {
            phi *= p.pow(e - 1) * (p - 1u32);
            if *e > 1 {
                *map.entry(p.clone()).or_insert(0) += e - 1;
            }
            let pm1 = factorize(&(p - 1u32), budget)?;
            for (q, k) in pm1.factors {
                *map.entry(q).or_insert(0) += k;
            }
        }
        Ok(Self::from_map(map, phi))
    }
}

/// Factor `n ≥ 1` completely: trial division to 10^6, then Brent's variant
/// of Pollard rho on whatever is left.
pub fn factorize(n: &BigUint, budget: FactorBudget) -> Result<OracleFactorization> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();

    let push = |map: &mut BTreeMap<BigUint, u32>, p: BigUint, k: u32| {
        *map.entry(p).or_insert(0) += k;
    };

    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        if BigUint::from(d * d) > rest {
            break;
        }
        let mut k = 0;
        while (&rest % d).is_zero() {
            rest /= d;
            k += 1;
        }
        if k > 0 {
            push(&mut map, BigUint::from(d), k);
        }
        d += if d == 2 { 1 } else { 2 };
    }

    let mut remaining_budget = budget.rho_iterations;
    let mut stack = vec![(rest, 1u32)];
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(&mut map, m, mult);
            continue;
        }
        if let Some((base, k)) = perfect_power(&m) {
            stack.push((base, mult * k));
            continue;
        }
        let divisor = split(&m, &mut remaining_budget).ok_or_else(|| Error::FactorizationStall(n.clone()))?;
        let other = &m / &divisor;
        stack.push((divisor, mult));
        stack.push((other, mult));
    }
    Ok(OracleFactorization::from_map(map, n.clone()))
}

/// A nontrivial divisor of the composite `m`, or `None` if the budget runs out.
fn split(m: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if m.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(small) = m.to_u64() {
        return (1..).take(64).find_map(|c| rho_u64(small, c, budget)).map(BigUint::from);
    }
    (1u32..)
        .take(64)
        .find_map(|c| rho_big(m, &BigUint::from(c), budget))
}

fn rho_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |x: u64| ((mul_mod_u64(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let batch = 128;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    let mut g = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..batch.min(r - k) {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            if *budget < batch {
                return None;
            }
            *budget -= batch;
            g = q.gcd(&n);
            k += batch;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, c: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let batch = 128u64;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut g = BigUint::one();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..batch.min(r - k) {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            if *budget < batch {
                return None;
            }
            *budget -= batch;
            g = q.gcd(n);
            k += batch;
        }
        r *= 2;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

/// Strip prime factors from a known multiple of ord(a) until it is the order.
pub fn order_from_multiple(
    a: &BigUint,
    multiple: &OracleFactorization,
    modulus: &Modulus,
) -> BigUint {
    let mut r = multiple.source().clone();
    for (p, e) in multiple.factors() {
        for _ in 0..*e {
            let candidate = &r / p;
            if mod_pow_u(a, &candidate, modulus).is_one() {
                r = candidate;
            } else {
                break;
            }
        }
    }
    r
}

/// Multiplicative orders modulo a fixed N ≤ 2^48, computed from the
/// factorization of φ(N). Independent of any walk or collision machinery.
#[derive(Debug, Clone)]
pub struct OrderOracle {
    n: u64,
    phi: u64,
    phi_factors: Vec<(u64, u32)>,
    n_factors: OracleFactorization,
}

impl OrderOracle {
    pub fn new(modulus: &Modulus) -> Result<Self> {
        let n = modulus
            .to_u64()
            .filter(|&n| n <= ORACLE_LIMIT)
            .ok_or_else(|| Error::OutOfOracleRange(modulus.value().clone()))?;
        let n_factors = factorize(modulus.value(), FactorBudget::default())?;
        let phi = n_factors.totient(FactorBudget::default())?;
        let phi_factors = phi
            .factors()
            .iter()
            .map(|(p, e)| (p.to_u64().expect("φ(N) < N fits in u64"), *e))
            .collect();
        Ok(Self {
            n,
            phi: phi.source().to_u64().expect("φ(N) < N fits in u64"),
            phi_factors,
            n_factors,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn totient(&self) -> u64 {
        self.phi
    }

    pub fn factorization(&self) -> &OracleFactorization {
        &self.n_factors
    }

    /// ord_N(a). Errors with the shared factor when a is not a unit.
    pub fn order(&self, a: u64) -> Result<u64> {
        let a = a % self.n;
        let g = a.gcd(&self.n);
        if g != 1 {
            return Err(Error::NonInvertible {
                value: BigUint::from(a),
                modulus: BigUint::from(self.n),
                gcd: BigUint::from(g),
            });
        }
        let mut r = self.phi;
        for &(p, e) in &self.phi_factors {
            for _ in 0..e {
                if pow_mod_u64(a, r / p, self.n) == 1 {
                    r /= p;
                } else {
                    break;
                }
            }
        }
        Ok(r)
    }
}

/// ord_N(a) by factoring φ(N). Refuses moduli above 2^48.
pub fn order_oracle(a: &BigUint, modulus: &Modulus) -> Result<u64> {
    let oracle = OrderOracle::new(modulus)?;
    let a = (a % modulus.value()).to_u64().expect("reduced below N ≤ 2^48");
    oracle.order(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn brute_order(a: u64, n: u64) -> u64 {
        let mut x = a % n;
        let mut k = 1;
        while x != 1 {
            x = x * a % n;
            k += 1;
        }
        k
    }

    #[test]
    fn factorization_invariants() {
        for n in [1u64, 2, 12, 299, 1022117, 4294967297, 8219999, 1099551473989, 600851475143] {
            let f = factorize(&big(n), FactorBudget::default()).unwrap();
            assert_eq!(f.product(), big(n));
            let primes: Vec<_> = f.factors().iter().map(|(p, _)| p.clone()).collect();
            assert!(primes.windows(2).all(|w| w[0] < w[1]));
            assert!(primes.iter().all(is_probable_prime));
        }
        let f5 = factorize(&big(4294967297), FactorBudget::default()).unwrap();
        assert_eq!(f5.factors(), &[(big(641), 1), (big(6700417), 1)]);
    }

    #[test]
    fn factors_beyond_trial_division() {
        let p = big(1_000_003);
        let q = big(1_000_033);
        let r = BigUint::parse_bytes(b"1000000000000000003", 10).unwrap();
        let n = &p * &q * &r * &p;
        let f = factorize(&n, FactorBudget::default()).unwrap();
        assert_eq!(f.factors(), &[(p, 2), (q, 1), (r, 1)]);
    }

    #[test]
    fn stalls_on_tiny_budget() {
        let n = big(1_000_003) * big(1_000_033);
        let err = factorize(&n, FactorBudget { rho_iterations: 10 }).unwrap_err();
        assert!(matches!(err, Error::FactorizationStall(_)));
    }

    #[test]
    fn oracle_examples() {
        let m = |n| Modulus::from_u64(n).unwrap();
        assert_eq!(order_oracle(&big(3), &m(299)).unwrap(), 33);
        assert_eq!(order_oracle(&big(4), &m(21)).unwrap(), 3);
        assert_eq!(order_oracle(&big(2), &m(21)).unwrap(), 6);
        assert_eq!(order_oracle(&big(576), &m(1022117)).unwrap(), 5313);
        assert_eq!(order_oracle(&big(3945765912), &m(4294967297)).unwrap(), 6700416);
        assert_eq!(order_oracle(&big(7081686), &m(8219999)).unwrap(), 682250);
    }

    #[test]
    fn oracle_refuses_large_and_non_units() {
        let big_mod = Modulus::new(BigUint::one() << 49u32).unwrap();
        assert!(matches!(
            order_oracle(&big(3), &big_mod),
            Err(Error::OutOfOracleRange(_))
        ));
        let m = Modulus::from_u64(299).unwrap();
        assert!(matches!(
            order_oracle(&big(13), &m),
            Err(Error::NonInvertible { .. })
        ));
    }

    #[test]
    fn oracle_matches_brute_force() {
        for n in 3u64..400 {
            let oracle = OrderOracle::new(&Modulus::from_u64(n).unwrap()).unwrap();
            for a in 1..n {
                if a.gcd(&n) == 1 {
                    assert_eq!(oracle.order(a).unwrap(), brute_order(a, n), "a={a} n={n}");
                }
            }
        }
    }

    #[test]
    fn stripping_from_multiple() {
        let modulus = Modulus::from_u64(4294967297).unwrap();
        let multiple = factorize(&big(314919552), FactorBudget::default()).unwrap();
        let r = order_from_multiple(&big(3945765912), &multiple, &modulus);
        assert_eq!(r, big(6700416));
    }
}
