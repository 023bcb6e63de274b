use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ntheory::{factorize, mod_pow_u, order_from_multiple, split_by_root, FactorBudget, Modulus};

/// Two words with the same endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub e_prev: BigInt,
    pub e_new: BigInt,
}

/// Endpoint → exponent of the first word that reached it.
#[derive(Debug, Clone)]
pub struct EndpointTable<K> {
    map: HashMap<K, BigInt>,
}

impl<K: Eq + Hash> Default for EndpointTable<K> {
    fn default() -> Self {
        Self { map: HashMap::new() }
    }
}

impl<K: Eq + Hash> EndpointTable<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Record a word's endpoint. A repeat with a different exponent is a
    /// collision; a repeat with the same exponent carries no information.
    pub fn observe(&mut self, endpoint: K, e: BigInt) -> Option<Collision> {
        match self.map.get(&endpoint) {
            None => {
                self.map.insert(endpoint, e);
                None
            }
            Some(prev) if *prev == e => None,
            Some(prev) => Some(Collision {
                e_prev: prev.clone(),
                e_new: e,
            }),
        }
    }
}

/// A nontrivial relation a^D ≡ 1 from a word collision, with D reduced by
/// halving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate {
    pub a: BigUint,
    pub e_prev: BigInt,
    pub e_new: BigInt,
    /// E_new − E_prev
    pub d: BigInt,
    pub d_min: BigUint,
}

impl CycleCertificate {
    /// Checks D ≠ 0 and a^|D| ≡ 1 before reducing.
    pub fn new(a: &BigUint, collision: Collision, modulus: &Modulus) -> Result<Self> {
        let d = &collision.e_new - &collision.e_prev;
        if d.is_zero() {
            return Err(Error::ContractViolation("trivial collision has D = 0".into()));
        }
        let d_min = halve_reduce(d.magnitude(), a, modulus)?;
        Ok(Self {
            a: a.clone(),
            e_prev: collision.e_prev,
            e_new: collision.e_new,
            d,
            d_min,
        })
    }
}

/// Divide D by 2 while the half still annihilates a.
pub fn halve_reduce(d: &BigUint, a: &BigUint, modulus: &Modulus) -> Result<BigUint> {
    if d.is_zero() || !mod_pow_u(a, d, modulus).is_one() {
        return Err(Error::ContractViolation(format!("a^{d} is not 1 mod {modulus}")));
    }
    let mut d = d.clone();
    while d.is_even() {
        let half = &d >> 1u32;
        if !mod_pow_u(a, &half, modulus).is_one() {
            break;
        }
        d = half;
    }
    Ok(d)
}

/// Running gcd of reduced loop differences, with a streak counter for
/// stabilization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationAccumulator {
    g: BigUint,
    collisions: usize,
    unchanged_streak: usize,
    stable_hits: usize,
}

impl RelationAccumulator {
    pub fn new(stable_hits: usize) -> Self {
        Self {
            g: BigUint::zero(),
            collisions: 0,
            unchanged_streak: 0,
            stable_hits,
        }
    }

    /// 0 while empty.
    pub fn g(&self) -> &BigUint {
        &self.g
    }

    pub fn collisions(&self) -> usize {
        self.collisions
    }

    pub fn unchanged_streak(&self) -> usize {
        self.unchanged_streak
    }

    pub fn stable_hits(&self) -> usize {
        self.stable_hits
    }

    /// g ← gcd(g, D_min). The first value counts as a change.
    pub fn accumulate(&mut self, d_min: &BigUint) -> &BigUint {
        assert!(!d_min.is_zero(), "D_min must be positive");
        let next = self.g.gcd(d_min);
        if next == self.g {
            self.unchanged_streak += 1;
        } else {
            self.unchanged_streak = 0;
        }
        debug_assert!(self.g.is_zero() || (&self.g % &next).is_zero());
        self.g = next;
        self.collisions += 1;
        &self.g
    }

    pub fn stabilized(&self) -> bool {
        !self.g.is_zero() && self.unchanged_streak >= self.stable_hits
    }
}

/// Reduce a multiple g of ord_N(a) to the order by factoring g and
/// stripping primes.
pub fn multiple_to_order(g: &BigUint, a: &BigUint, modulus: &Modulus, budget: FactorBudget) -> Result<BigUint> {
    if g.is_zero() || !mod_pow_u(a, g, modulus).is_one() {
        return Err(Error::ContractViolation(format!("a^{g} is not 1 mod {modulus}")));
    }
    let fact = factorize(g, budget)?;
    Ok(order_from_multiple(a, &fact, modulus))
}

/// For even r with x = a^(r/2) ≢ ±1: (gcd(x−1, N), gcd(x+1, N)).
pub fn order_to_factor(a: &BigUint, r: &BigUint, modulus: &Modulus) -> Option<(BigUint, BigUint)> {
    if r.is_odd() || r.is_zero() {
        return None;
    }
    let x = mod_pow_u(a, &(r >> 1u32), modulus);
    split_by_root(&x, modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::order_oracle;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn table_semantics() {
        let mut t = EndpointTable::new();
        assert_eq!(t.observe(5u64, BigInt::from(3)), None);
        assert_eq!(t.len(), 1);
        assert_eq!(t.observe(5u64, BigInt::from(3)), None);
        assert_eq!(
            t.observe(5u64, BigInt::from(-30)),
            Some(Collision {
                e_prev: BigInt::from(3),
                e_new: BigInt::from(-30)
            })
        );
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn halving_examples() {
        let m15 = Modulus::from_u64(15).unwrap();
        assert_eq!(halve_reduce(&big(8), &big(2), &m15).unwrap(), big(4));
        // 2^6 = 64 ≡ 4, so 12 cannot be halved
        assert_eq!(halve_reduce(&big(12), &big(2), &m15).unwrap(), big(12));
        let m299 = Modulus::from_u64(299).unwrap();
        assert_eq!(halve_reduce(&big(33 * 7), &big(3), &m299).unwrap(), big(231));
        assert!(matches!(halve_reduce(&big(5), &big(2), &m15), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn logged_d_min_values_are_reduced() {
        let f5 = Modulus::from_u64(4294967297).unwrap();
        let a = big(3945765912);
        for d in [
            314919552u64,
            32543920512,
            52336949376,
            22975726464,
            40839035520,
            25012652928,
            4187760000,
            3986747520,
            18097823616,
            9749105280,
        ] {
            assert_eq!(halve_reduce(&big(d), &a, &f5).unwrap(), big(d));
        }
        let n = Modulus::from_u64(8219999).unwrap();
        let a = big(7081686);
        for d in [12962750u64, 111206750, 119393750, 42981750, 3411250, 130309750, 68907250, 104384250, 55262250] {
            assert_eq!(halve_reduce(&big(d), &a, &n).unwrap(), big(d));
        }
    }

    #[test]
    fn logged_running_gcds() {
        let mut acc = RelationAccumulator::new(8);
        assert!(!acc.stabilized());
        let logged = [
            (314919552u64, 314919552u64),
            (32543920512, 6700416),
            (52336949376, 6700416),
            (22975726464, 6700416),
            (40839035520, 6700416),
            (25012652928, 6700416),
            (4187760000, 6700416),
            (3986747520, 6700416),
            (18097823616, 6700416),
        ];
        for (d, g) in logged {
            assert_eq!(*acc.accumulate(&big(d)), big(g));
            assert!(!acc.stabilized());
        }
        assert_eq!(acc.unchanged_streak(), 7);
        acc.accumulate(&big(9749105280));
        assert!(acc.stabilized());
        assert_eq!(acc.collisions(), 10);

        let mut acc = RelationAccumulator::new(8);
        acc.accumulate(&big(12962750));
        assert_eq!(*acc.accumulate(&big(111206750)), big(682250));
        let g = acc.g().clone();
        acc.accumulate(&g);
        assert_eq!(acc.unchanged_streak(), 1);
    }

    #[test]
    fn order_reduction_examples() {
        let f5 = Modulus::from_u64(4294967297).unwrap();
        let r = multiple_to_order(&big(6700416), &big(3945765912), &f5, FactorBudget::default()).unwrap();
        assert_eq!(r, big(6700416));
        let n = Modulus::from_u64(8219999).unwrap();
        let r = multiple_to_order(&big(682250), &big(7081686), &n, FactorBudget::default()).unwrap();
        assert_eq!(r, big(682250));
        assert_eq!(multiple_to_order(&big(12345), &big(1), &n, FactorBudget::default()).unwrap(), big(1));
        assert!(multiple_to_order(&big(7), &big(2), &n, FactorBudget::default()).is_err());
    }

    #[test]
    fn order_to_factor_examples() {
        let f5 = Modulus::from_u64(4294967297).unwrap();
        let split = order_to_factor(&big(3945765912), &big(6700416), &f5).unwrap();
        assert_eq!(split, (big(6700417), big(641)));
        let n = Modulus::from_u64(8219999).unwrap();
        let (d1, d2) = order_to_factor(&big(7081686), &big(682250), &n).unwrap();
        assert_eq!((d1, d2), (big(32749), big(251)));
        let m299 = Modulus::from_u64(299).unwrap();
        assert_eq!(order_oracle(&big(3), &m299).unwrap(), 33);
        assert_eq!(order_to_factor(&big(3), &big(33), &m299), None);
    }
}
