use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::collisions::{run_attempt, AttemptOutcome, CollisionConfig, EventLog};
use crate::diffusion::{recover_order, DEFAULT_STATE_GUARD};
use crate::error::Result;
use crate::ntheory::{two_adic_valuation, Modulus, OrderOracle};

/// What an order source learned about a trial base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderAnswer {
    Order {
        /// ord_N(b), b = a^(2^M); always odd
        r_b: BigUint,
        /// ord_N(a), when the source measured it directly
        r_a: Option<BigUint>,
    },
    /// The source split N on its own.
    Factor { d1: BigUint, d2: BigUint },
    /// Nothing usable; try another base.
    Nothing,
}

/// Step 5 of the factoring loop: the order of the oddified base.
pub trait OrderSource {
    fn name(&self) -> &'static str;

    fn order(
        &mut self,
        a: &BigUint,
        b: &BigUint,
        modulus: &Modulus,
        seed: u64,
        log: &mut EventLog,
    ) -> Result<OrderAnswer>;
}

/// Heat-kernel readout on the Cayley graph of ⟨b⟩.
#[derive(Debug, Clone)]
pub struct DiffusionSource {
    pub guard: usize,
}

impl Default for DiffusionSource {
    fn default() -> Self {
        Self {
            guard: DEFAULT_STATE_GUARD,
        }
    }
}

impl OrderSource for DiffusionSource {
    fn name(&self) -> &'static str {
        "diffusion"
    }

    fn order(&mut self, _a: &BigUint, b: &BigUint, modulus: &Modulus, _seed: u64, _log: &mut EventLog) -> Result<OrderAnswer> {
        let rec = recover_order(modulus, b, None, self.guard)?;
        Ok(OrderAnswer::Order {
            r_b: BigUint::from(rec.order),
            r_a: None,
        })
    }
}

/// Word collisions in ⟨a⟩. Runs on a itself so that the full order, and
/// with it every even multiple, is available; the odd part is ord(b).
#[derive(Debug, Clone, Default)]
pub struct CollisionSource {
    pub config: CollisionConfig,
}

impl OrderSource for CollisionSource {
    fn name(&self) -> &'static str {
        "collision"
    }

    fn order(&mut self, a: &BigUint, _b: &BigUint, modulus: &Modulus, seed: u64, log: &mut EventLog) -> Result<OrderAnswer> {
        Ok(match run_attempt(a, modulus, &self.config, seed, log)? {
            AttemptOutcome::Order { r, .. } => {
                let v = two_adic_valuation(&r);
                OrderAnswer::Order {
                    r_b: &r >> v,
                    r_a: Some(r),
                }
            }
            AttemptOutcome::Factor { d1, d2, .. } => OrderAnswer::Factor { d1, d2 },
            AttemptOutcome::NoStabilization { .. } => OrderAnswer::Nothing,
        })
    }
}

/// Exact orders from the factorization of φ(N); N ≤ 2^48.
#[derive(Debug, Clone, Default)]
pub struct OracleSource {
    cache: Option<OrderOracle>,
}

impl OrderSource for OracleSource {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn order(&mut self, _a: &BigUint, b: &BigUint, modulus: &Modulus, _seed: u64, _log: &mut EventLog) -> Result<OrderAnswer> {
        let stale = self
            .cache
            .as_ref()
            .is_none_or(|o| BigUint::from(o.modulus()) != *modulus.value());
        if stale {
            self.cache = Some(OrderOracle::new(modulus)?);
        }
        let oracle = self.cache.as_ref().expect("filled above");
        let b = b.to_u64().expect("b < N ≤ 2^48");
        Ok(OrderAnswer::Order {
            r_b: BigUint::from(oracle.order(b)?),
            r_a: None,
        })
    }
}
