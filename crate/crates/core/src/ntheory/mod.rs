//! Modular arithmetic, primality and perfect-power pre-checks, and the
//! factoring/order oracles that tests and the desk-scale pipeline lean on.

mod arith;
mod factorize;
mod modulus;
mod prime;
mod ring;

pub use arith::{
    gcd, is_plus_minus_one, mod_inv, mod_pow, mod_pow_u, reduce_signed, split_by_root, two_adic_valuation,
};
pub use factorize::{
    factorize, order_from_multiple, order_oracle, FactorBudget, OracleFactorization, OrderOracle,
    ORACLE_LIMIT, TRIAL_DIVISION_LIMIT,
};
pub use modulus::Modulus;
pub use prime::{is_probable_prime, perfect_power};
pub use ring::{BigRing, Montgomery64, ResidueRing};
