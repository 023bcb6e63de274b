use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The operand shares the factor `gcd` with the modulus. A gcd strictly
    /// between 1 and N is itself a nontrivial factor.
    #[error("{value} is not invertible modulo {modulus} (gcd = {gcd})")]
    NonInvertible {
        value: BigUint,
        modulus: BigUint,
        gcd: BigUint,
    },

    #[error("modulus must be at least 3, got {0}")]
    ModulusTooSmall(BigUint),

    #[error("{0} is outside the range of the order oracle")]
    OutOfOracleRange(BigUint),

    #[error("1/p_n(e) = {inverse} is too close to a half-integer to round (n = {steps})")]
    RoundingUnresolved { inverse: f64, steps: u64 },

    #[error("recovered r = {r} but b^r is not 1 modulo N")]
    VerificationFailed { r: u64 },

    #[error("no doubling witness for k = {k}, r = {r}, M = {m}")]
    WitnessNotFound { k: u64, r: u64, m: u32 },

    #[error("contract violated: {0}")]
    ContractViolation(String),

    #[error("could not factor {0} within the effort budget")]
    FactorizationStall(BigUint),

    #[error("no stabilized gcd after {samples} samples ({collisions} collisions)")]
    NoStabilization { samples: usize, collisions: usize },

    #[error("no factor found after {0} attempts")]
    AttemptsExhausted(usize),

    #[error("walk support exceeded the state guard of {0} vertices")]
    StateGuardExceeded(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
