//! The randomized reduction from factoring to order finding, with the order
//! supplied by diffusion, by word collisions, or by an exact oracle.

mod driver;
mod source;
mod steps;
mod success;

pub use driver::{
    algorithm1, factor, FactorConfig, FactorReport, RestartReason, SourceKind, TrialDetails, TrialKind,
    TrialOutcome,
};
pub use source::{CollisionSource, DiffusionSource, OracleSource, OrderAnswer, OrderSource};
pub use steps::{
    doubling_multiset, extract_sq, least_two_power, lift_order, oddify, pre_check, sqrt_attack,
    Classification, DoublingMultiset, Repetition, Slot,
};
pub use success::{monte_carlo_success, success_probability};
