//! Relation finding from collisions of random dyadic words, and the
//! statistics (birthday scale, gcd law) that explain why it works.

mod engine;
mod events;
mod relation;
mod stats;
mod word;

pub use engine::{run_attempt, AttemptOutcome, CollisionConfig, CollisionSearch};
pub use events::{format_elapsed, Event, EventLog, COLLISION_CSV_HEADER};
pub use relation::{
    halve_reduce, multiple_to_order, order_to_factor, Collision, CycleCertificate, EndpointTable,
    RelationAccumulator,
};
pub use stats::{
    binomial_sigma, birthday_experiment, collision_param, expected_collision_count, zeta,
    zeta_gcd_experiment, BirthdayReport, CollisionStats,
};
pub use word::{exponent_from_counts, sample_word, word_endpoint, DyadicWord, Letter};
