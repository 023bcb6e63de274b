//! A single collision attempt with a chosen base: sample dyadic words in
//! ⟨a⟩, collect loop differences, stabilize their gcd, reduce it to the
//! order and take the square root a^(r/2).
//!
//! Usage: cargo run --release --example collision_order [N a seed]
//! Default: N = 8219999, a = 7081686, seed 1.

use diffactor::collisions::{order_to_factor, run_attempt, AttemptOutcome, CollisionConfig, EventLog};
use diffactor::ntheory::Modulus;
use num_bigint::BigUint;

fn main() -> diffactor::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let n: BigUint = arg(0, "8219999").parse().expect("N must be a positive integer");
    let a: BigUint = arg(1, "7081686").parse().expect("a must be a positive integer");
    let seed: u64 = arg(2, "1").parse().expect("seed must be a u64");

    let modulus = Modulus::new(n)?;
    let mut log = EventLog::new().with_echo(|line| println!("{line}"));
    match run_attempt(&a, &modulus, &CollisionConfig::default(), seed, &mut log)? {
        AttemptOutcome::Order { r, g } => {
            println!("g = {g}, r = {r}");
            match order_to_factor(&a, &r, &modulus) {
                Some((d1, d2)) => println!("gcd(a^(r/2) - 1, N) = {d1}, gcd(a^(r/2) + 1, N) = {d2}"),
                None => println!("a^(r/2) is ±1 or r is odd; no split from this base"),
            }
        }
        AttemptOutcome::Factor { d1, d2, .. } => println!("split {d1} * {d2}"),
        AttemptOutcome::NoStabilization { samples, collisions } => {
            println!("no stabilization after {samples} words and {collisions} collisions")
        }
    }
    Ok(())
}
