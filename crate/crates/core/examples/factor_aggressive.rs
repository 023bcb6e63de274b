//! Aggressive one-collision mode on N = 1099551473989 = 1048589 · 1048601.
//!
//! Orders here are around 10^11, so a stabilized gcd is out of reach with
//! 120000 words per attempt. Instead every reduced D_min is tried directly
//! as an even order multiple. Run time depends heavily on the seed.
//!
//! Usage: cargo run --release --example factor_aggressive [seed] [workers]

use diffactor::collisions::{CollisionConfig, EventLog};
use diffactor::factor::{factor, FactorConfig, SourceKind};
use num_bigint::BigUint;

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(0, |s| s.parse().expect("seed must be a u64"));
    let workers = args.next().map_or(1, |s| s.parse().expect("workers must be a positive integer"));
    let config = FactorConfig {
        source: SourceKind::Collision,
        seed,
        collision: CollisionConfig {
            aggressive: true,
            workers,
            ..Default::default()
        },
        ..Default::default()
    };
    let mut log = EventLog::new().with_timing(true).with_echo(|line| println!("{line}"));
    if let Err(e) = factor(&BigUint::from(1099551473989u64), &config, &mut log) {
        eprintln!("{e}");
        std::process::exit(2);
    }
}
