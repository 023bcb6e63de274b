//! Split F5 = 2^32 + 1 with the collision engine, streaming the run log.
//!
//! Usage: cargo run --release --example factor_fermat5 [seed]

use diffactor::collisions::EventLog;
use diffactor::factor::{factor, FactorConfig, SourceKind};
use num_bigint::BigUint;

fn main() {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed must be a u64"));
    let config = FactorConfig {
        source: SourceKind::Collision,
        seed,
        ..Default::default()
    };
    let mut log = EventLog::new().with_timing(true).with_echo(|line| println!("{line}"));
    if let Err(e) = factor(&BigUint::from(4294967297u64), &config, &mut log) {
        eprintln!("{e}");
        std::process::exit(2);
    }
}
