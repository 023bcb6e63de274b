//! Factor 8219999 = 251 · 32749 with the collision order source.
//!
//! Usage: cargo run --release --example factor_8219999 [seed]

use diffactor::collisions::EventLog;
use diffactor::factor::{factor, FactorConfig};
use num_bigint::BigUint;

fn main() {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed must be a u64"));
    let config = FactorConfig { seed, ..Default::default() };
    let mut log = EventLog::new().with_timing(true).with_echo(|line| println!("{line}"));
    match factor(&BigUint::from(8219999u64), &config, &mut log) {
        Ok(report) => eprintln!("{} attempt(s)", report.attempts()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}
