//! The factoring loop is agnostic about where orders come from. Run it on
//! 1022117 = 1009 · 1013 with each of the three sources.

use diffactor::collisions::EventLog;
use diffactor::factor::{factor, FactorConfig, SourceKind};
use num_bigint::BigUint;

fn main() -> diffactor::Result<()> {
    let n = BigUint::from(1022117u64);
    for source in [SourceKind::Oracle, SourceKind::Diffusion, SourceKind::Collision] {
        let config = FactorConfig { source, seed: 4, ..Default::default() };
        let report = factor(&n, &config, &mut EventLog::new())?;
        println!(
            "{source:?}: {} = {} * {} after {} attempt(s) in {:.2?}",
            n,
            report.factors.0,
            report.factors.1,
            report.attempts(),
            report.elapsed
        );
    }
    Ok(())
}
