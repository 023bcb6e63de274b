//! Order of 576 modulo 1022117 = 1009 · 1013 by dense simulation, checked
//! against the closed-form spectral expression for a cyclic group of the
//! recovered size.

use diffactor::diffusion::{recover_order, spectral_heat_identity, CayleyWalk, HeatSimulator, DEFAULT_STATE_GUARD};
use diffactor::ntheory::{Modulus, Montgomery64};
use num_bigint::BigUint;

fn main() -> diffactor::Result<()> {
    let modulus = Modulus::from_u64(1022117)?;
    let b = BigUint::from(576u32);
    let rec = recover_order(&modulus, &b, None, DEFAULT_STATE_GUARD)?;
    println!(
        "r = {} after n0 = {} steps (p = {:.12e}, {} vertices)",
        rec.order, rec.steps, rec.identity_mass, rec.vertices
    );

    let m = modulus.dyadic_bound();
    let mut sim = HeatSimulator::new(CayleyWalk::new(Montgomery64::new(&modulus).expect("odd modulus below 2^63"), &b)?);
    let dense = sim.identity_series(rec.steps)?;
    for n in [100, 500, rec.steps] {
        let spectral = spectral_heat_identity(rec.order, m, n);
        let gap = (dense[n as usize] - spectral).abs();
        println!("n = {n:>4}: dense {:.15e}  spectral {:.15e}  |diff| {gap:.1e}", dense[n as usize], spectral);
    }
    Ok(())
}
