//! Order of 3 modulo 299 from the heat kernel at the identity.
//!
//! Prints every tenth row of the series and the step from which
//! round(1/p_n(e)) settles on r = 33. Pass `--csv` for the full series.

use std::io;

use diffactor::diffusion::{heat_series, required_steps, stable_from, write_csv, DEFAULT_STATE_GUARD};
use diffactor::ntheory::Modulus;
use num_bigint::BigUint;

fn main() -> diffactor::Result<()> {
    let modulus = Modulus::from_u64(299)?;
    let n0 = required_steps(&modulus);
    let rows = heat_series(&modulus, &BigUint::from(3u32), n0, DEFAULT_STATE_GUARD)?;
    if std::env::args().any(|a| a == "--csv") {
        write_csv(&rows, io::stdout().lock()).expect("stdout");
        return Ok(());
    }
    println!("{:>4}  {:>12}  {:>10}  {:>3}", "n", "p_n(e)", "1/p_n(e)", "r~");
    for row in rows.iter().step_by(10) {
        println!("{:>4}  {:>12.8}  {:>10.4}  {:>3}", row.n, row.p_e, row.inv_p_e, row.rounded);
    }
    let r = rows.last().expect("nonempty").rounded;
    let from = stable_from(&rows, r).expect("last row agrees with itself");
    println!("n0 = {n0}, r = {r}, stable from n = {from}");
    Ok(())
}
