//! For every k ≢ 0 mod r some dyadic power 2^t with t ≤ ⌊log₂ r⌋ + 1 moves
//! k·2^t well away from 0 mod r. This is what gives the walk its spectral gap.

use diffactor::diffusion::{doubling_witness, mixing_gap};

fn main() -> diffactor::Result<()> {
    let limit: u64 = std::env::args().nth(1).map_or(1024, |s| s.parse().expect("limit must be an integer"));
    let mut worst = (0u64, 0u32);
    for r in 2..=limit {
        let m = r.ilog2() + 1;
        for k in 1..r {
            let t = doubling_witness(k, r, m)?;
            if t > worst.1 {
                worst = (r, t);
            }
        }
    }
    println!("witnesses found for all r ≤ {limit}; largest t needed was {} (r = {})", worst.1, worst.0);
    for r in [33u64, 5313] {
        let m = r.ilog2() + 1;
        let bound = 1.0 - 1.0 / (2.0 * (m as f64 + 1.0));
        println!("r = {r}: second eigenvalue {:.6}, bound {bound:.6}", mixing_gap(r, m));
    }
    Ok(())
}
