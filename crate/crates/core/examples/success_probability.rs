//! Chance that a random unit has even order with a nontrivial square root
//! a^(r/2), against the lower bound 1 − (m+1)/2^m for m prime factors.

use diffactor::factor::{monte_carlo_success, success_probability};
use diffactor::ntheory::Modulus;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> diffactor::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (n, m) in [(15u64, 2u32), (105, 3), (1155, 4), (15015, 5)] {
        let freq = monte_carlo_success(&Modulus::from_u64(n)?, 100_000, &mut rng)?;
        println!("N = {n:>5} (m = {m}): observed {freq:.4}  bound {:.4}", success_probability(m));
    }
    Ok(())
}
