//! Endpoint collisions among T walks on ⟨3⟩ ≤ (ℤ/299)^*, compared with
//! C(T,2)·s₂(t) and with the uniform value T(T−1)/(2r).

use diffactor::collisions::birthday_experiment;
use diffactor::diffusion::required_steps;
use diffactor::ntheory::Modulus;
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> diffactor::Result<()> {
    let modulus = Modulus::from_u64(299)?;
    let t = required_steps(&modulus);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for samples in [1, 10, 40, 80] {
        let rep = birthday_experiment(&modulus, &BigUint::from(3u32), 33, t, samples, 2000, &mut rng)?;
        println!(
            "T = {samples:>2}: mean pairs {:>8.3}  C(T,2) s2 {:>8.3}  uniform {:>8.3}  ratio {:.3}",
            rep.mean_pairs,
            rep.stats.expected_pairs,
            rep.expected_uniform,
            rep.ratio_to_uniform()
        );
    }
    Ok(())
}
