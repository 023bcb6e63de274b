//! Probability that s uniform integers from [1, Q] are coprime, against
//! 1/ζ(s). This is why a handful of loop differences usually pins the order.

use diffactor::collisions::{binomial_sigma, zeta, zeta_gcd_experiment};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let (q, trials) = (1_000_000, 100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for s in 2..=6 {
        let observed = zeta_gcd_experiment(s, q, trials, &mut rng);
        let expected = 1.0 / zeta(s as f64);
        let sigma = binomial_sigma(expected, trials);
        println!(
            "s = {s}: observed {observed:.5}  1/zeta(s) {expected:.5}  z = {:+.2}",
            (observed - expected) / sigma
        );
    }
}
