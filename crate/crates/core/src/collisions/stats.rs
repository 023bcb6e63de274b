use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::Rng;

use crate::diffusion::{CayleyWalk, HeatSimulator, HeatState, DEFAULT_STATE_GUARD};
use crate::error::Result;
use crate::ntheory::{Modulus, ResidueRing};

/// Parameters and expectation for T independent samples of one walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionStats {
    pub samples: u64,
    pub s2: f64,
    pub expected_pairs: f64,
}

impl CollisionStats {
    pub fn new(samples: u64, s2: f64) -> Self {
        Self {
            samples,
            s2,
            expected_pairs: expected_collision_count(samples, s2),
        }
    }
}

/// E[Z] = C(T, 2)·s₂.
pub fn expected_collision_count(samples: u64, s2: f64) -> f64 {
    let t = samples as f64;
    t * (t - 1.0) / 2.0 * s2
}

/// s₂ = Σ p(x)².
pub fn collision_param(state: &HeatState) -> f64 {
    state.collision_param()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirthdayReport {
    pub order: u64,
    pub steps: u64,
    pub samples: u64,
    pub reps: usize,
    /// s₂ of the t-step distribution, from the heat simulator.
    pub stats: CollisionStats,
    /// T(T−1)/(2r)
    pub expected_uniform: f64,
    pub mean_pairs: f64,
    pub pair_counts: Vec<u64>,
}

impl BirthdayReport {
    pub fn ratio_to_uniform(&self) -> f64 {
        if self.expected_uniform == 0.0 {
            if self.mean_pairs == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.mean_pairs / self.expected_uniform
        }
    }
}

/// Run `reps` experiments of T independent t-step half-lazy walks from the
/// identity and count endpoint-colliding pairs in each.
pub fn birthday_experiment<G: Rng>(
    modulus: &Modulus,
    b: &BigUint,
    order: u64,
    steps: u64,
    samples: u64,
    reps: usize,
    rng: &mut G,
) -> Result<BirthdayReport> {
    crate::with_ring!(modulus, |ring| {
        let walk = CayleyWalk::new(ring, b)?;
        let s2 = HeatSimulator::with_guard(walk.clone(), DEFAULT_STATE_GUARD)
            .run(steps)?
            .collision_param();
        let pair_counts: Vec<u64> = (0..reps)
            .map(|_| colliding_pairs(&walk, steps, samples, rng))
            .collect();
        let mean_pairs = pair_counts.iter().sum::<u64>() as f64 / reps.max(1) as f64;
        Ok(BirthdayReport {
            order,
            steps,
            samples,
            reps,
            stats: CollisionStats::new(samples, s2),
            expected_uniform: expected_collision_count(samples, 1.0 / order as f64),
            mean_pairs,
            pair_counts,
        })
    })
}

fn colliding_pairs<R: ResidueRing, G: Rng>(walk: &CayleyWalk<R>, steps: u64, samples: u64, rng: &mut G) -> u64 {
    let ring = walk.ring();
    let gens = walk.generators();
    let mut hits: HashMap<R::Elem, u64> = HashMap::new();
    for _ in 0..samples {
        let mut x = ring.one();
        for _ in 0..steps {
            // stay with probability ½, else move along a uniform slot
            let k = rng.gen_range(0..2 * gens.len());
            if k < gens.len() {
                x = ring.mul(&x, &gens[k]);
            }
        }
        *hits.entry(x).or_default() += 1;
    }
    hits.values().map(|&c| c * (c - 1) / 2).sum()
}

/// Fraction of uniform s-tuples from [1, Q] with gcd 1.
pub fn zeta_gcd_experiment<G: Rng>(s: usize, q: u64, trials: u64, rng: &mut G) -> f64 {
    assert!(s >= 1 && q >= 1 && trials >= 1);
    let coprime = (0..trials)
        .filter(|_| {
            let mut g = 0u64;
            for _ in 0..s {
                g = g.gcd(&rng.gen_range(1..=q));
            }
            g == 1
        })
        .count();
    coprime as f64 / trials as f64
}

/// ζ(s) for real s > 1 by Euler–Maclaurin after 1000 explicit terms.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "series diverges for s ≤ 1");
    const K: f64 = 1000.0;
    let head: f64 = (1..1000).map(|k| (k as f64).powf(-s)).sum();
    let tail = K.powf(1.0 - s) / (s - 1.0) + 0.5 * K.powf(-s) + s / 12.0 * K.powf(-s - 1.0)
        - s * (s + 1.0) * (s + 2.0) / 720.0 * K.powf(-s - 3.0);
    head + tail
}

/// Binomial standard error √(p(1−p)/n).
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
