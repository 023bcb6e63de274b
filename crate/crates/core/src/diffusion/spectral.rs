use std::f64::consts::TAU;

use super::walk::kahan_sum;
use crate::error::{Error, Result};

/// Eigenvalues of the half-lazy walk on ℤ/rℤ with steps ±2^t, 0 ≤ t ≤ M.
///
/// The characters χ_k diagonalize the walk, with
/// μ_k = (1/(M+1)) Σ_t cos(2π k 2^t / r) and λ_k = (1 + μ_k)/2.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralModel {
    r: u64,
    m: u32,
    mu: Vec<f64>,
    lambda: Vec<f64>,
}

impl SpectralModel {
    pub fn new(r: u64, m: u32) -> Self {
        assert!(r >= 1, "order must be positive");
        let mut mu = Vec::with_capacity(r as usize);
        let mut lambda = Vec::with_capacity(r as usize);
        for k in 0..r {
            mu.push(cosine_average(k, r, m));
        }
        for &x in &mu {
            // rounding can push 1 + μ a hair below 0
            lambda.push(((1.0 + x) / 2.0).clamp(0.0, 1.0));
        }
        Self { r, m, mu, lambda }
    }

    pub fn order(&self) -> u64 {
        self.r
    }

    pub fn dyadic_bound(&self) -> u32 {
        self.m
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// (Wⁿδ₀)(0) = (1/r) Σ_k λ_kⁿ, summed with compensation.
    pub fn heat_identity(&self, n: u64) -> f64 {
        let sum = kahan_sum(self.lambda.iter().map(|&l| pow(l, n)));
        sum / self.r as f64
    }

    /// max_{k ≥ 1} λ_k, or 0 for the trivial group.
    pub fn second_eigenvalue(&self) -> f64 {
        self.lambda.iter().skip(1).copied().fold(0.0, f64::max)
    }
}

fn pow(x: f64, n: u64) -> f64 {
    match i32::try_from(n) {
        Ok(k) => x.powi(k),
        Err(_) => x.powf(n as f64),
    }
}

fn cosine_average(k: u64, r: u64, m: u32) -> f64 {
    let mut residue = k % r;
    let mut sum = 0.0;
    for _ in 0..=m {
        sum += (TAU * residue as f64 / r as f64).cos();
        residue = ((residue as u128 * 2) % r as u128) as u64;
    }
    sum / (m as f64 + 1.0)
}

/// p_n(e) for a walk on a cyclic group of order r, in closed form.
pub fn spectral_heat_identity(r: u64, m: u32, n: u64) -> f64 {
    SpectralModel::new(r, m).heat_identity(n)
}

/// Least t ∈ [0, M] with k·2^t mod r in [r/4, 3r/4]. Requires 2^M > r and
/// 1 ≤ k ≤ r−1; failing to find one means the arithmetic is broken.
pub fn doubling_witness(k: u64, r: u64, m: u32) -> Result<u32> {
    if k == 0 || k >= r {
        return Err(Error::InvalidInput(format!("k = {k} outside [1, {}]", r.saturating_sub(1))));
    }
    let mut residue = k as u128;
    let r128 = r as u128;
    for t in 0..=m {
        let four = 4 * residue;
        if four >= r128 && four <= 3 * r128 {
            return Ok(t);
        }
        residue = (residue * 2) % r128;
    }
    Err(Error::WitnessNotFound { k, r, m })
}

/// max_{1 ≤ k ≤ r−1} λ_k. When 2^M > r this is at most 1 − 1/(2(M+1)).
pub fn mixing_gap(r: u64, m: u32) -> f64 {
    SpectralModel::new(r, m).second_eigenvalue()
}

/// The same walk in exponent coordinates j ↦ b^j, as a dense array over
/// ℤ/rℤ. Only usable when r is known.
#[derive(Debug, Clone)]
pub struct ExponentWalk {
    r: usize,
    shifts: Vec<usize>,
}

impl ExponentWalk {
    pub fn new(r: u64, m: u32) -> Self {
        let r_usize = r as usize;
        let mut shifts = Vec::with_capacity(2 * (m as usize + 1));
        let mut step = 1 % r;
        for _ in 0..=m {
            shifts.push(step as usize);
            shifts.push(((r - step) % r) as usize);
            step = ((step as u128 * 2) % r as u128) as u64;
        }
        Self { r: r_usize, shifts }
    }

    pub fn delta(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.r];
        p[0] = 1.0;
        p
    }

    pub fn step(&self, p: &[f64]) -> Vec<f64> {
        let share = 0.5 / self.shifts.len() as f64;
        (0..self.r)
            .map(|j| {
                let moved: f64 = self.shifts.iter().map(|&s| p[(j + s) % self.r]).sum();
                0.5 * p[j] + share * moved
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_invariants() {
        for (r, m) in [(33, 9), (33, 6), (5313, 21), (2, 2), (1, 0)] {
            let model = SpectralModel::new(r, m);
            assert_eq!(model.lambda()[0], 1.0);
            for k in 0..r as usize {
                let l = model.lambda()[k];
                assert!((0.0..=1.0).contains(&l));
                assert!((l - (1.0 + model.mu()[k]) / 2.0).abs() < 1e-15);
                if k > 0 && (1u128 << m) > r as u128 {
                    assert!(l <= 1.0 - 1.0 / (2.0 * (m as f64 + 1.0)) + 1e-15);
                }
            }
        }
    }

    #[test]
    fn heat_identity_trivial_cases() {
        for n in [0, 1, 7, 1000] {
            assert_eq!(spectral_heat_identity(1, 5, n), 1.0);
        }
        for r in [2, 33, 500] {
            assert!((spectral_heat_identity(r, 9, 0) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn witness_examples() {
        assert_eq!(doubling_witness(1, 33, 6).unwrap(), 4);
        assert_eq!(doubling_witness(8, 33, 6).unwrap(), 1);
        assert_eq!(doubling_witness(1, 3, 2).unwrap(), 0);
        assert!(doubling_witness(0, 33, 6).is_err());
        // with 2^M ≤ r the lemma no longer applies
        assert!(matches!(doubling_witness(1, 1000, 2), Err(Error::WitnessNotFound { .. })));
    }

    #[test]
    fn gap_examples() {
        assert!(mixing_gap(33, 6) <= 1.0 - 1.0 / 14.0);
        // r = 2, M = 2: cos(π) + cos(2π) + cos(4π) = 1, μ₁ = 1/3, λ₁ = 2/3
        assert!((mixing_gap(2, 2) - 2.0 / 3.0).abs() < 1e-15);
        assert!(mixing_gap(2, 2) <= 11.0 / 12.0);
        assert!(mixing_gap(5313, 21) <= 1.0 - 1.0 / 44.0);
    }

    #[test]
    fn exponent_walk_matches_closed_form() {
        let (r, m) = (33, 9);
        let walk = ExponentWalk::new(r, m);
        let model = SpectralModel::new(r, m);
        let mut p = walk.delta();
        for n in 1..=120 {
            p = walk.step(&p);
            assert!((p[0] - model.heat_identity(n)).abs() < 1e-12, "n = {n}");
        }
    }
}
