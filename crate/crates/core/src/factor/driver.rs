use std::time::{Duration, Instant};

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::source::{CollisionSource, DiffusionSource, OracleSource, OrderAnswer, OrderSource};
use super::steps::{doubling_multiset, extract_sq, lift_order, oddify, pre_check, sqrt_attack, Classification};
use crate::collisions::{CollisionConfig, Event, EventLog};
use crate::diffusion::DEFAULT_STATE_GUARD;
use crate::error::{Error, Result};
use crate::ntheory::{mod_pow_u, split_by_root, Modulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Diffusion,
    Collision,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorConfig {
    pub source: SourceKind,
    pub max_attempts: usize,
    pub seed: u64,
    pub collision: CollisionConfig,
    /// Vertex cap for the diffusion source.
    pub state_guard: usize,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            source: SourceKind::Collision,
            max_attempts: 80,
            seed: 0,
            collision: CollisionConfig::default(),
            state_guard: DEFAULT_STATE_GUARD,
        }
    }
}

impl FactorConfig {
    pub fn build_source(&self) -> Box<dyn OrderSource> {
        match self.source {
            SourceKind::Diffusion => Box::new(DiffusionSource {
                guard: self.state_guard,
            }),
            SourceKind::Collision => Box::new(CollisionSource {
                config: self.collision,
            }),
            SourceKind::Oracle => Box::new(OracleSource::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartReason {
    /// The order source came back empty.
    NoOrder,
    OddOrder,
    /// a^(r/2) ≡ −1.
    TrivialRoot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialKind {
    Factor(BigUint),
    Restart(RestartReason),
}

/// Intermediate values of one trial, as far as it got.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrialDetails {
    pub s: Option<u32>,
    pub q: Option<BigUint>,
    pub r_b: Option<BigUint>,
    pub k: Option<u32>,
    pub r_a: Option<BigUint>,
    pub x: Option<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub attempt: usize,
    pub a: BigUint,
    pub kind: TrialKind,
    pub details: TrialDetails,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub n: BigUint,
    /// (p, q) with p ≤ q and p·q = N
    pub factors: (BigUint, BigUint),
    pub trials: Vec<TrialOutcome>,
    pub elapsed: Duration,
}

impl FactorReport {
    pub fn attempts(&self) -> usize {
        self.trials.len()
    }
}

/// Seeded run with the configured order source.
pub fn factor(n: &BigUint, config: &FactorConfig, log: &mut EventLog) -> Result<FactorReport> {
    let modulus = Modulus::new(n.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut source = config.build_source();
    algorithm1(&modulus, config.max_attempts, source.as_mut(), &mut rng, log)
}

/// The randomized reduction from factoring to order finding.
///
/// Each trial draws a ∈ [1, N−1], tries gcd(a, N), looks for a relation
/// inside S(a), then asks `source` for ord(a^(2^M)), lifts it to ord(a) and
/// tries the square root a^(r/2).
pub fn algorithm1<G: Rng>(
    modulus: &Modulus,
    max_attempts: usize,
    source: &mut dyn OrderSource,
    rng: &mut G,
    log: &mut EventLog,
) -> Result<FactorReport> {
    let n = modulus.value();
    let class = pre_check(n);
    if class != Classification::Composite {
        return Err(Error::InvalidInput(format!("{n} is {class}")));
    }
    if max_attempts == 0 {
        return Err(Error::InvalidInput("max_attempts must be at least 1".into()));
    }
    let start = Instant::now();
    let mut trials = Vec::new();
    for attempt in 1..=max_attempts {
        let a = rng.gen_biguint_range(&BigUint::one(), n);
        let seed: u64 = rng.gen();
        log.push(Event::Attempt {
            attempt,
            a: a.clone(),
        });
        let (kind, details) = trial(&a, modulus, source, seed, log)?;
        let done = match &kind {
            TrialKind::Factor(d) => Some(d.clone()),
            TrialKind::Restart(_) => None,
        };
        trials.push(TrialOutcome {
            attempt,
            a,
            kind,
            details,
        });
        if let Some(d) = done {
            let other = n / &d;
            let (p, q) = if d <= other { (d, other) } else { (other, d) };
            log.push(Event::Final {
                n: n.clone(),
                p: p.clone(),
                q: q.clone(),
            });
            let elapsed = start.elapsed();
            log.push(Event::TotalTime {
                seconds: elapsed.as_secs_f64(),
            });
            return Ok(FactorReport {
                n: n.clone(),
                factors: (p, q),
                trials,
                elapsed,
            });
        }
    }
    log.push(Event::Exhausted {
        n: n.clone(),
        attempts: max_attempts,
    });
    log.push(Event::TotalTime {
        seconds: start.elapsed().as_secs_f64(),
    });
    Err(Error::AttemptsExhausted(max_attempts))
}

fn found(d: BigUint, n: &BigUint) -> TrialKind {
    assert!(d > BigUint::one() && d < *n && (n % &d) == BigUint::default(), "{d} is not a proper divisor of {n}");
    TrialKind::Factor(d)
}

fn trial(
    a: &BigUint,
    modulus: &Modulus,
    source: &mut dyn OrderSource,
    seed: u64,
    log: &mut EventLog,
) -> Result<(TrialKind, TrialDetails)> {
    let n = modulus.value();
    let mut details = TrialDetails::default();

    let g = a.gcd(n);
    if !g.is_one() {
        log.push(Event::GcdShortcut { d: g.clone() });
        log.push(Event::Success {
            d1: g.clone(),
            d2: n / &g,
        });
        return Ok((found(g, n), details));
    }

    let multiset = doubling_multiset(a, modulus)?;
    if let Some(rep) = multiset.repetition {
        let (s, q) = extract_sq(a, modulus, &rep)?;
        log.push(Event::EarlyRelation { s, q: q.clone() });
        details.s = Some(s);
        details.q = Some(q.clone());
        if s > 0 {
            let x = mod_pow_u(a, &(&q << (s - 1)), modulus);
            details.x = Some(x.clone());
            if let Some((d1, d2)) = split_by_root(&x, modulus) {
                log.push(Event::Success {
                    d1: d1.clone(),
                    d2,
                });
                return Ok((found(d1, n), details));
            }
        }
    }

    let b = oddify(a, modulus);
    let (r_b, measured) = match source.order(a, &b, modulus, seed, log)? {
        OrderAnswer::Factor { d1, d2 } => return Ok((found(d1.clone().min(d2), n), details)),
        OrderAnswer::Nothing => return Ok((TrialKind::Restart(RestartReason::NoOrder), details)),
        OrderAnswer::Order { r_b, r_a } => (r_b, r_a),
    };
    details.r_b = Some(r_b.clone());
    if measured.is_none() {
        log.push(Event::OddOrder { r_b: r_b.clone() });
    }

    let (k, r_a) = lift_order(a, &r_b, modulus)?;
    if let Some(direct) = &measured {
        if *direct != r_a {
            return Err(Error::ContractViolation(format!(
                "lifted order {r_a} disagrees with measured order {direct}"
            )));
        }
    } else {
        log.push(Event::LiftedOrder { r: r_a.clone() });
    }
    details.k = Some(k);
    details.r_a = Some(r_a.clone());

    if r_a.is_odd() {
        log.push(Event::TrivialRoot { r: r_a });
        return Ok((TrialKind::Restart(RestartReason::OddOrder), details));
    }
    let half = &r_a >> 1u32;
    details.x = Some(mod_pow_u(a, &half, modulus));
    match sqrt_attack(a, &half, modulus) {
        Some((d1, d2)) => {
            log.push(Event::Success {
                d1: d1.clone(),
                d2,
            });
            Ok((found(d1, n), details))
        }
        None => {
            log.push(Event::TrivialRoot { r: r_a });
            Ok((TrialKind::Restart(RestartReason::TrivialRoot), details))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: u64, source: SourceKind, seed: u64) -> Result<FactorReport> {
        let config = FactorConfig {
            source,
            seed,
            max_attempts: 200,
            ..Default::default()
        };
        factor(&BigUint::from(n), &config, &mut EventLog::new())
    }

    #[test]
    fn fifteen_with_every_seed() {
        for seed in 0..50 {
            let report = run(15, SourceKind::Oracle, seed).unwrap();
            assert_eq!(report.factors, (BigUint::from(3u32), BigUint::from(5u32)));
        }
    }

    #[test]
    fn two_ninety_nine_needs_few_attempts() {
        let total: usize = (0..200)
            .map(|seed| {
                let report = run(299, SourceKind::Oracle, seed).unwrap();
                assert_eq!(report.factors, (BigUint::from(13u32), BigUint::from(23u32)));
                report.attempts()
            })
            .sum();
        assert!((total as f64 / 200.0) <= 4.0, "{total}");
    }

    #[test]
    fn diffusion_source_end_to_end() {
        let report = run(299, SourceKind::Diffusion, 1).unwrap();
        assert_eq!(report.factors, (BigUint::from(13u32), BigUint::from(23u32)));
        let report = run(1022117, SourceKind::Diffusion, 4).unwrap();
        assert_eq!(report.factors, (BigUint::from(1009u32), BigUint::from(1013u32)));
    }

    #[test]
    fn rejects_non_composites() {
        assert!(matches!(run(1013, SourceKind::Oracle, 0), Err(Error::InvalidInput(_))));
        assert!(matches!(run(121, SourceKind::Oracle, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn exhaustion_is_reported() {
        let config = FactorConfig {
            source: SourceKind::Collision,
            max_attempts: 2,
            collision: CollisionConfig {
                word_length: 10,
                max_samples: 5,
                ..Default::default()
            },
            ..Default::default()
        };
        let mut log = EventLog::new();
        let err = factor(&BigUint::from(4294967297u64), &config, &mut log).unwrap_err();
        assert_eq!(err, Error::AttemptsExhausted(2));
        assert!(log.render_text().ends_with("\nFAILED: no factor of 4294967297 after 2 attempts\n"));
    }
}
