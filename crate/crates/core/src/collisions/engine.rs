use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::events::{Event, EventLog};
use super::relation::{
    multiple_to_order, order_to_factor, CycleCertificate, EndpointTable, RelationAccumulator,
};
use super::word::exponent_from_counts;
use crate::diffusion::CayleyWalk;
use crate::error::{Error, Result};
use crate::ntheory::{FactorBudget, Modulus, ResidueRing};

/// Words each worker draws per round when more than one worker is used.
const BATCH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollisionConfig {
    /// L, fixed for every word of an attempt.
    pub word_length: usize,
    /// Words drawn per attempt; also bounds the endpoint table.
    pub max_samples: usize,
    pub stable_hits: usize,
    /// Try the square-root split on every D_min as it arrives.
    pub aggressive: bool,
    /// Independent sampling streams. Output depends on this count, not on
    /// thread scheduling.
    pub workers: usize,
    pub budget: FactorBudget,
}

impl Default for CollisionConfig {
    fn default() -> Self {
        Self {
            word_length: 2000,
            max_samples: 120_000,
            stable_hits: 8,
            aggressive: false,
            workers: 1,
            budget: FactorBudget::default(),
        }
    }
}

impl CollisionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.word_length == 0 || self.max_samples == 0 || self.workers == 0 {
            return Err(Error::InvalidInput(
                "word length, sample budget and worker count must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Random words from the identity in ⟨a⟩, funneled through one endpoint
/// table.
#[derive(Debug)]
pub struct CollisionSearch<R: ResidueRing> {
    walk: CayleyWalk<R>,
    a: BigUint,
    config: CollisionConfig,
    table: EndpointTable<R::Elem>,
    streams: Vec<ChaCha8Rng>,
    pending: VecDeque<(R::Elem, BigInt)>,
    samples: usize,
}

impl<R: ResidueRing> CollisionSearch<R> {
    /// Stream w is ChaCha8 seeded with `seed` on stream w.
    pub fn new(ring: R, a: &BigUint, config: CollisionConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let walk = CayleyWalk::new(ring, a)?;
        let streams = (0..config.workers)
            .map(|w| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(w as u64);
                rng
            })
            .collect();
        Ok(Self {
            walk,
            a: a.clone(),
            config,
            table: EndpointTable::new(),
            streams,
            pending: VecDeque::new(),
            samples: 0,
        })
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    fn refill(&mut self) {
        let walk = &self.walk;
        let length = self.config.word_length;
        if self.streams.len() == 1 {
            let word = draw_word(walk, length, &mut self.streams[0]);
            self.pending.push_back(word);
            return;
        }
        let batches: Vec<Vec<_>> = self
            .streams
            .par_iter_mut()
            .map(|rng| (0..BATCH).map(|_| draw_word(walk, length, rng)).collect())
            .collect();
        self.pending.extend(batches.into_iter().flatten());
    }

    /// Draw words until one collides nontrivially. `None` once the sample
    /// budget is spent.
    pub fn next_certificate(&mut self) -> Result<Option<CycleCertificate>> {
        let modulus = self.walk.modulus().clone();
        while self.samples < self.config.max_samples {
            if self.pending.is_empty() {
                self.refill();
            }
            let (x, e) = self.pending.pop_front().expect("refill produces words");
            self.samples += 1;
            if let Some(hit) = self.table.observe(x, e) {
                return CycleCertificate::new(&self.a, hit, &modulus).map(Some);
            }
        }
        Ok(None)
    }
}

/// Same draws as `sample_word` followed by `word_endpoint`, without
/// materializing the letters.
fn draw_word<R: ResidueRing, G: Rng>(walk: &CayleyWalk<R>, length: usize, rng: &mut G) -> (R::Elem, BigInt) {
    let ring = walk.ring();
    let gens = walk.generators();
    let width = walk.dyadic_bound() as usize + 1;
    let mut counts = vec![0i64; width];
    let mut x = ring.one();
    for _ in 0..length {
        let slot = rng.gen_range(0..2 * width);
        x = ring.mul(&x, &gens[slot]);
        if slot < width {
            counts[slot] += 1;
        } else {
            counts[slot - width] -= 1;
        }
    }
    (x, exponent_from_counts(&counts))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptOutcome {
    /// g stabilized and was reduced to ord_N(a).
    Order { r: BigUint, g: BigUint },
    /// Aggressive mode split N straight from one D_min.
    Factor { d1: BigUint, d2: BigUint, d_min: BigUint },
    NoStabilization { samples: usize, collisions: usize },
}

/// One attempt on base a: collect certificates until the running gcd holds
/// still for `stable_hits` collisions, then reduce it to the order.
pub fn run_attempt(
    a: &BigUint,
    modulus: &Modulus,
    config: &CollisionConfig,
    seed: u64,
    log: &mut EventLog,
) -> Result<AttemptOutcome> {
    crate::with_ring!(modulus, |ring| {
        let search = CollisionSearch::new(ring, a, *config, seed)?;
        drive(search, a, modulus, config, log)
    })
}

fn drive<R: ResidueRing>(
    mut search: CollisionSearch<R>,
    a: &BigUint,
    modulus: &Modulus,
    config: &CollisionConfig,
    log: &mut EventLog,
) -> Result<AttemptOutcome> {
    log.push(Event::Sampling {
        word_length: config.word_length,
        max_samples: config.max_samples,
        stable_hits: config.stable_hits,
    });
    let mut acc = RelationAccumulator::new(config.stable_hits);
    while let Some(cert) = search.next_certificate()? {
        let g = acc.accumulate(&cert.d_min).clone();
        let index = acc.collisions();
        if config.aggressive {
            if let Some((d1, d2)) = order_to_factor(a, &cert.d_min, modulus) {
                log.push(Event::Aggressive {
                    index,
                    d: cert.d,
                    d_min: cert.d_min.clone(),
                    d1: d1.clone(),
                    d2: d2.clone(),
                });
                return Ok(AttemptOutcome::Factor {
                    d1,
                    d2,
                    d_min: cert.d_min,
                });
            }
        }
        log.push(Event::Collision {
            index,
            d: cert.d,
            d_min: cert.d_min,
            g: g.clone(),
        });
        if acc.stabilized() {
            log.push(Event::Stabilized { g: g.clone() });
            let r = multiple_to_order(&g, a, modulus, config.budget)?;
            log.push(Event::ReducedOrder { r: r.clone() });
            return Ok(AttemptOutcome::Order { r, g });
        }
    }
    log.push(Event::NoStabilization);
    Ok(AttemptOutcome::NoStabilization {
        samples: search.samples(),
        collisions: acc.collisions(),
    })
}
