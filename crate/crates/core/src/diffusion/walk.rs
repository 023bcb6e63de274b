use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ntheory::{mod_pow_u, Modulus, ResidueRing};

/// Default cap on the number of distinct group elements a simulation may touch.
pub const DEFAULT_STATE_GUARD: usize = 4_000_000;

/// Round guard on the half-integer boundary of 1/p_n(e).
pub const ROUND_GUARD: f64 = 1e-6;

/// The dyadic Cayley graph of ⟨b⟩ ⊂ (ℤ/Nℤ)*.
///
/// Generator slots `0..=M` hold b^(2^t); slots `M+1..=2M+1` hold b^(−2^t).
/// The slots form a multiset: coincident generators are kept, so the graph
/// stays 2(M+1)-regular with multiplicities as edge weights.
#[derive(Debug, Clone)]
pub struct CayleyWalk<R: ResidueRing> {
    ring: R,
    base: R::Elem,
    gens: Vec<R::Elem>,
    m: u32,
}

impl<R: ResidueRing> CayleyWalk<R> {
    /// One inversion plus 2M squarings.
    pub fn new(ring: R, b: &BigUint) -> Result<Self> {
        let m = ring.modulus().dyadic_bound();
        let base = ring.enter(b);
        let inv = ring.inverse(&base)?;
        let slots = m as usize + 1;
        let mut gens = Vec::with_capacity(2 * slots);
        let mut x = base.clone();
        for _ in 0..slots {
            let next = ring.square(&x);
            gens.push(std::mem::replace(&mut x, next));
        }
        let mut y = inv;
        for _ in 0..slots {
            let next = ring.square(&y);
            gens.push(std::mem::replace(&mut y, next));
        }
        Ok(Self { ring, base, gens, m })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn modulus(&self) -> &Modulus {
        self.ring.modulus()
    }

    pub fn base(&self) -> &R::Elem {
        &self.base
    }

    /// M = ⌊log₂N⌋ + 1.
    pub fn dyadic_bound(&self) -> u32 {
        self.m
    }

    /// d = 2(M+1).
    pub fn degree(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[R::Elem] {
        &self.gens
    }

    pub fn generator_residues(&self) -> Vec<BigUint> {
        self.gens.iter().map(|g| self.ring.leave(g)).collect()
    }
}

/// A probability distribution over the vertices discovered by a
/// [`HeatSimulator`], indexed by vertex id. Vertex 0 is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatState {
    mass: Vec<f64>,
    steps: u64,
}

impl HeatState {
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// p_n(e).
    pub fn at_identity(&self) -> f64 {
        self.mass[0]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn support_len(&self) -> usize {
        self.mass.iter().filter(|&&p| p > 0.0).count()
    }

    /// Σ mass, compensated. Never renormalized: drift from 1 flags a bug.
    pub fn total_mass(&self) -> f64 {
        kahan_sum(self.mass.iter().copied())
    }

    /// s₂ = Σ p(x)².
    pub fn collision_param(&self) -> f64 {
        kahan_sum(self.mass.iter().map(|p| p * p))
    }
}

pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Half-lazy walk W = ½(I + P) on the Cayley graph, grown lazily from the
/// identity: a vertex's neighbors are computed only once mass reaches it.
#[derive(Debug, Clone)]
pub struct HeatSimulator<R: ResidueRing> {
    walk: CayleyWalk<R>,
    vertices: Vec<R::Elem>,
    index: HashMap<R::Elem, u32>,
    /// Outgoing (target, weight) pairs of every expanded vertex, with
    /// repeated generators merged and the lazy half folded into the self-loop.
    edges: Vec<(u32, f64)>,
    /// `edges[offsets[i]..offsets[i + 1]]` belong to vertex i
    offsets: Vec<usize>,
    guard: usize,
}

impl<R: ResidueRing> HeatSimulator<R> {
    pub fn new(walk: CayleyWalk<R>) -> Self {
        Self::with_guard(walk, DEFAULT_STATE_GUARD)
    }

    pub fn with_guard(walk: CayleyWalk<R>, guard: usize) -> Self {
        let one = walk.ring().one();
        let mut index = HashMap::new();
        index.insert(one.clone(), 0);
        Self {
            walk,
            vertices: vec![one],
            index,
            edges: Vec::new(),
            offsets: vec![0],
            guard,
        }
    }

    pub fn walk(&self) -> &CayleyWalk<R> {
        &self.walk
    }

    /// δ_e.
    pub fn initial(&self) -> HeatState {
        HeatState {
            mass: vec![1.0],
            steps: 0,
        }
    }

    /// Vertices discovered so far (all of ⟨b⟩ once the walk has saturated).
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, id: usize) -> BigUint {
        self.walk.ring().leave(&self.vertices[id])
    }

    pub fn mass_of(&self, state: &HeatState, x: &BigUint) -> f64 {
        let key = self.walk.ring().enter(x);
        self.index
            .get(&key)
            .and_then(|&id| state.mass.get(id as usize))
            .copied()
            .unwrap_or(0.0)
    }

    /// The state as an associative map residue ↦ mass.
    pub fn mass_map(&self, state: &HeatState) -> BTreeMap<BigUint, f64> {
        state
            .mass
            .iter()
            .enumerate()
            .map(|(id, &p)| (self.vertex(id), p))
            .collect()
    }

    fn expanded(&self) -> usize {
        self.offsets.len() - 1
    }

    fn expand_through(&mut self, count: usize) -> Result<()> {
        let ring = self.walk.ring.clone();
        let share = 0.5 / self.walk.degree() as f64;
        let mut targets: Vec<u32> = Vec::with_capacity(self.walk.degree());
        while self.expanded() < count {
            let source = self.expanded() as u32;
            let x = self.vertices[source as usize].clone();
            targets.clear();
            for g in &self.walk.gens {
                let y = ring.mul(&x, g);
                let id = match self.index.get(&y) {
                    Some(&id) => id,
                    None => {
                        if self.vertices.len() >= self.guard {
                            return Err(Error::StateGuardExceeded(self.guard));
                        }
                        let id = self.vertices.len() as u32;
                        self.index.insert(y.clone(), id);
                        self.vertices.push(y);
                        id
                    }
                };
                targets.push(id);
            }
            targets.push(source);
            targets.sort_unstable();
            for run in targets.chunk_by(|a, b| a == b) {
                let target = run[0];
                let moves = if target == source { run.len() - 1 } else { run.len() };
                let mut weight = moves as f64 * share;
                if target == source {
                    weight += 0.5;
                }
                self.edges.push((target, weight));
            }
            self.offsets.push(self.edges.len());
        }
        Ok(())
    }

    /// One application of W. Contributions are accumulated in vertex-id
    /// order, so the result does not depend on hashing or scheduling.
    pub fn step(&mut self, state: &HeatState) -> Result<HeatState> {
        self.expand_through(state.mass.len())?;
        let mut next = vec![0.0; self.vertices.len()];
        for (i, &p) in state.mass.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for &(j, w) in &self.edges[self.offsets[i]..self.offsets[i + 1]] {
                next[j as usize] += w * p;
            }
        }
        Ok(HeatState {
            mass: next,
            steps: state.steps + 1,
        })
    }

    /// p_n = Wⁿ δ_e.
    pub fn run(&mut self, n: u64) -> Result<HeatState> {
        let mut state = self.initial();
        for _ in 0..n {
            state = self.step(&state)?;
        }
        Ok(state)
    }

    /// p_k(e) for k = 0..=n.
    pub fn identity_series(&mut self, n: u64) -> Result<Vec<f64>> {
        let mut state = self.initial();
        let mut out = Vec::with_capacity(n as usize + 1);
        out.push(state.at_identity());
        for _ in 0..n {
            state = self.step(&state)?;
            out.push(state.at_identity());
        }
        Ok(out)
    }
}

/// n₀ = ⌈4(M+1)(log₂N + 2)⌉, with every floating-point quantity nudged up.
pub fn required_steps(modulus: &Modulus) -> u64 {
    let m1 = (modulus.dyadic_bound() + 1) as f64;
    let log2 = modulus.log2().next_up();
    let product = (4.0 * m1 * (log2 + 2.0)).next_up();
    product.ceil() as u64
}

/// Nearest integer to 1/p, refusing values within [`ROUND_GUARD`] of a
/// half-integer.
pub fn round_inverse(p: f64, steps: u64) -> Result<u64> {
    let inverse = 1.0 / p;
    let nearest = inverse.round();
    if !inverse.is_finite() || (inverse - nearest).abs() >= 0.5 - ROUND_GUARD || nearest < 1.0 {
        return Err(Error::RoundingUnresolved { inverse, steps });
    }
    Ok(nearest as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderRecovery {
    pub order: u64,
    pub steps: u64,
    pub identity_mass: f64,
    /// Number of distinct group elements the walk reached.
    pub vertices: usize,
}

/// Recover ord_N(b) as round(1/p_n(e)) from the simulated walk; n defaults
/// to [`required_steps`]. The answer is checked against b^r ≡ 1.
pub fn recover_order(
    modulus: &Modulus,
    b: &BigUint,
    steps: Option<u64>,
    guard: usize,
) -> Result<OrderRecovery> {
    let n = steps.unwrap_or_else(|| required_steps(modulus));
    let (p, vertices) = crate::with_ring!(modulus, |ring| {
        let mut sim = HeatSimulator::with_guard(CayleyWalk::new(ring, b)?, guard);
        let state = sim.run(n)?;
        (state.at_identity(), sim.vertex_count())
    });
    let order = round_inverse(p, n)?;
    if mod_pow_u(b, &BigUint::from(order), modulus) != BigUint::from(1u32) {
        return Err(Error::VerificationFailed { r: order });
    }
    Ok(OrderRecovery {
        order,
        steps: n,
        identity_mass: p,
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::{BigRing, Montgomery64};

    fn walk(n: u64, b: u64) -> CayleyWalk<Montgomery64> {
        let modulus = Modulus::from_u64(n).unwrap();
        CayleyWalk::new(Montgomery64::new(&modulus).unwrap(), &BigUint::from(b)).unwrap()
    }

    #[test]
    fn generator_layout() {
        let w = walk(299, 3);
        assert_eq!(w.dyadic_bound(), 9);
        assert_eq!(w.degree(), 20);
        let gens = w.generator_residues();
        assert_eq!(gens[0], BigUint::from(3u32));
        assert_eq!(gens[1], BigUint::from(9u32));
        assert_eq!(gens[2], BigUint::from(81u32));
        let n = BigUint::from(299u32);
        for t in 0..=9 {
            assert_eq!((&gens[t] * &gens[10 + t]) % &n, BigUint::from(1u32));
            if t < 9 {
                assert_eq!((&gens[t] * &gens[t]) % &n, gens[t + 1]);
            }
        }
    }

    #[test]
    fn three_cycle_for_21() {
        let w = walk(21, 4);
        let gens = w.generator_residues();
        assert_eq!(gens.len(), 12);
        for g in &gens {
            assert!(*g == BigUint::from(4u32) || *g == BigUint::from(16u32));
        }
    }

    #[test]
    fn trivial_base() {
        let w = walk(299, 1);
        assert!(w.generator_residues().iter().all(|g| *g == BigUint::from(1u32)));
        let mut sim = HeatSimulator::new(w);
        let state = sim.run(50).unwrap();
        assert_eq!(state.masses(), &[1.0]);
    }

    #[test]
    fn non_unit_base_is_rejected() {
        let modulus = Modulus::from_u64(299).unwrap();
        let err = CayleyWalk::new(BigRing::new(&modulus), &BigUint::from(23u32)).unwrap_err();
        assert!(matches!(err, Error::NonInvertible { gcd, .. } if gcd == BigUint::from(23u32)));
    }

    #[test]
    fn first_step_identity_mass() {
        for (n, b) in [(299, 3), (21, 4)] {
            let mut sim = HeatSimulator::new(walk(n, b));
            let s1 = sim.run(1).unwrap();
            assert_eq!(s1.at_identity(), 0.5);
        }
    }

    #[test]
    fn support_grows_one_neighborhood_per_step() {
        let mut sim = HeatSimulator::new(walk(1022117, 576));
        let mut state = sim.initial();
        let mut last = 1;
        for _ in 0..4 {
            state = sim.step(&state).unwrap();
            let support = state.support_len();
            assert!(support > last && support <= last * (1 + sim.walk().degree()));
            last = support;
        }
    }

    #[test]
    fn mass_is_conserved() {
        let mut sim = HeatSimulator::new(walk(1022117, 576));
        let mut state = sim.initial();
        for _ in 0..300 {
            state = sim.step(&state).unwrap();
            assert!((state.total_mass() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn guard_trips() {
        let mut sim = HeatSimulator::with_guard(walk(1022117, 576), 100);
        assert!(matches!(sim.run(50), Err(Error::StateGuardExceeded(100))));
    }

    #[test]
    fn step_budget_examples() {
        assert_eq!(required_steps(&Modulus::from_u64(299).unwrap()), 409);
        assert_eq!(required_steps(&Modulus::from_u64(3).unwrap()), 44);
    }

    #[test]
    fn recovers_known_orders() {
        let m = |n| Modulus::from_u64(n).unwrap();
        let guard = DEFAULT_STATE_GUARD;
        assert_eq!(recover_order(&m(299), &BigUint::from(3u32), None, guard).unwrap().order, 33);
        assert_eq!(recover_order(&m(21), &BigUint::from(4u32), None, guard).unwrap().order, 3);
        assert_eq!(recover_order(&m(299), &BigUint::from(1u32), None, guard).unwrap().order, 1);
    }

    #[test]
    fn too_few_steps_is_reported() {
        let m = Modulus::from_u64(299).unwrap();
        // after one step p = 1/2 exactly, so 1/p = 2 rounds cleanly to a wrong r
        let err = recover_order(&m, &BigUint::from(3u32), Some(1), DEFAULT_STATE_GUARD).unwrap_err();
        assert_eq!(err, Error::VerificationFailed { r: 2 });
        assert!(matches!(round_inverse(1.0 / 2.5, 3), Err(Error::RoundingUnresolved { .. })));
    }

    #[test]
    fn backends_agree() {
        let modulus = Modulus::from_u64(299).unwrap();
        let b = BigUint::from(3u32);
        let mut fast = HeatSimulator::new(CayleyWalk::new(Montgomery64::new(&modulus).unwrap(), &b).unwrap());
        let mut slow = HeatSimulator::new(CayleyWalk::new(BigRing::new(&modulus), &b).unwrap());
        let sf = fast.run(40).unwrap();
        let ss = slow.run(40).unwrap();
        assert_eq!(fast.mass_map(&sf), slow.mass_map(&ss));
    }
}
