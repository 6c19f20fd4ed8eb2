//! Single-flip gradient descent and landscape surveys: local-minimum
//! detection, proxy cost, Gray-code exhaustive sweeps, and Monte Carlo
//! local-minimum counting.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combin::for_each_colex;
use crate::cost::{fill_monomial_values, BitState, PolyCost};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default cap on exhaustive-sweep dimensionality.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;

/// Step cap multiplier: descent longer than 64*N flips is treated as a bug
/// in the incremental bookkeeping, since strict decrease must terminate.
pub const STEP_CAP_PER_DIM: usize = 64;

/// Outcome of a gradient descent.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentResult<F> {
    pub final_state: BitState,
    pub final_cost: F,
    pub steps: usize,
    pub start_cost: F,
}

/// Monte Carlo estimate of the number of local minima.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMinEstimate<F> {
    pub count_estimate: F,
    pub hits: u64,
    pub trials: u64,
    pub n_dims: usize,
}

/// True iff every single flip strictly increases cost (all b_i < 0).
///
/// Checks field entries one coordinate at a time and bails at the first
/// non-negative one, which is cheap on the overwhelming majority of states.
pub fn is_local_minimum<F: Scalar>(cost: &PolyCost<F>, x: &BitState) -> Result<bool> {
    if x.len() != cost.n_dims() {
        return Err(Error::DimensionMismatch {
            expected: cost.n_dims(),
            actual: x.len(),
        });
    }
    let vals = x.values::<F>();
    for i in 0..cost.n_dims() {
        if cost.field_entry_values(&vals, i) >= F::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reusable steepest-descent engine for one landscape.
///
/// Construction precomputes, per coordinate, the flat ids of all monomials
/// containing it, plus every monomial's member list, so a flip costs
/// O(K * n / N) instead of O(n).
pub struct Descender<'c, F> {
    cost: &'c PolyCost<F>,
    /// incidence[i]: flat ids of monomials containing coordinate i.
    incidence: Vec<Vec<u32>>,
    /// members, monomial-major in flat-id order (degree blocks back to back).
    members: Vec<u32>,
    /// flat-id offset of each degree block.
    offsets: Vec<usize>,
    /// member-array offset of each degree block.
    member_offsets: Vec<usize>,
}

/// Mutable sweep state: per-monomial values, interaction field, running cost
/// and the count of non-negative field entries.
struct SweepState<F> {
    vals: Vec<F>,
    b: Vec<F>,
    cost: F,
    nonneg: usize,
}

impl<'c, F: Scalar> Descender<'c, F> {
    pub fn new(cost: &'c PolyCost<F>) -> Self {
        let n = cost.n_dims();
        let offsets = cost.flat_offsets();
        let total = *offsets.last().unwrap();
        let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut members = Vec::with_capacity((1..=cost.degree()).map(|a| a * cost.coeffs_of_degree(a).len()).sum());
        let mut member_offsets = Vec::with_capacity(cost.degree() + 1);
        member_offsets.push(0);
        let mut flat: u32 = 0;
        for a in 1..=cost.degree() {
            for_each_colex(n, a, |tuple| {
                for &i in tuple {
                    incidence[i].push(flat);
                    members.push(i as u32);
                }
                flat += 1;
            });
            member_offsets.push(members.len());
        }
        debug_assert_eq!(flat as usize, total);
        Self {
            cost,
            incidence,
            members,
            offsets,
            member_offsets,
        }
    }

    fn degree_of(&self, id: usize) -> usize {
        // blocks are few; linear scan
        let mut a = 1;
        while self.offsets[a] <= id {
            a += 1;
        }
        a
    }

    fn members_of(&self, id: usize) -> &[u32] {
        let a = self.degree_of(id);
        let base = self.member_offsets[a - 1] + (id - self.offsets[a - 1]) * a;
        &self.members[base..base + a]
    }

    fn init(&self, x: &BitState) -> SweepState<F> {
        let vals_x = x.values::<F>();
        let mut vals = Vec::new();
        fill_monomial_values(self.cost, &vals_x, &mut vals);
        let mut b = vec![F::zero(); self.cost.n_dims()];
        for (id, &v) in vals.iter().enumerate() {
            for &j in self.members_of(id) {
                b[j as usize] += v;
            }
        }
        let cost: F = vals.iter().copied().sum();
        let nonneg = b.iter().filter(|&&v| v >= F::zero()).count();
        SweepState { vals, b, cost, nonneg }
    }

    /// Applies the flip of coordinate i to the sweep state.
    fn flip(&self, s: &mut SweepState<F>, i: usize) {
        let bi_old = s.b[i];
        s.cost += -(bi_old + bi_old);
        let iu = i as u32;
        for &id in &self.incidence[i] {
            let id = id as usize;
            let v = s.vals[id];
            s.vals[id] = -v;
            let dv = -(v + v);
            for &j in self.members_of(id) {
                if j != iu {
                    let j = j as usize;
                    let old = s.b[j];
                    let new = old + dv;
                    s.b[j] = new;
                    s.nonneg = s.nonneg + (new >= F::zero()) as usize - (old >= F::zero()) as usize;
                }
            }
        }
        let new_bi = -bi_old;
        s.b[i] = new_bi;
        s.nonneg = s.nonneg + (new_bi >= F::zero()) as usize - (bi_old >= F::zero()) as usize;
    }

    /// Steepest descent: flip the coordinate with the largest positive field
    /// entry (largest strict decrease, -2*b_i) until none remains; lowest
    /// index wins ties.
    pub fn run(&self, x0: &BitState) -> Result<DescentResult<F>> {
        let n = self.cost.n_dims();
        if x0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: x0.len(),
            });
        }
        let cap = STEP_CAP_PER_DIM * n;
        let mut s = self.init(x0);
        let start_cost = s.cost;
        let mut x = x0.clone();
        let mut steps = 0usize;
        loop {
            let mut best = F::zero();
            let mut best_i = usize::MAX;
            for (i, &bi) in s.b.iter().enumerate() {
                if bi > best {
                    best = bi;
                    best_i = i;
                }
            }
            if best_i == usize::MAX {
                break;
            }
            if steps >= cap {
                return Err(Error::StepCapExceeded { cap });
            }
            self.flip(&mut s, best_i);
            x.flip(best_i);
            steps += 1;
        }
        // final cost recomputed fresh so downstream comparisons are free of
        // the incremental update's (tiny) drift
        let final_cost = self.cost.evaluate(&x)?;
        Ok(DescentResult {
            final_state: x,
            final_cost,
            steps,
            start_cost,
        })
    }
}

/// One-shot steepest descent; builds a [`Descender`] internally.
pub fn descend<F: Scalar>(cost: &PolyCost<F>, x0: &BitState) -> Result<DescentResult<F>> {
    Descender::new(cost).run(x0)
}

/// L'(x): the cost of the local minimum x descends to.
pub fn proxy_cost<F: Scalar>(cost: &PolyCost<F>, x: &BitState) -> Result<F> {
    Ok(descend(cost, x)?.final_cost)
}

fn check_cap<F: Scalar>(cost: &PolyCost<F>, cap: usize) -> Result<()> {
    if cost.n_dims() > cap {
        return Err(Error::ExhaustiveCapExceeded {
            n_dims: cost.n_dims(),
            cap,
        });
    }
    Ok(())
}

/// Gray-code sweep over all 2^N states. The visitor sees (state counter t,
/// sweep state) after the t-th flip; t = 0 is the all-(+1) start state.
/// Between t-1 and t the flipped coordinate is trailing_zeros(t), and the
/// visited state has x_i = -1 exactly on the set bits of t ^ (t >> 1).
fn gray_sweep<F: Scalar, V: FnMut(u64, &SweepState<F>)>(
    cost: &PolyCost<F>,
    cap: usize,
    mut visit: V,
) -> Result<()> {
    check_cap(cost, cap)?;
    let n = cost.n_dims();
    let engine = Descender::new(cost);
    let mut s = engine.init(&BitState::ones(n));
    visit(0, &s);
    let total: u64 = 1u64 << n;
    for t in 1..total {
        let i = t.trailing_zeros() as usize;
        engine.flip(&mut s, i);
        visit(t, &s);
    }
    Ok(())
}

fn gray_state(n: usize, t: u64) -> BitState {
    let g = t ^ (t >> 1);
    let bits = (0..n)
        .map(|i| if (g >> i) & 1 == 1 { -1i8 } else { 1 })
        .collect();
    BitState::new(bits).expect("gray bits are +-1")
}

/// Exact global minimum by Gray-code sweep; ties return the first state in
/// Gray-code order. Default dimension cap [`DEFAULT_EXHAUSTIVE_CAP`].
pub fn exhaustive_global_min<F: Scalar>(cost: &PolyCost<F>) -> Result<(BitState, F)> {
    exhaustive_global_min_with_cap(cost, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn exhaustive_global_min_with_cap<F: Scalar>(
    cost: &PolyCost<F>,
    cap: usize,
) -> Result<(BitState, F)> {
    let mut best_t = 0u64;
    let mut best = F::infinity();
    gray_sweep(cost, cap, |t, s: &SweepState<F>| {
        if s.cost < best {
            best = s.cost;
            best_t = t;
        }
    })?;
    let state = gray_state(cost.n_dims(), best_t);
    // recompute at the winner to shed the sweep's additive drift
    let value = cost.evaluate(&state)?;
    Ok((state, value))
}

/// Exact number of local minima (all b_i < 0) by Gray-code sweep.
pub fn exhaustive_local_min_count<F: Scalar>(cost: &PolyCost<F>) -> Result<u64> {
    exhaustive_local_min_count_with_cap(cost, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn exhaustive_local_min_count_with_cap<F: Scalar>(
    cost: &PolyCost<F>,
    cap: usize,
) -> Result<u64> {
    let mut count = 0u64;
    gray_sweep(cost, cap, |_, s: &SweepState<F>| {
        count += (s.nonneg == 0) as u64;
    })?;
    Ok(count)
}

/// Estimates the local-minimum count as 2^N * hits / trials over uniform
/// states. Deterministic in `seed` and independent of thread count.
pub fn mc_local_min_estimate<F: Scalar>(
    cost: &PolyCost<F>,
    trials: u64,
    seed: u64,
) -> Result<LocalMinEstimate<F>> {
    if trials < 1 {
        return Err(Error::TooFew {
            what: "trials",
            needed: 1,
            got: 0,
        });
    }
    const CHUNK: u64 = 1024;
    let n = cost.n_dims();
    let chunks = trials.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let take = CHUNK.min(trials - c * CHUNK);
            let mut h = 0u64;
            let mut vals = vec![F::zero(); n];
            for _ in 0..take {
                let x = BitState::random(n, &mut rng);
                for (v, &bit) in vals.iter_mut().zip(x.bits()) {
                    *v = if bit > 0 { F::one() } else { -F::one() };
                }
                let mut is_min = true;
                for i in 0..n {
                    if cost.field_entry_values(&vals, i) >= F::zero() {
                        is_min = false;
                        break;
                    }
                }
                h += is_min as u64;
            }
            h
        })
        .sum();
    let count_estimate =
        F::of(2.0).powi(n as i32) * F::of(hits as f64) / F::of(trials as f64);
    Ok(LocalMinEstimate {
        count_estimate,
        hits,
        trials,
        n_dims: n,
    })
}

/// Full descent results from `restarts` uniform initial states, in replica
/// order. Deterministic in `seed` and independent of thread count.
pub fn restart_search_results<F: Scalar>(
    cost: &PolyCost<F>,
    restarts: usize,
    seed: u64,
) -> Result<Vec<DescentResult<F>>> {
    if restarts < 1 {
        return Err(Error::TooFew {
            what: "restarts",
            needed: 1,
            got: 0,
        });
    }
    let engine = Descender::new(cost);
    (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let x0 = BitState::random(cost.n_dims(), &mut rng);
            engine.run(&x0)
        })
        .collect()
}

/// Best descent over `restarts` random initializations plus the list of all
/// final costs (the parent pool of the crossover pipelines). Ties go to the
/// earliest replica.
pub fn restart_search<F: Scalar>(
    cost: &PolyCost<F>,
    restarts: usize,
    seed: u64,
) -> Result<(DescentResult<F>, Vec<F>)> {
    let results = restart_search_results(cost, restarts, seed)?;
    let all_costs: Vec<F> = results.iter().map(|r| r.final_cost).collect();
    let best_idx = all_costs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.partial_cmp(b).unwrap().then(i.cmp(j)))
        .map(|(i, _)| i)
        .unwrap();
    Ok((results.into_iter().nth(best_idx).unwrap(), all_costs))
}
