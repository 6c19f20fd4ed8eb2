//! Euclidean traveling-salesman demonstration: planar instances, tour
//! evaluation, cost normalization against random permutations, 2-opt
//! descent, biased route crossover, and a pooled parent/offspring pipeline
//! mirroring the bit-string selection-crossover scheme on a combinatorial
//! problem.
//!
//! Distances are computed in 64-bit floats throughout; instances are small
//! enough (a few thousand cities) that no distance matrix is cached.

use crate::crossover::{sample_stats, RunSummary};
use crate::error::{Error, Result};
use crate::seeding::derive_seed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::path::Path;

/// Strict-improvement threshold for 2-opt exchanges.
const TWO_OPT_EPS: f64 = 1e-12;

/// Random permutations drawn when standardizing tour lengths.
pub const DEFAULT_NORMALIZER_SAMPLES: usize = 10_000;
/// Number of best parents kept for offspring generation.
pub const DEFAULT_POOL_SIZE: usize = 10;
/// Crossover rate used by the route pipeline when none is given.
pub const DEFAULT_TSP_GAMMA: f64 = 0.05;

const TAG_PARENTS: u64 = 1;
const TAG_OFFSPRING: u64 = 2;
const TAG_POOL: u64 = 3;
const TAG_NORMALIZER: u64 = 4;

/// A planar city layout with Euclidean edge costs.
#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    coords: Vec<(f64, f64)>,
}

impl TspInstance {
    /// Validates at least 4 finite coordinate pairs.
    pub fn new(coords: Vec<(f64, f64)>) -> Result<Self> {
        if coords.len() < 4 {
            return Err(Error::TooFew {
                what: "cities",
                needed: 4,
                got: coords.len(),
            });
        }
        if coords.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::NonFinite {
                context: "instance coordinates",
            });
        }
        Ok(Self { coords })
    }

    pub fn n_cities(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    #[inline]
    fn dist(&self, a: usize, b: usize) -> f64 {
        let (xa, ya) = self.coords[a];
        let (xb, yb) = self.coords[b];
        let (dx, dy) = (xa - xb, ya - yb);
        (dx * dx + dy * dy).sqrt()
    }
}

/// A closed visiting order: a permutation of the city indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    order: Vec<u32>,
}

impl Tour {
    /// Validates that `order` visits each of 0..len exactly once.
    pub fn new(order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &c in &order {
            let c = c as usize;
            if c >= n || seen[c] {
                return Err(Error::InvalidTour { n_cities: n });
            }
            seen[c] = true;
        }
        Ok(Self { order })
    }

    /// The tour 0, 1, ..., n-1.
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n as u32).collect(),
        }
    }

    /// A uniformly random permutation.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(rng);
        Self { order }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The set of undirected edges traversed, each as (low city, high city).
    pub fn edge_set(&self) -> Vec<(u32, u32)> {
        let n = self.order.len();
        let mut edges: Vec<(u32, u32)> = (0..n)
            .map(|i| {
                let a = self.order[i];
                let b = self.order[(i + 1) % n];
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        edges
    }
}

/// Affine standardization of tour lengths, fitted on random permutations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostNormalizer {
    mu: f64,
    sigma: f64,
    sample_count: u64,
}

impl CostNormalizer {
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sample_count(&self) -> u64 {
        self.sample_count
    }

    /// Maps a raw length to standardized units.
    pub fn normalize(&self, length: f64) -> f64 {
        (length - self.mu) / self.sigma
    }
}

/// Draws `n_cities` i.i.d. uniform points in the unit square.
pub fn generate_instance(n_cities: usize, seed: u64) -> Result<TspInstance> {
    if n_cities < 4 {
        return Err(Error::TooFew {
            what: "cities",
            needed: 4,
            got: n_cities,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n_cities)
        .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    TspInstance::new(coords)
}

/// Total Euclidean length of the closed tour, including the edge back to
/// the start.
pub fn tour_length(inst: &TspInstance, t: &Tour) -> Result<f64> {
    let n = inst.n_cities();
    if t.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: t.len(),
        });
    }
    let order = t.order();
    let mut total = 0.0;
    for i in 0..n {
        total += inst.dist(order[i] as usize, order[(i + 1) % n] as usize);
    }
    Ok(total)
}

/// Standardizes tour lengths by the mean and spread over `samples` random
/// permutations.  Requires `samples >= 100`; fails when the spread is zero
/// (all cities coincident).
pub fn fit_normalizer(inst: &TspInstance, samples: usize, seed: u64) -> Result<CostNormalizer> {
    if samples < 100 {
        return Err(Error::TooFew {
            what: "normalizer samples",
            needed: 100,
            got: samples,
        });
    }
    let n = inst.n_cities();
    let lengths: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let t = Tour::random(n, &mut rng);
            tour_length(inst, &t).expect("freshly drawn tour is valid")
        })
        .collect();
    let (mu, sigma, _) = sample_stats(&lengths);
    if sigma <= 0.0 {
        return Err(Error::DegenerateInstance);
    }
    Ok(CostNormalizer {
        mu,
        sigma,
        sample_count: samples as u64,
    })
}

/// Repeatedly applies the first strictly length-reducing 2-opt exchange
/// found by a lexicographic scan over edge pairs, restarting the scan after
/// each exchange; stops when a full pass finds none.  Returns the final
/// tour, its length, and the number of exchanges applied.
pub fn two_opt_descend(inst: &TspInstance, t0: &Tour) -> Result<(Tour, f64, u64)> {
    let n = inst.n_cities();
    if t0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: t0.len(),
        });
    }
    let mut order = t0.order().to_vec();
    let mut steps = 0u64;
    'scan: loop {
        for i in 0..n - 2 {
            let a = order[i] as usize;
            let b = order[i + 1] as usize;
            let d_ab = inst.dist(a, b);
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue; // the two edges share city order[0]
                }
                let c = order[j] as usize;
                let d = order[(j + 1) % n] as usize;
                let delta = inst.dist(a, c) + inst.dist(b, d) - d_ab - inst.dist(c, d);
                if delta < -TWO_OPT_EPS {
                    order[i + 1..=j].reverse();
                    steps += 1;
                    continue 'scan;
                }
            }
        }
        break;
    }
    let tour = Tour { order };
    let len = tour_length(inst, &tour)?;
    Ok((tour, len, steps))
}

/// The two cyclic neighbors of each city in a tour, indexed by city.
fn neighbor_table(t: &Tour) -> Vec<[u32; 2]> {
    let n = t.len();
    let order = t.order();
    let mut nb = vec![[0u32; 2]; n];
    for i in 0..n {
        let prev = order[(i + n - 1) % n];
        let next = order[(i + 1) % n];
        nb[order[i] as usize] = [prev, next];
    }
    nb
}

/// Picks one unvisited cyclic neighbor of `cur`, uniformly when both are
/// available.
fn pick_unvisited(nb: &[[u32; 2]], cur: u32, visited: &[bool], rng: &mut impl Rng) -> Option<u32> {
    let [p, q] = nb[cur as usize];
    match (!visited[p as usize], !visited[q as usize]) {
        (true, true) => Some(if rng.random::<bool>() { p } else { q }),
        (true, false) => Some(p),
        (false, true) => Some(q),
        (false, false) => None,
    }
}

/// The unvisited city closest to `cur` (lowest index on ties).
fn nearest_unvisited(inst: &TspInstance, cur: u32, visited: &[bool]) -> u32 {
    let mut best = u32::MAX;
    let mut best_d = f64::INFINITY;
    for (c, &seen) in visited.iter().enumerate() {
        if !seen {
            let d = inst.dist(cur as usize, c);
            if d < best_d {
                best_d = d;
                best = c as u32;
            }
        }
    }
    debug_assert_ne!(best, u32::MAX);
    best
}

/// Builds an offspring tour by walking from city 0 and inheriting, at each
/// step, an edge of the first parent with probability 1 - gamma and of the
/// second with probability gamma.  When the chosen parent has no unvisited
/// neighbor of the current city the other parent's is used; when neither
/// has one the walk jumps to the nearest unvisited city.  Always yields a
/// valid permutation.
pub fn route_crossover(
    inst: &TspInstance,
    p1: &Tour,
    p2: &Tour,
    gamma: f64,
    seed: u64,
) -> Result<Tour> {
    let n = inst.n_cities();
    if p1.len() != n || p2.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: if p1.len() != n { p1.len() } else { p2.len() },
        });
    }
    if !(0.0..=0.5).contains(&gamma) {
        return Err(Error::ParamOutOfRange {
            name: "gamma",
            value: gamma,
            requirement: "in [0, 0.5]",
        });
    }
    let nb1 = neighbor_table(p1);
    let nb2 = neighbor_table(p2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = 0u32;
    visited[0] = true;
    order.push(0u32);
    for _ in 1..n {
        let first_parent = rng.random::<f64>() >= gamma;
        let (lead, fallback) = if first_parent {
            (&nb1, &nb2)
        } else {
            (&nb2, &nb1)
        };
        let next = pick_unvisited(lead, cur, &visited, &mut rng)
            .or_else(|| pick_unvisited(fallback, cur, &visited, &mut rng))
            .unwrap_or_else(|| nearest_unvisited(inst, cur, &visited));
        visited[next as usize] = true;
        order.push(next);
        cur = next;
    }
    Ok(Tour { order })
}

/// Outcome of the pooled route pipeline.  Statistics and trajectories are
/// in normalized units (see [`CostNormalizer`]); best lengths are raw.
#[derive(Debug, Clone, PartialEq)]
pub struct TspRunResult {
    /// Parent/offspring statistics on normalized post-descent costs.
    pub summary: RunSummary<f64>,
    /// The standardization used for all normalized figures.
    pub normalizer: CostNormalizer,
    /// Cumulative minimum of normalized parent costs, in generation order.
    pub parent_running_min: Vec<f64>,
    /// Cumulative minimum of normalized offspring costs.
    pub offspring_running_min: Vec<f64>,
    pub best_parent: Tour,
    pub best_parent_length: f64,
    pub best_offspring: Tour,
    pub best_offspring_length: f64,
}

fn running_min(values: &[f64]) -> Vec<f64> {
    let mut acc = f64::INFINITY;
    values
        .iter()
        .map(|&v| {
            acc = acc.min(v);
            acc
        })
        .collect()
}

/// Full route pipeline: `m` random tours descended to 2-opt minima form the
/// parents; the `pool_size` best are kept; `m` offspring are built by
/// biased route crossover on pairs drawn uniformly from the pool (the
/// better member acts as the dominant parent) and descended in turn.
pub fn run_tsp_pipeline(
    inst: &TspInstance,
    m: usize,
    gamma: f64,
    pool_size: usize,
    seed: u64,
) -> Result<TspRunResult> {
    if pool_size < 2 {
        return Err(Error::TooFew {
            what: "pool slots",
            needed: 2,
            got: pool_size,
        });
    }
    if m < pool_size {
        return Err(Error::TooFew {
            what: "parents (need at least the pool size)",
            needed: pool_size,
            got: m,
        });
    }
    if !(0.0..=0.5).contains(&gamma) {
        return Err(Error::ParamOutOfRange {
            name: "gamma",
            value: gamma,
            requirement: "in [0, 0.5]",
        });
    }

    let normalizer = fit_normalizer(
        inst,
        DEFAULT_NORMALIZER_SAMPLES,
        derive_seed(seed, 0, TAG_NORMALIZER),
    )?;

    let n = inst.n_cities();
    let parent_seed = derive_seed(seed, 0, TAG_PARENTS);
    let parents: Vec<(Tour, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(parent_seed);
            rng.set_stream(i as u64);
            let start = Tour::random(n, &mut rng);
            let (tour, len, _) = two_opt_descend(inst, &start)?;
            Ok((tour, len))
        })
        .collect::<Result<_>>()?;

    let parent_norm: Vec<f64> = parents.iter().map(|p| normalizer.normalize(p.1)).collect();

    // Pool of the best parents, ordered best-first; ties keep the earlier
    // replica.
    let mut ranked: Vec<usize> = (0..m).collect();
    ranked.sort_by(|&a, &b| {
        parents[a]
            .1
            .partial_cmp(&parents[b].1)
            .expect("tour lengths are finite")
            .then(a.cmp(&b))
    });
    let pool: Vec<usize> = ranked[..pool_size].to_vec();

    let pair_seed = derive_seed(seed, 0, TAG_POOL);
    let offspring: Vec<(Tour, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(pair_seed);
            rng.set_stream(i as u64);
            let a = rng.random_range(0..pool_size);
            let mut b = rng.random_range(0..pool_size - 1);
            if b >= a {
                b += 1;
            }
            // Pool indices are sorted best-first, so the smaller slot is
            // the better tour and receives the 1 - gamma bias.
            let (lead, second) = (pool[a.min(b)], pool[a.max(b)]);
            let child = route_crossover(
                inst,
                &parents[lead].0,
                &parents[second].0,
                gamma,
                derive_seed(seed, i as u64, TAG_OFFSPRING),
            )?;
            let (tour, len, _) = two_opt_descend(inst, &child)?;
            Ok((tour, len))
        })
        .collect::<Result<_>>()?;

    let offspring_norm: Vec<f64> = offspring
        .iter()
        .map(|o| normalizer.normalize(o.1))
        .collect();

    let (p_mean, p_std, p_min) = sample_stats(&parent_norm);
    let (o_mean, o_std, o_min) = sample_stats(&offspring_norm);
    let ratio = o_std / p_std;
    let l_norm = (1.0 - ratio * ratio).max(0.0).sqrt();

    let best_parent_idx = pool[0];
    let best_offspring_idx = (0..m)
        .min_by(|&a, &b| {
            offspring[a]
                .1
                .partial_cmp(&offspring[b].1)
                .expect("tour lengths are finite")
                .then(a.cmp(&b))
        })
        .expect("m >= 2");

    Ok(TspRunResult {
        summary: RunSummary {
            parent_mean: p_mean,
            parent_std: p_std,
            parent_min: p_min,
            offspring_mean: o_mean,
            offspring_std: o_std,
            offspring_min: o_min,
            l_norm,
            gamma,
            m: m as u64,
        },
        normalizer,
        parent_running_min: running_min(&parent_norm),
        offspring_running_min: running_min(&offspring_norm),
        best_parent: parents[best_parent_idx].0.clone(),
        best_parent_length: parents[best_parent_idx].1,
        best_offspring: offspring[best_offspring_idx].0.clone(),
        best_offspring_length: offspring[best_offspring_idx].1,
    })
}

/// Writes an instance as one "x y" pair per line with 17 significant
/// digits.
pub fn write_instance(inst: &TspInstance, path: impl AsRef<Path>) -> Result<()> {
    use std::fmt::Write as _;
    let mut out = String::new();
    for &(x, y) in inst.coords() {
        writeln!(out, "{x:.16e} {y:.16e}").expect("writing to a String cannot fail");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads an instance written as whitespace-separated "x y" lines; blank
/// lines and lines starting with '#' are skipped.
pub fn read_instance(path: impl AsRef<Path>) -> Result<TspInstance> {
    let text = std::fs::read_to_string(&path)?;
    let mut coords = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::BadFormat {
                detail: format!("line {}: expected two coordinates, got {}", idx + 1, fields.len()),
            });
        }
        let x: f64 = fields[0].parse().map_err(|e| Error::BadFormat {
            detail: format!("line {}: {e}", idx + 1),
        })?;
        let y: f64 = fields[1].parse().map_err(|e| Error::BadFormat {
            detail: format!("line {}: {e}", idx + 1),
        })?;
        coords.push((x, y));
    }
    TspInstance::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{predict_min_of_m, PredictionOrder};

    fn square() -> TspInstance {
        TspInstance::new(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            TspInstance::new(vec![(0.0, 0.0); 3]),
            Err(Error::TooFew { .. })
        ));
        assert!(matches!(
            TspInstance::new(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (f64::NAN, 1.0)]),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(generate_instance(3, 1), Err(Error::TooFew { .. })));
    }

    #[test]
    fn generated_instances_are_deterministic_and_uniform() {
        let a = generate_instance(500, 42).unwrap();
        let b = generate_instance(500, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_instance(500, 43).unwrap();
        assert_ne!(a, c);

        assert_eq!(a.n_cities(), 500);
        assert!(a
            .coords()
            .iter()
            .all(|&(x, y)| (0.0..1.0).contains(&x) && (0.0..1.0).contains(&y)));

        // Uniform moments: mean 1/2, sd 1/sqrt(12); allow 3 standard errors.
        let n = a.n_cities() as f64;
        let band = 3.0 / (12.0 * n).sqrt();
        let mx = a.coords().iter().map(|c| c.0).sum::<f64>() / n;
        let my = a.coords().iter().map(|c| c.1).sum::<f64>() / n;
        assert!((mx - 0.5).abs() < band, "{mx}");
        assert!((my - 0.5).abs() < band, "{my}");
    }

    #[test]
    fn tour_validation() {
        assert!(Tour::new(vec![0, 1, 2, 3]).is_ok());
        assert!(matches!(
            Tour::new(vec![0, 1, 1, 3]),
            Err(Error::InvalidTour { .. })
        ));
        assert!(matches!(
            Tour::new(vec![0, 1, 2, 4]),
            Err(Error::InvalidTour { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = Tour::random(17, &mut rng);
            assert!(Tour::new(t.order().to_vec()).is_ok());
        }
    }

    #[test]
    fn square_tour_lengths() {
        let inst = square();
        let hull = Tour::new(vec![0, 1, 2, 3]).unwrap();
        assert!((tour_length(&inst, &hull).unwrap() - 4.0).abs() < 1e-15);
        let crossing = Tour::new(vec![0, 2, 1, 3]).unwrap();
        let expected = 2.0 + 2.0 * std::f64::consts::SQRT_2;
        assert!((tour_length(&inst, &crossing).unwrap() - expected).abs() < 1e-12);

        let wrong_len = Tour::new(vec![0, 1, 2, 3, 4]).unwrap();
        assert!(matches!(
            tour_length(&inst, &wrong_len),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tour_length_dihedral_invariance() {
        let inst = generate_instance(23, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = Tour::random(23, &mut rng);
        let base = tour_length(&inst, &t).unwrap();

        let mut reversed = t.order().to_vec();
        reversed.reverse();
        let rev = Tour::new(reversed).unwrap();
        assert!((tour_length(&inst, &rev).unwrap() - base).abs() < 1e-12);

        for shift in 1..23 {
            let mut rotated = t.order().to_vec();
            rotated.rotate_left(shift);
            let rot = Tour::new(rotated).unwrap();
            assert!((tour_length(&inst, &rot).unwrap() - base).abs() < 1e-12);
        }
    }

    #[test]
    fn normalizer_standardizes_random_tours() {
        let inst = generate_instance(60, 11).unwrap();
        let norm = fit_normalizer(&inst, 4000, 21).unwrap();
        assert!(norm.sigma() > 0.0);
        assert_eq!(norm.sample_count(), 4000);

        // Fresh random tours standardize to mean 0, variance 1.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let fresh: Vec<f64> = (0..4000)
            .map(|_| norm.normalize(tour_length(&inst, &Tour::random(60, &mut rng)).unwrap()))
            .collect();
        let (mean, std, _) = sample_stats(&fresh);
        assert!(mean.abs() < 3.0 / (4000f64).sqrt(), "{mean}");
        assert!((std * std - 1.0).abs() < 0.10, "{std}");

        assert!(matches!(
            fit_normalizer(&inst, 99, 1),
            Err(Error::TooFew { .. })
        ));
        let degenerate = TspInstance::new(vec![(0.3, 0.3); 5]).unwrap();
        assert!(matches!(
            fit_normalizer(&degenerate, 100, 1),
            Err(Error::DegenerateInstance)
        ));
    }

    #[test]
    fn independent_normalizer_fits_agree() {
        let inst = generate_instance(500, 77).unwrap();
        let a = fit_normalizer(&inst, 10_000, 1).unwrap();
        let b = fit_normalizer(&inst, 10_000, 2).unwrap();
        let se = (a.sigma() / (10_000f64).sqrt()) * std::f64::consts::SQRT_2;
        assert!(
            (a.mu() - b.mu()).abs() < 3.0 * se,
            "mu {} vs {} (se {se})",
            a.mu(),
            b.mu()
        );
    }

    /// Exhaustively checks that no 2-opt exchange improves the tour.
    fn is_two_opt_local(inst: &TspInstance, t: &Tour) -> bool {
        let n = t.len();
        let order = t.order();
        for i in 0..n - 2 {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (order[i] as usize, order[i + 1] as usize);
                let (c, d) = (order[j] as usize, order[(j + 1) % n] as usize);
                let delta = inst.dist(a, c) + inst.dist(b, d) - inst.dist(a, b) - inst.dist(c, d);
                if delta < -TWO_OPT_EPS {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn two_opt_uncrosses_the_square() {
        let inst = square();
        let crossing = Tour::new(vec![0, 2, 1, 3]).unwrap();
        let (tour, len, steps) = two_opt_descend(&inst, &crossing).unwrap();
        assert!((len - 4.0).abs() < 1e-12);
        assert!(steps >= 1);
        assert!(is_two_opt_local(&inst, &tour));
    }

    #[test]
    fn two_opt_improves_and_terminates_locally() {
        let inst = generate_instance(100, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut strict = 0;
        for _ in 0..20 {
            let start = Tour::random(100, &mut rng);
            let start_len = tour_length(&inst, &start).unwrap();
            let (tour, len, steps) = two_opt_descend(&inst, &start).unwrap();
            assert!(len <= start_len + 1e-12);
            if len < start_len {
                strict += 1;
            }
            assert!(is_two_opt_local(&inst, &tour));

            // Idempotent on its own output.
            let (again, len2, steps2) = two_opt_descend(&inst, &tour).unwrap();
            assert_eq!(steps2, 0);
            assert_eq!(again.order(), tour.order());
            assert!((len2 - len).abs() < 1e-12);
            assert!(steps > 0);
        }
        assert_eq!(strict, 20);
    }

    #[test]
    fn crossover_with_identical_parents_preserves_edges() {
        let inst = generate_instance(40, 13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for round in 0..10 {
            let p = Tour::random(40, &mut rng);
            let child = route_crossover(&inst, &p, &p, 0.0, round).unwrap();
            assert_eq!(child.edge_set(), p.edge_set());
        }
    }

    #[test]
    fn crossover_prefers_lead_parent_edges_at_gamma_zero() {
        let inst = generate_instance(30, 19).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for round in 0..50 {
            let p1 = Tour::random(30, &mut rng);
            let p2 = Tour::random(30, &mut rng);
            let child = route_crossover(&inst, &p1, &p2, 0.0, 1000 + round).unwrap();

            // Replay the walk: whenever parent 1 offered an unvisited
            // neighbor, the child must have taken one of them.
            let nb1 = neighbor_table(&p1);
            let mut visited = vec![false; 30];
            visited[child.order()[0] as usize] = true;
            for w in child.order().windows(2) {
                let (cur, next) = (w[0], w[1]);
                let [a, b] = nb1[cur as usize];
                let open1: Vec<u32> = [a, b]
                    .into_iter()
                    .filter(|&c| !visited[c as usize])
                    .collect();
                if !open1.is_empty() {
                    assert!(open1.contains(&next), "round {round}: skipped a lead edge");
                }
                visited[next as usize] = true;
            }
        }
    }

    #[test]
    fn crossover_always_yields_permutations() {
        let inst = generate_instance(12, 29).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for round in 0..10_000u64 {
            let p1 = Tour::random(12, &mut rng);
            let p2 = Tour::random(12, &mut rng);
            let gamma = 0.5 * rng.random::<f64>();
            let child = route_crossover(&inst, &p1, &p2, gamma, round).unwrap();
            assert!(Tour::new(child.order().to_vec()).is_ok());
        }
    }

    #[test]
    fn crossover_rejects_bad_gamma() {
        let inst = square();
        let t = Tour::identity(4);
        assert!(matches!(
            route_crossover(&inst, &t, &t, 0.6, 1),
            Err(Error::ParamOutOfRange { .. })
        ));
        assert!(matches!(
            route_crossover(&inst, &t, &t, -0.1, 1),
            Err(Error::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn pipeline_summary_is_consistent_and_deterministic() {
        let inst = generate_instance(60, 101).unwrap();
        let run = run_tsp_pipeline(&inst, 40, 0.05, 10, 7).unwrap();
        let again = run_tsp_pipeline(&inst, 40, 0.05, 10, 7).unwrap();
        assert_eq!(run, again);

        let s = &run.summary;
        assert_eq!(s.m, 40);
        assert_eq!(s.gamma, 0.05);
        assert!(s.parent_std > 0.0);
        assert!((0.0..=1.0).contains(&s.l_norm));

        assert_eq!(run.parent_running_min.len(), 40);
        assert_eq!(run.offspring_running_min.len(), 40);
        assert!(run
            .parent_running_min
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-15));
        assert_eq!(*run.parent_running_min.last().unwrap(), s.parent_min);
        assert_eq!(*run.offspring_running_min.last().unwrap(), s.offspring_min);

        // Raw best lengths agree with the normalized minima.
        assert!((run.normalizer.normalize(run.best_parent_length) - s.parent_min).abs() < 1e-12);
        assert!(
            (run.normalizer.normalize(run.best_offspring_length) - s.offspring_min).abs() < 1e-12
        );
        assert!(is_two_opt_local(&inst, &run.best_offspring));

        assert!(matches!(
            run_tsp_pipeline(&inst, 5, 0.05, 10, 7),
            Err(Error::TooFew { .. })
        ));
        assert!(matches!(
            run_tsp_pipeline(&inst, 40, 0.05, 1, 7),
            Err(Error::TooFew { .. })
        ));
    }

    #[test]
    fn pipeline_offspring_concentrate_below_parents() {
        let inst = generate_instance(120, 211).unwrap();
        let run = run_tsp_pipeline(&inst, 100, 0.05, 10, 9).unwrap();
        let s = &run.summary;
        assert!(
            s.offspring_mean < s.parent_mean,
            "offspring mean {} vs parent mean {}",
            s.offspring_mean,
            s.parent_mean
        );
        assert!(s.offspring_std < s.parent_std);
        assert!(s.offspring_min <= s.parent_min);
        assert!(run.best_offspring_length <= run.best_parent_length);
    }

    #[test]
    fn parent_minima_track_the_gaussian_prediction() {
        // Standardized by the parent ensemble's own mean and spread, the
        // running minimum of the descended costs behaves like the minimum
        // of m unit Gaussians.
        let inst = generate_instance(150, 307).unwrap();
        let run = run_tsp_pipeline(&inst, 200, 0.05, 10, 11).unwrap();
        let s = &run.summary;
        let z = (s.parent_min - s.parent_mean) / s.parent_std;
        let pred = predict_min_of_m(0.0, 1.0, 200, PredictionOrder::FirstOrder).unwrap();
        assert!(
            (z - pred.mean).abs() < 4.0 * pred.std,
            "standardized parent min {z} vs predicted {} +- {}",
            pred.mean,
            pred.std
        );
    }

    #[test]
    fn instance_io_round_trips() {
        let dir = std::env::temp_dir().join(format!("tsp-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("instance.txt");

        let inst = generate_instance(37, 404).unwrap();
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(inst, back);

        let commented = "# a header\n0.25 0.75\n\n# another\n1.0 0.0\n0.0 0.0\n0.5 0.5\n";
        std::fs::write(&path, commented).unwrap();
        let parsed = read_instance(&path).unwrap();
        assert_eq!(parsed.n_cities(), 4);
        assert_eq!(parsed.coords()[0], (0.25, 0.75));

        std::fs::write(&path, "0.1 0.2 0.3\n").unwrap();
        assert!(matches!(read_instance(&path), Err(Error::BadFormat { .. })));
        std::fs::write(&path, "0.1 oops\n").unwrap();
        assert!(matches!(read_instance(&path), Err(Error::BadFormat { .. })));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
