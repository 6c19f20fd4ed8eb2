//! Random K-degree pseudo-Boolean cost landscapes over {-1,+1}^N.
//!
//! A landscape is a degree-K multilinear polynomial
//!     L(x) = sum over degrees a and index tuples i_1 < ... < i_a of
//!            c_{i_1..i_a} x_{i_1} ... x_{i_a}
//! with coefficients drawn i.i.d. standard normal and then rescaled so the
//! squared coefficient norm is exactly 1. Under the uniform measure on
//! {-1,+1}^N the monomials are orthonormal, so that rescaling pins the cost
//! variance to 1 and the mean to 0.
//!
//! Per-degree coefficient tables are dense arrays in colexicographic tuple
//! order; the evaluation kernels walk them strictly sequentially.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combin::{coeff_counts, for_each_colex, BinomTable};
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum_of_squares, Scalar};

/// Default cap on the total number of coefficients a landscape may hold.
pub const DEFAULT_COEFF_CAP: u64 = 1 << 31;

/// Default number of Monte Carlo trials for the isotropy diagnostic.
pub const DEFAULT_ISOTROPY_TRIALS: usize = 64;

const DUMP_MAGIC: &[u8; 8] = b"CQPCOST1";
const DUMP_VERSION: u32 = 1;

/// A point of {-1,+1}^N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitState {
    bits: Vec<i8>,
}

impl BitState {
    /// Entries must be exactly +1 or -1.
    pub fn new(bits: Vec<i8>) -> Result<Self> {
        for (i, &b) in bits.iter().enumerate() {
            if b != 1 && b != -1 {
                return Err(Error::EntryOutOfRange {
                    index: i,
                    value: b as f64,
                });
            }
        }
        Ok(Self { bits })
    }

    /// All-(+1) state.
    pub fn ones(n: usize) -> Self {
        Self { bits: vec![1; n] }
    }

    /// Uniform draw from {-1,+1}^N.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let bits = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[i8] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> i8 {
        self.bits[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = -self.bits[i];
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut c = self.clone();
        c.flip(i);
        c
    }

    /// The state as scalar values, for the evaluation kernels.
    pub fn values<F: Scalar>(&self) -> Vec<F> {
        self.bits
            .iter()
            .map(|&b| if b > 0 { F::one() } else { -F::one() })
            .collect()
    }

    /// Number of coordinates where the two states differ.
    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }
}

/// `count` independent uniform states on `n_dims` spins. State i uses
/// stream i of the seed, so the set is deterministic, independent of
/// thread count, and any prefix of it is stable under a larger count.
pub fn uniform_states(n_dims: usize, count: usize, seed: u64) -> Result<Vec<BitState>> {
    if n_dims < 1 {
        return Err(Error::ParamOutOfRange {
            name: "n_dims",
            value: n_dims as f64,
            requirement: ">= 1",
        });
    }
    Ok((0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            BitState::random(n_dims, &mut rng)
        })
        .collect())
}

/// A point of the solid hypercube [-1,+1]^N: coordinate-wise means of
/// bit states, e.g. pair-crossover means (1-2*gamma on disagreements).
#[derive(Debug, Clone, PartialEq)]
pub struct MeanState<F> {
    entries: Vec<F>,
}

impl<F: Scalar> MeanState<F> {
    /// Entries must lie in [-1, 1]; a 1e-9 slack absorbs simplex-weight
    /// rounding, and such entries are clamped.
    pub fn new(entries: Vec<F>) -> Result<Self> {
        let slack = F::of(1e-9);
        let mut entries = entries;
        for (i, v) in entries.iter_mut().enumerate() {
            if !v.is_finite() || v.abs() > F::one() + slack {
                return Err(Error::EntryOutOfRange {
                    index: i,
                    value: v.to_f64(),
                });
            }
            *v = v.min(F::one()).max(-F::one());
        }
        Ok(Self { entries })
    }

    pub fn from_bit_state(x: &BitState) -> Self {
        Self { entries: x.values() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }
}

/// Empirical moments of the cost under the uniform state measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostMoments<F> {
    pub mean: F,
    pub variance: F,
    pub skewness: F,
    pub excess_kurtosis: F,
    pub samples: usize,
}

/// Raw maxima of the isotropy sums; large values flag a landscape whose
/// coefficient mass is concentrated enough to break mean-field predictions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropyReport<F> {
    pub sum1_max: F,
    pub sum2_max: F,
    pub trials: usize,
    pub subset1_size: usize,
    pub subset2_size: usize,
}

/// A normalized random cost landscape.
#[derive(Debug, Clone)]
pub struct PolyCost<F> {
    n_dims: usize,
    degree: usize,
    /// coeffs[a-1]: degree-a coefficients in colex order.
    coeffs: Vec<Vec<F>>,
    total_sq_norm: F,
    seed: Option<u64>,
    binom: BinomTable,
}

impl<F: Scalar> PolyCost<F> {
    /// Draws i.i.d. standard-normal coefficients for every monomial of
    /// degree 1..=degree and rescales them to unit squared norm.
    ///
    /// Deterministic in `seed`: one ChaCha8 stream filled degree-major in
    /// colex order.
    pub fn generate(n_dims: usize, degree: usize, seed: u64) -> Result<Self> {
        Self::generate_with_cap(n_dims, degree, seed, DEFAULT_COEFF_CAP)
    }

    /// As [`generate`](Self::generate) with an explicit coefficient cap.
    pub fn generate_with_cap(n_dims: usize, degree: usize, seed: u64, cap: u64) -> Result<Self> {
        let per_degree = checked_counts(n_dims, degree, cap)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<Vec<F>> = per_degree
            .iter()
            .map(|&c| (0..c).map(|_| F::standard_normal(&mut rng)).collect())
            .collect();
        let mut cost = Self::assemble(n_dims, degree, coeffs, Some(seed))?;
        cost.normalize()?;
        Ok(cost)
    }

    /// Builds a landscape from explicit per-degree coefficient tables
    /// (colex order) and rescales them to unit squared norm.
    pub fn from_coeffs(n_dims: usize, degree: usize, coeffs: Vec<Vec<F>>) -> Result<Self> {
        let per_degree = checked_counts(n_dims, degree, DEFAULT_COEFF_CAP)?;
        if coeffs.len() != degree {
            return Err(Error::DimensionMismatch {
                expected: degree,
                actual: coeffs.len(),
            });
        }
        for (a, table) in coeffs.iter().enumerate() {
            if table.len() as u64 != per_degree[a] {
                return Err(Error::DimensionMismatch {
                    expected: per_degree[a] as usize,
                    actual: table.len(),
                });
            }
            if table.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    context: "coefficient table",
                });
            }
        }
        let mut cost = Self::assemble(n_dims, degree, coeffs, None)?;
        cost.normalize()?;
        Ok(cost)
    }

    fn assemble(
        n_dims: usize,
        degree: usize,
        coeffs: Vec<Vec<F>>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let binom = BinomTable::new(n_dims, degree);
        let mut cost = Self {
            n_dims,
            degree,
            coeffs,
            total_sq_norm: F::zero(),
            seed,
            binom,
        };
        cost.total_sq_norm = cost.sq_norm();
        Ok(cost)
    }

    fn sq_norm(&self) -> F {
        self.coeffs
            .iter()
            .map(|t| pairwise_sum_of_squares(t))
            .fold(F::zero(), |s, v| s + v)
    }

    fn normalize(&mut self) -> Result<()> {
        let s = self.sq_norm();
        if s == F::zero() {
            return Err(Error::ZeroCoefficients);
        }
        if !s.is_finite() {
            return Err(Error::NonFinite {
                context: "coefficient norm",
            });
        }
        let scale = s.sqrt().recip();
        for table in &mut self.coeffs {
            for v in table.iter_mut() {
                *v = *v * scale;
            }
        }
        self.total_sq_norm = self.sq_norm();
        Ok(())
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Squared coefficient norm; 1 within 1e-12 (f64) after construction.
    pub fn total_sq_norm(&self) -> F {
        self.total_sq_norm
    }

    /// Seed this landscape was generated from, if it was generated.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Total number of coefficients.
    pub fn coeff_count(&self) -> usize {
        self.coeffs.iter().map(Vec::len).sum()
    }

    /// The degree-a coefficient table in colex order.
    pub fn coeffs_of_degree(&self, deg: usize) -> &[F] {
        &self.coeffs[deg - 1]
    }

    /// One coefficient, addressed by its strictly increasing index tuple.
    pub fn coeff(&self, tuple: &[usize]) -> Result<F> {
        let deg = tuple.len();
        if deg == 0 || deg > self.degree {
            return Err(Error::DegreeOutOfRange {
                n_dims: self.n_dims,
                degree: deg,
            });
        }
        for w in tuple.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::BadFormat {
                    detail: format!("index tuple {tuple:?} is not strictly increasing"),
                });
            }
        }
        if *tuple.last().unwrap() >= self.n_dims {
            return Err(Error::IndexOutOfRange {
                index: *tuple.last().unwrap(),
                n_dims: self.n_dims,
            });
        }
        Ok(self.coeffs[deg - 1][self.binom.colex_rank(tuple)])
    }

    /// Flat monomial-id offset of each degree block (len = degree + 1).
    pub(crate) fn flat_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.degree + 1);
        off.push(0);
        for t in &self.coeffs {
            off.push(off.last().unwrap() + t.len());
        }
        off
    }

    fn check_dims(&self, len: usize) -> Result<()> {
        if len != self.n_dims {
            return Err(Error::DimensionMismatch {
                expected: self.n_dims,
                actual: len,
            });
        }
        Ok(())
    }

    /// L(x).
    pub fn evaluate(&self, x: &BitState) -> Result<F> {
        self.check_dims(x.len())?;
        Ok(self.evaluate_values(&x.values()))
    }

    /// L extended multilinearly to the solid hypercube; at a MeanState this
    /// is the mean of L(y) over offspring y drawn coordinate-wise from m.
    pub fn evaluate_mean(&self, m: &MeanState<F>) -> Result<F> {
        self.check_dims(m.len())?;
        Ok(self.evaluate_values(m.entries()))
    }

    pub(crate) fn evaluate_values(&self, vals: &[F]) -> F {
        let mut total = F::zero();
        for (a, table) in self.coeffs.iter().enumerate() {
            total += degree_sum(table, vals, a + 1);
        }
        total
    }

    /// Interaction field b: b_i is the sum of the values of all monomials
    /// containing i, so L(flip_i(x)) - L(x) = -2 b_i.
    pub fn interaction_field(&self, x: &BitState) -> Result<Vec<F>> {
        self.check_dims(x.len())?;
        let vals = x.values::<F>();
        let mut b = vec![F::zero(); self.n_dims];
        for (a, table) in self.coeffs.iter().enumerate() {
            accumulate_field(table, &vals, a + 1, &mut b);
        }
        Ok(b)
    }

    /// One entry of the interaction field, in O(#monomials containing i).
    pub fn field_entry(&self, x: &BitState, i: usize) -> Result<F> {
        self.check_dims(x.len())?;
        if i >= self.n_dims {
            return Err(Error::IndexOutOfRange {
                index: i,
                n_dims: self.n_dims,
            });
        }
        let vals = x.values::<F>();
        Ok(self.field_entry_values(&vals, i))
    }

    pub(crate) fn field_entry_values(&self, vals: &[F], i: usize) -> F {
        let n = self.n_dims;
        let mut total = self.coeffs[0][i] * vals[i];
        for a in 2..=self.degree {
            let table = &self.coeffs[a - 1];
            let mut sum = F::zero();
            let mut full = vec![0usize; a];
            // (a-1)-tuples over the other N-1 indices; reduced index r maps
            // to r (r < i) or r + 1 (r >= i), which preserves order, so the
            // full tuple is the mapped tuple with i spliced in place.
            for_each_colex(n - 1, a - 1, |reduced| {
                let mut prod = vals[i];
                let mut k = 0;
                let mut placed = false;
                for &r in reduced {
                    let orig = if r < i { r } else { r + 1 };
                    prod = prod * vals[orig];
                    if !placed && orig > i {
                        full[k] = i;
                        k += 1;
                        placed = true;
                    }
                    full[k] = orig;
                    k += 1;
                }
                if !placed {
                    full[k] = i;
                }
                let rank = self.binom.colex_rank(&full);
                sum += table[rank] * prod;
            });
            total += sum;
        }
        total
    }

    /// Cost change of flipping coordinate i: -2 b_i.
    pub fn flip_delta(&self, x: &BitState, i: usize) -> Result<F> {
        Ok(-F::of(2.0) * self.field_entry(x, i)?)
    }

    /// |l(m)| = sqrt(sum over monomials of c^2 * prod of m_i^2): the length
    /// of the mean cost vector at mean state m. In [0, 1] because the
    /// coefficient norm is 1.
    pub fn mean_vector_norm(&self, m: &MeanState<F>) -> Result<F> {
        self.check_dims(m.len())?;
        let sq: Vec<F> = m.entries().iter().map(|&v| v * v).collect();
        let mut total = F::zero();
        for (a, table) in self.coeffs.iter().enumerate() {
            total += degree_sq_sum(table, &sq, a + 1);
        }
        Ok(total.max(F::zero()).sqrt())
    }

    /// Empirical mean/variance/skewness/excess kurtosis of L over `samples`
    /// uniform states. Deterministic in `seed` and independent of the rayon
    /// thread count (one RNG stream per 64-state chunk).
    pub fn cost_moments(&self, samples: usize, seed: u64) -> Result<CostMoments<F>> {
        if samples < 2 {
            return Err(Error::TooFew {
                what: "samples",
                needed: 2,
                got: samples,
            });
        }
        const CHUNK: usize = 64;
        let chunks = samples.div_ceil(CHUNK);
        let values: Vec<F> = (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let take = CHUNK.min(samples - c * CHUNK);
                let mut out = Vec::with_capacity(take);
                for _ in 0..take {
                    let x = BitState::random(self.n_dims, &mut rng);
                    out.push(self.evaluate_values(&x.values()));
                }
                out
            })
            .collect();

        let n = F::of_usize(samples);
        let mean = values.iter().copied().sum::<F>() / n;
        let mut m2 = F::zero();
        let mut m3 = F::zero();
        let mut m4 = F::zero();
        for &v in &values {
            let d = v - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        m2 = m2 / n;
        m3 = m3 / n;
        m4 = m4 / n;
        let variance = m2 * n / (n - F::one());
        let skewness = m3 / m2.powf(F::of(1.5));
        let excess_kurtosis = m4 / (m2 * m2) - F::of(3.0);
        Ok(CostMoments {
            mean,
            variance,
            skewness,
            excess_kurtosis,
            samples,
        })
    }

    /// Monte Carlo isotropy check around mean state m.
    ///
    /// Per trial, a state w is drawn coordinate-wise from m and the deviation
    /// dl_c = c * (prod_{i in c} w_i - prod_{i in c} m_i) of each cost-vector
    /// component is considered. Reports the maxima over trials of
    /// |sum over a random component subset of size ceil(N^(K-1)) (capped at
    /// n)| and |sum over random ordered component pairs, ceil(N^(2K-1)) of
    /// them (capped at n(n-1))|. Both stay O(1) resp. o(1) on isotropic
    /// landscapes; concentrated coefficient mass drives them to order 1.
    /// Cost grows as N^(2K-1) per trial, so keep K small here.
    pub fn isotropy_diagnostic(
        &self,
        m: &MeanState<F>,
        trials: usize,
        seed: u64,
    ) -> Result<IsotropyReport<F>> {
        self.check_dims(m.len())?;
        if trials == 0 {
            return Err(Error::TooFew {
                what: "trials",
                needed: 1,
                got: trials,
            });
        }
        let n_total = self.coeff_count() as u64;
        let n_f = self.n_dims as f64;
        let s1 = ((n_f.powi((self.degree as i32) - 1)).ceil() as u128).min(n_total as u128) as u64;
        let s2_raw = n_f.powi(2 * (self.degree as i32) - 1).ceil();
        let pair_cap = (n_total as u128) * (n_total as u128 - 1);
        let s2 = if s2_raw >= pair_cap as f64 {
            pair_cap.min(u64::MAX as u128) as u64
        } else {
            s2_raw as u64
        };
        let offsets = self.flat_offsets();

        let per_trial: Vec<(F, F)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t as u64);
                // w ~ coordinate-wise from m
                let w: Vec<F> = m
                    .entries()
                    .iter()
                    .map(|&mi| {
                        let p = (F::one() + mi) * F::of(0.5);
                        if F::unit_uniform(&mut rng) < p {
                            F::one()
                        } else {
                            -F::one()
                        }
                    })
                    .collect();
                let mut tuple = vec![0usize; self.degree];
                let dl = |id: u64, tup: &mut Vec<usize>| -> F {
                    let a = match offsets.iter().rposition(|&o| (o as u64) <= id) {
                        Some(block) => block + 1,
                        None => 1,
                    };
                    let rank = id - offsets[a - 1] as u64;
                    tup.resize(a, 0);
                    self.binom.colex_unrank(rank, a, &mut tup[..a]);
                    let mut pw = F::one();
                    let mut pm = F::one();
                    for &i in tup.iter().take(a) {
                        pw = pw * w[i];
                        pm = pm * m.entries()[i];
                    }
                    self.coeffs[a - 1][rank as usize] * (pw - pm)
                };
                let mut sum1 = F::zero();
                for _ in 0..s1 {
                    let id = rng.random_range(0..n_total);
                    sum1 += dl(id, &mut tuple);
                }
                let mut sum2 = F::zero();
                for _ in 0..s2 {
                    let id1 = rng.random_range(0..n_total);
                    let mut id2 = rng.random_range(0..n_total);
                    while id2 == id1 {
                        id2 = rng.random_range(0..n_total);
                    }
                    sum2 += dl(id1, &mut tuple) * dl(id2, &mut tuple);
                }
                (sum1.abs(), sum2.abs())
            })
            .collect();

        let mut r = IsotropyReport {
            sum1_max: F::zero(),
            sum2_max: F::zero(),
            trials,
            subset1_size: s1 as usize,
            subset2_size: s2 as usize,
        };
        for (s1v, s2v) in per_trial {
            r.sum1_max = r.sum1_max.max(s1v);
            r.sum2_max = r.sum2_max.max(s2v);
        }
        Ok(r)
    }

    /// Writes the landscape: 8-byte magic, then version/N/K/flags (u32 LE),
    /// seed (u64 LE; flags bit 0 says whether it is meaningful), then the
    /// per-degree coefficient tables as little-endian f64 in colex order.
    pub fn dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(DUMP_MAGIC)?;
        w.write_all(&DUMP_VERSION.to_le_bytes())?;
        w.write_all(&(self.n_dims as u32).to_le_bytes())?;
        w.write_all(&(self.degree as u32).to_le_bytes())?;
        let flags: u32 = if self.seed.is_some() { 1 } else { 0 };
        w.write_all(&flags.to_le_bytes())?;
        w.write_all(&self.seed.unwrap_or(0).to_le_bytes())?;
        for table in &self.coeffs {
            for &v in table {
                w.write_all(&v.to_f64().to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads a landscape written by [`dump`](Self::dump). Bit-exact at f64.
    /// The stored tables must already be normalized (dump output always is);
    /// no rescaling happens here.
    pub fn load<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(Error::BadFormat {
                detail: "bad magic; not a landscape dump".into(),
            });
        }
        let version = read_u32(&mut r)?;
        if version != DUMP_VERSION {
            return Err(Error::BadFormat {
                detail: format!("unsupported dump version {version}"),
            });
        }
        let n_dims = read_u32(&mut r)? as usize;
        let degree = read_u32(&mut r)? as usize;
        let flags = read_u32(&mut r)?;
        let seed_raw = read_u64(&mut r)?;
        let seed = if flags & 1 == 1 { Some(seed_raw) } else { None };
        let per_degree = checked_counts(n_dims, degree, DEFAULT_COEFF_CAP)?;
        let mut coeffs = Vec::with_capacity(degree);
        for &c in &per_degree {
            let mut table = Vec::with_capacity(c as usize);
            let mut buf = [0u8; 8];
            for _ in 0..c {
                r.read_exact(&mut buf)?;
                table.push(F::of(f64::from_le_bytes(buf)));
            }
            coeffs.push(table);
        }
        let cost = Self::assemble(n_dims, degree, coeffs, seed)?;
        let tol = F::of(1e-9).max(F::epsilon() * F::of(64.0));
        if (cost.total_sq_norm - F::one()).abs() > tol {
            return Err(Error::BadFormat {
                detail: format!(
                    "stored coefficients are not normalized (squared norm {})",
                    cost.total_sq_norm
                ),
            });
        }
        Ok(cost)
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn checked_counts(n_dims: usize, degree: usize, cap: u64) -> Result<Vec<u64>> {
    if degree < 1 || degree > n_dims {
        return Err(Error::DegreeOutOfRange { n_dims, degree });
    }
    let (per_degree, total) = coeff_counts(n_dims, degree).ok_or(Error::CoeffTableTooLarge {
        required: u128::MAX,
        required_bytes: u128::MAX,
        cap,
    })?;
    if total > cap as u128 {
        return Err(Error::CoeffTableTooLarge {
            required: total,
            required_bytes: total * std::mem::size_of::<f64>() as u128,
            cap,
        });
    }
    Ok(per_degree.into_iter().map(|c| c as u64).collect())
}

#[inline]
fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |s, (&x, &y)| s + x * y)
}

/// Sum of c * prod vals over all degree-a tuples, walking coefficients in
/// colex order (outer recursion over the largest index, innermost dot over
/// the contiguous prefix).
fn degree_sum<F: Scalar>(coeffs: &[F], vals: &[F], degree: usize) -> F {
    fn rec<F: Scalar>(
        coeffs: &[F],
        idx: &mut usize,
        vals: &[F],
        depth: usize,
        top_excl: usize,
        partial: F,
    ) -> F {
        if depth == 1 {
            let s = dot(&coeffs[*idx..*idx + top_excl], &vals[..top_excl]);
            *idx += top_excl;
            return s * partial;
        }
        let mut acc = F::zero();
        for top in (depth - 1)..top_excl {
            acc += rec(coeffs, idx, vals, depth - 1, top, partial * vals[top]);
        }
        acc
    }
    let mut idx = 0usize;
    let acc = rec(coeffs, &mut idx, vals, degree, vals.len(), F::one());
    debug_assert_eq!(idx, coeffs.len());
    acc
}

/// Sum of c^2 * prod sq_vals over all degree-a tuples (sq_vals = m_i^2).
fn degree_sq_sum<F: Scalar>(coeffs: &[F], sq_vals: &[F], degree: usize) -> F {
    fn rec<F: Scalar>(
        coeffs: &[F],
        idx: &mut usize,
        sq: &[F],
        depth: usize,
        top_excl: usize,
        partial: F,
    ) -> F {
        if depth == 1 {
            let mut s = F::zero();
            for (c, v) in coeffs[*idx..*idx + top_excl].iter().zip(&sq[..top_excl]) {
                s += *c * *c * *v;
            }
            *idx += top_excl;
            return s * partial;
        }
        let mut acc = F::zero();
        for top in (depth - 1)..top_excl {
            acc += rec(coeffs, idx, sq, depth - 1, top, partial * sq[top]);
        }
        acc
    }
    let mut idx = 0usize;
    let acc = rec(coeffs, &mut idx, sq_vals, degree, sq_vals.len(), F::one());
    debug_assert_eq!(idx, coeffs.len());
    acc
}

/// Adds every monomial's value to b_j for each member j of the monomial.
fn accumulate_field<F: Scalar>(coeffs: &[F], vals: &[F], degree: usize, b: &mut [F]) {
    fn rec<F: Scalar>(
        coeffs: &[F],
        idx: &mut usize,
        vals: &[F],
        depth: usize,
        top_excl: usize,
        partial: F,
        stack: &mut Vec<usize>,
        b: &mut [F],
    ) {
        if depth == 1 {
            for i in 0..top_excl {
                let v = coeffs[*idx + i] * vals[i] * partial;
                b[i] += v;
                for &j in stack.iter() {
                    b[j] += v;
                }
            }
            *idx += top_excl;
            return;
        }
        for top in (depth - 1)..top_excl {
            stack.push(top);
            rec(coeffs, idx, vals, depth - 1, top, partial * vals[top], stack, b);
            stack.pop();
        }
    }
    let mut idx = 0usize;
    let mut stack = Vec::with_capacity(degree);
    rec(coeffs, &mut idx, vals, degree, vals.len(), F::one(), &mut stack, b);
    debug_assert_eq!(idx, coeffs.len());
}

/// Writes every monomial's value (c * prod vals) into `out` in flat-id order.
pub(crate) fn fill_monomial_values<F: Scalar>(cost: &PolyCost<F>, vals: &[F], out: &mut Vec<F>) {
    out.clear();
    out.reserve(cost.coeff_count());
    fn rec<F: Scalar>(
        coeffs: &[F],
        idx: &mut usize,
        vals: &[F],
        depth: usize,
        top_excl: usize,
        partial: F,
        out: &mut Vec<F>,
    ) {
        if depth == 1 {
            for i in 0..top_excl {
                out.push(coeffs[*idx + i] * vals[i] * partial);
            }
            *idx += top_excl;
            return;
        }
        for top in (depth - 1)..top_excl {
            rec(coeffs, idx, vals, depth - 1, top, partial * vals[top], out);
        }
    }
    for a in 1..=cost.degree() {
        let table = cost.coeffs_of_degree(a);
        let mut idx = 0usize;
        rec(table, &mut idx, vals, a, vals.len(), F::one(), out);
        debug_assert_eq!(idx, table.len());
    }
}
