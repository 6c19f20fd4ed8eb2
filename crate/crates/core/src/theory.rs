//! Closed-form predictions: extreme-value statistics of the minimum of M
//! i.i.d. Gaussian samples, the global-minimum scale of a random landscape,
//! the expected local-minimum count, the effective interaction degree, the
//! offspring-minimum forecast as a function of the mean-vector norm, the
//! large-N crossover-norm limit, the optimal crossover bias, and Boltzmann
//! selection weights.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cost::{BitState, PolyCost};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Order of the extreme-value expansion used for the predicted mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionOrder {
    /// mean = mu - sigma * sqrt(2 ln M)
    Leading,
    /// mean = mu - sigma * sqrt(2 ln M - ln(4 pi ln M))
    FirstOrder,
}

/// Predicted mean and spread of the minimum of M i.i.d. Gaussian samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinOfMPrediction<F> {
    pub mean: F,
    pub std: F,
    pub order: PredictionOrder,
}

/// How the effective interaction degree was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMethod {
    /// For independent same-scale coefficients the effective degree equals
    /// the polynomial degree.
    IidClosedForm,
    /// Estimated from sampled interaction-field correlations.
    McCorrelation,
}

/// Effective interaction degree entering the local-minimum count formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDegree<F> {
    pub k_hat: F,
    pub method: DegreeMethod,
}

/// Default bracket tolerance for [`optimal_gamma`].
pub const DEFAULT_GAMMA_TOLERANCE: f64 = 1e-6;

fn check_sigma<F: Scalar>(sigma: F) -> Result<()> {
    if !(sigma > F::zero()) {
        return Err(Error::ParamOutOfRange {
            name: "sigma",
            value: sigma.to_f64(),
            requirement: "> 0",
        });
    }
    Ok(())
}

/// [`predict_min_of_m`] parameterized directly by ln M, for sample counts
/// too large to represent (e.g. 2^N states).
pub fn predict_min_of_m_ln<F: Scalar>(
    mu: F,
    sigma: F,
    ln_m: F,
    order: PredictionOrder,
) -> Result<MinOfMPrediction<F>> {
    check_sigma(sigma)?;
    let min_ln = F::of(std::f64::consts::LN_2);
    if !(ln_m >= min_ln) {
        return Err(Error::ParamOutOfRange {
            name: "ln_m",
            value: ln_m.to_f64(),
            requirement: ">= ln 2 (at least two samples)",
        });
    }
    let two = F::of(2.0);
    let shift = match order {
        PredictionOrder::Leading => (two * ln_m).sqrt(),
        PredictionOrder::FirstOrder => {
            let radicand = two * ln_m - (F::of(4.0 * std::f64::consts::PI) * ln_m).ln();
            if !(radicand > F::zero()) {
                return Err(Error::ParamOutOfRange {
                    name: "ln_m",
                    value: ln_m.to_f64(),
                    requirement: "2 ln M > ln(4 pi ln M) for the first-order mean",
                });
            }
            radicand.sqrt()
        }
    };
    let std = sigma * (F::of(std::f64::consts::PI) / ln_m).powf(F::of(0.25));
    Ok(MinOfMPrediction {
        mean: mu - sigma * shift,
        std,
        order,
    })
}

/// Predicted mean and spread of the minimum of `m` i.i.d. draws from
/// N(mu, sigma^2).
pub fn predict_min_of_m<F: Scalar>(
    mu: F,
    sigma: F,
    m: u64,
    order: PredictionOrder,
) -> Result<MinOfMPrediction<F>> {
    if m < 2 {
        return Err(Error::TooFew {
            what: "samples",
            needed: 2,
            got: m as usize,
        });
    }
    predict_min_of_m_ln(mu, sigma, F::of((m as f64).ln()), order)
}

/// Predicted global minimum of a normalized random landscape on N spins,
/// treating the 2^N states as that many unit Gaussians (ln M = N ln 2).
pub fn predict_global_min<F: Scalar>(n_dims: usize, order: PredictionOrder) -> Result<F> {
    if n_dims < 2 {
        return Err(Error::ParamOutOfRange {
            name: "n_dims",
            value: n_dims as f64,
            requirement: ">= 2",
        });
    }
    let ln_m = F::of_usize(n_dims) * F::of(std::f64::consts::LN_2);
    Ok(predict_min_of_m_ln(F::zero(), F::one(), ln_m, order)?.mean)
}

/// Expected number of local minima of an N-spin landscape with effective
/// degree `k_hat`: prefactor * base^N with base = 2 - s, s = (1 +
/// 2(k_hat-1)/pi)^(-1/2); the prefactor s is applied when requested.
pub fn predict_local_min_count<F: Scalar>(
    n_dims: usize,
    k_hat: F,
    with_prefactor: bool,
) -> Result<F> {
    if !(k_hat >= F::one()) {
        return Err(Error::ParamOutOfRange {
            name: "k_hat",
            value: k_hat.to_f64(),
            requirement: ">= 1",
        });
    }
    let two = F::of(2.0);
    let s = (F::one() + two * (k_hat - F::one()) / F::of(std::f64::consts::PI))
        .sqrt()
        .recip();
    let base = two - s;
    // base^N through the exponential so huge N cannot lose precision to
    // repeated squaring of a near-1 base
    let count = (F::of_usize(n_dims) * base.ln()).exp();
    Ok(if with_prefactor { s * count } else { count })
}

/// Effective interaction degree of a landscape.
///
/// `IidClosedForm` returns the polynomial degree (exact for independent
/// same-scale coefficients, where neighbouring-field correlations average
/// (K-1)/(N-1)). `McCorrelation` measures it: draws `samples` uniform
/// states, computes their interaction fields (a samples-by-N matrix), takes
/// the mean Pearson correlation r over a sampled set of coordinate pairs
/// (all pairs when there are at most 2000, else 2000 distinct random ones)
/// and returns 1 + (N-1) r, clamped below at 1.
pub fn effective_degree<F: Scalar>(
    cost: &PolyCost<F>,
    method: DegreeMethod,
    samples: u64,
    seed: u64,
) -> Result<EffectiveDegree<F>> {
    match method {
        DegreeMethod::IidClosedForm => Ok(EffectiveDegree {
            k_hat: F::of_usize(cost.degree()),
            method,
        }),
        DegreeMethod::McCorrelation => {
            if samples < 100 {
                return Err(Error::TooFew {
                    what: "samples",
                    needed: 100,
                    got: samples as usize,
                });
            }
            let n = cost.n_dims();
            let fields: Vec<Vec<F>> = (0..samples)
                .into_par_iter()
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(s);
                    let x = BitState::random(n, &mut rng);
                    cost.interaction_field(&x)
                })
                .collect::<Result<_>>()?;

            let total_pairs = n * (n - 1) / 2;
            const PAIR_BUDGET: usize = 2000;
            let mut pairs = Vec::new();
            if total_pairs <= PAIR_BUDGET {
                for i in 0..n {
                    for j in (i + 1)..n {
                        pairs.push((i, j));
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(u64::MAX);
                let mut seen = std::collections::HashSet::new();
                while pairs.len() < PAIR_BUDGET {
                    let i = rand::Rng::random_range(&mut rng, 0..n);
                    let j = rand::Rng::random_range(&mut rng, 0..n);
                    if i != j {
                        let p = (i.min(j), i.max(j));
                        if seen.insert(p) {
                            pairs.push(p);
                        }
                    }
                }
            }

            let count = F::of(samples as f64);
            let mut r_sum = F::zero();
            let mut r_n = 0usize;
            for &(i, j) in &pairs {
                let mut si = F::zero();
                let mut sj = F::zero();
                let mut sii = F::zero();
                let mut sjj = F::zero();
                let mut sij = F::zero();
                for row in &fields {
                    let (bi, bj) = (row[i], row[j]);
                    si += bi;
                    sj += bj;
                    sii += bi * bi;
                    sjj += bj * bj;
                    sij += bi * bj;
                }
                let vi = sii - si * si / count;
                let vj = sjj - sj * sj / count;
                let cov = sij - si * sj / count;
                let denom = (vi * vj).sqrt();
                if denom > F::zero() {
                    r_sum += cov / denom;
                    r_n += 1;
                }
            }
            if r_n == 0 {
                return Err(Error::NonFinite {
                    context: "all sampled field pairs were degenerate",
                });
            }
            let r_bar = r_sum / F::of_usize(r_n);
            let k_hat = (F::one() + F::of_usize(n - 1) * r_bar).max(F::one());
            Ok(EffectiveDegree { k_hat, method })
        }
    }
}

/// Predicted minimum over M offspring whose mean vector has norm `l_norm`,
/// when the parents sit at the typical M-sample minimum -sqrt(2 ln M):
/// -sqrt(2 ln M) * (l + sqrt(1 - l^2)). Minimized at l = 1/sqrt(2), where it
/// reaches -2 sqrt(ln M) — the minimum of M^2 independent samples.
pub fn offspring_minimum_bound<F: Scalar>(m: u64, l_norm: F) -> Result<F> {
    if m < 2 {
        return Err(Error::TooFew {
            what: "samples",
            needed: 2,
            got: m as usize,
        });
    }
    if !(l_norm >= F::zero() && l_norm <= F::one()) {
        return Err(Error::ParamOutOfRange {
            name: "l_norm",
            value: l_norm.to_f64(),
            requirement: "in [0, 1]",
        });
    }
    let ln_m = F::of((m as f64).ln());
    let scale = (F::of(2.0) * ln_m).sqrt();
    Ok(-scale * (l_norm + (F::one() - l_norm * l_norm).sqrt()))
}

/// Large-N limit of the mean-vector norm of a biased two-parent crossover
/// on an i.i.d. landscape: sqrt(sum_a w_a q^a) with per-coordinate factor
/// q = (1-d) + d (1-2 gamma)^2, where d is the parents' bit-disagreement
/// fraction and w_a = C(N, a) / n weights degree a by its coefficient share.
pub fn large_n_crossover_norm<F: Scalar>(
    n_dims: usize,
    degree: usize,
    gamma: F,
    disagreement: F,
) -> Result<F> {
    if degree < 1 || degree > n_dims {
        return Err(Error::DegreeOutOfRange { n_dims, degree });
    }
    if !(gamma >= F::zero() && gamma.to_f64() <= 0.5) {
        return Err(Error::ParamOutOfRange {
            name: "gamma",
            value: gamma.to_f64(),
            requirement: "in [0, 0.5]",
        });
    }
    if !(disagreement >= F::zero() && disagreement <= F::one()) {
        return Err(Error::ParamOutOfRange {
            name: "disagreement",
            value: disagreement.to_f64(),
            requirement: "in [0, 1]",
        });
    }
    let one = F::one();
    let bias = one - F::of(2.0) * gamma;
    let q = (one - disagreement) + disagreement * bias * bias;
    // binomial weights in floating point, built multiplicatively
    let mut weights = Vec::with_capacity(degree);
    let mut c = F::one();
    let mut total = F::zero();
    for a in 1..=degree {
        c = c * F::of_usize(n_dims - a + 1) / F::of_usize(a);
        weights.push(c);
        total += c;
    }
    let mut norm_sq = F::zero();
    let mut q_pow = F::one();
    for w in weights {
        q_pow = q_pow * q;
        norm_sq += w / total * q_pow;
    }
    Ok(norm_sq.sqrt())
}

/// Solves |l(gamma)| = 1/sqrt(2) for the crossover bias by bisection on
/// [0, 0.5], given a non-increasing norm function of gamma. The bracket
/// shrinks until its width is at most `tolerance`.
pub fn optimal_gamma<F: Scalar>(norm_fn: impl Fn(F) -> F, tolerance: F) -> Result<F> {
    if !(tolerance > F::zero()) {
        return Err(Error::ParamOutOfRange {
            name: "tolerance",
            value: tolerance.to_f64(),
            requirement: "> 0",
        });
    }
    let half = F::of(0.5);
    let target = half; // |l|^2 at the optimum
    let h = |g: F| {
        let l = norm_fn(g);
        l * l - target
    };
    // a few ulps of slack so a norm that lands exactly on 1/sqrt(2) at a
    // bracket end is treated as crossing there
    let slack = F::epsilon() * F::of(8.0);
    let h_half = h(half);
    if h_half > slack {
        return Err(Error::NoGammaCrossing {
            norm_at_half: norm_fn(half).to_f64(),
        });
    }
    if h(F::zero()) < -slack {
        return Err(Error::ParamOutOfRange {
            name: "norm_fn(0)",
            value: norm_fn(F::zero()).to_f64(),
            requirement: ">= 1/sqrt(2)",
        });
    }
    let (mut lo, mut hi) = (F::zero(), half);
    while hi - lo > tolerance {
        let mid = (lo + hi) * half;
        let hm = h(mid);
        if hm.abs() <= slack {
            return Ok(mid);
        }
        if hm > F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * half)
}

/// Selection weights f_m proportional to exp(-beta * l_norm * cost_m),
/// normalized to sum 1 (softmax over negated scaled costs, computed with
/// max-subtraction). beta = 0 gives uniform weights; large beta concentrates
/// on the minimum-cost entry.
pub fn boltzmann_weights<F: Scalar>(costs: &[F], beta: F, l_norm: F) -> Result<Vec<F>> {
    if costs.is_empty() {
        return Err(Error::TooFew {
            what: "costs",
            needed: 1,
            got: 0,
        });
    }
    if !(beta >= F::zero()) {
        return Err(Error::ParamOutOfRange {
            name: "beta",
            value: beta.to_f64(),
            requirement: ">= 0",
        });
    }
    if !(l_norm >= F::zero() && l_norm <= F::one()) {
        return Err(Error::ParamOutOfRange {
            name: "l_norm",
            value: l_norm.to_f64(),
            requirement: "in [0, 1]",
        });
    }
    if costs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite {
            context: "cost entries for selection weights",
        });
    }
    let scale = beta * l_norm;
    // exponent of the largest weight (the smallest cost)
    let min_cost = costs
        .iter()
        .copied()
        .fold(F::infinity(), |a, b| if b < a { b } else { a });
    let mut weights: Vec<F> = costs
        .iter()
        .map(|&c| (-scale * (c - min_cost)).exp())
        .collect();
    let total: F = weights.iter().copied().sum();
    for w in &mut weights {
        *w = *w / total;
    }
    Ok(weights)
}

/// Minimum of `m` i.i.d. N(mu, sigma^2) draws, repeated over `replicas`
/// independent streams; the Monte Carlo ground truth the closed forms are
/// judged against. Deterministic in `seed` and thread count.
pub fn sample_gaussian_minima<F: Scalar>(
    mu: F,
    sigma: F,
    m: u64,
    replicas: usize,
    seed: u64,
) -> Result<Vec<F>> {
    check_sigma(sigma)?;
    if m < 1 || replicas < 1 {
        return Err(Error::TooFew {
            what: "samples",
            needed: 1,
            got: m.min(replicas as u64) as usize,
        });
    }
    Ok((0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut min = F::infinity();
            for _ in 0..m {
                let z = F::standard_normal(&mut rng);
                if z < min {
                    min = z;
                }
            }
            mu + sigma * min
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::MeanState;
    use crate::search::exhaustive_global_min;
    use rand::Rng;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn min_prediction_plugin_values() {
        // ln M = 2 makes the leading-order mean exactly -2
        let p = predict_min_of_m_ln::<f64>(0.0, 1.0, 2.0, PredictionOrder::Leading).unwrap();
        assert!((p.mean - (-2.0)).abs() < 1e-12);

        let p = predict_min_of_m::<f64>(0.0, 1.0, 20_000, PredictionOrder::FirstOrder).unwrap();
        assert!((p.mean - (-3.8708)).abs() < 1e-3, "{}", p.mean);
        assert!((p.std - 0.7505).abs() < 1e-3, "{}", p.std);

        // affine equivariance
        let q = predict_min_of_m(5.0, 2.0, 20_000, PredictionOrder::FirstOrder).unwrap();
        assert!((q.mean - (5.0 + 2.0 * p.mean)).abs() < 1e-12);
        assert!((q.std - 2.0 * p.std).abs() < 1e-12);
    }

    #[test]
    fn min_prediction_validates_inputs() {
        assert!(predict_min_of_m(0.0, 1.0, 1, PredictionOrder::Leading).is_err());
        assert!(predict_min_of_m(0.0, 0.0, 10, PredictionOrder::Leading).is_err());
        assert!(predict_min_of_m(0.0, -1.0, 10, PredictionOrder::Leading).is_err());
        // the first-order radicand is negative for very small M
        assert!(predict_min_of_m(0.0, 1.0, 4, PredictionOrder::FirstOrder).is_err());
        assert!(predict_min_of_m(0.0, 1.0, 5, PredictionOrder::FirstOrder).is_ok());
    }

    #[test]
    fn min_prediction_monotone_in_m() {
        let grid = [8u64, 16, 100, 1000, 20_000, 1_000_000];
        for order in [PredictionOrder::Leading, PredictionOrder::FirstOrder] {
            let preds: Vec<_> = grid
                .iter()
                .map(|&m| predict_min_of_m(0.0, 1.0, m, order).unwrap())
                .collect();
            for w in preds.windows(2) {
                assert!(w[1].mean < w[0].mean);
                assert!(w[1].std < w[0].std);
                assert!(w[0].std > 0.0);
            }
        }
        // the refined mean is less negative than the leading one
        for &m in &grid {
            let lead = predict_min_of_m(0.0, 1.0, m, PredictionOrder::Leading).unwrap();
            let fo = predict_min_of_m(0.0, 1.0, m, PredictionOrder::FirstOrder).unwrap();
            assert!(fo.mean > lead.mean);
        }
    }

    /// Monte Carlo ground truth for the minimum of M = 10^4 standard
    /// normals, written independently of `sample_gaussian_minima`: the
    /// replica means straddle the two closed forms, sitting within 5% of the
    /// first-order mean, while the closed-form spread overstates the true
    /// spread by a factor of 2-3.
    #[test]
    fn min_prediction_against_mc_ground_truth() {
        let m = 10_000u64;
        let replicas = 2000;
        let mut rng = ChaCha8Rng::seed_from_u64(0xFEED);
        let mut mins = Vec::with_capacity(replicas);
        for _ in 0..replicas {
            let mut best = f64::INFINITY;
            for _ in 0..m {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                best = best.min(z);
            }
            mins.push(best);
        }
        let mean = mins.iter().sum::<f64>() / replicas as f64;
        let var = mins.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (replicas - 1) as f64;
        let std = var.sqrt();

        let lead = predict_min_of_m(0.0, 1.0, m, PredictionOrder::Leading).unwrap();
        let fo = predict_min_of_m(0.0, 1.0, m, PredictionOrder::FirstOrder).unwrap();
        assert!(
            lead.mean < mean && mean < fo.mean,
            "empirical mean {mean} outside [{}, {}]",
            lead.mean,
            fo.mean
        );
        assert!(
            (mean - fo.mean).abs() / fo.mean.abs() < 0.05,
            "empirical mean {mean} vs refined prediction {}",
            fo.mean
        );
        let ratio = fo.std / std;
        assert!(
            (2.0..3.0).contains(&ratio),
            "closed-form spread {} vs empirical {std} (ratio {ratio})",
            fo.std
        );

        // production sampler agrees with the independent loop above
        let prod = sample_gaussian_minima::<f64>(0.0, 1.0, m, replicas, 0xBEEF).unwrap();
        assert_eq!(prod.len(), replicas);
        let prod_mean = prod.iter().sum::<f64>() / replicas as f64;
        let se = std / (replicas as f64).sqrt();
        assert!(
            (prod_mean - mean).abs() < 5.0 * se,
            "production mean {prod_mean} vs oracle mean {mean}"
        );
        // deterministic
        let again = sample_gaussian_minima::<f64>(0.0, 1.0, m, replicas, 0xBEEF).unwrap();
        assert_eq!(prod, again);
        // affine transform of the same stream
        let shifted = sample_gaussian_minima::<f64>(5.0, 2.0, 100, 50, 1).unwrap();
        let base = sample_gaussian_minima::<f64>(0.0, 1.0, 100, 50, 1).unwrap();
        for (s, b) in shifted.iter().zip(&base) {
            assert!((s - (5.0 + 2.0 * b)).abs() < 1e-12);
        }
    }

    #[test]
    fn global_min_prediction_values() {
        let v = predict_global_min::<f64>(100, PredictionOrder::Leading).unwrap();
        assert!((v - (-11.7741)).abs() < 1e-3, "{v}");
        // sqrt(N) scaling of the leading order
        let v4 = predict_global_min::<f64>(400, PredictionOrder::Leading).unwrap();
        assert!((v4 / v - 2.0).abs() < 1e-12);
        assert!(predict_global_min::<f64>(1, PredictionOrder::Leading).is_err());
        // enormous N stays finite (never materializes 2^N)
        let big = predict_global_min::<f64>(1_000_000, PredictionOrder::FirstOrder).unwrap();
        assert!(big.is_finite() && big < -1000.0);
    }

    /// Exhaustive sweeps as the oracle for the global-minimum forecast.
    #[test]
    fn global_min_prediction_matches_exhaustive_oracle() {
        let n = 12;
        let reps = 20;
        let mut sum = 0.0;
        for s in 0..reps {
            let cost = PolyCost::<f64>::generate(n, 3, 5000 + s).unwrap();
            sum += exhaustive_global_min(&cost).unwrap().1;
        }
        let measured = sum / reps as f64;
        let predicted = predict_global_min::<f64>(n, PredictionOrder::FirstOrder).unwrap();
        assert!(
            (measured - predicted).abs() / predicted.abs() < 0.08,
            "measured {measured} vs predicted {predicted}"
        );
    }

    #[test]
    fn local_min_count_values() {
        // degree-1 landscapes have exactly one minimum
        for n in [1usize, 10, 1000] {
            assert!((predict_local_min_count::<f64>(n, 1.0, false).unwrap() - 1.0).abs() < 1e-12);
            assert!((predict_local_min_count::<f64>(n, 1.0, true).unwrap() - 1.0).abs() < 1e-12);
        }
        // the frozen large-N example: ~6e17 trials, ~1.9 million years at
        // 0.1 ms per trial
        let count = predict_local_min_count::<f64>(1000, 1.14, false).unwrap();
        assert!((count / 6.0e17 - 1.0).abs() < 0.02, "{count:e}");
        let years = count * 1.0e-4 / (365.25 * 86_400.0);
        assert!((1.8e6..2.0e6).contains(&years), "{years:e}");

        assert!(predict_local_min_count::<f64>(10, 0.99, false).is_err());
    }

    #[test]
    fn local_min_count_monotone() {
        // increasing in k_hat (moderate range) and in N
        for n in [3usize, 12, 50] {
            let mut prev = 0.0;
            for k10 in 10..=50 {
                let k = k10 as f64 / 10.0;
                let c = predict_local_min_count::<f64>(n, k, true).unwrap();
                assert!(c > prev - 1e-12, "n {n} k {k}: {c} !> {prev}");
                prev = c;
            }
        }
        for k in [1.5f64, 3.0, 5.0] {
            let mut prev = 0.0;
            for n in 3..40 {
                let c = predict_local_min_count::<f64>(n, k, true).unwrap();
                assert!(c > prev, "k {k} n {n}");
                prev = c;
            }
        }
    }

    /// Exhaustive local-minimum counts as the oracle for the count formula.
    #[test]
    fn local_min_count_matches_exhaustive_oracle() {
        use crate::search::exhaustive_local_min_count;
        let n = 12;
        let reps = 10;
        let mut sum = 0.0;
        for s in 0..reps {
            let cost = PolyCost::<f64>::generate(n, 3, 7000 + s).unwrap();
            sum += exhaustive_local_min_count(&cost).unwrap() as f64;
        }
        let measured = sum / reps as f64;
        let predicted = predict_local_min_count::<f64>(n, 3.0, true).unwrap();
        let ratio = measured / predicted;
        assert!(
            (0.5..2.0).contains(&ratio),
            "measured {measured} vs predicted {predicted}"
        );
    }

    #[test]
    fn effective_degree_methods() {
        let c1 = PolyCost::<f64>::generate(24, 1, 1).unwrap();
        let closed = effective_degree(&c1, DegreeMethod::IidClosedForm, 0, 0).unwrap();
        assert_eq!(closed.k_hat, 1.0);
        let mc = effective_degree(&c1, DegreeMethod::McCorrelation, 4000, 2).unwrap();
        assert!(
            (mc.k_hat - 1.0).abs() < 0.3,
            "degree-1 fields are uncorrelated: {}",
            mc.k_hat
        );

        // closed form returns the polynomial degree regardless of N
        let c4 = PolyCost::<f64>::generate(30, 4, 3).unwrap();
        assert_eq!(
            effective_degree(&c4, DegreeMethod::IidClosedForm, 0, 0).unwrap().k_hat,
            4.0
        );
        let c200 = PolyCost::<f64>::generate(200, 2, 3).unwrap();
        assert_eq!(
            effective_degree(&c200, DegreeMethod::IidClosedForm, 0, 0).unwrap().k_hat,
            2.0
        );

        assert!(effective_degree(&c1, DegreeMethod::McCorrelation, 99, 0).is_err());
    }

    /// The closed form is the oracle for the correlation estimator.
    #[test]
    fn effective_degree_mc_matches_closed_form() {
        let cost = PolyCost::<f64>::generate(64, 3, 11).unwrap();
        let est = effective_degree(&cost, DegreeMethod::McCorrelation, 10_000, 5).unwrap();
        assert!(
            (est.k_hat - 3.0).abs() < 0.3,
            "estimated effective degree {}",
            est.k_hat
        );
        assert!(est.k_hat >= 1.0 && est.k_hat <= 3.5);
        // deterministic
        let again = effective_degree(&cost, DegreeMethod::McCorrelation, 10_000, 5).unwrap();
        assert_eq!(est.k_hat, again.k_hat);
    }

    #[test]
    fn offspring_bound_values_and_shape() {
        let m = 5000u64;
        let ln_m = (m as f64).ln();
        let at_one = offspring_minimum_bound(m, 1.0).unwrap();
        assert!((at_one - (-(2.0 * ln_m).sqrt())).abs() < 1e-12);
        let at_opt = offspring_minimum_bound(m, SQRT_HALF).unwrap();
        assert!((at_opt - (-2.0 * ln_m.sqrt())).abs() < 1e-12);

        // symmetry under l <-> sqrt(1 - l^2)
        for l in [0.1f64, 0.3, 0.6] {
            let a = offspring_minimum_bound(m, l).unwrap();
            let b = offspring_minimum_bound(m, (1.0 - l * l).sqrt()).unwrap();
            assert!((a - b).abs() < 1e-12);
        }

        // grid oracle: the minimizer sits at 1/sqrt(2)
        let mut best = (f64::INFINITY, 0.0);
        let mut l: f64 = 0.0;
        while l <= 1.0 + 1e-12 {
            let v = offspring_minimum_bound(m, l.min(1.0)).unwrap();
            if v < best.0 {
                best = (v, l);
            }
            l += 1e-3;
        }
        assert!((best.1 - 0.707).abs() <= 1.1e-3, "argmin {}", best.1);

        assert!(offspring_minimum_bound(m, 1.5).is_err());
        assert!(offspring_minimum_bound(m, -0.1).is_err());
        assert!(offspring_minimum_bound(1, 0.5).is_err());
    }

    #[test]
    fn large_n_norm_endpoints_and_monotonicity() {
        for d in [0.0f64, 0.3, 1.0] {
            let v = large_n_crossover_norm(100, 4, 0.0, d).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "gamma 0 must give norm 1");
        }
        let v = large_n_crossover_norm::<f64>(100, 4, 0.5, 1.0).unwrap();
        assert!(v.abs() < 1e-12, "antipodal parents, unbiased crossover");

        for d in [0.25f64, 0.5, 1.0] {
            let mut prev = f64::INFINITY;
            for g10 in 0..=10 {
                let g = g10 as f64 / 20.0;
                let v = large_n_crossover_norm(64, 4, g, d).unwrap();
                assert!(v <= prev + 1e-12);
                prev = v;
            }
        }
        assert!(large_n_crossover_norm::<f64>(10, 0, 0.1, 0.5).is_err());
        assert!(large_n_crossover_norm::<f64>(10, 2, 0.6, 0.5).is_err());
        assert!(large_n_crossover_norm::<f64>(10, 2, 0.1, 1.5).is_err());
    }

    /// The exact mean-vector norm of a sampled landscape is the oracle for
    /// the closed-form limit.
    #[test]
    fn large_n_norm_matches_exact_norm() {
        let n = 64;
        let cost = PolyCost::<f64>::generate(n, 4, 2024).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let x1 = BitState::random(n, &mut rng);
        let x2 = BitState::random(n, &mut rng);
        let disagreements = x1
            .bits()
            .iter()
            .zip(x2.bits())
            .filter(|(a, b)| a != b)
            .count();
        let d = disagreements as f64 / n as f64;
        for g10 in 0..=10 {
            let gamma = g10 as f64 / 20.0;
            let mean: Vec<f64> = x1
                .bits()
                .iter()
                .zip(x2.bits())
                .map(|(&a, &b)| {
                    if a == b {
                        a as f64
                    } else {
                        (1.0 - 2.0 * gamma) * a as f64
                    }
                })
                .collect();
            let exact = cost
                .mean_vector_norm(&MeanState::new(mean).unwrap())
                .unwrap();
            let closed = large_n_crossover_norm(n, 4, gamma, d).unwrap();
            // the limit formula replaces the hypergeometric overlap between
            // a monomial and the disagreement set by its binomial
            // approximation; the gap shrinks like 1/N and is ~5% at N=64
            // near gamma = 0.5 (tighter agreement at larger N is exercised
            // in the acceptance suite)
            assert!(
                (exact - closed).abs() / exact.max(1e-6) < 0.06,
                "gamma {gamma}: exact {exact} vs closed {closed}"
            );
        }
    }

    #[test]
    fn optimal_gamma_cases() {
        // pure degree-1 at half disagreement crosses exactly at 0.5
        let deg1 = |g: f64| large_n_crossover_norm(50, 1, g, 0.5).unwrap();
        let g = optimal_gamma(deg1, 1e-6).unwrap();
        assert!((g - 0.5).abs() <= 2e-6, "{g}");

        // pure degree-4 at half disagreement: closed-form root as oracle
        let w4 = |g: f64| {
            let q: f64 = 0.5 + 0.5 * (1.0 - 2.0 * g) * (1.0 - 2.0 * g);
            q.powi(4).sqrt()
        };
        let oracle = (1.0 - (2.0 * 2f64.powf(-0.25) - 1.0).sqrt()) / 2.0;
        let g = optimal_gamma(w4, 1e-9).unwrap();
        assert!((g - oracle).abs() < 1e-8, "{g} vs {oracle}");
        assert!((oracle - 0.0871462636).abs() < 1e-9);

        // degenerate constant norm: the bracket midpoint comes back
        let g = optimal_gamma(|_: f64| SQRT_HALF, 1e-6).unwrap();
        assert!((g - 0.25).abs() < 1e-12);

        // parents too similar: no crossing in the bracket
        let err = optimal_gamma(|_: f64| 0.9f64, 1e-6).unwrap_err();
        match err {
            Error::NoGammaCrossing { norm_at_half } => {
                assert!((norm_at_half - 0.9).abs() < 1e-12)
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn boltzmann_weight_cases() {
        // direct arithmetic oracle for three costs
        let w = boltzmann_weights(&[-2.0f64, -1.0, 0.0], 1.0, 1.0).unwrap();
        let e = std::f64::consts::E;
        let z = e * e + e + 1.0;
        let expect = [e * e / z, e / z, 1.0 / z];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((expect[0] - 0.6652).abs() < 1e-4);
        assert!((expect[1] - 0.2447).abs() < 1e-4);
        assert!((expect[2] - 0.0900).abs() < 1e-4);

        // beta = 0 is uniform
        let w = boltzmann_weights(&[3.0f64, -1.0, 7.0, 0.0], 0.0, 0.7).unwrap();
        for v in &w {
            assert!((v - 0.25).abs() < 1e-12);
        }

        // softmax limit concentrates on the argmin
        let w = boltzmann_weights(&[0.0f64, 1.0, 2.0], 40.0, 1.0).unwrap();
        assert!(w[0] >= 1.0 - 1e-6);

        // simplex + permutation equivariance
        let costs = [0.3f64, -0.7, 1.1, 0.0, -0.2];
        let w = boltzmann_weights(&costs, 2.0, 0.6).unwrap();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let perm = [4usize, 2, 0, 1, 3];
        let shuffled: Vec<f64> = perm.iter().map(|&i| costs[i]).collect();
        let ws = boltzmann_weights(&shuffled, 2.0, 0.6).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            assert!((ws[k] - w[i]).abs() < 1e-12);
        }

        assert!(boltzmann_weights::<f64>(&[], 1.0, 1.0).is_err());
        assert!(boltzmann_weights(&[f64::NAN], 1.0, 1.0).is_err());
        assert!(boltzmann_weights(&[1.0f64], -1.0, 1.0).is_err());

        // overflow safety at extreme scales
        let w = boltzmann_weights(&[-1e6f64, 0.0], 1.0, 1.0).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && w[1] >= 0.0);
    }
}
