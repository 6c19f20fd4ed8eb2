//! Randomized invariant checks across the library: algebraic identities of
//! the cost class, descent behavior, crossover weight/mean laws, and tour
//! operations.

use crossquad_core::cost::{BitState, MeanState, PolyCost};
use crossquad_core::crossover::{biased_pair_weights, offspring_mean, pair_plan, sample_offspring};
use crossquad_core::search::{descend, is_local_minimum};
use crossquad_core::theory::{offspring_minimum_bound, predict_min_of_m, PredictionOrder};
use crossquad_core::tsp::{generate_instance, route_crossover, tour_length, two_opt_descend, Tour};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A small instance shape: dimensions in 6..=14, degree in 1..=4.
fn shape() -> impl Strategy<Value = (usize, usize)> {
    (6usize..=14).prop_flat_map(|n| (Just(n), 1usize..=4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Flipping spin i changes the cost by exactly -2 b_i.
    #[test]
    fn flip_matches_interaction_field((n, k) in shape(), seed in 0u64..1000, state_seed in 0u64..1000) {
        let cost = PolyCost::<f64>::generate(n, k, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(state_seed);
        let x = BitState::random(n, &mut rng);
        let base = cost.evaluate(&x).unwrap();
        let field = cost.interaction_field(&x).unwrap();
        for i in 0..n {
            let flipped = cost.evaluate(&x.flipped(i)).unwrap();
            prop_assert!((flipped - base + 2.0 * field[i]).abs() < 1e-9,
                "flip {i}: {} vs {}", flipped - base, -2.0 * field[i]);
        }
    }

    /// Coefficients are globally normalized to unit square sum.
    #[test]
    fn coefficients_have_unit_square_sum((n, k) in shape(), seed in 0u64..1000) {
        let cost = PolyCost::<f64>::generate(n, k, seed).unwrap();
        let total: f64 = (1..=k)
            .map(|a| cost.coeffs_of_degree(a).iter().map(|c| c * c).sum::<f64>())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    /// The multilinear extension agrees with direct evaluation at corners.
    #[test]
    fn mean_extension_agrees_at_corners((n, k) in shape(), seed in 0u64..1000, state_seed in 0u64..1000) {
        let cost = PolyCost::<f64>::generate(n, k, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(state_seed);
        let x = BitState::random(n, &mut rng);
        let corner = MeanState::from_bit_state(&x);
        let direct = cost.evaluate(&x).unwrap();
        let extended = cost.evaluate_mean(&corner).unwrap();
        prop_assert!((direct - extended).abs() < 1e-9);
    }

    /// Descent never raises the cost, lands on a local minimum, and is
    /// idempotent there.
    #[test]
    fn descent_is_monotone_and_idempotent((n, k) in shape(), seed in 0u64..500, state_seed in 0u64..500) {
        let cost = PolyCost::<f64>::generate(n, k, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(state_seed);
        let x = BitState::random(n, &mut rng);
        let run = descend(&cost, &x).unwrap();
        prop_assert!(run.final_cost <= run.start_cost + 1e-9);
        prop_assert!(is_local_minimum(&cost, &run.final_state).unwrap());
        let again = descend(&cost, &run.final_state).unwrap();
        prop_assert_eq!(again.steps, 0);
        prop_assert_eq!(again.final_state.bits(), run.final_state.bits());
    }

    /// Pair weights form a two-point distribution with mass 1 - gamma on
    /// the lower-cost state.
    #[test]
    fn pair_weights_live_on_the_simplex(
        costs in prop::collection::vec(-5.0f64..5.0, 2..40),
        gamma in 0.001f64..=0.5,
    ) {
        let w = biased_pair_weights(&costs, gamma).unwrap();
        let total: f64 = w.weights().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(w.weights().iter().all(|&v| (0.0..=1.0).contains(&v)));
        let positive = w.weights().iter().filter(|&&v| v > 0.0).count();
        prop_assert!(positive <= 2);
    }

    /// Offspring mean entries stay in [-1, 1] and the realized pair norm is
    /// non-increasing in gamma.
    #[test]
    fn pair_mean_norm_decreases_in_gamma((n, k) in shape(), seed in 0u64..500) {
        let cost = PolyCost::<f64>::generate(n, k, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        let states: Vec<BitState> = (0..6).map(|_| BitState::random(n, &mut rng)).collect();
        let costs: Vec<f64> = states.iter().map(|x| cost.evaluate(x).unwrap()).collect();
        let mut last = f64::INFINITY;
        for step in 1..=10 {
            let gamma = 0.05 * step as f64;
            let plan = pair_plan(&states, &costs, gamma).unwrap();
            prop_assert!(plan.mean().entries().iter().all(|&v| (-1.0..=1.0).contains(&v)));
            let norm = cost.mean_vector_norm(plan.mean()).unwrap();
            prop_assert!(norm <= last + 1e-12, "norm rose: {norm} after {last}");
            last = norm;
        }
    }

    /// Sampled offspring match the plan exactly wherever the mean is
    /// certain (entries at +-1).
    #[test]
    fn offspring_respect_certain_coordinates((n, k) in shape(), seed in 0u64..300) {
        let cost = PolyCost::<f64>::generate(n, k, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51ab);
        let states: Vec<BitState> = (0..4).map(|_| BitState::random(n, &mut rng)).collect();
        let costs: Vec<f64> = states.iter().map(|x| cost.evaluate(x).unwrap()).collect();
        let plan = pair_plan(&states, &costs, 0.25).unwrap();
        let kids = sample_offspring(&plan, 8, seed).unwrap();
        for kid in &kids {
            for (i, &mi) in plan.mean().entries().iter().enumerate() {
                if mi == 1.0 {
                    prop_assert_eq!(kid.bits()[i], 1);
                } else if mi == -1.0 {
                    prop_assert_eq!(kid.bits()[i], -1);
                }
            }
        }
    }

    /// One-hot selection reproduces the selected state as the mean.
    #[test]
    fn one_hot_mean_is_the_selected_state((n, k) in shape(), seed in 0u64..300, pick in 0usize..4) {
        let cost = PolyCost::<f64>::generate(n, k, seed).unwrap();
        let _ = &cost;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
        let states: Vec<BitState> = (0..4).map(|_| BitState::random(n, &mut rng)).collect();
        let w = crossquad_core::crossover::WeightDist::<f64>::one_hot(4, pick).unwrap();
        let plan = offspring_mean(&states, &w).unwrap();
        let expect: Vec<f64> = states[pick].bits().iter().map(|&b| b as f64).collect();
        prop_assert_eq!(plan.mean().entries(), &expect[..]);
    }

    /// The offspring minimum forecast is symmetric in l <-> sqrt(1-l^2)
    /// and never beats the perfect-correlation bound of -2 sqrt(ln M).
    #[test]
    fn offspring_bound_symmetry_and_floor(l in 0.0f64..=1.0, m in 2u64..100_000) {
        let here = offspring_minimum_bound(m, l).unwrap();
        let mirrored = offspring_minimum_bound(m, (1.0 - l * l).sqrt()).unwrap();
        prop_assert!((here - mirrored).abs() < 1e-9);
        let floor = -2.0 * (m as f64).ln().sqrt();
        prop_assert!(here >= floor - 1e-9);
    }

    /// Deeper pools only deepen the predicted minimum.
    #[test]
    fn min_prediction_is_monotone_in_m(m in 6u64..1_000_000) {
        let a = predict_min_of_m(0.0, 1.0, m, PredictionOrder::FirstOrder).unwrap();
        let b = predict_min_of_m(0.0, 1.0, m + m / 2 + 1, PredictionOrder::FirstOrder).unwrap();
        prop_assert!(b.mean < a.mean);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Route crossover always yields a permutation; 2-opt never lengthens
    /// a tour and its output is stable under a second descent.
    #[test]
    fn tour_operations_preserve_validity(
        n in 5usize..24,
        seed in 0u64..500,
        gamma in 0.0f64..=0.5,
    ) {
        let inst = generate_instance(n, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
        let p1 = Tour::random(n, &mut rng);
        let p2 = Tour::random(n, &mut rng);
        let child = route_crossover(&inst, &p1, &p2, gamma, seed).unwrap();
        prop_assert!(Tour::new(child.order().to_vec()).is_ok());

        let start_len = tour_length(&inst, &child).unwrap();
        let (local, len, _) = two_opt_descend(&inst, &child).unwrap();
        prop_assert!(len <= start_len + 1e-12);
        let (again, len2, steps2) = two_opt_descend(&inst, &local).unwrap();
        prop_assert_eq!(steps2, 0);
        prop_assert_eq!(again.order(), local.order());
        prop_assert!((len2 - len).abs() < 1e-12);
    }

    /// Tour length is invariant under rotation and reversal.
    #[test]
    fn tour_length_is_dihedral_invariant(n in 5usize..20, seed in 0u64..500, shift in 0usize..20) {
        let inst = generate_instance(n, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd1e);
        let t = Tour::random(n, &mut rng);
        let base = tour_length(&inst, &t).unwrap();

        let mut rotated = t.order().to_vec();
        rotated.rotate_left(shift % n);
        prop_assert!((tour_length(&inst, &Tour::new(rotated).unwrap()).unwrap() - base).abs() < 1e-12);

        let mut reversed = t.order().to_vec();
        reversed.reverse();
        prop_assert!((tour_length(&inst, &Tour::new(reversed).unwrap()).unwrap() - base).abs() < 1e-12);
    }
}
