//! Invariants that must hold for arbitrary inputs.

mod common;

use common::{random_circuit, random_params, random_state, rng};
use frqi_core::classifier::{
    argmax, depolarize, kernel_gram, spread_of_counts, wilson_interval, ClassifierHead,
};
use frqi_core::encodings::{frqi_state, snake_flatten, snake_unflatten, FlatImage, Image};
use frqi_core::sim::{log_softmax_loss, run_circuit, sample_counts};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn probs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("all zero", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_preserve_the_norm(seed in any::<u64>(), n in 1usize..7, gates in 0usize..20) {
        let mut r = rng(seed);
        let c = if n == 1 {
            let mut c = frqi_core::sim::Circuit::new(1);
            for _ in 0..gates { c.push_euler(0); }
            c
        } else {
            random_circuit(n, gates, &mut r)
        };
        let params = random_params(c.num_params(), &mut r);
        let out = run_circuit(&c, &params, &random_state(n, &mut r)).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn snake_order_is_a_bijection(n in 0usize..5, seed in any::<u64>()) {
        let side = 1usize << n;
        let mut r = rng(seed);
        let values: Vec<f64> = (0..side * side).map(|_| rand::Rng::random(&mut r)).collect();
        let img = Image::new(side, side, values).unwrap();
        let flat = snake_flatten(&img).unwrap();
        prop_assert_eq!(snake_unflatten(&flat), img.clone());
        let mut sorted_in = img.values.clone();
        let mut sorted_out = flat.values.clone();
        sorted_in.sort_by(f64::total_cmp);
        sorted_out.sort_by(f64::total_cmp);
        prop_assert_eq!(sorted_in, sorted_out);
    }

    #[test]
    fn frqi_states_are_normalized(values in prop::collection::vec(0.0f64..=1.0, 16)) {
        let s = frqi_state(&FlatImage::new(values).unwrap()).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_interval_brackets_the_estimate(trials in 1u64..5000, frac in 0.0f64..=1.0) {
        let k = ((trials as f64) * frac).round() as u64;
        let (lo, hi) = wilson_interval(k, trials, 0.95).unwrap();
        let p = k as f64 / trials as f64;
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        prop_assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
        if k == 0 { prop_assert_eq!(lo, 0.0); }
        if k == trials { prop_assert_eq!(hi, 1.0); }
    }

    #[test]
    fn depolarizing_contracts_spread_by_one_minus_lambda(
        seed in any::<u64>(),
        lambda in 0.0f64..=1.0,
        count in 2usize..12,
    ) {
        let mut r = rng(seed);
        let vectors: Vec<Vec<f64>> = (0..count)
            .map(|_| random_state(3, &mut r).probabilities())
            .collect();
        let noisy: Vec<Vec<f64>> = vectors.iter().map(|v| depolarize(v, lambda).unwrap()).collect();
        let before = spread_of_counts(&vectors).unwrap();
        let after = spread_of_counts(&noisy).unwrap();
        prop_assert!((after - (1.0 - lambda) * before).abs() < 1e-10);
        for v in &noisy {
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_gram_is_positive_semidefinite(seed in any::<u64>(), count in 1usize..8) {
        let mut r = rng(seed);
        let states: Vec<_> = (0..count).map(|_| random_state(3, &mut r)).collect();
        let g = kernel_gram(&states).unwrap();
        let m = DMatrix::from_fn(count, count, |i, j| g[i][j]);
        prop_assert!((&m - m.transpose()).amax() < 1e-14);
        for (i, row) in g.iter().enumerate() {
            prop_assert!((row[i] - 1.0).abs() < 1e-12);
        }
        let eig = m.symmetric_eigen();
        prop_assert!(eig.eigenvalues.iter().all(|&e| e > -1e-10), "{:?}", eig.eigenvalues);
    }

    #[test]
    fn loss_is_non_negative_and_shift_invariant(
        scores in prop::collection::vec(-5.0f64..5.0, 2..12),
        shift in -10.0f64..10.0,
        scale in 0.1f64..200.0,
        pick in any::<prop::sample::Index>(),
    ) {
        let label = pick.index(scores.len());
        let (l, _) = log_softmax_loss(&scores, label, scale).unwrap();
        let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
        let (ls, _) = log_softmax_loss(&shifted, label, scale).unwrap();
        prop_assert!(l >= 0.0);
        prop_assert!((l - ls).abs() < 1e-9 * (1.0 + l));
    }

    #[test]
    fn predictions_ignore_common_bias_shifts(
        p in probs(8),
        seed in any::<u64>(),
        shift in -3.0f64..3.0,
    ) {
        let head = ClassifierHead::init(3, 10, Default::default(), seed).unwrap();
        let mut moved = head.clone();
        moved.b.iter_mut().for_each(|b| *b += shift);
        let s = head.apply(&p);
        let t = moved.apply(&p);
        // only exact ties could flip, and those are measure zero
        prop_assert_eq!(argmax(&s), argmax(&t));
    }

    #[test]
    fn sampling_conserves_shots_and_is_seeded(p in probs(16), shots in 1u64..100_000, seed in any::<u64>()) {
        let a = sample_counts(&p, shots, seed).unwrap();
        prop_assert_eq!(a.iter().sum::<u64>(), shots);
        prop_assert_eq!(a.clone(), sample_counts(&p, shots, seed).unwrap());
        for (c, q) in a.iter().zip(&p) {
            if *q == 0.0 { prop_assert_eq!(*c, 0); }
        }
    }
}
