mod common;

use std::f64::consts::PI;

use fermsim::testbed::{fixed_weight_states, random_circuit};
use fermsim::{
    batch_estimate, oracle_probability, BasisState, Circuit, EngineConfig, Error, Gate, Mode,
    Simulator,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{rng, small_testbed, top_outcome};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_agrees_with_oracle(seed in any::<u64>(), n in 2usize..8, k in 0usize..6) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let h = (seed as usize) % (n + 1);
        let c = random_circuit(&mut r, n, h, 2 * n, k, PI);
        let sim = Simulator::new(&c);
        for b in fixed_weight_states(n, h) {
            let diff = sim.exact(&b).unwrap() - oracle_probability(&c, &b).unwrap();
            prop_assert!(diff.abs() <= 1e-10);
        }
    }
}

#[test]
fn exact_probabilities_sum_to_one() {
    for c in small_testbed() {
        let sim = Simulator::new(&c);
        let total: f64 = fixed_weight_states(6, 3)
            .iter()
            .map(|b| sim.exact(b).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-10, "{total}");
    }
}

#[test]
fn raw_estimates_average_to_exact() {
    for c in small_testbed().iter().take(3) {
        let (b, p) = top_outcome(c);
        let sim = Simulator::new(c);
        let mean: f64 = (0..50)
            .map(|s| sim.raw_estimate(&b, 20_000, s).unwrap().probability)
            .sum::<f64>()
            / 50.0;
        assert!((mean - p).abs() < 0.02, "mean {mean} vs {p}");
    }
}

#[test]
fn amplitude_estimator_is_unbiased() {
    // The scaled accumulator α·√ξ*/t estimates the amplitude without bias,
    // so its mean over many seeds has modulus √p.
    let c = &small_testbed()[1];
    let (b, p) = top_outcome(c);
    let sim = Simulator::new(c);
    let t = 8;
    let seeds = 10_000;
    let scale = sim.extent().sqrt() / t as f64;
    let zs: Vec<_> = (0..seeds)
        .map(|s| sim.raw_accumulator(&b, t, s).unwrap() * scale)
        .collect();
    let mean = zs.iter().sum::<num_complex::Complex64>() / seeds as f64;
    let var = zs.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (seeds - 1) as f64;
    let se = (var / seeds as f64).sqrt();
    assert!(
        (mean.norm() - p.sqrt()).abs() <= 3.0 * se,
        "|mean| {} vs {} (se {se})",
        mean.norm(),
        p.sqrt()
    );
}

#[test]
fn matchgate_only_circuit_needs_one_trajectory() {
    let c = random_circuit(&mut rng(40), 6, 2, 20, 0, 0.0);
    let sim = Simulator::new(&c);
    for b in fixed_weight_states(6, 2) {
        let exact = oracle_probability(&c, &b).unwrap();
        assert!((sim.raw_estimate(&b, 1, 9).unwrap().probability - exact).abs() < 1e-12);
        let est = sim.estimate(&b, 0.01, 0.01, 0).unwrap();
        assert_eq!(est.trajectories_used, 1);
        assert_eq!(est.achieved_epsilon, Some(0.0));
        assert!((est.probability - exact).abs() < 1e-12);
    }
}

#[test]
fn zero_angle_gates_are_inert() {
    let init = BasisState::parse("1010").unwrap();
    let gates = vec![
        Gate::givens(0, 0.3),
        Gate::cphase(0, 1, 0.0),
        Gate::givens(1, 1.1),
        Gate::cphase(1, 3, 0.0),
    ];
    let c = Circuit::new(init, gates).unwrap();
    let sim = Simulator::new(&c);
    assert_eq!(sim.extent(), 1.0);
    for b in fixed_weight_states(4, 2) {
        let p = oracle_probability(&c, &b).unwrap();
        assert!((sim.raw_estimate(&b, 3, 1).unwrap().probability - p).abs() < 1e-12);
        assert!((sim.exact(&b).unwrap() - p).abs() < 1e-12);
    }
}

#[test]
fn estimate_certifies_requested_error() {
    let c = &small_testbed()[2];
    let (b, p) = top_outcome(c);
    let sim = Simulator::new(c);
    for (eps, delta) in [(0.1, 0.1), (0.05, 0.01), (0.2, 0.3)] {
        let r = sim.estimate(&b, eps, delta, 3).unwrap();
        assert!(r.achieved_epsilon.unwrap() <= eps);
        assert!(r.failure_probability.unwrap() <= delta);
        assert!(r.rounds.unwrap() >= 1);
        assert!((r.probability - p).abs() <= eps);
    }
}

#[test]
fn batch_of_one_matches_single_call() {
    let c = &small_testbed()[0];
    let (b, _) = top_outcome(c);
    let sim = Simulator::new(c);
    let batch = sim
        .batch(
            std::slice::from_ref(&b),
            Mode::Raw { trajectories: 4000 },
            11,
        )
        .unwrap();
    assert_eq!(batch[0], sim.raw_estimate(&b, 4000, 11).unwrap());
    let batch = sim
        .batch(
            std::slice::from_ref(&b),
            Mode::Adaptive {
                epsilon: 0.1,
                delta: 0.1,
            },
            11,
        )
        .unwrap();
    assert_eq!(batch[0], sim.estimate(&b, 0.1, 0.1, 11).unwrap());
    let batch = sim
        .batch(std::slice::from_ref(&b), Mode::Exact, 11)
        .unwrap();
    assert_eq!(batch[0].probability, sim.exact(&b).unwrap());
}

#[test]
fn duplicate_targets_draw_independent_streams() {
    let c = &small_testbed()[0];
    let (b, _) = top_outcome(c);
    let out = batch_estimate(
        c,
        &[b.clone(), b],
        Mode::Raw { trajectories: 500 },
        1,
        EngineConfig::default(),
    )
    .unwrap();
    assert_ne!(out[0].probability, out[1].probability);
}

#[test]
fn results_do_not_depend_on_chunk_layout_across_runs() {
    let c = &small_testbed()[3];
    let targets = fixed_weight_states(6, 3);
    let run = |threads| {
        let cfg = EngineConfig {
            threads,
            chunk_size: 64,
            ..EngineConfig::default()
        };
        batch_estimate(c, &targets, Mode::Raw { trajectories: 1000 }, 5, cfg).unwrap()
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn weight_mismatch_is_exactly_zero() {
    let c = &small_testbed()[0];
    let sim = Simulator::new(c);
    let b = BasisState::parse("110110").unwrap();
    assert_eq!(sim.raw_estimate(&b, 100, 0).unwrap().probability, 0.0);
    assert_eq!(sim.estimate(&b, 0.1, 0.1, 0).unwrap().probability, 0.0);
    assert_eq!(sim.exact(&b).unwrap(), 0.0);
}

#[test]
fn invalid_requests_are_rejected() {
    let c = &small_testbed()[0];
    let sim = Simulator::new(c);
    let (b, _) = top_outcome(c);
    assert!(matches!(
        sim.raw_estimate(&b, 0, 0),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        sim.estimate(&b, 0.0, 0.1, 0),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        sim.estimate(&b, 0.1, 1.0, 0),
        Err(Error::Domain { .. })
    ));
    let short = BasisState::parse("111").unwrap();
    assert!(matches!(
        sim.exact(&short),
        Err(Error::DimensionMismatch { .. })
    ));

    let err = sim.batch(&[b.clone(), short], Mode::Exact, 0).unwrap_err();
    match err {
        Error::Item { index, .. } => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn exact_refuses_past_the_cap() {
    let gates = (0..10).map(|i| Gate::cphase(i % 3, 3, 0.4)).collect();
    let c = Circuit::new(BasisState::parse("1100").unwrap(), gates).unwrap();
    let cfg = EngineConfig {
        exact_cap: 8,
        ..EngineConfig::default()
    };
    let err = Simulator::with_config(&c, cfg)
        .exact(&BasisState::parse("1100").unwrap())
        .unwrap_err();
    assert!(matches!(err, Error::ExactCapExceeded { k: 10, cap: 8 }));
    assert!(err.is_capability_refusal());
    let wide = Circuit::new(BasisState::parse("10000000000000000001").unwrap(), vec![]).unwrap();
    assert!(oracle_probability(&wide, wide.initial())
        .unwrap_err()
        .is_capability_refusal());
}
