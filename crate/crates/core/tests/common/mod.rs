#![allow(dead_code)]

use std::f64::consts::PI;

use fermsim::testbed::{lucj_circuit, random_circuit, LucjShape};
use fermsim::{oracle_support, BasisState, Circuit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Five 6-mode, 3-particle circuits with three controlled-phase gates each,
/// used wherever estimators are compared against exact values.
pub fn small_testbed() -> Vec<Circuit> {
    (0..5)
        .map(|i| random_circuit(&mut rng(1000 + i), 6, 3, 14, 3, PI / 2.0))
        .collect()
}

/// The most probable outcome of `circuit` according to the dense oracle.
pub fn top_outcome(circuit: &Circuit) -> (BasisState, f64) {
    oracle_support(circuit)
        .unwrap()
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

/// 12-mode LUCJ-style circuit, 3 alpha + 3 beta particles, 12 controlled-phase
/// gates with angles drawn from N(mean, 0.1).
pub fn lucj12(mean: f64, seed: u64) -> Circuit {
    lucj_circuit(
        &mut rng(seed),
        &LucjShape {
            norb: 6,
            n_alpha: 3,
            n_beta: 3,
            cphase_gates: 12,
            angle_mean: mean,
            angle_sd: 0.1,
        },
    )
}

/// 28-mode LUCJ-style circuit with 32 controlled-phase gates.
pub fn lucj28(mean: f64, sd: f64, seed: u64) -> Circuit {
    lucj_circuit(
        &mut rng(seed),
        &LucjShape {
            norb: 14,
            n_alpha: 5,
            n_beta: 5,
            cphase_gates: 32,
            angle_mean: mean,
            angle_sd: sd,
        },
    )
}
