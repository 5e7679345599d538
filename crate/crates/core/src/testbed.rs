//! Random circuit generators for validation and benchmarking.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::circuit::{BasisState, Circuit, Gate};
use crate::gates::Mat2;

/// Haar-distributed 2×2 unitary.
pub fn random_u2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    // |u00| = cos φ with cos²φ uniform on [0, 1].
    let c = rng.gen::<f64>().sqrt();
    let s = (1.0 - c * c).sqrt();
    let a = rng.gen_range(0.0..TAU);
    let b = rng.gen_range(0.0..TAU);
    let g = rng.gen_range(0.0..TAU);
    [
        [Complex64::from_polar(c, a), Complex64::from_polar(-s, b)],
        [
            Complex64::from_polar(s, g),
            Complex64::from_polar(c, b + g - a),
        ],
    ]
}

/// Brick-wall layers of random matchgates on modes `lo..hi`; `layers` equal
/// to the width makes a generic orbital rotation of that block.
pub fn orbital_rotation<R: Rng + ?Sized>(
    rng: &mut R,
    lo: usize,
    hi: usize,
    layers: usize,
) -> Vec<Gate> {
    let mut out = Vec::new();
    for layer in 0..layers {
        let mut p = lo + layer % 2;
        while p + 1 < hi {
            out.push(Gate::matchgate(p, random_u2(rng)));
            p += 2;
        }
    }
    out
}

/// Initial state with the first `h` modes occupied.
pub fn leading_occupation(n: usize, h: usize) -> BasisState {
    BasisState::from_occupied(n, 0..h)
}

/// Random nearest-neighbor matchgates interleaved with `k` controlled-phase
/// gates on arbitrary mode pairs, with angles uniform in (−max, max).
pub fn random_circuit<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    h: usize,
    matchgates: usize,
    k: usize,
    max_angle: f64,
) -> Circuit {
    assert!(n >= 2 && h <= n);
    let mut initial_modes: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        initial_modes.swap(i, rng.gen_range(0..=i));
    }
    let initial = BasisState::from_occupied(n, initial_modes[..h].iter().copied());

    let total = matchgates + k;
    let mut cp_slots: Vec<bool> = (0..total).map(|i| i < k).collect();
    for i in (1..total).rev() {
        cp_slots.swap(i, rng.gen_range(0..=i));
    }
    let gates = cp_slots
        .into_iter()
        .map(|is_cp| {
            if is_cp {
                let q1 = rng.gen_range(0..n);
                let mut q2 = rng.gen_range(0..n - 1);
                if q2 >= q1 {
                    q2 += 1;
                }
                Gate::cphase(q1, q2, rng.gen_range(-max_angle..max_angle))
            } else {
                Gate::matchgate(rng.gen_range(0..n - 1), random_u2(rng))
            }
        })
        .collect();
    Circuit::new(initial, gates).expect("generated circuits are valid")
}

/// Shape of a single-layer LUCJ-style circuit on `2·norb` modes: alpha
/// orbitals on modes `0..norb`, beta orbitals on `norb..2·norb`.
#[derive(Clone, Debug)]
pub struct LucjShape {
    pub norb: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub cphase_gates: usize,
    pub angle_mean: f64,
    pub angle_sd: f64,
}

/// Local interaction pairs in the order they are assigned: same-spin
/// neighbors in both sectors and the opposite-spin pair on each orbital.
fn local_pairs(norb: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for p in 0..norb {
        if p + 1 < norb {
            pairs.push((p, p + 1));
            pairs.push((norb + p, norb + p + 1));
        }
        pairs.push((p, norb + p));
    }
    pairs
}

/// `e^{−K₂}e^{K₁} · e^{iJ} · e^{−K₁}` with random orbital rotations acting
/// on each spin sector separately and Gaussian controlled-phase angles.
pub fn lucj_circuit<R: Rng + ?Sized>(rng: &mut R, shape: &LucjShape) -> Circuit {
    let norb = shape.norb;
    let n = 2 * norb;
    let pairs = local_pairs(norb);
    assert!(
        shape.cphase_gates <= pairs.len(),
        "too many controlled-phase gates for {norb} orbitals"
    );
    let initial = BasisState::from_occupied(n, (0..shape.n_alpha).chain(norb..norb + shape.n_beta));

    let rotation = |rng: &mut R| {
        let mut g = orbital_rotation(rng, 0, norb, norb);
        g.extend(orbital_rotation(rng, norb, n, norb));
        g
    };
    let mut gates = rotation(rng);
    let normal = Normal::new(shape.angle_mean, shape.angle_sd).expect("finite angle distribution");
    for &(q1, q2) in &pairs[..shape.cphase_gates] {
        let theta: f64 = normal.sample(rng);
        gates.push(Gate::cphase(q1, q2, theta.clamp(-PI, PI)));
    }
    gates.extend(rotation(rng));
    Circuit::new(initial, gates).expect("generated circuits are valid")
}

/// All states of weight `h` on `n` modes, ascending by index.
pub fn fixed_weight_states(n: usize, h: usize) -> Vec<BasisState> {
    assert!(n < 64);
    (0u64..1 << n)
        .filter(|v| v.count_ones() as usize == h)
        .map(|v| BasisState::from_occupied(n, (0..n).filter(|&i| v >> i & 1 == 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::unitarity_deviation;
    use crate::lucj::detect_lucj;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_blocks_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert!(unitarity_deviation(&random_u2(&mut rng)) < 1e-14);
        }
    }

    #[test]
    fn lucj_circuits_are_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = lucj_circuit(
            &mut rng,
            &LucjShape {
                norb: 6,
                n_alpha: 3,
                n_beta: 3,
                cphase_gates: 12,
                angle_mean: 0.5,
                angle_sd: 0.1,
            },
        );
        assert_eq!(c.n(), 12);
        assert_eq!(c.k(), 12);
        assert_eq!(c.initial().to_string(), "111000111000");
        assert!(detect_lucj(&c).is_some());
    }

    #[test]
    fn fixed_weight_enumeration() {
        assert_eq!(fixed_weight_states(6, 3).len(), 20);
        assert!(fixed_weight_states(5, 2).iter().all(|s| s.weight() == 2));
    }
}
