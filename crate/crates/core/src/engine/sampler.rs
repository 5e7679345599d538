use num_complex::Complex64;
use rand::Rng;

use crate::bits::BitSet;
use crate::circuit::Circuit;

/// Branch choice per controlled-phase gate: bit `j` selects `d₁(θ_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trajectory {
    bits: BitSet,
    ones: usize,
}

impl Trajectory {
    pub fn zeros(k: usize) -> Self {
        Self {
            bits: BitSet::zeros(k),
            ones: 0,
        }
    }

    pub fn from_bits(bits: BitSet) -> Self {
        let ones = bits.count_ones();
        Self { bits, ones }
    }

    /// Trajectory whose bit `j` is bit `j` of `index`.
    pub fn from_index(k: usize, index: u64) -> Self {
        assert!(k <= 64 || index >> 63 == 0);
        Self::from_bits(BitSet::from_indices(
            k,
            (0..k.min(64)).filter(|&j| (index >> j) & 1 == 1),
        ))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        self.bits.get(j)
    }

    /// `|x|`.
    #[inline]
    pub fn ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn bits(&self) -> &BitSet {
        &self.bits
    }
}

/// Per-gate quantities precomputed from the controlled-phase angles.
#[derive(Clone, Debug)]
pub struct SamplerTables {
    /// `cos(θ_j/4)`, `sin(θ_j/4)` with signed angles.
    pub cos_quarter: Vec<f64>,
    pub sin_quarter: Vec<f64>,
    /// `cos(|θ_j|/4)`, `sin(|θ_j|/4)`.
    pub cos_abs_quarter: Vec<f64>,
    pub sin_abs_quarter: Vec<f64>,
    /// Probability of selecting `d₁(θ_j)`.
    pub p_one: Vec<f64>,
    /// `e^{iθ_j/2}` and `e^{−iθ_j/2}`.
    pub half_phase: Vec<Complex64>,
    pub neg_half_phase: Vec<Complex64>,
    /// Bit `j` set iff `θ_j < 0`.
    pub negative_mask: BitSet,
}

impl SamplerTables {
    pub fn new(circuit: &Circuit) -> Self {
        Self::from_angles(circuit.angles())
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        let k = angles.len();
        let mut t = SamplerTables {
            cos_quarter: Vec::with_capacity(k),
            sin_quarter: Vec::with_capacity(k),
            cos_abs_quarter: Vec::with_capacity(k),
            sin_abs_quarter: Vec::with_capacity(k),
            p_one: Vec::with_capacity(k),
            half_phase: Vec::with_capacity(k),
            neg_half_phase: Vec::with_capacity(k),
            negative_mask: BitSet::zeros(k),
        };
        for (j, &theta) in angles.iter().enumerate() {
            let (s, c) = (theta / 4.0).sin_cos();
            let (sa, ca) = (theta.abs() / 4.0).sin_cos();
            t.cos_quarter.push(c);
            t.sin_quarter.push(s);
            t.cos_abs_quarter.push(ca);
            t.sin_abs_quarter.push(sa);
            t.p_one.push(sa / (sa + ca));
            t.half_phase.push(Complex64::from_polar(1.0, theta / 2.0));
            t.neg_half_phase
                .push(Complex64::from_polar(1.0, -theta / 2.0));
            if theta < 0.0 {
                t.negative_mask.set(j, true);
            }
        }
        t
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.p_one.len()
    }

    /// Gates whose branch is random (`θ_j ≠ 0`).
    pub fn active_gates(&self) -> Vec<usize> {
        (0..self.k()).filter(|&j| self.p_one[j] > 0.0).collect()
    }

    /// `w(x) = Π_j cos(θ_j/4)^{1−x_j} (i sin(θ_j/4))^{x_j}`.
    pub fn weight(&self, x: &Trajectory) -> Complex64 {
        let mut w = Complex64::new(1.0, 0.0);
        for j in 0..self.k() {
            w *= if x.get(j) {
                Complex64::new(0.0, self.sin_quarter[j])
            } else {
                Complex64::new(self.cos_quarter[j], 0.0)
            };
        }
        w
    }
}

/// Draws one trajectory, consuming exactly `k` uniforms from `rng`.
pub fn sample_trajectory<R: Rng + ?Sized>(tables: &SamplerTables, rng: &mut R) -> Trajectory {
    let mut x = Trajectory::zeros(tables.k());
    sample_trajectory_into(tables, rng, &mut x);
    x
}

/// In-place variant of [`sample_trajectory`] for hot loops.
#[inline]
pub fn sample_trajectory_into<R: Rng + ?Sized>(
    tables: &SamplerTables,
    rng: &mut R,
    x: &mut Trajectory,
) {
    debug_assert_eq!(x.len(), tables.k());
    x.bits.clear();
    let mut ones = 0;
    for (j, &p) in tables.p_one.iter().enumerate() {
        let u: f64 = rng.gen();
        if u < p {
            x.bits.set(j, true);
            ones += 1;
        }
    }
    x.ones = ones;
}

/// `i^|x| · (−1)^{|m ∧ x|}`: the phase of `w(x)/P(x)` up to `√ξ*`.
#[inline]
pub fn trajectory_phase(tables: &SamplerTables, x: &Trajectory) -> Complex64 {
    const POWERS: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let p = POWERS[x.ones() & 3];
    if tables.negative_mask.and_count(x.bits()) & 1 == 1 {
        -p
    } else {
        p
    }
}
