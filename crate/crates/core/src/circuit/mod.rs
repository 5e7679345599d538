//! Circuits of passive nearest-neighbor matchgates and controlled-phase gates.

mod bounds;
mod format;

pub use bounds::{epsilon_from_count, extent, trajectory_count, ExtentReport};
pub use format::{parse_circuit, serialize_circuit};

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::gates::{self, Mat2};

/// Tolerance on `max |u†u − I|` for matchgate blocks.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Computational basis state over `n` modes with cached Hamming weight.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: BitSet,
    weight: usize,
}

impl BasisState {
    pub fn new(bits: BitSet) -> Self {
        let weight = bits.count_ones();
        Self { bits, weight }
    }

    pub fn from_occupied(n: usize, modes: impl IntoIterator<Item = usize>) -> Self {
        Self::new(BitSet::from_indices(n, modes))
    }

    /// Parses a binary string; the leftmost character is mode 0.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = BitSet::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits.set(i, true),
                other => {
                    return Err(Error::InvalidBitstring(format!(
                        "unexpected character {other:?} at position {i} in {s:?}"
                    )))
                }
            }
        }
        if s.is_empty() {
            return Err(Error::InvalidBitstring("empty bitstring".into()));
        }
        Ok(Self::new(bits))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.weight
    }

    #[inline]
    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn is_occupied(&self, mode: usize) -> bool {
        self.bits.get(mode)
    }

    /// Occupied modes in ascending order.
    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn occupied_vec(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits.to_bit_string())
    }
}

impl fmt::Debug for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}⟩")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Passive matchgate on modes `(p, p + 1)`. `u` is the single-particle
    /// block with row/column 0 = mode `p`.
    Matchgate { p: usize, u: Mat2 },
    /// `diag(1, 1, 1, e^{iθ})` on modes `q1`, `q2`; `theta` lies in (−π, π].
    ControlledPhase { q1: usize, q2: usize, theta: f64 },
}

impl Gate {
    pub fn matchgate(p: usize, u: Mat2) -> Self {
        Gate::Matchgate { p, u }
    }

    pub fn givens(p: usize, phi: f64) -> Self {
        Gate::Matchgate {
            p,
            u: gates::givens(phi),
        }
    }

    pub fn cphase(q1: usize, q2: usize, theta: f64) -> Self {
        Gate::ControlledPhase { q1, q2, theta }
    }

    pub fn is_cphase(&self) -> bool {
        matches!(self, Gate::ControlledPhase { .. })
    }
}

/// Maps an angle onto (−π, π].
pub fn normalize_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    initial: BasisState,
    gates: Vec<Gate>,
    angles: Vec<f64>,
}

impl Circuit {
    /// Validates the gate list and normalizes controlled-phase angles.
    pub fn new(initial: BasisState, mut gate_list: Vec<Gate>) -> Result<Self> {
        let n = initial.n();
        if n == 0 {
            return Err(Error::schema("num_qubits", "must be positive"));
        }
        let mut angles = Vec::new();
        for (idx, gate) in gate_list.iter_mut().enumerate() {
            match gate {
                Gate::Matchgate { p, u } => {
                    let q = *p + 1;
                    if q >= n {
                        return Err(Error::ModeOutOfRange {
                            gate: idx,
                            mode: q,
                            n,
                        });
                    }
                    let deviation = gates::unitarity_deviation(u);
                    if deviation.is_nan() || deviation > UNITARITY_TOL {
                        return Err(Error::NonUnitary {
                            gate: idx,
                            deviation,
                        });
                    }
                }
                Gate::ControlledPhase { q1, q2, theta } => {
                    for &m in [&*q1, &*q2] {
                        if m >= n {
                            return Err(Error::ModeOutOfRange {
                                gate: idx,
                                mode: m,
                                n,
                            });
                        }
                    }
                    if q1 == q2 {
                        return Err(Error::RepeatedMode {
                            gate: idx,
                            mode: *q1,
                        });
                    }
                    if !theta.is_finite() {
                        return Err(Error::schema(
                            format!("gates[{idx}].theta"),
                            "must be finite",
                        ));
                    }
                    *theta = normalize_angle(*theta);
                    angles.push(*theta);
                }
            }
        }
        Ok(Self {
            n,
            initial,
            gates: gate_list,
            angles,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn initial(&self) -> &BasisState {
        &self.initial
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of controlled-phase gates.
    #[inline]
    pub fn k(&self) -> usize {
        self.angles.len()
    }

    /// Controlled-phase angles in circuit order.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn matchgate_count(&self) -> usize {
        self.gates.len() - self.angles.len()
    }

    /// Appends the gates of `other` after those of `self`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let mut g = self.gates.clone();
        g.extend(other.gates.iter().cloned());
        Circuit::new(self.initial.clone(), g)
    }

    pub(crate) fn check_target(&self, b: &BasisState) -> Result<()> {
        if b.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: b.n(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_normalization() {
        assert_eq!(normalize_angle(3.0 * PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert_eq!(normalize_angle(PI), PI);
        assert!((normalize_angle(-3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert_eq!(normalize_angle(0.25), 0.25);
        assert_eq!(normalize_angle(-0.25), -0.25);
    }

    #[test]
    fn rejects_bad_gates() {
        let init = BasisState::parse("1100").unwrap();
        let err = Circuit::new(init.clone(), vec![Gate::givens(3, 0.1)]).unwrap_err();
        assert!(matches!(err, Error::ModeOutOfRange { mode: 4, .. }));
        let err = Circuit::new(init.clone(), vec![Gate::cphase(1, 1, 0.3)]).unwrap_err();
        assert!(matches!(err, Error::RepeatedMode { .. }));
        let mut u = gates::givens(0.2);
        u[0][0] *= 1.001;
        let err = Circuit::new(init, vec![Gate::matchgate(0, u)]).unwrap_err();
        assert!(matches!(err, Error::NonUnitary { .. }));
    }

    #[test]
    fn cached_counts() {
        let init = BasisState::parse("1010").unwrap();
        let c = Circuit::new(
            init,
            vec![
                Gate::givens(0, 0.3),
                Gate::cphase(0, 3, -0.5),
                Gate::givens(2, 0.1),
                Gate::cphase(1, 2, 7.0),
            ],
        )
        .unwrap();
        assert_eq!(c.k(), 2);
        assert_eq!(c.matchgate_count(), 2);
        assert_eq!(c.angles()[0], -0.5);
        assert!((c.angles()[1] - (7.0 - TAU)).abs() < 1e-15);
    }

    #[test]
    fn basis_state_parse() {
        let s = BasisState::parse("0110").unwrap();
        assert_eq!(s.weight(), 2);
        assert_eq!(s.occupied_vec(), vec![1, 2]);
        assert_eq!(s.to_string(), "0110");
        assert!(BasisState::parse("01a").is_err());
        assert!(BasisState::parse("").is_err());
    }
}
