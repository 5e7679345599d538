//! Dense state-vector reference simulator for small circuits.

use num_complex::Complex64;

use crate::bits::BitSet;
use crate::circuit::{BasisState, Circuit, Gate};
use crate::error::{Error, Result};
use crate::gates::{self, Mat4};

/// Largest mode count the dense oracle accepts.
pub const ORACLE_MAX_MODES: usize = 16;

/// Amplitudes over all `2^n` basis states; bit `i` of the index is the
/// occupation of mode `i`.
#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

fn check_cap(n: usize) -> Result<()> {
    if n > ORACLE_MAX_MODES {
        return Err(Error::OracleCapExceeded {
            n,
            cap: ORACLE_MAX_MODES,
        });
    }
    Ok(())
}

fn index_of(s: &BasisState) -> usize {
    s.occupied().fold(0usize, |acc, i| acc | (1 << i))
}

impl DenseState {
    pub fn basis(s: &BasisState) -> Result<Self> {
        check_cap(s.n())?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << s.n()];
        amplitudes[index_of(s)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n: s.n(),
            amplitudes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, s: &BasisState) -> Complex64 {
        self.amplitudes[index_of(s)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Applies a 4×4 unitary on modes `(lo, hi)` in the little-endian
    /// two-mode basis of [`crate::gates`].
    pub fn apply_two_mode(&mut self, lo: usize, hi: usize, m: &Mat4) {
        let (bl, bh) = (1usize << lo, 1usize << hi);
        for idx in 0..self.amplitudes.len() {
            if idx & (bl | bh) != 0 {
                continue;
            }
            let slots = [idx, idx | bl, idx | bh, idx | bl | bh];
            let v = slots.map(|s| self.amplitudes[s]);
            for (r, &slot) in slots.iter().enumerate() {
                self.amplitudes[slot] = (0..4).map(|c| m[r][c] * v[c]).sum();
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match *gate {
            Gate::Matchgate { p, ref u } => {
                self.apply_two_mode(p, p + 1, &gates::matchgate_unitary(u))
            }
            Gate::ControlledPhase { q1, q2, theta } => {
                self.apply_two_mode(q1, q2, &gates::cphase_unitary(theta))
            }
        }
    }
}

/// Final state of the circuit applied to its initial state.
pub fn simulate(circuit: &Circuit) -> Result<DenseState> {
    let mut psi = DenseState::basis(circuit.initial())?;
    for g in circuit.gates() {
        psi.apply_gate(g);
    }
    Ok(psi)
}

pub fn oracle_probability(circuit: &Circuit, b: &BasisState) -> Result<f64> {
    circuit.check_target(b)?;
    Ok(simulate(circuit)?.amplitude(b).norm_sqr())
}

/// All states of the initial Hamming weight with probability above 1e−14,
/// in ascending index order.
pub fn oracle_support(circuit: &Circuit) -> Result<Vec<(BasisState, f64)>> {
    let psi = simulate(circuit)?;
    let n = circuit.n();
    let h = circuit.initial().weight();
    Ok(psi
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(idx, _)| idx.count_ones() as usize == h)
        .map(|(idx, z)| (idx, z.norm_sqr()))
        .filter(|&(_, p)| p > 1e-14)
        .map(|(idx, p)| {
            let s = BasisState::new(BitSet::from_indices(
                n,
                (0..n).filter(|&i| idx >> i & 1 == 1),
            ));
            (s, p)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit() {
        let c = Circuit::new(BasisState::parse("0110").unwrap(), vec![]).unwrap();
        assert_eq!(oracle_probability(&c, c.initial()).unwrap(), 1.0);
        let support = oracle_support(&c).unwrap();
        assert_eq!(support, vec![(c.initial().clone(), 1.0)]);
    }

    #[test]
    fn givens_rotation() {
        let phi = 0.61;
        let c = Circuit::new(BasisState::parse("10").unwrap(), vec![Gate::givens(0, phi)]).unwrap();
        let p10 = oracle_probability(&c, &BasisState::parse("10").unwrap()).unwrap();
        let p01 = oracle_probability(&c, &BasisState::parse("01").unwrap()).unwrap();
        assert!((p10 - phi.cos().powi(2)).abs() < 1e-15);
        assert!((p01 - phi.sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn cphase_only_acts_on_double_occupation() {
        let c = Circuit::new(
            BasisState::parse("11").unwrap(),
            vec![Gate::givens(0, 0.3), Gate::cphase(0, 1, 1.1)],
        )
        .unwrap();
        let psi = simulate(&c).unwrap();
        let z = psi.amplitude(&BasisState::parse("11").unwrap());
        // Givens has determinant 1, so the amplitude is e^{iθ}.
        assert!((z - Complex64::from_polar(1.0, 1.1)).norm() < 1e-15);
    }

    #[test]
    fn cap_enforced() {
        let c = Circuit::new(BasisState::new(BitSet::zeros(17)), vec![]).unwrap();
        assert!(matches!(
            oracle_support(&c).unwrap_err(),
            Error::OracleCapExceeded { n: 17, .. }
        ));
    }
}
