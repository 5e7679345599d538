//! Mode-matrix construction and determinant amplitudes.

use num_complex::Complex64;

use super::sampler::Trajectory;
use crate::circuit::{BasisState, Circuit, Gate};
use crate::error::{Error, Result};
use crate::gates::{self, Mat2};
use crate::linalg::{det_in_place, ModeMatrix};

#[derive(Clone, Debug)]
enum Op {
    Block {
        p: usize,
        u: Mat2,
    },
    /// Controlled-phase gate `j`; `phase[x]` is the diagonal mode phase of
    /// branch `d_x` on both `q1` and `q2`, global phase removed.
    Phase {
        j: usize,
        q1: usize,
        q2: usize,
        phase: [Complex64; 2],
    },
}

/// A circuit lowered to row operations on a mode matrix.
#[derive(Clone, Debug)]
pub struct GateProgram {
    n: usize,
    k: usize,
    ops: Vec<Op>,
}

impl GateProgram {
    pub fn new(circuit: &Circuit) -> Self {
        let mut j = 0;
        let ops = circuit
            .gates()
            .iter()
            .map(|g| match *g {
                Gate::Matchgate { p, ref u } => Op::Block {
                    p,
                    u: gates::mode_block(&gates::matchgate_unitary(u)),
                },
                Gate::ControlledPhase { q1, q2, theta } => {
                    let (d0, d1) = gates::cphase_branches(theta);
                    let op = Op::Phase {
                        j,
                        q1,
                        q2,
                        phase: [gates::mode_block(&d0)[0][0], gates::mode_block(&d1)[0][0]],
                    };
                    j += 1;
                    op
                }
            })
            .collect();
        Self {
            n: circuit.n(),
            k: circuit.k(),
            ops,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Applies the trajectory's gate sequence to `v` in circuit order.
    #[inline]
    pub fn apply(&self, x: &Trajectory, v: &mut ModeMatrix) {
        debug_assert_eq!(x.len(), self.k);
        for op in &self.ops {
            match op {
                Op::Block { p, u } => v.apply_block(*p, u),
                Op::Phase { j, q1, q2, phase } => {
                    let ph = phase[x.get(*j) as usize];
                    v.scale_row(*q1, ph);
                    v.scale_row(*q2, ph);
                }
            }
        }
    }
}

/// `V(x)`: the mode transformation of the matchgate circuit obtained by
/// replacing each controlled-phase gate `j` with branch `d_{x_j}`.
pub fn mode_matrix(circuit: &Circuit, x: &Trajectory) -> Result<ModeMatrix> {
    if x.len() != circuit.k() {
        return Err(Error::DimensionMismatch {
            expected: circuit.k(),
            actual: x.len(),
        });
    }
    let mut v = ModeMatrix::identity(circuit.n());
    GateProgram::new(circuit).apply(x, &mut v);
    Ok(v)
}

/// `⟨b|V|a⟩`: determinant of `V` restricted to rows occupied in `b` and
/// columns occupied in `a`. Zero when the weights differ.
pub fn amplitude(v: &ModeMatrix, a: &BasisState, b: &BasisState) -> Result<Complex64> {
    for s in [a, b] {
        if s.n() != v.n() {
            return Err(Error::DimensionMismatch {
                expected: v.n(),
                actual: s.n(),
            });
        }
    }
    if a.weight() != b.weight() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut buf = Vec::new();
    v.gather(&b.occupied_vec(), &a.occupied_vec(), &mut buf);
    Ok(det_in_place(&mut buf, a.weight()))
}

/// Evaluates `⟨b|V(x)|a⟩` for many trajectories by propagating only the
/// columns of `V` selected by `a`.
#[derive(Clone, Debug)]
pub(crate) struct GenericEvaluator<'p> {
    program: &'p GateProgram,
    cols: Vec<usize>,
    rows: Vec<usize>,
}

pub(crate) struct GenericScratch {
    v: ModeMatrix,
    buf: Vec<Complex64>,
}

impl<'p> GenericEvaluator<'p> {
    pub fn new(program: &'p GateProgram, a: &BasisState, b: &BasisState) -> Self {
        debug_assert_eq!(a.weight(), b.weight());
        Self {
            program,
            cols: a.occupied_vec(),
            rows: b.occupied_vec(),
        }
    }

    pub fn scratch(&self) -> GenericScratch {
        GenericScratch {
            v: ModeMatrix::identity_columns(self.program.n(), &self.cols),
            buf: Vec::with_capacity(self.cols.len() * self.cols.len()),
        }
    }

    #[inline]
    pub fn amplitude(&self, x: &Trajectory, s: &mut GenericScratch) -> Complex64 {
        s.v.reset_identity_columns(&self.cols);
        self.program.apply(x, &mut s.v);
        s.v.gather_rows(&self.rows, &mut s.buf);
        det_in_place(&mut s.buf, self.cols.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitSet;
    use crate::gates::givens;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_circuit_gives_identity() {
        let circ = Circuit::new(BasisState::parse("101").unwrap(), vec![]).unwrap();
        let v = mode_matrix(&circ, &Trajectory::zeros(0)).unwrap();
        assert_eq!(v, ModeMatrix::identity(3));
    }

    #[test]
    fn single_cphase_branches() {
        let theta = 0.9;
        let circ = Circuit::new(
            BasisState::parse("1100").unwrap(),
            vec![Gate::cphase(1, 3, theta)],
        )
        .unwrap();
        let v0 = mode_matrix(&circ, &Trajectory::from_index(1, 0)).unwrap();
        let v1 = mode_matrix(&circ, &Trajectory::from_index(1, 1)).unwrap();
        let ph = Complex64::from_polar(1.0, theta / 2.0);
        for i in 0..4 {
            for j in 0..4 {
                let want0 = if i != j {
                    c(0.0, 0.0)
                } else if i == 1 || i == 3 {
                    ph
                } else {
                    c(1.0, 0.0)
                };
                assert!((v0.get(i, j) - want0).norm() < 1e-15);
                let sign = if i == j && (i == 1 || i == 3) {
                    -1.0
                } else {
                    1.0
                };
                assert_eq!(v1.get(i, j), v0.get(i, j) * sign);
            }
        }
        assert!(mode_matrix(&circ, &Trajectory::zeros(2)).is_err());
    }

    #[test]
    fn amplitude_examples() {
        let id = ModeMatrix::identity(4);
        let a = BasisState::parse("0011").unwrap();
        let b = BasisState::parse("0101").unwrap();
        assert_eq!(amplitude(&id, &a, &a).unwrap(), c(1.0, 0.0));
        assert_eq!(amplitude(&id, &a, &b).unwrap().norm(), 0.0);

        let phi = 0.37;
        let mut g = ModeMatrix::identity(2);
        g.apply_block(0, &givens(phi));
        let s = BasisState::parse("10").unwrap();
        assert!((amplitude(&g, &s, &s).unwrap() - c(phi.cos(), 0.0)).norm() < 1e-15);

        let other = BasisState::parse("11").unwrap();
        assert_eq!(amplitude(&g, &s, &other).unwrap(), c(0.0, 0.0));
        let wrong = BasisState::new(BitSet::zeros(3));
        assert!(amplitude(&g, &s, &wrong).is_err());
    }

    #[test]
    fn evaluator_matches_full_matrix() {
        let circ = Circuit::new(
            BasisState::parse("11010").unwrap(),
            vec![
                Gate::givens(0, 0.3),
                Gate::cphase(0, 4, 1.2),
                Gate::givens(3, -0.8),
                Gate::givens(1, 0.5),
                Gate::cphase(2, 3, -2.0),
                Gate::givens(2, 1.4),
            ],
        )
        .unwrap();
        let prog = GateProgram::new(&circ);
        let a = circ.initial().clone();
        let b = BasisState::parse("01101").unwrap();
        let ev = GenericEvaluator::new(&prog, &a, &b);
        let mut s = ev.scratch();
        for idx in 0..4 {
            let x = Trajectory::from_index(2, idx);
            let full = amplitude(&mode_matrix(&circ, &x).unwrap(), &a, &b).unwrap();
            assert_eq!(ev.amplitude(&x, &mut s), full);
        }
    }
}
