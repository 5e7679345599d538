//! Two-mode gate unitaries in the qubit picture.
//!
//! These constructors are the single source of gate conventions: the dense
//! oracle applies the 4×4 matrices directly, while the trajectory engine
//! derives its mode-space blocks and branch phases from them via
//! [`mode_block`].
//!
//! Basis ordering of every 4×4 matrix is little-endian over the two modes
//! `(lo, hi)`: index 0 = `|00⟩`, 1 = lo occupied, 2 = hi occupied, 3 = both.

use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = [[C64; 2]; 2];
pub type Mat4 = [[C64; 4]; 4];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub fn det2(u: &Mat2) -> C64 {
    u[0][0] * u[1][1] - u[0][1] * u[1][0]
}

/// Max-norm of `u†u − I`.
pub fn unitarity_deviation(u: &Mat2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut s: C64 = u.iter().map(|row| row[i].conj() * row[j]).sum();
            if i == j {
                s -= ONE;
            }
            worst = worst.max(s.norm());
        }
    }
    worst
}

/// Full unitary of a passive matchgate with single-particle block `u`.
/// The vacuum is fixed and the doubly-occupied state picks up `det(u)`.
pub fn matchgate_unitary(u: &Mat2) -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][1] = u[0][0];
    m[1][2] = u[0][1];
    m[2][1] = u[1][0];
    m[2][2] = u[1][1];
    m[3][3] = det2(u);
    m
}

/// `diag(1, 1, 1, e^{iθ})`.
pub fn cphase_unitary(theta: f64) -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][1] = ONE;
    m[2][2] = ONE;
    m[3][3] = C64::from_polar(1.0, theta);
    m
}

/// The two matchgate branches `d₀(θ)`, `d₁(θ)` with
/// `cphase(θ) = e^{iθ/4} [cos(θ/4) d₀ + i sin(θ/4) d₁]`.
pub fn cphase_branches(theta: f64) -> (Mat4, Mat4) {
    let lo = C64::from_polar(1.0, -theta / 2.0);
    let hi = C64::from_polar(1.0, theta / 2.0);
    let mut d0 = [[ZERO; 4]; 4];
    let mut d1 = [[ZERO; 4]; 4];
    d0[0][0] = lo;
    d0[1][1] = ONE;
    d0[2][2] = ONE;
    d0[3][3] = hi;
    d1[0][0] = lo;
    d1[1][1] = -ONE;
    d1[2][2] = -ONE;
    d1[3][3] = hi;
    (d0, d1)
}

/// Single-particle block of a passive two-mode gate with the global phase
/// removed, so that the vacuum amplitude becomes 1.
pub fn mode_block(m: &Mat4) -> Mat2 {
    let vac = m[0][0];
    [
        [m[1][1] / vac, m[1][2] / vac],
        [m[2][1] / vac, m[2][2] / vac],
    ]
}

pub fn givens(phi: f64) -> Mat2 {
    let (s, c) = phi.sin_cos();
    [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ]
}
