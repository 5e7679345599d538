//! Mode transformation matrices and complex determinants.

use num_complex::Complex64;

use crate::gates::Mat2;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single-particle mode transformation `V`, stored row-major.
///
/// Column `j` is the image of mode `j`. Applying gates left-multiplies, so
/// a gate sequence `g₁, …, g_m` yields `V = G_m ⋯ G₁`. The matrix may hold
/// a subset of the columns of the full transformation (see
/// [`ModeMatrix::identity_columns`]); all row operations act identically.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ModeMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = ONE;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    /// The columns `cols` of the `n × n` identity, as an `n × cols.len()` matrix.
    pub fn identity_columns(n: usize, cols: &[usize]) -> Self {
        let w = cols.len();
        let mut data = vec![ZERO; n * w];
        for (j, &c) in cols.iter().enumerate() {
            data[c * w + j] = ONE;
        }
        Self {
            rows: n,
            cols: w,
            data,
        }
    }

    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n);
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Number of rows (modes).
    #[inline]
    pub fn n(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn reset_identity_columns(&mut self, cols: &[usize]) {
        debug_assert_eq!(cols.len(), self.cols);
        self.data.iter_mut().for_each(|z| *z = ZERO);
        let w = self.cols;
        for (j, &c) in cols.iter().enumerate() {
            self.data[c * w + j] = ONE;
        }
    }

    /// `V ← G V` for a two-mode block on rows `(p, p + 1)`.
    #[inline]
    pub fn apply_block(&mut self, p: usize, u: &Mat2) {
        let w = self.cols;
        let (head, tail) = self.data.split_at_mut((p + 1) * w);
        let lo = &mut head[p * w..];
        let hi = &mut tail[..w];
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = u[0][0] * x + u[0][1] * y;
            *b = u[1][0] * x + u[1][1] * y;
        }
    }

    /// `V ← diag(…, phase at q, …) V`.
    #[inline]
    pub fn scale_row(&mut self, q: usize, phase: Complex64) {
        let w = self.cols;
        self.data[q * w..(q + 1) * w]
            .iter_mut()
            .for_each(|z| *z *= phase);
    }

    pub fn matmul(&self, rhs: &ModeMatrix) -> ModeMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut data = vec![ZERO; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let out = &mut data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        ModeMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    /// Max-norm of `V†V − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.cols {
            for j in 0..self.cols {
                let mut s = ZERO;
                for r in 0..self.rows {
                    s += self.get(r, i).conj() * self.get(r, j);
                }
                if i == j {
                    s -= ONE;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// Gathers `V[rows, cols]` into `buf` (row-major, `rows.len()²` entries).
    #[inline]
    pub fn gather(&self, rows: &[usize], cols: &[usize], buf: &mut Vec<Complex64>) {
        buf.clear();
        for &r in rows {
            let row = self.row(r);
            buf.extend(cols.iter().map(|&c| row[c]));
        }
    }

    /// Gathers whole rows; used when the matrix already holds only the
    /// wanted columns.
    #[inline]
    pub fn gather_rows(&self, rows: &[usize], buf: &mut Vec<Complex64>) {
        buf.clear();
        for &r in rows {
            buf.extend_from_slice(self.row(r));
        }
    }
}

/// Determinant of the `h × h` row-major matrix in `a` by LU factorization
/// with partial pivoting. `a` is overwritten.
pub fn det_in_place(a: &mut [Complex64], h: usize) -> Complex64 {
    debug_assert_eq!(a.len(), h * h);
    let mut det = ONE;
    for col in 0..h {
        let mut piv = col;
        let mut best = a[col * h + col].norm_sqr();
        for r in col + 1..h {
            let m = a[r * h + col].norm_sqr();
            if m > best {
                best = m;
                piv = r;
            }
        }
        if best == 0.0 {
            return ZERO;
        }
        if piv != col {
            let (upper, lower) = a.split_at_mut(piv * h);
            upper[col * h + col..col * h + h].swap_with_slice(&mut lower[col..h]);
            det = -det;
        }
        let pivot = a[col * h + col];
        det *= pivot;
        let inv = pivot.inv();
        let (upper, lower) = a.split_at_mut((col + 1) * h);
        let pivot_row = &upper[col * h + col + 1..];
        for row in lower.chunks_exact_mut(h) {
            let f = row[col] * inv;
            if f == ZERO {
                continue;
            }
            for (x, &v) in row[col + 1..].iter_mut().zip(pivot_row) {
                *x -= f * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::givens;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Leibniz expansion.
    fn det_permutations(a: &[Complex64], h: usize) -> Complex64 {
        fn rec(
            a: &[Complex64],
            h: usize,
            row: usize,
            used: &mut Vec<bool>,
            sign: f64,
        ) -> Complex64 {
            if row == h {
                return Complex64::new(sign, 0.0);
            }
            let mut acc = ZERO;
            let mut inversions_before = 0;
            for c in 0..h {
                if used[c] {
                    continue;
                }
                // Sign flips by the number of unused columns to the left of c.
                let s = if inversions_before % 2 == 0 {
                    sign
                } else {
                    -sign
                };
                used[c] = true;
                acc += a[row * h + c] * rec(a, h, row + 1, used, s);
                used[c] = false;
                inversions_before += 1;
            }
            acc
        }
        rec(a, h, 0, &mut vec![false; h], 1.0)
    }

    #[test]
    fn lu_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for h in 0..=6 {
            for _ in 0..20 {
                let a: Vec<Complex64> = (0..h * h)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let want = det_permutations(&a, h);
                let mut buf = a.clone();
                let got = det_in_place(&mut buf, h);
                assert!((got - want).norm() < 1e-12, "h={h}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn singular_and_permutation() {
        let mut a = vec![ZERO, ONE, ONE, ZERO];
        assert_eq!(det_in_place(&mut a, 2), -ONE);
        let mut z = vec![ONE, ONE, ONE, ONE];
        assert_eq!(det_in_place(&mut z, 2).norm(), 0.0);
    }

    #[test]
    fn block_application_is_left_multiplication() {
        let mut v = ModeMatrix::identity(4);
        v.apply_block(1, &givens(0.3));
        v.apply_block(0, &givens(-0.7));
        let mut g1 = ModeMatrix::identity(4);
        g1.apply_block(1, &givens(0.3));
        let mut g2 = ModeMatrix::identity(4);
        g2.apply_block(0, &givens(-0.7));
        let prod = g2.matmul(&g1);
        for i in 0..4 {
            for j in 0..4 {
                assert!((prod.get(i, j) - v.get(i, j)).norm() < 1e-15);
            }
        }
        assert!(v.unitarity_deviation() < 1e-14);
    }

    #[test]
    fn column_subset_tracks_full_matrix() {
        let mut full = ModeMatrix::identity(5);
        let cols = [1, 3];
        let mut part = ModeMatrix::identity_columns(5, &cols);
        for (p, phi) in [(0, 0.4), (2, 1.1), (3, -0.2), (1, 0.9)] {
            full.apply_block(p, &givens(phi));
            part.apply_block(p, &givens(phi));
        }
        full.scale_row(2, Complex64::from_polar(1.0, 0.3));
        part.scale_row(2, Complex64::from_polar(1.0, 0.3));
        for r in 0..5 {
            for (j, &c) in cols.iter().enumerate() {
                assert_eq!(full.get(r, c), part.get(r, j));
            }
        }
    }
}
