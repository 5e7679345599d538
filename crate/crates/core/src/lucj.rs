//! Fast path for circuits shaped as orbital rotation, diagonal
//! controlled-phase layer, orbital rotation.
//!
//! For such circuits every trajectory matrix factors as
//! `V(x) = V₃ (I − 2 Σ_{i∈N(x)} E_ii) V₁` with `V₃ = V₂ Π_j D₀(θ_j)`, where
//! `N(x)` is the set of modes touched an odd number of times by selected
//! `d₁` branches. Amplitudes therefore only depend on `N(x)` and are
//! memoized per `(N(x), target)`.

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use num_complex::Complex64;
use rustc_hash::{FxBuildHasher, FxHashMap};

use crate::bits::BitSet;
use crate::circuit::{BasisState, Circuit, Gate};
use crate::engine::Trajectory;
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{det_in_place, ModeMatrix};

#[derive(Clone, Debug)]
pub struct LucjStructure {
    /// Leading matchgate block.
    pub v1: ModeMatrix,
    /// Trailing matchgate block.
    pub v2: ModeMatrix,
    pub cp_pairs: Vec<(usize, usize)>,
    pub angles: Vec<f64>,
    /// Source state the memo table is scoped to.
    pub initial: BasisState,
}

/// Recognizes `[matchgate*] [cphase+] [matchgate*]` gate lists.
pub fn detect_lucj(circuit: &Circuit) -> Option<LucjStructure> {
    let gates = circuit.gates();
    let first_cp = gates.iter().position(Gate::is_cphase)?;
    let after = gates[first_cp..]
        .iter()
        .position(|g| !g.is_cphase())
        .map_or(gates.len(), |off| first_cp + off);
    if gates[after..].iter().any(Gate::is_cphase) {
        return None;
    }

    let block = |gs: &[Gate]| {
        let mut v = ModeMatrix::identity(circuit.n());
        for g in gs {
            if let Gate::Matchgate { p, u } = g {
                v.apply_block(*p, &gates::mode_block(&gates::matchgate_unitary(u)));
            }
        }
        v
    };
    let cp_pairs = gates[first_cp..after]
        .iter()
        .filter_map(|g| match *g {
            Gate::ControlledPhase { q1, q2, .. } => Some((q1, q2)),
            _ => None,
        })
        .collect();
    Some(LucjStructure {
        v1: block(&gates[..first_cp]),
        v2: block(&gates[after..]),
        cp_pairs,
        angles: circuit.angles().to_vec(),
        initial: circuit.initial().clone(),
    })
}

type MemoKey = (BitSet, BitSet);

pub struct LucjCache {
    n: usize,
    v3: ModeMatrix,
    v1: ModeMatrix,
    base: ModeMatrix,
    cp_pairs: Vec<(usize, usize)>,
    initial: BasisState,
    memo: DashMap<MemoKey, Complex64, FxBuildHasher>,
    hits: AtomicU64,
    misses: AtomicU64,
}

/// Precomputes `V₃`, the base matrix `V₃V₁`, and an empty memo table.
pub fn build_cache(structure: &LucjStructure) -> LucjCache {
    let n = structure.v1.n();
    // V₃ = V₂ · Π_j D₀(θ_j): scale the columns of V₂.
    let mut d0 = vec![Complex64::new(1.0, 0.0); n];
    for (&(q1, q2), &theta) in structure.cp_pairs.iter().zip(&structure.angles) {
        let (branch0, _) = gates::cphase_branches(theta);
        let ph = gates::mode_block(&branch0)[0][0];
        d0[q1] *= ph;
        d0[q2] *= ph;
    }
    let mut data = Vec::with_capacity(n * n);
    for r in 0..n {
        data.extend(structure.v2.row(r).iter().zip(&d0).map(|(z, p)| z * p));
    }
    let v3 = ModeMatrix::from_rows(n, data);
    let base = v3.matmul(&structure.v1);
    LucjCache {
        n,
        v3,
        v1: structure.v1.clone(),
        base,
        cp_pairs: structure.cp_pairs.clone(),
        initial: structure.initial.clone(),
        memo: DashMap::with_hasher(FxBuildHasher),
        hits: AtomicU64::new(0),
        misses: AtomicU64::new(0),
    }
}

#[derive(Default)]
pub(crate) struct LucjScratch {
    negated: Option<BitSet>,
    // Front cache for the prepared (a, b); avoids the shared table on repeats.
    local: FxHashMap<BitSet, Complex64>,
    hits: u64,
    // (a, b) the gathered slices below belong to.
    prepared: Option<(BitSet, BitSet)>,
    h: usize,
    base: Vec<Complex64>,
    // Block i: −2·V₃[R, i] ⊗ V₁[i, C], h×h row-major.
    updates: Vec<Complex64>,
    buf: Vec<Complex64>,
}

impl LucjScratch {
    fn prepare(&mut self, cache: &LucjCache, a: &BasisState, b: &BasisState) {
        if let Some((pa, pb)) = &self.prepared {
            if pa == a.bits() && pb == b.bits() {
                return;
            }
        }
        let rows = b.occupied_vec();
        let cols = a.occupied_vec();
        let h = cols.len();
        cache.base.gather(&rows, &cols, &mut self.base);
        self.updates.clear();
        for i in 0..cache.n {
            let v1_row = cache.v1.row(i);
            for &r in &rows {
                let l = -2.0 * cache.v3.get(r, i);
                self.updates.extend(cols.iter().map(|&c| l * v1_row[c]));
            }
        }
        self.h = h;
        self.local.clear();
        self.prepared = Some((a.bits().clone(), b.bits().clone()));
    }
}

impl LucjCache {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `V₃V₁`.
    pub fn base(&self) -> &ModeMatrix {
        &self.base
    }

    /// `C_i = V₃ E_ii V₁` materialized as a dense matrix.
    pub fn correction(&self, i: usize) -> ModeMatrix {
        let mut data = Vec::with_capacity(self.n * self.n);
        for r in 0..self.n {
            let left = self.v3.get(r, i);
            data.extend(self.v1.row(i).iter().map(|z| left * z));
        }
        ModeMatrix::from_rows(self.n, data)
    }

    /// `N(x)`: modes whose diagonal sign is flipped by the trajectory.
    pub fn negated_modes(&self, x: &Trajectory) -> BitSet {
        let mut out = BitSet::zeros(self.n);
        self.negated_into(x, &mut out);
        out
    }

    #[inline]
    fn negated_into(&self, x: &Trajectory, out: &mut BitSet) {
        out.clear();
        for j in x.bits().ones() {
            let (q1, q2) = self.cp_pairs[j];
            out.toggle(q1);
            out.toggle(q2);
        }
    }

    /// `base − 2 Σ_{i∈N} C_i`.
    pub fn trajectory_matrix(&self, x: &Trajectory) -> ModeMatrix {
        let negated = self.negated_modes(x);
        let mut m = self.base.clone();
        for i in negated.ones() {
            let c = self.correction(i);
            let data: Vec<Complex64> = (0..self.n)
                .flat_map(|r| (0..self.n).map(move |col| (r, col)))
                .map(|(r, col)| m.get(r, col) - 2.0 * c.get(r, col))
                .collect();
            m = ModeMatrix::from_rows(self.n, data);
        }
        m
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear_memo(&self) {
        self.memo.clear();
        self.hits.store(0, Ordering::Relaxed);
        self.misses.store(0, Ordering::Relaxed);
    }

    /// `⟨b|V(x)|a⟩`, memoized when `a` is the circuit's initial state.
    pub fn fast_amplitude(
        &self,
        x: &Trajectory,
        a: &BasisState,
        b: &BasisState,
    ) -> Result<Complex64> {
        for s in [a, b] {
            if s.n() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    actual: s.n(),
                });
            }
        }
        if x.len() != self.cp_pairs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cp_pairs.len(),
                actual: x.len(),
            });
        }
        if a.weight() != b.weight() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut scratch = LucjScratch::default();
        if *a != self.initial {
            let negated = self.negated_modes(x);
            return Ok(self.evaluate(&negated, a, b, &mut scratch));
        }
        let z = self.amplitude_with(x, a, b, &mut scratch);
        self.flush(&mut scratch);
        Ok(z)
    }

    /// Memo lookup keyed by `(N(x), b)`; `a` must be the initial state.
    #[inline]
    pub(crate) fn amplitude_with(
        &self,
        x: &Trajectory,
        a: &BasisState,
        b: &BasisState,
        s: &mut LucjScratch,
    ) -> Complex64 {
        s.prepare(self, a, b);
        let mut negated = s.negated.take().unwrap_or_else(|| BitSet::zeros(self.n));
        self.negated_into(x, &mut negated);
        if let Some(&z) = s.local.get(&negated) {
            s.hits += 1;
            s.negated = Some(negated);
            return z;
        }
        let key = (negated, b.bits().clone());
        let z = match self.memo.get(&key) {
            Some(z) => {
                s.hits += 1;
                *z
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                let z = self.evaluate(&key.0, a, b, s);
                self.memo.insert(key.clone(), z);
                z
            }
        };
        s.local.insert(key.0, z);
        z
    }

    /// Publishes the hit count gathered in `s`.
    pub(crate) fn flush(&self, s: &mut LucjScratch) {
        self.hits
            .fetch_add(std::mem::take(&mut s.hits), Ordering::Relaxed);
    }

    fn evaluate(
        &self,
        negated: &BitSet,
        a: &BasisState,
        b: &BasisState,
        s: &mut LucjScratch,
    ) -> Complex64 {
        s.prepare(self, a, b);
        let h = s.h;
        let hh = h * h;
        s.buf.clear();
        s.buf.extend_from_slice(&s.base);
        let mut add = |i: usize| {
            for (o, &u) in s.buf.iter_mut().zip(&s.updates[i * hh..(i + 1) * hh]) {
                *o += u;
            }
        };
        // The corrections sum to −2·base, so base + Σ_N = −(base + Σ_{not N}).
        let flip = 2 * negated.count_ones() > self.n;
        if flip {
            (0..self.n).filter(|&i| !negated.get(i)).for_each(&mut add);
        } else {
            negated.ones().for_each(&mut add);
        }
        let d = det_in_place(&mut s.buf, h);
        if flip && h % 2 == 1 {
            -d
        } else {
            d
        }
    }
}
