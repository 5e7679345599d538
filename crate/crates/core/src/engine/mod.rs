//! Trajectory sampling and the three probability algorithms.
//!
//! Every controlled-phase gate splits as
//! `c(θ) ∝ cos(θ/4) d₀(θ) + i sin(θ/4) d₁(θ)` with both branches passive
//! matchgates, so `⟨b|Q|a⟩ = Σ_x w(x) ⟨b|V(x)|a⟩` up to a global phase.
//! [`Simulator::exact`] enumerates that sum; [`Simulator::raw_estimate`]
//! samples it with importance weights `|w(x)|/√ξ*`; and
//! [`Simulator::estimate`] repeats raw estimates with doubling trajectory
//! counts until the requested additive error is certified.
//!
//! Trajectories are evaluated in fixed-size chunks, each drawing from its
//! own [`StreamId`]. Chunk sums are reduced in ascending order, so results
//! are bit-identical for any worker count.

mod program;
mod rng;
mod sampler;

pub use program::{amplitude, mode_matrix, GateProgram};
pub use rng::StreamId;
pub use sampler::{
    sample_trajectory, sample_trajectory_into, trajectory_phase, SamplerTables, Trajectory,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{epsilon_from_count, extent, trajectory_count, BasisState, Circuit};
use crate::error::{Error, Result};
use crate::lucj::{build_cache, detect_lucj, LucjCache, LucjScratch};
use program::{GenericEvaluator, GenericScratch};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    /// Trajectories per RNG stream and per reduction unit.
    pub chunk_size: usize,
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
    /// Largest number of random branches [`Simulator::exact`] will enumerate.
    pub exact_cap: usize,
    /// Refinement rounds [`Simulator::estimate`] may run before giving up.
    pub max_rounds: u32,
    /// Use the LUCJ factorization when the circuit has that shape.
    pub lucj_fastpath: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            chunk_size: 1024,
            threads: 0,
            exact_cap: 24,
            max_rounds: 64,
            lucj_fastpath: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateResult {
    pub probability: f64,
    /// `|α|` for sampled results, `|Σ_x w(x)⟨b|V(x)|a⟩|` for exact ones.
    pub amplitude_accumulator_magnitude: f64,
    pub trajectories_used: u64,
    pub extent: f64,
    pub seed: u64,
    pub achieved_epsilon: Option<f64>,
    pub failure_probability: Option<f64>,
    /// Refinement rounds run by the adaptive estimator.
    pub rounds: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// Fixed trajectory count.
    Raw {
        trajectories: u64,
    },
    /// Iterative refinement to additive error `epsilon` with failure
    /// probability at most `delta`.
    Adaptive {
        epsilon: f64,
        delta: f64,
    },
    Exact,
}

enum Evaluator<'a> {
    Generic(GenericEvaluator<'a>),
    Lucj {
        cache: &'a LucjCache,
        a: &'a BasisState,
        b: &'a BasisState,
    },
}

enum Scratch {
    Generic(GenericScratch),
    Lucj(LucjScratch),
}

impl Evaluator<'_> {
    fn scratch(&self) -> Scratch {
        match self {
            Evaluator::Generic(g) => Scratch::Generic(g.scratch()),
            Evaluator::Lucj { .. } => Scratch::Lucj(LucjScratch::default()),
        }
    }

    #[inline]
    fn amplitude(&self, x: &Trajectory, s: &mut Scratch) -> Complex64 {
        match (self, s) {
            (Evaluator::Generic(g), Scratch::Generic(s)) => g.amplitude(x, s),
            (Evaluator::Lucj { cache, a, b }, Scratch::Lucj(s)) => cache.amplitude_with(x, a, b, s),
            _ => unreachable!("scratch built by a different evaluator"),
        }
    }

    fn finish(&self, s: &mut Scratch) {
        if let (Evaluator::Lucj { cache, .. }, Scratch::Lucj(s)) = (self, s) {
            cache.flush(s);
        }
    }
}

/// A circuit prepared for repeated probability evaluation.
pub struct Simulator<'c> {
    circuit: &'c Circuit,
    config: EngineConfig,
    tables: SamplerTables,
    program: GateProgram,
    extent: f64,
    lucj: Option<LucjCache>,
}

impl<'c> Simulator<'c> {
    pub fn new(circuit: &'c Circuit) -> Self {
        Self::with_config(circuit, EngineConfig::default())
    }

    pub fn with_config(circuit: &'c Circuit, config: EngineConfig) -> Self {
        let lucj = if config.lucj_fastpath {
            detect_lucj(circuit).map(|s| build_cache(&s))
        } else {
            None
        };
        Self {
            circuit,
            tables: SamplerTables::new(circuit),
            program: GateProgram::new(circuit),
            extent: extent(circuit).extent,
            lucj,
            config,
        }
    }

    pub fn circuit(&self) -> &Circuit {
        self.circuit
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn tables(&self) -> &SamplerTables {
        &self.tables
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// The LUCJ cache, when the fast path is active for this circuit.
    pub fn lucj_cache(&self) -> Option<&LucjCache> {
        self.lucj.as_ref()
    }

    fn evaluator<'a>(&'a self, b: &'a BasisState) -> Evaluator<'a> {
        let a = self.circuit.initial();
        match &self.lucj {
            Some(cache) => Evaluator::Lucj { cache, a, b },
            None => Evaluator::Generic(GenericEvaluator::new(&self.program, a, b)),
        }
    }

    /// Runs `f` on this simulator's worker pool.
    fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        if self.config.threads == 0 {
            return f();
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.threads)
            .build()
            .expect("failed to build worker pool")
            .install(f)
    }

    /// `α = Σ_{s=1}^{t} i^{|x_s|} (−1)^{|m∧x_s|} ⟨b|V(x_s)|a⟩` over `t` sampled
    /// trajectories drawn from the streams `(seed, item, round, ·)`.
    fn accumulate(&self, b: &BasisState, t: u64, seed: u64, item: u64, round: u64) -> Complex64 {
        let chunk = self.config.chunk_size.max(1) as u64;
        let n_chunks = t.div_ceil(chunk);
        let eval = self.evaluator(b);
        let partials: Vec<Complex64> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = StreamId {
                    seed,
                    item,
                    round,
                    chunk: c,
                }
                .rng();
                let count = chunk.min(t - c * chunk);
                let mut scratch = eval.scratch();
                let mut x = Trajectory::zeros(self.tables.k());
                let mut acc = ZERO;
                for _ in 0..count {
                    sample_trajectory_into(&self.tables, &mut rng, &mut x);
                    let z = eval.amplitude(&x, &mut scratch);
                    acc += trajectory_phase(&self.tables, &x) * z;
                }
                eval.finish(&mut scratch);
                acc
            })
            .collect();
        partials.into_iter().fold(ZERO, |a, z| a + z)
    }

    /// The raw accumulator `α` for target `b`, as used by
    /// [`Simulator::raw_estimate`]. `α·√ξ*/t` is an unbiased estimate of
    /// the trajectory-sum amplitude.
    pub fn raw_accumulator(&self, b: &BasisState, t: u64, seed: u64) -> Result<Complex64> {
        self.circuit.check_target(b)?;
        if t == 0 {
            return Err(Error::domain("t", "trajectory count must be positive"));
        }
        if b.weight() != self.circuit.initial().weight() {
            return Ok(ZERO);
        }
        Ok(self.install(|| self.accumulate(b, t, seed, 0, 0)))
    }

    fn raw_item(
        &self,
        b: &BasisState,
        t: u64,
        seed: u64,
        item: u64,
        round: u64,
    ) -> Result<EstimateResult> {
        self.circuit.check_target(b)?;
        if t == 0 {
            return Err(Error::domain("t", "trajectory count must be positive"));
        }
        let alpha = if b.weight() == self.circuit.initial().weight() {
            self.accumulate(b, t, seed, item, round)
        } else {
            ZERO
        };
        let tf = t as f64;
        Ok(EstimateResult {
            probability: self.extent / (tf * tf) * alpha.norm_sqr(),
            amplitude_accumulator_magnitude: alpha.norm(),
            trajectories_used: t,
            extent: self.extent,
            seed,
            achieved_epsilon: None,
            failure_probability: None,
            rounds: None,
        })
    }

    /// Monte Carlo estimate `p̂ = ξ*/t² |α|²` from `t` trajectories.
    pub fn raw_estimate(&self, b: &BasisState, t: u64, seed: u64) -> Result<EstimateResult> {
        self.install(|| self.raw_item(b, t, seed, 0, 0))
    }

    fn exact_amplitude(&self, b: &BasisState) -> Result<(Complex64, u64)> {
        self.circuit.check_target(b)?;
        let active = self.tables.active_gates();
        if active.len() > self.config.exact_cap {
            return Err(Error::ExactCapExceeded {
                k: active.len(),
                cap: self.config.exact_cap,
            });
        }
        let total = 1u64 << active.len();
        if b.weight() != self.circuit.initial().weight() {
            return Ok((ZERO, total));
        }
        let k = self.tables.k();
        let chunk = self.config.chunk_size.max(1) as u64;
        let eval = self.evaluator(b);
        let partials: Vec<Complex64> = (0..total.div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let mut scratch = eval.scratch();
                let mut acc = ZERO;
                for idx in c * chunk..(c * chunk + chunk).min(total) {
                    let x = Trajectory::from_bits(crate::bits::BitSet::from_indices(
                        k,
                        active
                            .iter()
                            .enumerate()
                            .filter(|&(bit, _)| (idx >> bit) & 1 == 1)
                            .map(|(_, &j)| j),
                    ));
                    acc += self.tables.weight(&x) * eval.amplitude(&x, &mut scratch);
                }
                eval.finish(&mut scratch);
                acc
            })
            .collect();
        Ok((partials.into_iter().fold(ZERO, |a, z| a + z), total))
    }

    /// `|Σ_x w(x) ⟨b|V(x)|a⟩|²` over all trajectories. Gates with `θ = 0`
    /// have zero weight on `d₁` and are not enumerated.
    pub fn exact(&self, b: &BasisState) -> Result<f64> {
        Ok(self.install(|| self.exact_amplitude(b))?.0.norm_sqr())
    }

    fn exact_result(&self, b: &BasisState, seed: u64) -> Result<EstimateResult> {
        let (amp, total) = self.exact_amplitude(b)?;
        Ok(EstimateResult {
            probability: amp.norm_sqr(),
            amplitude_accumulator_magnitude: amp.norm(),
            trajectories_used: total,
            extent: self.extent,
            seed,
            achieved_epsilon: None,
            failure_probability: None,
            rounds: None,
        })
    }

    fn estimate_item(
        &self,
        b: &BasisState,
        epsilon: f64,
        delta: f64,
        seed: u64,
        item: u64,
    ) -> Result<EstimateResult> {
        self.circuit.check_target(b)?;
        // Validates ε and δ.
        trajectory_count(epsilon, delta, 1.0, self.extent)?;

        if self.tables.active_gates().is_empty() {
            // Every trajectory is the same matchgate circuit: one sample is exact.
            let mut r = self.raw_item(b, 1, seed, item, 1)?;
            r.achieved_epsilon = Some(0.0);
            r.failure_probability = Some(0.0);
            r.rounds = Some(1);
            return Ok(r);
        }

        let delta_round = |r: u32| 6.0 * delta / (PI * PI * f64::from(r * r));
        let mut p_star = 1.0_f64;
        let mut round = 1u32;
        let mut t = trajectory_count(1.0, delta_round(1), p_star, self.extent)?;
        let mut e_star = epsilon_from_count(t, delta_round(1), p_star, self.extent)?;
        let mut spent = 0.0;
        loop {
            let mut r = self.raw_item(b, t, seed, item, u64::from(round))?;
            spent += delta_round(round);
            if e_star <= epsilon {
                r.achieved_epsilon = Some(e_star);
                r.failure_probability = Some(spent);
                r.rounds = Some(round);
                return Ok(r);
            }
            p_star = (r.probability + e_star).min(p_star).clamp(0.0, 1.0);
            round += 1;
            if round > self.config.max_rounds {
                return Err(Error::PrecisionUnreachable {
                    rounds: self.config.max_rounds,
                    achieved: e_star,
                });
            }
            t = t.checked_mul(2).ok_or(Error::PrecisionUnreachable {
                rounds: round - 1,
                achieved: e_star,
            })?;
            e_star = epsilon_from_count(t, delta_round(round), p_star, self.extent)?;
        }
    }

    /// Adaptive estimate with certified additive error `epsilon` and failure
    /// probability at most `delta`.
    pub fn estimate(
        &self,
        b: &BasisState,
        epsilon: f64,
        delta: f64,
        seed: u64,
    ) -> Result<EstimateResult> {
        self.install(|| self.estimate_item(b, epsilon, delta, seed, 0))
    }

    fn run_item(&self, b: &BasisState, mode: Mode, seed: u64, item: u64) -> Result<EstimateResult> {
        match mode {
            Mode::Raw { trajectories } => self.raw_item(b, trajectories, seed, item, 0),
            Mode::Adaptive { epsilon, delta } => self.estimate_item(b, epsilon, delta, seed, item),
            Mode::Exact => self.exact_result(b, seed),
        }
    }

    /// Evaluates every bitstring; item `i` uses the random streams of item
    /// index `i`. Output order matches input order.
    pub fn batch(
        &self,
        bitstrings: &[BasisState],
        mode: Mode,
        seed: u64,
    ) -> Result<Vec<EstimateResult>> {
        self.install(|| {
            bitstrings
                .par_iter()
                .enumerate()
                .map(|(i, b)| {
                    self.run_item(b, mode, seed, i as u64)
                        .map_err(|e| Error::Item {
                            index: i,
                            source: Box::new(e),
                        })
                })
                .collect()
        })
    }
}

pub fn raw_estimate(
    circuit: &Circuit,
    b: &BasisState,
    t: u64,
    seed: u64,
) -> Result<EstimateResult> {
    Simulator::new(circuit).raw_estimate(b, t, seed)
}

pub fn exact(circuit: &Circuit, b: &BasisState) -> Result<f64> {
    Simulator::new(circuit).exact(b)
}

pub fn estimate(
    circuit: &Circuit,
    b: &BasisState,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateResult> {
    Simulator::new(circuit).estimate(b, epsilon, delta, seed)
}

pub fn batch_estimate(
    circuit: &Circuit,
    bitstrings: &[BasisState],
    mode: Mode,
    seed: u64,
    config: EngineConfig,
) -> Result<Vec<EstimateResult>> {
    Simulator::with_config(circuit, config).batch(bitstrings, mode, seed)
}
