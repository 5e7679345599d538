//! Extent and trajectory-count bounds.

use super::Circuit;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ExtentReport {
    /// Product of the per-gate factors; 1 for circuits without phases.
    pub extent: f64,
    /// `(cos(|θ|/4) + sin(|θ|/4))²` per controlled-phase gate, in circuit order.
    pub per_gate_factors: Vec<f64>,
}

#[inline]
pub(crate) fn extent_factor(theta: f64) -> f64 {
    let (s, c) = (theta.abs() / 4.0).sin_cos();
    let r = c + s;
    r * r
}

pub fn extent(circuit: &Circuit) -> ExtentReport {
    let per_gate_factors: Vec<f64> = circuit.angles().iter().map(|&t| extent_factor(t)).collect();
    let extent = per_gate_factors.iter().product();
    ExtentReport {
        extent,
        per_gate_factors,
    }
}

fn check_common(delta: f64, p_max: f64, extent: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("delta", format!("{delta} not in (0, 1)")));
    }
    if !(p_max > 0.0 && p_max <= 1.0) {
        return Err(Error::domain("p_max", format!("{p_max} not in (0, 1]")));
    }
    if !extent.is_finite() || extent < 1.0 {
        return Err(Error::domain("extent", format!("{extent} is below 1")));
    }
    Ok(())
}

/// `ln(2e²/δ)`.
#[inline]
fn log_term(delta: f64) -> f64 {
    std::f64::consts::LN_2 + 2.0 - delta.ln()
}

/// Number of trajectories sufficient for additive error `epsilon` with
/// failure probability `delta`, given an upper bound `p_max` on the target
/// probability and the circuit extent.
pub fn trajectory_count(epsilon: f64, delta: f64, p_max: f64, extent: f64) -> Result<u64> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::domain(
            "epsilon",
            format!("{epsilon} must be positive"),
        ));
    }
    check_common(delta, p_max, extent)?;
    let sp = p_max.sqrt();
    let num = extent.sqrt() + sp;
    // √(p+ε) − √p without cancellation.
    let gap = epsilon / ((p_max + epsilon).sqrt() + sp);
    let t = 2.0 * (num * num) / (gap * gap) * log_term(delta);
    if t.is_nan() || t >= u64::MAX as f64 {
        return Err(Error::domain(
            "epsilon",
            format!("trajectory count {t:e} overflows"),
        ));
    }
    Ok((t.ceil() as u64).max(1))
}

/// Smallest additive error guaranteed by `t` trajectories; the inverse of
/// [`trajectory_count`].
pub fn epsilon_from_count(t: u64, delta: f64, p_max: f64, extent: f64) -> Result<f64> {
    if t == 0 {
        return Err(Error::domain("t", "trajectory count must be positive"));
    }
    check_common(delta, p_max, extent)?;
    let sp = p_max.sqrt();
    let c = (extent.sqrt() + sp) * (2.0 * log_term(delta) / t as f64).sqrt();
    // (√p + c)² − p
    let mut eps = c * (c + 2.0 * sp);
    // Rounding can leave the forward count one above t; nudge until it fits.
    for _ in 0..8 {
        match trajectory_count(eps, delta, p_max, extent) {
            Ok(fwd) if fwd > t => eps *= 1.0 + 4.0 * f64::EPSILON,
            _ => break,
        }
    }
    Ok(eps)
}
