//! Fidelity, success probability, decay-factor fits and parameter sweeps.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cavity::{
    chiral_reflection, spin_dependent_reflection, CavityError, CavityParams, ChiralParams,
};
use crate::gates::{chiral_phase_fix, u_cr, u_rf, Gate2Q};
use crate::lattice::{LatticeDims, LatticeError};
use crate::tensornet::{
    ideal_gates, inner_product, overlap_profile, protocol_gates, SequentialMps, TensorNetError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("generated state has zero norm")]
    ZeroNorm,
    #[error("fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("fidelity at K = {k} is not positive ({value})")]
    NonPositive { k: usize, value: f64 },
    #[error("invalid error model: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Cavity(#[from] CavityError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    TensorNet(#[from] TensorNetError),
}

/// Classical spin-error and loss model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrorModel {
    /// Depolarization probability per cycle.
    pub p: f64,
    /// Spin dephasing time (ns); may be infinite.
    #[serde(serialize_with = "serialize_time")]
    pub t2: f64,
    /// Photon injection period (ns).
    pub t_cycle: f64,
    /// Per-photon collection efficiency.
    pub eta: f64,
}

/// Infinite times are written as `"inf"`.
fn serialize_time<S: serde::Serializer>(t: &f64, s: S) -> Result<S::Ok, S::Error> {
    if t.is_infinite() {
        s.serialize_str(if *t > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*t)
    }
}

impl Default for ErrorModel {
    fn default() -> Self {
        Self::quantum_dot()
    }
}

impl ErrorModel {
    pub fn new(p: f64, t2: f64, t_cycle: f64, eta: f64) -> Result<Self, MetricsError> {
        let model = Self {
            p,
            t2,
            t_cycle,
            eta,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        let bad = |msg: String| Err(MetricsError::InvalidModel(msg));
        if !(0.0..=1.0).contains(&self.p) {
            return bad(format!("p = {} outside [0, 1]", self.p));
        }
        if !(self.t_cycle.is_finite() && self.t_cycle > 0.0) {
            return bad(format!("t_cycle = {} must be finite and > 0", self.t_cycle));
        }
        if self.t2.is_nan() || self.t2 <= self.t_cycle {
            return bad(format!(
                "t2 = {} must exceed t_cycle = {}",
                self.t2, self.t_cycle
            ));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return bad(format!("eta = {} outside [0, 1]", self.eta));
        }
        Ok(())
    }

    /// Quantum-dot values: 98% rotation fidelity, T₂ = 2 μs, 5 ns cycle,
    /// 80% collection.
    pub fn quantum_dot() -> Self {
        Self {
            p: 0.02,
            t2: 2000.0,
            t_cycle: 5.0,
            eta: 0.8,
        }
    }

    /// Chiral-coupling values: p = 0.001, T₂ = 5 μs, 5 ns cycle.
    pub fn chiral() -> Self {
        Self {
            p: 0.001,
            t2: 5000.0,
            t_cycle: 5.0,
            eta: 0.8,
        }
    }

    /// A single per-cycle spin error `s` expressed as `p = 2s` with no
    /// dephasing, so that `α = 1 - s`.
    pub fn with_spin_error(&self, s: f64) -> Result<Self, MetricsError> {
        Self::new(2.0 * s, f64::INFINITY, self.t_cycle, self.eta)
    }
}

/// Per-photon fidelity factor `(1 - p/2)(1 - T_cycle/T₂)`.
pub fn alpha(e: &ErrorModel) -> f64 {
    (1.0 - e.p / 2.0) * (1.0 - e.t_cycle / e.t2)
}

/// `|⟨Ψ|Φ⟩|² / ⟨Φ|Φ⟩` for a normalized ideal state `Ψ`.
pub fn fidelity_f0(ideal: &SequentialMps, generated: &SequentialMps) -> Result<f64, MetricsError> {
    let overlap = inner_product(ideal, generated)?;
    let norm = inner_product(generated, generated)?.re;
    f0_from_parts(overlap, norm)
}

fn f0_from_parts(overlap: Complex64, norm: f64) -> Result<f64, MetricsError> {
    if norm <= 0.0 {
        return Err(MetricsError::ZeroNorm);
    }
    Ok(overlap.norm_sqr() / norm)
}

/// `α^K · F0`
pub fn fidelity_f1(f0: f64, e: &ErrorModel, k_photons: usize) -> f64 {
    alpha(e).powi(k_photons as i32) * f0
}

/// `η^K · ⟨Φ|Φ⟩`
pub fn success_probability(generated: &SequentialMps, e: &ErrorModel) -> f64 {
    e.eta.powi(generated.len() as i32) * generated.norm_sqr()
}

/// Cluster states per second: `P / (K · T_cycle)` with `T_cycle` in ns.
pub fn generation_rate(p_success: f64, k_photons: usize, t_cycle_ns: f64) -> f64 {
    p_success / (k_photons as f64 * t_cycle_ns * 1e-9)
}

/// `F1(K) ≈ amplitude · β^K`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub beta: f64,
    pub amplitude: f64,
    /// RMS deviation in the log domain.
    pub residual: f64,
}

/// Ordinary least squares of `ln F1` against `K`.
pub fn fit_beta(points: &[(usize, f64)]) -> Result<FitResult, MetricsError> {
    if points.len() < 3 {
        return Err(MetricsError::TooFewPoints(points.len()));
    }
    if let Some(&(k, value)) = points.iter().find(|(_, f)| !(*f > 0.0)) {
        return Err(MetricsError::NonPositive { k, value });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(k, _)| k as f64).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, f)| f.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(FitResult {
        beta: slope.exp(),
        amplitude: intercept.exp(),
        residual: (rss / n).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityReport {
    pub k_photons: usize,
    pub f0: f64,
    pub f1: f64,
    pub p_success: f64,
}

/// Spin-photon interaction model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateModel {
    /// Spin-dependent reflection with Zeeman-split transitions.
    Magnetic(CavityParams),
    /// Chiral coupling at the quarter-wave detuning, phase-corrected.
    Chiral(ChiralParams),
}

impl GateModel {
    pub fn gate(&self) -> Result<Gate2Q, MetricsError> {
        Ok(match self {
            GateModel::Magnetic(p) => u_rf(&spin_dependent_reflection(p)),
            GateModel::Chiral(p) => chiral_phase_fix(&u_cr(chiral_reflection(p)?.r1)),
        })
    }
}

/// `F0`, `F1` and success probability for every prefix `K = 1..=photon_count`.
pub fn fidelity_curve(
    dims: &LatticeDims,
    u: &Gate2Q,
    e: &ErrorModel,
) -> Result<Vec<FidelityReport>, MetricsError> {
    e.validate()?;
    let profile = overlap_profile(dims, &ideal_gates(dims), &protocol_gates(dims, u))?;
    profile
        .into_iter()
        .map(|pt| {
            let f0 = f0_from_parts(pt.overlap, pt.norm_sqr_b)? / pt.norm_sqr_a;
            Ok(FidelityReport {
                k_photons: pt.k_photons,
                f0,
                f1: fidelity_f1(f0, e, pt.k_photons),
                p_success: e.eta.powi(pt.k_photons as i32) * pt.norm_sqr_b,
            })
        })
        .collect()
}

/// Fit `β` to a curve, ignoring the first `skip` photons.
pub fn fit_curve(curve: &[FidelityReport], skip: usize) -> Result<FitResult, MetricsError> {
    let points: Vec<(usize, f64)> = curve
        .iter()
        .filter(|r| r.k_photons > skip)
        .map(|r| (r.k_photons, r.f1))
        .collect();
    fit_beta(&points)
}

/// `β` for one gate on one lattice, skipping the first stack of photons.
pub fn beta_for(dims: &LatticeDims, u: &Gate2Q, e: &ErrorModel) -> Result<FitResult, MetricsError> {
    fit_curve(&fidelity_curve(dims, u, e)?, dims.stack_size())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Axes: resonant cooperativity `C_↑`, magnetic field (T).
    Magnetic,
    /// Axes: cooperativity `C`, per-cycle spin error.
    Chiral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub axis1: f64,
    pub axis2: f64,
    pub result: Result<FitResult, MetricsError>,
}

/// Evaluate `β` over the grid `axis1 × axis2` in parallel. Output is in grid
/// order (`axis2` outer, `axis1` inner); failing points become error cells.
pub fn sweep_beta(
    axis1: &[f64],
    axis2: &[f64],
    mode: SweepMode,
    dims: &LatticeDims,
    e: &ErrorModel,
) -> Vec<SweepCell> {
    let grid: Vec<(f64, f64)> = axis2
        .iter()
        .flat_map(|&b| axis1.iter().map(move |&a| (a, b)))
        .collect();
    grid.into_par_iter()
        .map(|(a, b)| SweepCell {
            axis1: a,
            axis2: b,
            result: sweep_point(a, b, mode, dims, e),
        })
        .collect()
}

fn sweep_point(
    a: f64,
    b: f64,
    mode: SweepMode,
    dims: &LatticeDims,
    e: &ErrorModel,
) -> Result<FitResult, MetricsError> {
    match mode {
        SweepMode::Magnetic => {
            let params = CavityParams::quantum_dot(b)?.with_resonant_cooperativity(a)?;
            beta_for(dims, &GateModel::Magnetic(params).gate()?, e)
        }
        SweepMode::Chiral => {
            let params = ChiralParams::with_cooperativity(a)?;
            beta_for(
                dims,
                &GateModel::Chiral(params).gate()?,
                &e.with_spin_error(b)?,
            )
        }
    }
}
