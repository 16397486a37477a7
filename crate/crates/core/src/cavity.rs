//! Steady-state reflection model of a single-sided cavity containing a
//! spin-bearing emitter.
//!
//! All rates are angular frequencies in rad/ns. Configuration files quote
//! `value/2π` in GHz; use [`CavityParams::from_ghz`] to convert.
//!
//! `kappa` is the emitter dipole decay rate and `gamma` the cavity field decay
//! rate. With the spin-up transition on resonance with the photon, the two
//! spin states see
//!
//! ```text
//! C_up   = 4 g² / (γ κ)
//! C_down = 4 g² / (γ (κ + 2iΔ_down)) = C_up / (1 + 2iΔ_down/κ)
//! r      = (C - 1) / (C + 1)
//! ```

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

/// Bohr magneton over ħ in rad/ns per tesla (2π × 13.996 GHz/T).
pub const MU_B_OVER_HBAR: f64 = TAU * 13.996;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CavityError {
    #[error("invalid cavity parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> CavityError {
    CavityError::InvalidParameter {
        field,
        reason: reason.into(),
    }
}

/// Physical parameters of the magnetically split emitter-cavity system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    g: f64,
    kappa: f64,
    gamma: f64,
    b_field: f64,
    g_e: f64,
    g_h: f64,
}

impl CavityParams {
    /// Rates in rad/ns, field in tesla.
    pub fn new(
        g: f64,
        kappa: f64,
        gamma: f64,
        b_field: f64,
        g_e: f64,
        g_h: f64,
    ) -> Result<Self, CavityError> {
        if !(g.is_finite() && g >= 0.0) {
            return Err(invalid("g", format!("must be finite and >= 0, got {g}")));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(invalid(
                "kappa",
                format!("must be finite and > 0, got {kappa}"),
            ));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid(
                "gamma",
                format!("must be finite and > 0, got {gamma}"),
            ));
        }
        if !(b_field.is_finite() && b_field >= 0.0) {
            return Err(invalid(
                "b_field",
                format!("must be finite and >= 0, got {b_field}"),
            ));
        }
        if !g_e.is_finite() {
            return Err(invalid("g_e", "must be finite"));
        }
        if !g_h.is_finite() {
            return Err(invalid("g_h", "must be finite"));
        }
        Ok(Self {
            g,
            kappa,
            gamma,
            b_field,
            g_e,
            g_h,
        })
    }

    /// Build from `value/2π` quantities in GHz.
    pub fn from_ghz(
        g_over_2pi: f64,
        kappa_over_2pi: f64,
        gamma_over_2pi: f64,
        b_field: f64,
        g_e: f64,
        g_h: f64,
    ) -> Result<Self, CavityError> {
        Self::new(
            TAU * g_over_2pi,
            TAU * kappa_over_2pi,
            TAU * gamma_over_2pi,
            b_field,
            g_e,
            g_h,
        )
    }

    /// Charged quantum dot in a nanocavity: g/2π = 10 GHz, κ/2π = 0.3 GHz,
    /// γ/2π = 40 GHz, g_e = 0.43, g_h = 0.21.
    pub fn quantum_dot(b_field: f64) -> Result<Self, CavityError> {
        Self::from_ghz(10.0, 0.3, 40.0, b_field, 0.43, 0.21)
    }

    /// Same decay rates and field, with `g` chosen so that `C_up` equals
    /// `cooperativity`.
    pub fn with_resonant_cooperativity(&self, cooperativity: f64) -> Result<Self, CavityError> {
        if !(cooperativity.is_finite() && cooperativity >= 0.0) {
            return Err(invalid(
                "cooperativity",
                format!("must be finite and >= 0, got {cooperativity}"),
            ));
        }
        let g = (cooperativity * self.gamma * self.kappa / 4.0).sqrt();
        Self::new(g, self.kappa, self.gamma, self.b_field, self.g_e, self.g_h)
    }

    pub fn with_b_field(&self, b_field: f64) -> Result<Self, CavityError> {
        Self::new(self.g, self.kappa, self.gamma, b_field, self.g_e, self.g_h)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn b_field(&self) -> f64 {
        self.b_field
    }

    pub fn g_e(&self) -> f64 {
        self.g_e
    }

    pub fn g_h(&self) -> f64 {
        self.g_h
    }
}

/// Reflection amplitudes seen by a coupled photon for each spin state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r_up: Complex64,
    pub r_down: Complex64,
}

impl ReflectionPair {
    pub fn new(r_up: Complex64, r_down: Complex64) -> Self {
        Self { r_up, r_down }
    }

    /// The ideal phase-flip limit `(1, -1)`.
    pub fn ideal() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
    }
}

/// `C_up = 4g²/(γκ)`.
pub fn cooperativity_resonant(p: &CavityParams) -> f64 {
    4.0 * p.g * p.g / (p.gamma * p.kappa)
}

/// Zeeman splitting of the spin-down transition, `(g_e + g_h) μ_B B / ħ`.
pub fn zeeman_detuning(p: &CavityParams) -> f64 {
    (p.g_e + p.g_h) * MU_B_OVER_HBAR * p.b_field
}

/// `C_down = 4g² / (γ(κ + 2iΔ_down))`.
pub fn cooperativity_offres(p: &CavityParams) -> Complex64 {
    let delta = zeeman_detuning(p);
    Complex64::new(4.0 * p.g * p.g, 0.0) / (p.gamma * Complex64::new(p.kappa, 2.0 * delta))
}

/// `C_down` from the resonant cooperativity: `C_up / (1 + 2iΔ_down/κ)`.
pub fn cooperativity_offres_from_resonant(p: &CavityParams) -> Complex64 {
    let delta = zeeman_detuning(p);
    Complex64::new(cooperativity_resonant(p), 0.0) / Complex64::new(1.0, 2.0 * delta / p.kappa)
}

fn reflection_from_cooperativity(c: Complex64) -> Complex64 {
    (c - 1.0) / (c + 1.0)
}

/// Reflection of a cavity-resonant photon when the emitter transition is
/// detuned by `delta` from the photon:
/// `(g² - γ/2 (iΔ + κ/2)) / (g² + γ/2 (iΔ + κ/2))`.
pub fn reflection_detuned(delta: f64, g: f64, kappa: f64, gamma: f64) -> Complex64 {
    let g2 = Complex64::new(g * g, 0.0);
    let loss = 0.5 * gamma * Complex64::new(0.5 * kappa, delta);
    (g2 - loss) / (g2 + loss)
}

/// Spin-dependent reflection with the spin-up transition on resonance.
pub fn spin_dependent_reflection(p: &CavityParams) -> ReflectionPair {
    let c_up = Complex64::new(cooperativity_resonant(p), 0.0);
    ReflectionPair {
        r_up: reflection_from_cooperativity(c_up),
        r_down: reflection_from_cooperativity(cooperativity_offres(p)),
    }
}

/// Steady-state reflection for probe frequency `omega`, cavity frequency
/// `omega_c` and emitter transition `omega_s` (all rad/ns).
pub fn reflection_general(omega: f64, omega_c: f64, omega_s: f64, p: &CavityParams) -> Complex64 {
    let atom = Complex64::new(0.5 * p.kappa, omega_s - omega);
    let cavity = Complex64::new(0.5 * p.gamma, omega_c - omega);
    Complex64::new(1.0, 0.0) - p.gamma * atom / (atom * cavity + p.g * p.g)
}

/// Emitter with polarization-selective (chiral) coupling to two degenerate
/// circularly polarized cavity modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralParams {
    g: f64,
    kappa: f64,
    gamma: f64,
    cooperativity: f64,
}

impl ChiralParams {
    /// Rates in rad/ns; the cooperativity is derived as `4g²/(γκ)`.
    pub fn from_rates(g: f64, kappa: f64, gamma: f64) -> Result<Self, CavityError> {
        if !(g.is_finite() && g > 0.0) {
            return Err(invalid("g", format!("must be finite and > 0, got {g}")));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(invalid(
                "kappa",
                format!("must be finite and > 0, got {kappa}"),
            ));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid(
                "gamma",
                format!("must be finite and > 0, got {gamma}"),
            ));
        }
        Ok(Self {
            g,
            kappa,
            gamma,
            cooperativity: 4.0 * g * g / (gamma * kappa),
        })
    }

    /// Cooperativity given directly; `g` is chosen to match it for the given
    /// decay rates (rad/ns).
    pub fn from_cooperativity(
        cooperativity: f64,
        kappa: f64,
        gamma: f64,
    ) -> Result<Self, CavityError> {
        if !(cooperativity.is_finite() && cooperativity > 0.0) {
            return Err(invalid(
                "cooperativity",
                format!("must be finite and > 0, got {cooperativity}"),
            ));
        }
        let g = (cooperativity * gamma * kappa / 4.0).sqrt();
        // keep the requested value rather than the round-tripped one
        Self::from_rates(g, kappa, gamma).map(|p| Self { cooperativity, ..p })
    }

    /// Cooperativity with the quantum-dot decay rates (κ/2π = 0.3 GHz,
    /// γ/2π = 40 GHz).
    pub fn with_cooperativity(cooperativity: f64) -> Result<Self, CavityError> {
        Self::from_cooperativity(cooperativity, TAU * 0.3, TAU * 40.0)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn cooperativity(&self) -> f64 {
        self.cooperativity
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralReflection {
    /// Uncoupled polarization: plain mirror reflection.
    pub r0: Complex64,
    /// Coupled polarization at the quarter-wave detuning.
    pub r1: Complex64,
    /// Photon-transition detuning that gives `r1` a π/2 phase.
    pub delta_s: f64,
}

/// Reflection coefficients for chiral coupling at `Δ_s = (κ/2)√(C²-1)`.
pub fn chiral_reflection(p: &ChiralParams) -> Result<ChiralReflection, CavityError> {
    let c = p.cooperativity;
    if c < 1.0 {
        return Err(invalid(
            "cooperativity",
            format!("chiral phase condition needs C >= 1, got {c}"),
        ));
    }
    Ok(ChiralReflection {
        r0: Complex64::new(-1.0, 0.0),
        r1: Complex64::new(0.0, -((c - 1.0) / (c + 1.0)).sqrt()),
        delta_s: 0.5 * p.kappa * (c * c - 1.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn qd12() -> CavityParams {
        CavityParams::quantum_dot(12.0).unwrap()
    }

    #[test]
    fn resonant_cooperativity_examples() {
        assert_relative_eq!(
            cooperativity_resonant(&qd12()),
            100.0 / 3.0,
            max_relative = 1e-14
        );
        let empty = CavityParams::new(0.0, 1.0, 1.0, 0.0, 0.4, 0.2).unwrap();
        assert_eq!(cooperativity_resonant(&empty), 0.0);
        // 4g² = γκ
        let unit = CavityParams::new(1.0, 2.0, 2.0, 0.0, 0.4, 0.2).unwrap();
        assert_relative_eq!(cooperativity_resonant(&unit), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn zeeman_examples() {
        assert_eq!(
            zeeman_detuning(&CavityParams::quantum_dot(0.0).unwrap()),
            0.0
        );
        assert_relative_eq!(
            zeeman_detuning(&qd12()) / TAU,
            107.48928,
            max_relative = 1e-12
        );
        let six = CavityParams::quantum_dot(6.0).unwrap();
        assert_relative_eq!(zeeman_detuning(&six) / TAU, 53.74464, max_relative = 1e-12);
    }

    #[test]
    fn offres_cooperativity_examples() {
        let zero_field = CavityParams::quantum_dot(0.0).unwrap();
        assert_relative_eq!(
            cooperativity_offres(&zero_field).re,
            cooperativity_resonant(&zero_field),
            max_relative = 1e-14
        );
        assert_eq!(cooperativity_offres(&zero_field).im, 0.0);

        let c = cooperativity_offres(&qd12());
        assert_relative_eq!(c.re, 6.491276520881467e-05, max_relative = 1e-10);
        assert_relative_eq!(c.im, -0.046516175967363606, max_relative = 1e-10);
        assert_relative_eq!(c.norm(), 0.046516221259833894, max_relative = 1e-10);

        let far = CavityParams::quantum_dot(1.0e9).unwrap();
        assert!(cooperativity_offres(&far).norm() < 1e-6);
    }

    #[test]
    fn reflection_examples() {
        let r = spin_dependent_reflection(&qd12());
        assert_relative_eq!(r.r_up.re, 0.941747572815534, max_relative = 1e-13);
        assert_eq!(r.r_up.im, 0.0);
        assert_relative_eq!(r.r_down.re, -0.9955528566873908, max_relative = 1e-12);
        assert_relative_eq!(r.r_down.im, -0.09281946266585894, max_relative = 1e-10);
        assert_relative_eq!(
            (r.r_down + 1.0).norm(),
            0.09292593681648664,
            max_relative = 1e-10
        );

        // C_up = 1 is the zero of (C - 1)/(C + 1)
        let unit = CavityParams::new(1.0, 2.0, 2.0, 3.0, 0.4, 0.2).unwrap();
        assert!(spin_dependent_reflection(&unit).r_up.norm() < 1e-15);

        // strong coupling plus huge splitting approaches the ideal gate
        let strong = CavityParams::from_ghz(1000.0, 0.3, 40.0, 1.0e9, 0.43, 0.21).unwrap();
        let r = spin_dependent_reflection(&strong);
        assert!((r.r_up - 1.0).norm() < 1e-4);
        assert!((r.r_down + 1.0).norm() < 1e-4);
    }

    #[test]
    fn general_reflection_examples() {
        let p = qd12();
        let empty = CavityParams::new(0.0, p.kappa(), p.gamma(), 12.0, 0.43, 0.21).unwrap();
        let r = reflection_general(3.0, 3.0, 7.0, &empty);
        assert!((r + 1.0).norm() < 1e-15);

        let on_res = reflection_general(5.0, 5.0, 5.0, &p);
        assert!((on_res - spin_dependent_reflection(&p).r_up).norm() < 1e-12);

        let far = reflection_general(0.0, 0.0, 1.0e12, &p);
        assert!((far + 1.0).norm() < 1e-6);
    }

    #[test]
    fn chiral_examples() {
        let big = chiral_reflection(&ChiralParams::with_cooperativity(1.0e12).unwrap()).unwrap();
        assert!((big.r1 - Complex64::new(0.0, -1.0)).norm() < 1e-11);
        assert_eq!(big.r0, Complex64::new(-1.0, 0.0));

        let edge = chiral_reflection(&ChiralParams::with_cooperativity(1.0).unwrap()).unwrap();
        assert_eq!(edge.r1.norm(), 0.0);
        assert_eq!(edge.delta_s, 0.0);

        let c100 = chiral_reflection(&ChiralParams::with_cooperativity(100.0).unwrap()).unwrap();
        assert_relative_eq!(c100.r1.im, -0.9900495037128094, max_relative = 1e-14);
        assert_eq!(c100.r1.re, 0.0);

        assert!(matches!(
            chiral_reflection(&ChiralParams::with_cooperativity(0.5).unwrap()),
            Err(CavityError::InvalidParameter {
                field: "cooperativity",
                ..
            })
        ));
    }

    #[test]
    fn chiral_closed_form_matches_detuned_reflection() {
        for &c in &[1.0, 1.5, 3.0, 10.0, 100.0, 1.0e4] {
            let p = ChiralParams::with_cooperativity(c).unwrap();
            let r = chiral_reflection(&p).unwrap();
            let direct = reflection_detuned(r.delta_s, p.g(), p.kappa(), p.gamma());
            assert!((direct - r.r1).norm() < 1e-12, "C = {c}");
            // same thing through the frequency-resolved form with ω_c = ω
            let general = reflection_general(
                0.0,
                0.0,
                r.delta_s,
                &CavityParams::new(p.g(), p.kappa(), p.gamma(), 0.0, 0.0, 0.0).unwrap(),
            );
            assert!((general - r.r1).norm() < 1e-12, "C = {c}");
        }
    }

    #[test]
    fn rejects_unphysical_parameters() {
        assert!(CavityParams::new(-1.0, 1.0, 1.0, 0.0, 0.4, 0.2).is_err());
        assert!(CavityParams::new(1.0, 0.0, 1.0, 0.0, 0.4, 0.2).is_err());
        assert!(CavityParams::new(1.0, 1.0, -2.0, 0.0, 0.4, 0.2).is_err());
        assert!(CavityParams::new(1.0, 1.0, 1.0, -0.1, 0.4, 0.2).is_err());
        assert!(ChiralParams::with_cooperativity(0.0).is_err());
    }
}
