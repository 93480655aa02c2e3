//! Closed-form output-quadrature coefficients and force-noise spectra.
//!
//! The detected signal is the output phase quadrature
//! `P_out = √κ·p_a − p_a^in`. Dividing it by the force coefficient gives the
//! force estimator `F̂ = F_ext + F_add`. All PSDs are symmetrized and
//! dimensionless: vacuum quadratures contribute 1/2 per channel, the thermal
//! force contributes `n̄`.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::params::PhysicalParams;
use crate::response::{self, ChiDPrimeConvention, Pole};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpectraError {
    #[error("optomechanical coupling g is zero; the force estimator is undefined")]
    ZeroCoupling,
    #[error("qubit detuning is zero; the ideal-match qubit response is undefined")]
    ZeroDetuning,
    #[error(transparent)]
    Pole(#[from] Pole),
}

/// Symmetrized level of a vacuum quadrature.
pub const VACUUM_LEVEL: f64 = 0.5;

/// Coefficients of each input channel in `P_out` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseCoefficients {
    pub omega: f64,
    /// Amplitude-quadrature input `x_a^in` (back-action).
    pub c_xa_in: Complex64,
    /// Phase-quadrature input `p_a^in` (shot noise).
    pub c_pa_in: Complex64,
    pub c_xd_in: Complex64,
    pub c_pd_in: Complex64,
    /// Force port, shared by `F_th` and `F_ext`.
    pub c_force: Complex64,
}

impl NoiseCoefficients {
    /// Every coefficient divided by the force coefficient, i.e. the `F_add`
    /// coefficients. The force entry becomes exactly 1.
    pub fn force_normalized(&self) -> NoiseCoefficients {
        let n = self.c_force;
        NoiseCoefficients {
            omega: self.omega,
            c_xa_in: self.c_xa_in / n,
            c_pa_in: self.c_pa_in / n,
            c_xd_in: self.c_xd_in / n,
            c_pd_in: self.c_pd_in / n,
            c_force: self.c_force / n,
        }
    }

    /// `Σ |c_k|²·S_k` over the four vacuum channels plus `n̄|c_force|²`.
    pub fn budget(&self, thermal_level: f64) -> NoiseBudget {
        NoiseBudget::new(
            self.omega,
            thermal_level * self.c_force.norm_sqr(),
            VACUUM_LEVEL * self.c_pa_in.norm_sqr(),
            VACUUM_LEVEL * self.c_xa_in.norm_sqr(),
            VACUUM_LEVEL * self.c_xd_in.norm_sqr(),
            VACUUM_LEVEL * self.c_pd_in.norm_sqr(),
        )
    }
}

/// Per-channel decomposition of a force-noise PSD at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseBudget {
    pub omega: f64,
    pub thermal: f64,
    pub shot: f64,
    pub backaction: f64,
    pub qubit_x: f64,
    pub qubit_p: f64,
    pub total: f64,
}

impl NoiseBudget {
    pub fn new(
        omega: f64,
        thermal: f64,
        shot: f64,
        backaction: f64,
        qubit_x: f64,
        qubit_p: f64,
    ) -> Self {
        Self {
            omega,
            thermal,
            shot,
            backaction,
            qubit_x,
            qubit_p,
            total: thermal + shot + backaction + qubit_x + qubit_p,
        }
    }

    /// The two qubit channels together.
    pub fn qubit_residual(&self) -> f64 {
        self.qubit_x + self.qubit_p
    }

    /// Components in N²/Hz given the conversion factor `ħ m Ω γ_m`.
    pub fn to_si(&self, unit: f64) -> NoiseBudget {
        NoiseBudget {
            omega: self.omega,
            thermal: self.thermal * unit,
            shot: self.shot * unit,
            backaction: self.backaction * unit,
            qubit_x: self.qubit_x * unit,
            qubit_p: self.qubit_p * unit,
            total: self.total * unit,
        }
    }
}

/// Output phase-quadrature coefficients of the hybrid system.
///
/// `c_xa_in = κλ₊λ₋(g²χ_m + G′²χ′_d)`, `c_pa_in = κλ₋ − 1`,
/// `c_force = −gχ_mλ₋√(γ_mκ)`. The qubit channels enter through the qubit
/// quadrature that feeds the cavity phase: `c_xd_in = −√(κΓ)λ₋G′ζ` and
/// `c_pd_in = −√(κΓ)λ₋G′χ′_d`.
pub fn out_phase_coefficients(
    p: &PhysicalParams,
    omega: f64,
    convention: ChiDPrimeConvention,
) -> Result<NoiseCoefficients, SpectraError> {
    let chi_dp = convention.eval(p, omega);
    let zeta = response::zeta(p, omega);
    coefficients(p, omega, chi_dp, zeta)
}

/// Coefficients with the qubit replaced by its ideal match:
/// `χ′_d = −χ_m` exactly and `ζ = χ_m/(Δ_q χ_d)`.
///
/// This is the limit in which the added-noise closed form holds term by
/// term.
pub fn ideal_match_coefficients(
    p: &PhysicalParams,
    omega: f64,
) -> Result<NoiseCoefficients, SpectraError> {
    if p.qubit_detuning() == 0.0 {
        return Err(SpectraError::ZeroDetuning);
    }
    let chi_m = response::chi_m(p, omega);
    let zeta = chi_m / (p.qubit_detuning() * response::chi_d(p, omega));
    coefficients(p, omega, -chi_m, zeta)
}

fn coefficients(
    p: &PhysicalParams,
    omega: f64,
    chi_dp: Complex64,
    zeta: Complex64,
) -> Result<NoiseCoefficients, SpectraError> {
    let kappa = p.cavity_decay();
    let g = p.coupling();
    let em = p.em_coupling();
    let chi_m = response::chi_m(p, omega);
    let lp = response::lambda_plus(p, omega)?;
    let lm = response::lambda_minus(p, omega);
    let readout = (kappa * p.qubit_dephasing()).sqrt() * lm * em;
    Ok(NoiseCoefficients {
        omega,
        c_xa_in: kappa * lp * lm * (g * g * chi_m + em * em * chi_dp),
        c_pa_in: kappa * lm - 1.0,
        c_xd_in: -readout * zeta,
        c_pd_in: -readout * chi_dp,
        c_force: force_coefficient(p, chi_m, lm),
    })
}

/// The coefficients exactly as printed in the output-quadrature expression.
///
/// The back-action, phase-input and force entries coincide with
/// [`out_phase_coefficients`]. The two qubit entries do not follow from the
/// linear model and are kept only for side-by-side comparison.
pub fn out_phase_coefficients_as_printed(
    p: &PhysicalParams,
    omega: f64,
    convention: ChiDPrimeConvention,
) -> Result<NoiseCoefficients, SpectraError> {
    let kappa = p.cavity_decay();
    let g = p.coupling();
    let em = p.em_coupling();
    let w_m = p.mech_frequency();
    let sqrt_gamma = p.qubit_dephasing().sqrt();
    let chi_m = response::chi_m(p, omega);
    let chi_d = response::chi_d(p, omega);
    let zeta = response::zeta(p, omega);
    let chi_dp = convention.eval(p, omega);
    let lp = response::lambda_plus(p, omega)?;
    let lm = response::lambda_minus(p, omega);
    Ok(NoiseCoefficients {
        omega,
        c_xa_in: kappa * lp * lm * (g * g * chi_m + em * em * chi_dp),
        c_pa_in: kappa * lm - 1.0,
        c_xd_in: kappa.sqrt() * sqrt_gamma * lm * chi_d * (-w_m * chi_dp + g * em * chi_m),
        c_pd_in: kappa.sqrt() * (-w_m * chi_d) * (g * em * chi_m * lm) * (sqrt_gamma * zeta),
        c_force: force_coefficient(p, chi_m, lm),
    })
}

fn force_coefficient(p: &PhysicalParams, chi_m: Complex64, lm: Complex64) -> Complex64 {
    -p.coupling() * chi_m * lm * (p.mech_damping() * p.cavity_decay()).sqrt()
}

/// Force-estimator normalization `−gχ_mλ₋√(γ_mκ)`.
pub fn force_estimator_normalization(
    p: &PhysicalParams,
    omega: f64,
) -> Result<Complex64, SpectraError> {
    if p.coupling() == 0.0 {
        return Err(SpectraError::ZeroCoupling);
    }
    let chi_m = response::chi_m(p, omega);
    let lm = response::lambda_minus(p, omega);
    Ok(force_coefficient(p, chi_m, lm))
}

/// Qubit `x`-quadrature share of the cancellation floor, `(ω² + Γ²/4)/(2Ω²)`.
fn floor_qubit_x(p: &PhysicalParams, omega: f64) -> f64 {
    let gamma = p.qubit_dephasing();
    let w_m = p.mech_frequency();
    VACUUM_LEVEL * (omega * omega + gamma * gamma / 4.0) / (w_m * w_m)
}

/// Qubit `p`-quadrature share of the cancellation floor (`Γ/γ_m = 1`).
fn floor_qubit_p() -> f64 {
    VACUUM_LEVEL
}

/// Added-noise PSD of the hybrid system with back-action cancelled:
/// thermal `n̄`, shot `|(λ₋κ − 1)/λ₋|²/(2g²|χ_m|²γ_mκ)` and the qubit floor
/// `(ω² + Ω² + Γ²/4)/(2Ω²)`.
///
/// Assumes the matching conditions hold; nothing here checks them.
pub fn s_add_closed_form(
    p: &PhysicalParams,
    omega: f64,
    include_thermal: bool,
) -> Result<NoiseBudget, SpectraError> {
    let g = p.coupling();
    if g == 0.0 {
        return Err(SpectraError::ZeroCoupling);
    }
    let kappa = p.cavity_decay();
    let chi_m = response::chi_m(p, omega);
    let lm = response::lambda_minus(p, omega);
    let readout = ((lm * kappa - 1.0) / lm).norm_sqr();
    let shot = VACUUM_LEVEL * readout / (g * g * chi_m.norm_sqr() * p.mech_damping() * kappa);
    Ok(NoiseBudget::new(
        omega,
        thermal(p, include_thermal),
        shot,
        0.0,
        floor_qubit_x(p, omega),
        floor_qubit_p(),
    ))
}

/// Minimum added noise with back-action cancelled: `(ω² + Ω² + Γ²/4)/(2Ω²)`.
pub fn s_cqnc_floor(p: &PhysicalParams, omega: f64) -> f64 {
    floor_qubit_x(p, omega) + floor_qubit_p()
}

/// [`s_cqnc_floor`] split into its two qubit channels.
pub fn cqnc_floor_budget(p: &PhysicalParams, omega: f64) -> NoiseBudget {
    NoiseBudget::new(
        omega,
        0.0,
        0.0,
        0.0,
        floor_qubit_x(p, omega),
        floor_qubit_p(),
    )
}

/// Standard optomechanical force noise: thermal `n̄`, shot
/// `κ/(8γ_m g²|χ_m|²)` and back-action `4g²/(κγ_m)`.
///
/// This is the `ω ≪ κ` form. The linear model reaches the same shot term in
/// that limit but only `2g²/(κγ_m)` of back-action.
pub fn s_standard_om(
    p: &PhysicalParams,
    omega: f64,
    include_thermal: bool,
) -> Result<NoiseBudget, SpectraError> {
    let g = p.coupling();
    if g == 0.0 {
        return Err(SpectraError::ZeroCoupling);
    }
    Ok(standard_om_terms(p, omega, g, thermal(p, include_thermal)))
}

pub(crate) fn standard_om_terms(
    p: &PhysicalParams,
    omega: f64,
    g: f64,
    thermal: f64,
) -> NoiseBudget {
    let kappa = p.cavity_decay();
    let gamma_m = p.mech_damping();
    let chi_m = response::chi_m(p, omega);
    let shot = kappa / (8.0 * gamma_m * g * g * chi_m.norm_sqr());
    let backaction = 4.0 * g * g / (kappa * gamma_m);
    NoiseBudget::new(omega, thermal, shot, backaction, 0.0, 0.0)
}

/// `1/(γ_m|χ_m|)`: the minimum over g as displayed.
///
/// Minimizing [`s_standard_om`] over g actually gives `√2` times this; see
/// [`crate::analysis::minimize_sql`].
pub fn s_sql(p: &PhysicalParams, omega: f64) -> f64 {
    1.0 / (p.mech_damping() * response::chi_m(p, omega).norm())
}

/// `√κ/(2√|χ_m|)`: the coupling of the displayed SQL dip.
pub fn g_sql(p: &PhysicalParams, omega: f64) -> f64 {
    p.cavity_decay().sqrt() / (2.0 * response::chi_m(p, omega).norm().sqrt())
}

fn thermal(p: &PhysicalParams, include: bool) -> f64 {
    if include {
        p.thermal_occupation()
    } else {
        0.0
    }
}
