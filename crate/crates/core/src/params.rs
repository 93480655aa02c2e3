//! Physical parameters of the hybrid sensor.
//!
//! [`PhysicalParams`] is only obtainable through [`ParamsBuilder::build`], which
//! enforces every invariant: positive rates, the laser power / coupling
//! relation `P_L = 2ħ ω_L κ (g/g₀)²`, `n̄ = k_B T/(ħΩ)` and
//! `G′ = √2·G·d̄`. Once built the value is immutable; changes go through
//! [`PhysicalParams::to_builder`] or one of the `with_*` helpers, which
//! re-validate.

use std::f64::consts::{PI, SQRT_2};

use thiserror::Error;

use crate::Warning;

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const K_B: f64 = 1.380_649e-23;

/// Below this `Ω/Γ` the matching conditions are flagged as weakly satisfied.
pub const MIN_SEPARATION_RATIO: f64 = 100.0;

const CONSISTENCY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("{name} must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("laser power must be non-negative, got {0} W")]
    NegativePower(f64),
    #[error("cavity detuning is fixed to 0 in the linearized model, got {0}")]
    CavityDetuning(f64),
    #[error("OPA pump phase is fixed to 0, got {0}")]
    OpaPhase(f64),
    #[error("G_em = {em} is inconsistent with sqrt(2)*G_qubit*d_bar = {implied}")]
    InconsistentEmCoupling { em: f64, implied: f64 },
}

/// How the optomechanical coupling is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LaserDrive {
    /// Laser power in W; the coupling follows from it.
    Power(f64),
    /// Linearized coupling `g` in rad/s; the power follows from it.
    Coupling(f64),
}

/// Unvalidated parameter set. All rates in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamsBuilder {
    pub mech_frequency: f64,
    pub mech_damping: f64,
    pub cavity_decay: f64,
    pub qubit_dephasing: f64,
    pub qubit_detuning: f64,
    pub cavity_detuning: f64,
    pub single_photon_coupling: f64,
    pub drive: LaserDrive,
    pub opa_gain: f64,
    pub opa_phase: f64,
    /// Effective electromechanical coupling `G′`. `None` derives it from the
    /// qubit–phonon coupling, or 0 if that is unset too.
    pub em_coupling: Option<f64>,
    pub qubit_phonon_coupling: Option<f64>,
    pub qubit_mean: f64,
    pub mech_mean: f64,
    pub qubit_drive: f64,
    pub laser_frequency: f64,
    pub temperature: f64,
    pub mass: Option<f64>,
}

impl ParamsBuilder {
    /// Parameter set of the frequency-spectrum figure: Ω = 2π·300 kHz,
    /// γ_m = 2π·30 Hz, κ = 2π·1 MHz, g₀ = 2π·300 Hz, λ = 780 nm laser
    /// (ω_L = 2π·384 THz) at 100 mW, zero temperature.
    ///
    /// The qubit is decoupled (`G′ = 0`, `Δ_q = 0`, `Γ = γ_m`).
    pub fn fig2() -> Self {
        let two_pi = 2.0 * PI;
        Self {
            mech_frequency: two_pi * 3.0e5,
            mech_damping: two_pi * 30.0,
            cavity_decay: two_pi * 1.0e6,
            qubit_dephasing: two_pi * 30.0,
            qubit_detuning: 0.0,
            cavity_detuning: 0.0,
            single_photon_coupling: two_pi * 300.0,
            drive: LaserDrive::Power(0.1),
            opa_gain: 0.0,
            opa_phase: 0.0,
            em_coupling: None,
            qubit_phonon_coupling: None,
            qubit_mean: 1.0,
            mech_mean: 0.0,
            qubit_drive: 0.0,
            laser_frequency: two_pi * 3.84e14,
            temperature: 0.0,
            mass: None,
        }
    }

    pub fn build(&self) -> Result<PhysicalParams, ParamsError> {
        positive("Omega", self.mech_frequency)?;
        positive("gamma_m", self.mech_damping)?;
        positive("kappa", self.cavity_decay)?;
        positive("Gamma", self.qubit_dephasing)?;
        positive("g0", self.single_photon_coupling)?;
        positive("omega_L", self.laser_frequency)?;
        finite("Delta_q", self.qubit_detuning)?;
        finite("Delta_c", self.cavity_detuning)?;
        finite("G_opa", self.opa_gain)?;
        non_negative("G_opa", self.opa_gain)?;
        finite("theta_opa", self.opa_phase)?;
        finite("d_bar", self.qubit_mean)?;
        finite("x_bar", self.mech_mean)?;
        finite("Omega_R", self.qubit_drive)?;
        finite("T", self.temperature)?;
        non_negative("T", self.temperature)?;
        if self.cavity_detuning != 0.0 {
            return Err(ParamsError::CavityDetuning(self.cavity_detuning));
        }
        if self.opa_phase != 0.0 {
            return Err(ParamsError::OpaPhase(self.opa_phase));
        }
        if let Some(m) = self.mass {
            positive("mass", m)?;
        }

        let power_scale = power_scale(self.laser_frequency, self.cavity_decay);
        let (coupling, laser_power) = match self.drive {
            LaserDrive::Power(p) => {
                if p.is_nan() || p < 0.0 {
                    return Err(ParamsError::NegativePower(p));
                }
                finite("P_L", p)?;
                (self.single_photon_coupling * (p / power_scale).sqrt(), p)
            }
            LaserDrive::Coupling(g) => {
                finite("g", g)?;
                non_negative("g", g)?;
                let ratio = g / self.single_photon_coupling;
                (g, power_scale * ratio * ratio)
            }
        };

        let em_coupling = match (self.em_coupling, self.qubit_phonon_coupling) {
            (Some(em), Some(bare)) => {
                finite("G_em", em)?;
                finite("G_qubit", bare)?;
                let implied = SQRT_2 * bare * self.qubit_mean;
                if !close(em, implied, CONSISTENCY_RTOL) {
                    return Err(ParamsError::InconsistentEmCoupling { em, implied });
                }
                em
            }
            (Some(em), None) => {
                finite("G_em", em)?;
                em
            }
            (None, Some(bare)) => {
                finite("G_qubit", bare)?;
                SQRT_2 * bare * self.qubit_mean
            }
            (None, None) => 0.0,
        };

        Ok(PhysicalParams {
            mech_frequency: self.mech_frequency,
            mech_damping: self.mech_damping,
            cavity_decay: self.cavity_decay,
            qubit_dephasing: self.qubit_dephasing,
            qubit_detuning: self.qubit_detuning,
            single_photon_coupling: self.single_photon_coupling,
            coupling,
            laser_power,
            opa_gain: self.opa_gain,
            em_coupling,
            qubit_phonon_coupling: self.qubit_phonon_coupling,
            qubit_mean: self.qubit_mean,
            mech_mean: self.mech_mean,
            qubit_drive: self.qubit_drive,
            laser_frequency: self.laser_frequency,
            temperature: self.temperature,
            thermal_occupation: K_B * self.temperature / (HBAR * self.mech_frequency),
            mass: self.mass,
        })
    }
}

/// Validated, immutable parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    mech_frequency: f64,
    mech_damping: f64,
    cavity_decay: f64,
    qubit_dephasing: f64,
    qubit_detuning: f64,
    single_photon_coupling: f64,
    coupling: f64,
    laser_power: f64,
    opa_gain: f64,
    em_coupling: f64,
    qubit_phonon_coupling: Option<f64>,
    qubit_mean: f64,
    mech_mean: f64,
    qubit_drive: f64,
    laser_frequency: f64,
    temperature: f64,
    thermal_occupation: f64,
    mass: Option<f64>,
}

impl PhysicalParams {
    pub fn fig2() -> Self {
        ParamsBuilder::fig2().build().expect("fig2 preset is valid")
    }

    /// [`fig2`](Self::fig2) with the cancellation conditions applied.
    pub fn cqnc_matched() -> Self {
        Self::fig2().apply_cqnc_matching().0
    }

    pub fn to_builder(&self) -> ParamsBuilder {
        ParamsBuilder {
            mech_frequency: self.mech_frequency,
            mech_damping: self.mech_damping,
            cavity_decay: self.cavity_decay,
            qubit_dephasing: self.qubit_dephasing,
            qubit_detuning: self.qubit_detuning,
            cavity_detuning: 0.0,
            single_photon_coupling: self.single_photon_coupling,
            drive: LaserDrive::Coupling(self.coupling),
            opa_gain: self.opa_gain,
            opa_phase: 0.0,
            em_coupling: Some(self.em_coupling),
            qubit_phonon_coupling: self.qubit_phonon_coupling,
            qubit_mean: self.qubit_mean,
            mech_mean: self.mech_mean,
            qubit_drive: self.qubit_drive,
            laser_frequency: self.laser_frequency,
            temperature: self.temperature,
            mass: self.mass,
        }
    }

    /// Applies `f` to a builder copy and re-validates.
    pub fn modify(&self, f: impl FnOnce(&mut ParamsBuilder)) -> Result<Self, ParamsError> {
        let mut b = self.to_builder();
        f(&mut b);
        b.build()
    }

    pub fn with_laser_power(&self, power: f64) -> Result<Self, ParamsError> {
        self.modify(|b| b.drive = LaserDrive::Power(power))
    }

    pub fn with_coupling(&self, g: f64) -> Result<Self, ParamsError> {
        self.modify(|b| b.drive = LaserDrive::Coupling(g))
    }

    pub fn with_opa_gain(&self, gain: f64) -> Result<Self, ParamsError> {
        self.modify(|b| b.opa_gain = gain)
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self, ParamsError> {
        self.modify(|b| b.temperature = temperature)
    }

    /// Sets `G′` directly, dropping any bare qubit–phonon coupling.
    pub fn with_em_coupling(&self, em: f64) -> Result<Self, ParamsError> {
        self.modify(|b| {
            b.em_coupling = Some(em);
            b.qubit_phonon_coupling = None;
        })
    }

    /// Returns a copy with `Δ_q = Ω`, `Γ = γ_m` and `G′ = g`.
    ///
    /// A [`Warning::WeakSeparation`] is attached when `Ω/Γ < 100`. The
    /// operation is idempotent.
    pub fn apply_cqnc_matching(&self) -> (Self, Vec<Warning>) {
        let mut matched = self.clone();
        matched.qubit_detuning = self.mech_frequency;
        matched.qubit_dephasing = self.mech_damping;
        matched.em_coupling = self.coupling;
        matched.qubit_phonon_coupling = match self.qubit_phonon_coupling {
            Some(_) if self.qubit_mean != 0.0 => Some(self.coupling / (SQRT_2 * self.qubit_mean)),
            _ => None,
        };

        let mut warnings = Vec::new();
        let ratio = matched.mech_frequency / matched.qubit_dephasing;
        if ratio < MIN_SEPARATION_RATIO {
            warnings.push(Warning::WeakSeparation { ratio });
        }
        (matched, warnings)
    }

    /// `g` for laser power `power` with this set's g₀, ω_L and κ.
    pub fn g_from_power(&self, power: f64) -> Result<f64, ParamsError> {
        if power.is_nan() || power < 0.0 {
            return Err(ParamsError::NegativePower(power));
        }
        Ok(self.single_photon_coupling
            * (power / power_scale(self.laser_frequency, self.cavity_decay)).sqrt())
    }

    /// Inverse of [`g_from_power`](Self::g_from_power).
    pub fn power_from_g(&self, g: f64) -> f64 {
        let ratio = g / self.single_photon_coupling;
        power_scale(self.laser_frequency, self.cavity_decay) * ratio * ratio
    }

    /// Ω, rad/s.
    pub fn mech_frequency(&self) -> f64 {
        self.mech_frequency
    }
    /// γ_m, rad/s.
    pub fn mech_damping(&self) -> f64 {
        self.mech_damping
    }
    /// κ, rad/s.
    pub fn cavity_decay(&self) -> f64 {
        self.cavity_decay
    }
    /// Γ, rad/s.
    pub fn qubit_dephasing(&self) -> f64 {
        self.qubit_dephasing
    }
    /// Δ_q, rad/s.
    pub fn qubit_detuning(&self) -> f64 {
        self.qubit_detuning
    }
    /// Δ_c; always 0.
    pub fn cavity_detuning(&self) -> f64 {
        0.0
    }
    /// g₀, rad/s.
    pub fn single_photon_coupling(&self) -> f64 {
        self.single_photon_coupling
    }
    /// Linearized optomechanical coupling g, rad/s.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }
    /// P_L, W.
    pub fn laser_power(&self) -> f64 {
        self.laser_power
    }
    /// OPA gain, rad/s.
    pub fn opa_gain(&self) -> f64 {
        self.opa_gain
    }
    /// OPA pump phase; always 0.
    pub fn opa_phase(&self) -> f64 {
        0.0
    }
    /// G′ = √2·G·d̄, rad/s.
    pub fn em_coupling(&self) -> f64 {
        self.em_coupling
    }
    /// Bare qubit–phonon coupling G, if configured.
    pub fn qubit_phonon_coupling(&self) -> Option<f64> {
        self.qubit_phonon_coupling
    }
    /// G, falling back to `G′/(√2 d̄)` (or 0 when `d̄ = 0`).
    pub fn qubit_phonon_coupling_or_implied(&self) -> f64 {
        match self.qubit_phonon_coupling {
            Some(g) => g,
            None if self.qubit_mean != 0.0 => self.em_coupling / (SQRT_2 * self.qubit_mean),
            None => 0.0,
        }
    }
    /// d̄.
    pub fn qubit_mean(&self) -> f64 {
        self.qubit_mean
    }
    /// x̄.
    pub fn mech_mean(&self) -> f64 {
        self.mech_mean
    }
    /// Ω_R, rad/s.
    pub fn qubit_drive(&self) -> f64 {
        self.qubit_drive
    }
    /// ω_L, rad/s.
    pub fn laser_frequency(&self) -> f64 {
        self.laser_frequency
    }
    /// E_L = √(P_L κ/(ħ ω_L)), rad/s.
    pub fn drive_amplitude(&self) -> f64 {
        (self.laser_power * self.cavity_decay / (HBAR * self.laser_frequency)).sqrt()
    }
    /// T, K.
    pub fn temperature(&self) -> f64 {
        self.temperature
    }
    /// n̄ = k_B T/(ħΩ).
    pub fn thermal_occupation(&self) -> f64 {
        self.thermal_occupation
    }
    /// Oscillator mass in kg, if configured.
    pub fn mass(&self) -> Option<f64> {
        self.mass
    }

    /// Factor `ħ m Ω γ_m` converting a dimensionless PSD to N²/Hz.
    pub fn psd_unit(&self) -> Option<f64> {
        self.mass
            .map(|m| HBAR * m * self.mech_frequency * self.mech_damping)
    }

    /// Whether `2·G_opa ≥ κ/2`.
    pub fn opa_unstable(&self) -> bool {
        2.0 * self.opa_gain >= self.cavity_decay / 2.0
    }

    /// Every field as `(name, value)` in a fixed order, for output metadata.
    pub fn snapshot(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("Omega", self.mech_frequency),
            ("gamma_m", self.mech_damping),
            ("kappa", self.cavity_decay),
            ("Gamma", self.qubit_dephasing),
            ("Delta_q", self.qubit_detuning),
            ("Delta_c", 0.0),
            ("g0", self.single_photon_coupling),
            ("g", self.coupling),
            ("P_L", self.laser_power),
            ("E_L", self.drive_amplitude()),
            ("G_opa", self.opa_gain),
            ("theta_opa", 0.0),
            ("G_em", self.em_coupling),
        ];
        if let Some(g) = self.qubit_phonon_coupling {
            out.push(("G_qubit", g));
        }
        out.extend([
            ("d_bar", self.qubit_mean),
            ("x_bar", self.mech_mean),
            ("Omega_R", self.qubit_drive),
            ("omega_L", self.laser_frequency),
            ("T", self.temperature),
            ("n_bar", self.thermal_occupation),
        ]);
        if let Some(m) = self.mass {
            out.push(("mass", m));
        }
        out
    }
}

/// `2ħ ω_L κ`: the power at which `g = g₀`.
fn power_scale(laser_frequency: f64, cavity_decay: f64) -> f64 {
    2.0 * HBAR * laser_frequency * cavity_decay
}

fn positive(name: &'static str, value: f64) -> Result<(), ParamsError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamsError::NotPositive { name, value })
    }
}

fn finite(name: &'static str, value: f64) -> Result<(), ParamsError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ParamsError::NotFinite { name, value })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<(), ParamsError> {
    if value >= 0.0 {
        Ok(())
    } else {
        Err(ParamsError::Negative { name, value })
    }
}

fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs())
}
