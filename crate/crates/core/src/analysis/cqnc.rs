use serde::Serialize;

use crate::params::{PhysicalParams, MIN_SEPARATION_RATIO};
use crate::response::{self, ChiDPrimeConvention, FrequencyGrid};

/// Exact-equality checks of the three matching conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchingFlags {
    /// `Δ_q == Ω`
    pub detuning: bool,
    /// `Γ == γ_m`
    pub damping: bool,
    /// `G′ == g`
    pub coupling: bool,
    /// `Ω/Γ`
    pub separation_ratio: f64,
}

impl MatchingFlags {
    pub fn of(p: &PhysicalParams) -> Self {
        Self {
            detuning: p.qubit_detuning() == p.mech_frequency(),
            damping: p.qubit_dephasing() == p.mech_damping(),
            coupling: p.em_coupling() == p.coupling(),
            separation_ratio: p.mech_frequency() / p.qubit_dephasing(),
        }
    }

    /// All three equalities hold and `Ω/Γ ≥ 100`.
    pub fn all_matched(&self) -> bool {
        self.detuning
            && self.damping
            && self.coupling
            && self.separation_ratio >= MIN_SEPARATION_RATIO
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualPoint {
    pub omega: f64,
    /// `|g²χ_m + G′²χ′_d|`
    pub absolute: f64,
    /// `absolute / (g²|χ_m|)`
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CqncReport {
    pub flags: MatchingFlags,
    #[serde(skip)]
    pub convention: ChiDPrimeConvention,
    pub residual_curve: Vec<ResidualPoint>,
    pub max_relative_residual: f64,
}

/// Evaluates the cancellation residual `g²χ_m + G′²χ′_d` over `grid`.
///
/// With `g = 0` the relative residual is 0 where the absolute one vanishes
/// and infinite elsewhere.
pub fn cqnc_residual(
    p: &PhysicalParams,
    grid: &FrequencyGrid,
    convention: ChiDPrimeConvention,
) -> CqncReport {
    let g2 = p.coupling() * p.coupling();
    let em2 = p.em_coupling() * p.em_coupling();
    let residual_curve: Vec<ResidualPoint> = grid
        .points()
        .iter()
        .map(|&omega| {
            let chi_m = response::chi_m(p, omega);
            let absolute = (g2 * chi_m + em2 * convention.eval(p, omega)).norm();
            let scale = g2 * chi_m.norm();
            let relative = if scale > 0.0 {
                absolute / scale
            } else if absolute == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            ResidualPoint {
                omega,
                absolute,
                relative,
            }
        })
        .collect();
    let max_relative_residual = residual_curve
        .iter()
        .map(|r| r.relative)
        .fold(0.0, f64::max);
    CqncReport {
        flags: MatchingFlags::of(p),
        convention,
        residual_curve,
        max_relative_residual,
    }
}
