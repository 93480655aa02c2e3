//! Measurement-added force noise in a hybrid electro-optomechanical sensor.
//!
//! The system is an optomechanical cavity (optionally with an intracavity
//! parametric amplifier) whose mechanical oscillator is the force probe, plus a
//! bosonized superconducting qubit used for coherent quantum noise
//! cancellation (CQNC) of radiation-pressure back-action.
//!
//! Layout:
//!
//! - [`params`]: validated physical parameters, unit conventions and presets.
//! - [`response`]: complex susceptibilities evaluated at one frequency.
//! - [`spectra`]: closed-form output coefficients and noise PSDs.
//! - [`oracle`]: independent 6-quadrature linear model solved per frequency.
//! - [`analysis`]: cancellation residuals, constraint roots, SQL minimization
//!   and sweep drivers.
//! - [`cli`]: the `cqnc` command-line front end.
//!
//! All frequencies and rates are angular (rad/s). Spectral densities are
//! dimensionless, normalized by `ħ m Ω γ_m`.

pub mod analysis;
pub mod cli;
mod linalg;
pub mod oracle;
pub mod params;
pub mod response;
pub mod spectra;

use std::fmt;

pub use num_complex::Complex64;
pub use params::{ParamsBuilder, ParamsError, PhysicalParams};
pub use response::{ChiDPrimeConvention, FrequencyGrid, Pole};
pub use spectra::NoiseBudget;

/// Non-fatal conditions surfaced alongside results.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// `Ω/Γ` below the separation the matching conditions rely on.
    WeakSeparation { ratio: f64 },
    /// `2·G_opa ≥ κ/2`: the cavity amplitude quadrature is anti-damped.
    OpaInstability { opa_gain: f64, kappa: f64 },
    /// The drift matrix has an eigenvalue with non-negative real part.
    UnstableDrift { max_real_part: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::WeakSeparation { ratio } => {
                write!(
                    f,
                    "Omega/Gamma = {ratio} < 100; cancellation assumes Omega >> Gamma"
                )
            }
            Warning::OpaInstability { opa_gain, kappa } => write!(
                f,
                "OPA gain {opa_gain} rad/s >= kappa/4 = {}; amplitude quadrature is anti-damped",
                kappa / 4.0
            ),
            Warning::UnstableDrift { max_real_part } => write!(
                f,
                "drift matrix is unstable (max eigenvalue real part {max_real_part} rad/s); \
                 frequency response evaluated anyway"
            ),
        }
    }
}
