//! Independent reference model: the full 6-quadrature linearized Langevin
//! system, solved per frequency as a complex linear system.
//!
//! State order is `(x_a, p_a, x, p, x_d, p_d)`; input channels are listed in
//! [`Channel`]. Nothing here uses the closed-form susceptibilities of
//! [`crate::response`]; the transfer row is `C (iω I − A)⁻¹ B + D`.
//!
//! Two wirings are available:
//!
//! - [`ModelMode::Literal`] transcribes the quadrature equations as written,
//!   with the qubit coupled to the mechanical position. Its qubit damping is
//!   `Γ/2` on `x_d` and `Γ/√2` on `p_d`, and it keeps the `x̄` and `Ω_R`
//!   terms. In this wiring the amplitude noise reaches `p_a` only through
//!   the mechanics, so back-action is never cancelled.
//! - [`ModelMode::Consistent`] couples the qubit to the intracavity amplitude
//!   quadrature and reads it out through the cavity phase quadrature, with
//!   `Γ/2` on both qubit quadratures. This is the wiring whose response is
//!   `κλ₊λ₋(g²χ_m + G′²χ′_d)` on `x_a^in`. Under
//!   [`ChiDPrimeConvention::Cancelling`] the qubit rotates at `−Δ_q` (drive
//!   frame), giving `χ′_d = −Δ_q χ_d ζ`; under
//!   [`ChiDPrimeConvention::Displayed`] it rotates at `+Δ_q`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg;
use crate::params::PhysicalParams;
use crate::response::{ChiDPrimeConvention, Pole};
use crate::spectra::{NoiseBudget, VACUUM_LEVEL};
use crate::Warning;

pub const STATE_DIM: usize = 6;

/// Input noise/force channels, in column order of the input matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    AmplitudeIn = 0,
    PhaseIn = 1,
    Thermal = 2,
    External = 3,
    QubitXIn = 4,
    QubitPIn = 5,
}

impl Channel {
    pub const ALL: [Channel; 6] = [
        Channel::AmplitudeIn,
        Channel::PhaseIn,
        Channel::Thermal,
        Channel::External,
        Channel::QubitXIn,
        Channel::QubitPIn,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

mod state {
    pub const XA: usize = 0;
    pub const PA: usize = 1;
    pub const X: usize = 2;
    pub const P: usize = 3;
    pub const XD: usize = 4;
    pub const PD: usize = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModelMode {
    Literal,
    #[default]
    Consistent,
}

impl ModelMode {
    pub fn name(self) -> &'static str {
        match self {
            ModelMode::Literal => "literal",
            ModelMode::Consistent => "consistent",
        }
    }
}

impl std::str::FromStr for ModelMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Self::Literal),
            "consistent" => Ok(Self::Consistent),
            other => Err(format!(
                "unknown mode '{other}' (expected literal|consistent)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Pole(#[from] Pole),
    #[error("force-channel gain vanishes at omega = {0} rad/s; cannot normalize")]
    ZeroForceGain(f64),
}

/// Drift, input, noise and output description of the linear system.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub drift: [[f64; 6]; 6],
    pub input: [[f64; 6]; 6],
    /// Symmetrized PSD level per channel (thermal channel at `n̄`).
    pub noise_levels: [f64; 6],
    /// Output row: `√κ` on `p_a`.
    pub output: [f64; 6],
    /// Feedthrough: `−1` on `p_a^in`.
    pub feedthrough: [f64; 6],
    pub mode: ModelMode,
    pub convention: ChiDPrimeConvention,
    pub warnings: Vec<Warning>,
}

/// Complex gains from each input channel to `P_out` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferRow {
    pub omega: f64,
    pub gains: [Complex64; 6],
}

impl TransferRow {
    pub fn gain(&self, channel: Channel) -> Complex64 {
        self.gains[channel.index()]
    }
}

impl LinearModel {
    pub fn assemble(p: &PhysicalParams, mode: ModelMode, convention: ChiDPrimeConvention) -> Self {
        use state::*;
        let kappa = p.cavity_decay();
        let opa = p.opa_gain();
        let g = p.coupling();
        let em = p.em_coupling();
        let w_m = p.mech_frequency();
        let gamma_m = p.mech_damping();
        let gamma_q = p.qubit_dephasing();
        let dq = p.qubit_detuning();

        let mut a = [[0.0_f64; 6]; 6];
        let mut b = [[0.0_f64; 6]; 6];

        a[XA][XA] = -kappa / 2.0 + 2.0 * opa;
        b[XA][Channel::AmplitudeIn.index()] = kappa.sqrt();

        a[PA][PA] = -(kappa / 2.0 + 2.0 * opa);
        a[PA][X] = -g;
        b[PA][Channel::PhaseIn.index()] = kappa.sqrt();

        a[X][P] = w_m;

        a[P][X] = -w_m;
        a[P][XA] = -g;
        a[P][P] = -gamma_m;
        b[P][Channel::Thermal.index()] = gamma_m.sqrt();
        b[P][Channel::External.index()] = gamma_m.sqrt();

        b[XD][Channel::QubitXIn.index()] = gamma_q.sqrt();
        b[PD][Channel::QubitPIn.index()] = gamma_q.sqrt();

        match mode {
            ModelMode::Literal => {
                let bare = p.qubit_phonon_coupling_or_implied();
                let shift = 2.0 * bare * p.mech_mean();
                a[P][XD] = -em;
                a[XD][PD] = dq + shift;
                a[XD][XD] = -gamma_q / 2.0;
                a[PD][XD] = -dq - shift + 2.0 * p.qubit_drive() * p.qubit_mean();
                a[PD][X] = -2.0 * em;
                a[PD][PD] = -gamma_q / SQRT_2;
            }
            ModelMode::Consistent => {
                let rotation = match convention {
                    ChiDPrimeConvention::Cancelling => -dq,
                    ChiDPrimeConvention::Displayed => dq,
                };
                a[PA][XD] = -em;
                a[XD][PD] = rotation;
                a[XD][XD] = -gamma_q / 2.0;
                a[PD][XD] = -rotation;
                a[PD][XA] = -em;
                a[PD][PD] = -gamma_q / 2.0;
            }
        }

        let mut noise_levels = [VACUUM_LEVEL; 6];
        noise_levels[Channel::Thermal.index()] = p.thermal_occupation();
        noise_levels[Channel::External.index()] = 0.0;

        let mut output = [0.0; 6];
        output[PA] = kappa.sqrt();
        let mut feedthrough = [0.0; 6];
        feedthrough[Channel::PhaseIn.index()] = -1.0;

        let mut model = Self {
            drift: a,
            input: b,
            noise_levels,
            output,
            feedthrough,
            mode,
            convention,
            warnings: Vec::new(),
        };
        if let Some(max_real_part) = model.max_real_eigenvalue().filter(|re| *re >= 0.0) {
            model
                .warnings
                .push(Warning::UnstableDrift { max_real_part });
        }
        model
    }

    /// Eigenvalues of the drift matrix; empty if the QR iteration fails.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        linalg::eigenvalues(&self.drift).unwrap_or_default()
    }

    fn max_real_eigenvalue(&self) -> Option<f64> {
        self.eigenvalues().iter().map(|z| z.re).reduce(f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.max_real_eigenvalue().is_some_and(|re| re < 0.0)
    }

    /// `C (iω I − A)⁻¹ B + D`, one complex solve with the six input columns
    /// as right-hand sides.
    pub fn transfer_row(&self, omega: f64) -> Result<TransferRow, Pole> {
        let mut m = [[Complex64::new(0.0, 0.0); 6]; 6];
        let mut rhs = [[Complex64::new(0.0, 0.0); 6]; 6];
        for r in 0..6 {
            for c in 0..6 {
                m[r][c] = Complex64::new(-self.drift[r][c], 0.0);
                rhs[r][c] = Complex64::new(self.input[r][c], 0.0);
            }
            m[r][r] += Complex64::new(0.0, omega);
        }
        linalg::solve_in_place(&mut m, &mut rhs).map_err(|_| Pole {
            quantity: "drift resolvent",
            omega,
        })?;

        let mut gains = [Complex64::new(0.0, 0.0); 6];
        for (k, gain) in gains.iter_mut().enumerate() {
            let mut acc = Complex64::new(self.feedthrough[k], 0.0);
            for (r, c_r) in self.output.iter().enumerate() {
                if *c_r != 0.0 {
                    acc += *c_r * rhs[r][k];
                }
            }
            *gain = acc;
        }
        Ok(TransferRow { omega, gains })
    }

    /// Force-referred added-noise PSD: the transfer row divided by the force
    /// gain, weighted by each channel's noise level.
    pub fn force_psd(&self, omega: f64, include_thermal: bool) -> Result<NoiseBudget, OracleError> {
        let row = self.transfer_row(omega)?;
        let force = row.gain(Channel::External);
        if force == Complex64::new(0.0, 0.0) {
            return Err(OracleError::ZeroForceGain(omega));
        }
        let term = |ch: Channel| (row.gain(ch) / force).norm_sqr() * self.noise_levels[ch.index()];
        let thermal = if include_thermal {
            term(Channel::Thermal)
        } else {
            0.0
        };
        Ok(NoiseBudget::new(
            omega,
            thermal,
            term(Channel::PhaseIn),
            term(Channel::AmplitudeIn),
            term(Channel::QubitXIn),
            term(Channel::QubitPIn),
        ))
    }
}

/// Convenience wrapper for [`LinearModel::assemble`].
pub fn assemble_model(
    p: &PhysicalParams,
    mode: ModelMode,
    convention: ChiDPrimeConvention,
) -> LinearModel {
    LinearModel::assemble(p, mode, convention)
}

/// Convenience wrapper for [`LinearModel::force_psd`].
pub fn oracle_force_psd(
    model: &LinearModel,
    omega: f64,
    include_thermal: bool,
) -> Result<NoiseBudget, OracleError> {
    model.force_psd(omega, include_thermal)
}
