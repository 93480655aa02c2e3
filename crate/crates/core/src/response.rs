//! Complex susceptibilities at a single angular frequency.
//!
//! Fourier convention: `d/dt → +iω`. Every function here is a pure function
//! of `(params, ω)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::params::PhysicalParams;
use crate::Warning;

/// A complex susceptibility or coefficient at one frequency.
pub type ComplexValue = Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A response evaluated exactly on a pole.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("{quantity} has a pole at omega = {omega} rad/s")]
pub struct Pole {
    pub quantity: &'static str,
    pub omega: f64,
}

/// Cavity response `χ_a = 1/(iω + κ/2)`.
pub fn chi_a(p: &PhysicalParams, omega: f64) -> Complex64 {
    (I * omega + p.cavity_decay() / 2.0).inv()
}

/// Mechanical susceptibility `χ_m = Ω/(Ω² − ω² + iγ_m ω)`.
pub fn chi_m(p: &PhysicalParams, omega: f64) -> Complex64 {
    let w_m = p.mech_frequency();
    w_m / Complex64::new(w_m * w_m - omega * omega, p.mech_damping() * omega)
}

/// Bare qubit response `χ_d = 1/(iω + Γ/2)`.
pub fn chi_d(p: &PhysicalParams, omega: f64) -> Complex64 {
    (I * omega + p.qubit_dephasing() / 2.0).inv()
}

/// Dressed qubit response `ζ = 1/(iω + Γ/2 + Δ_q² χ_d)`.
pub fn zeta(p: &PhysicalParams, omega: f64) -> Complex64 {
    let dq = p.qubit_detuning();
    (I * omega + p.qubit_dephasing() / 2.0 + dq * dq * chi_d(p, omega)).inv()
}

/// Which expression to use for the effective qubit susceptibility `χ′_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiDPrimeForm {
    /// `−Δ_q ζ χ_d`.
    Product,
    /// `Ω/(Ω² − ω² + iωΓ + Γ²/4)`.
    ClosedForm,
}

/// `χ′_d` in the requested form.
///
/// For `Δ_q = Ω` the two forms are exact negatives of each other:
/// `Δ_q ζ χ_d = Δ_q/(Δ_q² + (iω + Γ/2)²)`.
pub fn chi_d_prime(p: &PhysicalParams, omega: f64, form: ChiDPrimeForm) -> Complex64 {
    match form {
        ChiDPrimeForm::Product => -p.qubit_detuning() * zeta(p, omega) * chi_d(p, omega),
        ChiDPrimeForm::ClosedForm => {
            let w_m = p.mech_frequency();
            let gamma = p.qubit_dephasing();
            w_m / Complex64::new(
                w_m * w_m - omega * omega + gamma * gamma / 4.0,
                omega * gamma,
            )
        }
    }
}

/// Sign convention for `χ′_d` in the back-action coefficient
/// `g²χ_m + G′²χ′_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChiDPrimeConvention {
    /// `χ′_d = −Δ_q ζ χ_d`, which approaches `−χ_m` under matching so the
    /// back-action term cancels.
    #[default]
    Cancelling,
    /// The displayed closed form, which approaches `+χ_m` under matching.
    Displayed,
}

impl ChiDPrimeConvention {
    pub fn form(self) -> ChiDPrimeForm {
        match self {
            ChiDPrimeConvention::Cancelling => ChiDPrimeForm::Product,
            ChiDPrimeConvention::Displayed => ChiDPrimeForm::ClosedForm,
        }
    }

    pub fn eval(self, p: &PhysicalParams, omega: f64) -> Complex64 {
        chi_d_prime(p, omega, self.form())
    }

    pub fn name(self) -> &'static str {
        match self {
            ChiDPrimeConvention::Cancelling => "cancelling",
            ChiDPrimeConvention::Displayed => "displayed",
        }
    }
}

impl std::str::FromStr for ChiDPrimeConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cancelling" => Ok(Self::Cancelling),
            "displayed" => Ok(Self::Displayed),
            other => Err(format!(
                "unknown chi_d_prime convention '{other}' (expected cancelling|displayed)"
            )),
        }
    }
}

/// OPA-dressed amplitude response `λ₊ = 1/(χ_a⁻¹ − 2G_opa)`.
///
/// Poles only at `ω = 0` with `G_opa = κ/4`.
pub fn lambda_plus(p: &PhysicalParams, omega: f64) -> Result<Complex64, Pole> {
    let denom = Complex64::new(p.cavity_decay() / 2.0 - 2.0 * p.opa_gain(), omega);
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Pole {
            quantity: "lambda_plus",
            omega,
        });
    }
    Ok(denom.inv())
}

/// OPA-dressed phase response `λ₋ = 1/(χ_a⁻¹ + 2G_opa)`.
pub fn lambda_minus(p: &PhysicalParams, omega: f64) -> Complex64 {
    Complex64::new(p.cavity_decay() / 2.0 + 2.0 * p.opa_gain(), omega).inv()
}

/// Instability warning when `2·G_opa ≥ κ/2`.
pub fn opa_instability(p: &PhysicalParams) -> Option<Warning> {
    p.opa_unstable().then(|| Warning::OpaInstability {
        opa_gain: p.opa_gain(),
        kappa: p.cavity_decay(),
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("frequency grid is empty")]
    Empty,
    #[error("frequency grid contains a non-finite value at index {0}")]
    NotFinite(usize),
    #[error("frequency grid is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("grid bounds must satisfy min < max, got [{0}, {1}]")]
    BadBounds(f64, f64),
    #[error("logarithmic grid needs a positive lower bound, got {0}")]
    NonPositiveLog(f64),
}

/// Strictly increasing, finite, non-empty list of angular frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>) -> Result<Self, GridError> {
        if points.is_empty() {
            return Err(GridError::Empty);
        }
        for (i, w) in points.iter().enumerate() {
            if !w.is_finite() {
                return Err(GridError::NotFinite(i));
            }
            if i > 0 && points[i - 1] >= *w {
                return Err(GridError::NotIncreasing(i));
            }
        }
        Ok(Self { points })
    }

    /// `count` evenly spaced points from `min` to `max` inclusive.
    pub fn linear(min: f64, max: f64, count: usize) -> Result<Self, GridError> {
        check_bounds(min, max, count)?;
        let step = (max - min) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| min + step * i as f64).collect();
        points[count - 1] = max;
        Self::new(points)
    }

    /// `count` log-spaced points from `min` to `max` inclusive.
    pub fn log(min: f64, max: f64, count: usize) -> Result<Self, GridError> {
        check_bounds(min, max, count)?;
        if min <= 0.0 {
            return Err(GridError::NonPositiveLog(min));
        }
        let (lo, hi) = (min.ln(), max.ln());
        let step = (hi - lo) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| (lo + step * i as f64).exp()).collect();
        points[0] = min;
        points[count - 1] = max;
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same grid multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self, GridError> {
        Self::new(self.points.iter().map(|w| w * factor).collect())
    }
}

fn check_bounds(min: f64, max: f64, count: usize) -> Result<(), GridError> {
    if count < 2 {
        return Err(GridError::TooFewPoints(count));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(GridError::BadBounds(min, max));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, rtol: f64) -> bool {
        (a - b).norm() <= rtol * b.norm()
    }

    #[test]
    fn chi_a_landmarks() {
        let p = PhysicalParams::fig2();
        let k = p.cavity_decay();
        assert_eq!(chi_a(&p, 0.0), Complex64::new(2.0 / k, 0.0));
        assert!(close(
            chi_a(&p, k / 2.0),
            Complex64::new(1.0, -1.0) / k,
            1e-15
        ));
        // 40-digit evaluation at omega = Omega
        let expected = Complex64::new(2.340_513_868_998_461e-7, -1.404_308_321_399_077e-7);
        assert!(close(chi_a(&p, p.mech_frequency()), expected, 1e-14));
    }

    #[test]
    fn chi_m_landmarks() {
        let p = PhysicalParams::fig2();
        let w_m = p.mech_frequency();
        assert!(close(chi_m(&p, 0.0), Complex64::new(1.0 / w_m, 0.0), 1e-15));
        let at_res = chi_m(&p, w_m);
        assert!((at_res.norm() * p.mech_damping() - 1.0).abs() < 1e-12);
        assert!(close(
            at_res,
            Complex64::new(0.0, -1.0 / p.mech_damping()),
            1e-12
        ));
        let w = 2.0 * std::f64::consts::PI * 2.0e5;
        let expected = Complex64::new(9.549_296_448_003_85e-7, -1.145_915_573_760_462e-10);
        assert!(close(chi_m(&p, w), expected, 1e-13));
    }

    #[test]
    fn chi_d_landmarks() {
        let p = PhysicalParams::cqnc_matched();
        let gamma = p.qubit_dephasing();
        assert_eq!(chi_d(&p, 0.0), Complex64::new(2.0 / gamma, 0.0));
        assert!(close(
            chi_d(&p, gamma / 2.0),
            Complex64::new(1.0, -1.0) / gamma,
            1e-15
        ));
        let w = p.mech_frequency();
        let expected = (Complex64::new(gamma / 2.0, w)).inv();
        assert!(close(chi_d(&p, w), expected, 1e-15));
    }

    #[test]
    fn zeta_reduces_to_chi_d_without_detuning() {
        let p = PhysicalParams::fig2();
        assert_eq!(p.qubit_detuning(), 0.0);
        for w in [0.0, 1.0, 1e3, 2e6] {
            assert_eq!(zeta(&p, w), chi_d(&p, w));
        }
    }

    #[test]
    fn zeta_at_dc() {
        let p = PhysicalParams::cqnc_matched();
        let (gamma, dq) = (p.qubit_dephasing(), p.qubit_detuning());
        let expected = 1.0 / (gamma / 2.0 + 2.0 * dq * dq / gamma);
        assert!(close(zeta(&p, 0.0), Complex64::new(expected, 0.0), 1e-14));
    }

    #[test]
    fn zeta_matches_closed_expression_off_resonance() {
        // ζ = (iω + Γ/2)/((iω + Γ/2)² + Δ_q²)
        let p = PhysicalParams::cqnc_matched();
        let w = 0.5 * p.mech_frequency();
        let s = Complex64::new(p.qubit_dephasing() / 2.0, w);
        let expected = s / (s * s + p.qubit_detuning().powi(2));
        assert!(close(zeta(&p, w), expected, 1e-12));
    }

    #[test]
    fn chi_d_prime_forms_are_negatives_when_detuning_matches() {
        let p = PhysicalParams::cqnc_matched();
        let grid =
            FrequencyGrid::log(0.01 * p.mech_frequency(), 10.0 * p.mech_frequency(), 500).unwrap();
        for &w in grid.points() {
            let product = chi_d_prime(&p, w, ChiDPrimeForm::Product);
            let closed = chi_d_prime(&p, w, ChiDPrimeForm::ClosedForm);
            assert!(
                (product + closed).norm() <= 1e-12 * closed.norm(),
                "omega = {w}: {product} vs {closed}"
            );
        }
    }

    #[test]
    fn chi_d_prime_dc_limit() {
        let p = PhysicalParams::cqnc_matched()
            .modify(|b| {
                b.qubit_dephasing = 1e-9;
            })
            .unwrap();
        let closed = chi_d_prime(&p, 0.0, ChiDPrimeForm::ClosedForm);
        assert!((closed.re * p.mech_frequency() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chi_d_prime_at_one_and_a_half_omega() {
        let p = PhysicalParams::cqnc_matched();
        let w_m = p.mech_frequency();
        let w = 1.5 * w_m;
        let gamma = p.qubit_dephasing();
        let expected = w_m / Complex64::new(w_m * w_m - w * w + gamma * gamma / 4.0, w * gamma);
        assert!(close(
            chi_d_prime(&p, w, ChiDPrimeForm::ClosedForm),
            expected,
            1e-15
        ));
        // real part ≈ -1/(1.25 Ω)
        assert!((expected.re * 1.25 * w_m + 1.0).abs() < 1e-6);
    }

    #[test]
    fn lambdas_reduce_to_chi_a_without_gain() {
        let p = PhysicalParams::fig2();
        for w in [0.0, 1.0, 3.0e5, 1.9e6, -2.0e6] {
            assert_eq!(lambda_plus(&p, w).unwrap(), chi_a(&p, w));
            assert_eq!(lambda_minus(&p, w), chi_a(&p, w));
        }
    }

    #[test]
    fn lambdas_at_dc_with_eighth_kappa() {
        let p = PhysicalParams::fig2();
        let k = p.cavity_decay();
        let q = p.with_opa_gain(k / 8.0).unwrap();
        let lp = lambda_plus(&q, 0.0).unwrap();
        let lm = lambda_minus(&q, 0.0);
        assert!((lp.re * k / 4.0 - 1.0).abs() < 1e-15 && lp.im == 0.0);
        assert!((lm.re * 3.0 * k / 4.0 - 1.0).abs() < 1e-15 && lm.im == 0.0);
    }

    #[test]
    fn lambda_plus_pole_and_instability() {
        let p = PhysicalParams::fig2();
        let k = p.cavity_decay();
        let at_pole = p.with_opa_gain(k / 4.0).unwrap();
        assert_eq!(
            lambda_plus(&at_pole, 0.0),
            Err(Pole {
                quantity: "lambda_plus",
                omega: 0.0
            })
        );
        assert!(lambda_plus(&at_pole, 1.0).is_ok());
        assert!(opa_instability(&at_pole).is_some());
        assert!(opa_instability(&p.with_opa_gain(0.1 * k).unwrap()).is_none());

        let strong = p.with_opa_gain(0.3 * k).unwrap();
        let w = p.mech_frequency();
        let lp = lambda_plus(&strong, w).unwrap();
        let lm = lambda_minus(&strong, w);
        assert!(close(lp, Complex64::new(-0.1 * k, w).inv(), 1e-15));
        assert!(close(lm, Complex64::new(1.1 * k, w).inv(), 1e-15));
        assert!(matches!(
            opa_instability(&strong),
            Some(Warning::OpaInstability { .. })
        ));
    }

    #[test]
    fn grid_validation() {
        assert_eq!(FrequencyGrid::new(vec![]), Err(GridError::Empty));
        assert_eq!(
            FrequencyGrid::new(vec![1.0, 1.0]),
            Err(GridError::NotIncreasing(1))
        );
        assert_eq!(
            FrequencyGrid::new(vec![1.0, f64::NAN]),
            Err(GridError::NotFinite(1))
        );
        assert_eq!(
            FrequencyGrid::linear(0.0, 1.0, 1),
            Err(GridError::TooFewPoints(1))
        );
        assert_eq!(
            FrequencyGrid::linear(2.0, 1.0, 5),
            Err(GridError::BadBounds(2.0, 1.0))
        );
        assert_eq!(
            FrequencyGrid::log(0.0, 1.0, 5),
            Err(GridError::NonPositiveLog(0.0))
        );
        let g = FrequencyGrid::log(0.1, 2.0, 2000).unwrap();
        assert_eq!(g.len(), 2000);
        assert_eq!(g.points()[0], 0.1);
        assert_eq!(g.points()[1999], 2.0);
    }
}
