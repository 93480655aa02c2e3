//! Frequency and laser-power sweeps.
//!
//! Points are evaluated in parallel and collected in axis order, so the
//! output depends only on the inputs.

use rayon::prelude::*;
use thiserror::Error;

use crate::oracle::{LinearModel, ModelMode, OracleError};
use crate::params::{ParamsError, PhysicalParams};
use crate::response::{self, ChiDPrimeConvention, FrequencyGrid};
use crate::spectra::{self, NoiseBudget, SpectraError};
use crate::Warning;

/// Which model a series evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    StandardOm,
    /// Hybrid closed form with back-action cancelled; the params should
    /// already be matched.
    Hybrid,
    CqncFloor,
    Oracle {
        mode: ModelMode,
        convention: ChiDPrimeConvention,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub label: String,
    pub params: PhysicalParams,
    pub curve: Curve,
}

/// Why a single point has no value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointError {
    #[error("pole at omega = {omega} rad/s")]
    Pole { omega: f64 },
    #[error("undefined at omega = {omega} rad/s: {reason}")]
    Undefined { omega: f64, reason: String },
}

impl From<SpectraError> for PointError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::Pole(p) => PointError::Pole { omega: p.omega },
            other => PointError::Undefined {
                omega: f64::NAN,
                reason: other.to_string(),
            },
        }
    }
}

impl From<OracleError> for PointError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Pole(p) => PointError::Pole { omega: p.omega },
            OracleError::ZeroForceGain(omega) => PointError::Undefined {
                omega,
                reason: e.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub curve: Curve,
    /// One entry per axis value.
    pub points: Vec<Result<NoiseBudget, PointError>>,
    pub warnings: Vec<Warning>,
}

impl Series {
    /// Totals, with `NaN` where the point is missing.
    pub fn totals(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|r| r.as_ref().map_or(f64::NAN, |b| b.total))
            .collect()
    }

    pub fn budgets(&self) -> impl Iterator<Item = Option<&NoiseBudget>> {
        self.points.iter().map(|r| r.as_ref().ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis_name: &'static str,
    pub axis: Vec<f64>,
    /// Extra per-point columns derived from the axis, e.g. `g` in a power
    /// sweep.
    pub aux: Vec<(&'static str, Vec<f64>)>,
    pub series: Vec<Series>,
}

impl SweepResult {
    pub fn series(&self, label: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.label == label)
    }

    pub fn warnings(&self) -> impl Iterator<Item = (&str, &Warning)> {
        self.series
            .iter()
            .flat_map(|s| s.warnings.iter().map(move |w| (s.label.as_str(), w)))
    }
}

/// Evaluates every series at every grid frequency.
pub fn sweep_frequency(
    specs: &[SeriesSpec],
    grid: &FrequencyGrid,
    include_thermal: bool,
) -> SweepResult {
    let series = specs
        .iter()
        .map(|spec| {
            let model = match spec.curve {
                Curve::Oracle { mode, convention } => {
                    Some(LinearModel::assemble(&spec.params, mode, convention))
                }
                _ => None,
            };
            let points: Vec<_> = grid
                .points()
                .par_iter()
                .map(|&w| evaluate(spec, model.as_ref(), w, include_thermal))
                .collect();
            let mut warnings: Vec<Warning> = response::opa_instability(&spec.params)
                .into_iter()
                .collect();
            if let Some(m) = &model {
                warnings.extend(m.warnings.iter().cloned());
            }
            Series {
                label: spec.label.clone(),
                curve: spec.curve,
                points,
                warnings,
            }
        })
        .collect();
    SweepResult {
        axis_name: "omega",
        axis: grid.points().to_vec(),
        aux: Vec::new(),
        series,
    }
}

fn evaluate(
    spec: &SeriesSpec,
    model: Option<&LinearModel>,
    omega: f64,
    include_thermal: bool,
) -> Result<NoiseBudget, PointError> {
    let p = &spec.params;
    let with_omega = |e: PointError| match e {
        PointError::Undefined { reason, .. } => PointError::Undefined { omega, reason },
        pole => pole,
    };
    match spec.curve {
        Curve::StandardOm => {
            spectra::s_standard_om(p, omega, include_thermal).map_err(|e| with_omega(e.into()))
        }
        Curve::Hybrid => {
            spectra::s_add_closed_form(p, omega, include_thermal).map_err(|e| with_omega(e.into()))
        }
        Curve::CqncFloor => Ok(spectra::cqnc_floor_budget(p, omega)),
        Curve::Oracle { .. } => model
            .expect("oracle series carries a model")
            .force_psd(omega, include_thermal)
            .map_err(PointError::from),
    }
}

/// The frequency-plot series: standard optomechanics on `p`, the hybrid
/// closed form at each OPA gain (in units of κ) with matching applied, and
/// the cancellation floor.
pub fn fig2_series(p: &PhysicalParams, opa_gains: &[f64]) -> Result<Vec<SeriesSpec>, ParamsError> {
    let mut specs = vec![SeriesSpec {
        label: "s_standard".into(),
        params: p.clone(),
        curve: Curve::StandardOm,
    }];
    for &x in opa_gains {
        let hybrid = p
            .with_opa_gain(x * p.cavity_decay())?
            .apply_cqnc_matching()
            .0;
        specs.push(SeriesSpec {
            label: hybrid_label(x),
            params: hybrid,
            curve: Curve::Hybrid,
        });
    }
    specs.push(SeriesSpec {
        label: "s_cqnc_floor".into(),
        params: p.apply_cqnc_matching().0,
        curve: Curve::CqncFloor,
    });
    Ok(specs)
}

pub(crate) fn hybrid_label(gain_over_kappa: f64) -> String {
    format!("s_hybrid_opa[G/kappa={gain_over_kappa}]")
}

/// Laser-power sweep at fixed `omega`: the standard curve and one matched
/// hybrid curve per OPA gain (in units of κ). `g` is recomputed from each
/// power and matching re-applied, so `G′` follows `g`.
pub fn sweep_power(
    p: &PhysicalParams,
    omega: f64,
    powers: &[f64],
    opa_gains: &[f64],
    include_thermal: bool,
) -> Result<SweepResult, ParamsError> {
    let couplings = powers
        .iter()
        .map(|&w| p.g_from_power(w))
        .collect::<Result<Vec<f64>, _>>()?;
    let at_power: Vec<PhysicalParams> = powers
        .iter()
        .map(|&w| p.with_laser_power(w))
        .collect::<Result<_, _>>()?;

    let mut series = vec![Series {
        label: "s_standard".into(),
        curve: Curve::StandardOm,
        points: at_power
            .par_iter()
            .map(|q| {
                spectra::s_standard_om(q, omega, include_thermal).map_err(|e| point_error(e, omega))
            })
            .collect(),
        warnings: Vec::new(),
    }];
    for &x in opa_gains {
        let hybrids: Vec<PhysicalParams> = at_power
            .iter()
            .map(|q| {
                Ok(q.with_opa_gain(x * p.cavity_decay())?
                    .apply_cqnc_matching()
                    .0)
            })
            .collect::<Result<_, ParamsError>>()?;
        let warnings = hybrids
            .first()
            .and_then(response::opa_instability)
            .into_iter()
            .collect();
        series.push(Series {
            label: format!("s_hybrid[G/kappa={x}]"),
            curve: Curve::Hybrid,
            points: hybrids
                .par_iter()
                .map(|q| {
                    spectra::s_add_closed_form(q, omega, include_thermal)
                        .map_err(|e| point_error(e, omega))
                })
                .collect(),
            warnings,
        });
    }
    Ok(SweepResult {
        axis_name: "P_L_watts",
        axis: powers.to_vec(),
        aux: vec![("g", couplings)],
        series,
    })
}

fn point_error(e: SpectraError, omega: f64) -> PointError {
    match PointError::from(e) {
        PointError::Undefined { reason, .. } => PointError::Undefined { omega, reason },
        pole => pole,
    }
}

/// Number of sign changes in the forward differences of `values`, skipping
/// zero differences.
pub fn discrete_slope_sign_changes(values: &[f64]) -> usize {
    let signs: Vec<f64> = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d != 0.0)
        .map(f64::signum)
        .collect();
    signs.windows(2).filter(|s| s[0] != s[1]).count()
}

pub fn is_non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}

/// Index of the first value within `fraction` (relative) of `floor`.
pub fn first_within_fraction(values: &[f64], floor: f64, fraction: f64) -> Option<usize> {
    values
        .iter()
        .position(|v| (v - floor).abs() <= fraction * floor.abs())
}
