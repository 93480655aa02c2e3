//! Flat TOML run configuration.
//!
//! ```toml
//! preset = "cqnc-matched"   # or "fig2"; both start from the same rates
//! unit = "Hz"               # frequency-valued keys are multiplied by 2π
//! P_L = 0.05                # any parameter key overrides the preset
//! omega_min = 0.1           # grid bounds in units of Omega
//! omega_max = 2.0
//! omega_count = 2000
//! omega_spacing = "log"
//! mode = "consistent"
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::oracle::ModelMode;
use crate::params::{LaserDrive, ParamsBuilder, ParamsError, PhysicalParams};
use crate::response::{ChiDPrimeConvention, FrequencyGrid, GridError};
use crate::Warning;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid value for '{key}': {message}")]
    Value { key: &'static str, message: String },
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("invalid grid: {0}")]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Grid bounds; the frequency grid is in units of Ω, the power grid in W.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn build(&self) -> Result<FrequencyGrid, GridError> {
        match self.spacing {
            Spacing::Linear => FrequencyGrid::linear(self.min, self.max, self.count),
            Spacing::Log => FrequencyGrid::log(self.min, self.max, self.count),
        }
    }
}

/// Everything a subcommand needs, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: PathBuf,
    pub params: PhysicalParams,
    pub omega_grid: GridSpec,
    pub power_grid: GridSpec,
    /// Evaluation frequency of the power sweep, units of Ω.
    pub sweep_omega: f64,
    /// OPA gains in units of κ; `None` lets each command pick its default.
    pub opa_gains: Option<Vec<f64>>,
    pub mode: ModelMode,
    pub convention: ChiDPrimeConvention,
    pub thermal: bool,
    pub format: Format,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    unit: Option<String>,
    apply_matching: Option<bool>,
    #[serde(rename = "Omega")]
    omega_m: Option<f64>,
    gamma_m: Option<f64>,
    kappa: Option<f64>,
    #[serde(rename = "Gamma")]
    gamma_q: Option<f64>,
    #[serde(rename = "Delta_q")]
    delta_q: Option<f64>,
    g0: Option<f64>,
    g: Option<f64>,
    #[serde(rename = "P_L")]
    power: Option<f64>,
    #[serde(rename = "G_opa")]
    opa_gain: Option<f64>,
    #[serde(rename = "G_em")]
    em_coupling: Option<f64>,
    #[serde(rename = "G_qubit")]
    qubit_phonon: Option<f64>,
    d_bar: Option<f64>,
    x_bar: Option<f64>,
    #[serde(rename = "Omega_R")]
    rabi: Option<f64>,
    #[serde(rename = "omega_L")]
    laser_frequency: Option<f64>,
    #[serde(rename = "T")]
    temperature: Option<f64>,
    mass: Option<f64>,
    omega_min: Option<f64>,
    omega_max: Option<f64>,
    omega_count: Option<usize>,
    omega_spacing: Option<String>,
    power_min: Option<f64>,
    power_max: Option<f64>,
    power_count: Option<usize>,
    power_spacing: Option<String>,
    sweep_omega: Option<f64>,
    opa_gains: Option<Vec<f64>>,
    mode: Option<String>,
    chi_d_prime: Option<String>,
    thermal: Option<bool>,
    format: Option<String>,
}

pub const DEFAULT_OMEGA_GRID: GridSpec = GridSpec {
    min: 0.1,
    max: 2.0,
    count: 2000,
    spacing: Spacing::Log,
};

pub const DEFAULT_POWER_GRID: GridSpec = GridSpec {
    min: 1e-9,
    max: 1.0,
    count: 200,
    spacing: Spacing::Log,
};

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, source: &Path) -> Result<Self, ConfigError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_owned()))?;
        raw.resolve(source)
    }
}

impl RawConfig {
    fn resolve(self, source: &Path) -> Result<RunConfig, ConfigError> {
        let freq = match self.unit.as_deref().unwrap_or("rad_s") {
            "rad_s" => 1.0,
            "Hz" => 2.0 * PI,
            other => {
                return Err(value_err("unit", format!("'{other}' (expected Hz|rad_s)")));
            }
        };
        let (mut b, matched_preset) = match self.preset.as_deref().unwrap_or("fig2") {
            "fig2" => (ParamsBuilder::fig2(), false),
            "cqnc-matched" => (PhysicalParams::cqnc_matched().to_builder(), true),
            other => {
                return Err(value_err(
                    "preset",
                    format!("'{other}' (expected fig2|cqnc-matched)"),
                ));
            }
        };
        let scaled = |v: Option<f64>| v.map(|x| x * freq);
        set(&mut b.mech_frequency, scaled(self.omega_m));
        set(&mut b.mech_damping, scaled(self.gamma_m));
        set(&mut b.cavity_decay, scaled(self.kappa));
        set(&mut b.qubit_dephasing, scaled(self.gamma_q));
        set(&mut b.qubit_detuning, scaled(self.delta_q));
        set(&mut b.single_photon_coupling, scaled(self.g0));
        set(&mut b.opa_gain, scaled(self.opa_gain));
        set(&mut b.qubit_drive, scaled(self.rabi));
        set(&mut b.laser_frequency, scaled(self.laser_frequency));
        set(&mut b.qubit_mean, self.d_bar);
        set(&mut b.mech_mean, self.x_bar);
        set(&mut b.temperature, self.temperature);
        if let Some(em) = scaled(self.em_coupling) {
            b.em_coupling = Some(em);
        }
        if let Some(gq) = scaled(self.qubit_phonon) {
            b.qubit_phonon_coupling = Some(gq);
        }
        if let Some(m) = self.mass {
            b.mass = Some(m);
        }
        match (self.g, self.power) {
            (Some(_), Some(_)) => {
                return Err(value_err("g", "give either g or P_L, not both".into()));
            }
            (Some(g), None) => b.drive = LaserDrive::Coupling(g * freq),
            (None, Some(p)) => b.drive = LaserDrive::Power(p),
            (None, None) => {}
        }
        let mut params = b.build()?;
        if matched_preset
            && self.em_coupling.is_none()
            && (self.g.is_some() || self.power.is_some())
        {
            // the preset's G′ tracks g unless set explicitly
            params = params.with_em_coupling(params.coupling())?;
        }
        let mut warnings = Vec::new();
        if self.apply_matching.unwrap_or(false) {
            let (m, w) = params.apply_cqnc_matching();
            params = m;
            warnings = w;
        }

        let omega_grid = grid_spec(
            DEFAULT_OMEGA_GRID,
            self.omega_min,
            self.omega_max,
            self.omega_count,
            self.omega_spacing.as_deref(),
            "omega_spacing",
        )?;
        omega_grid.build()?;
        let power_grid = grid_spec(
            DEFAULT_POWER_GRID,
            self.power_min,
            self.power_max,
            self.power_count,
            self.power_spacing.as_deref(),
            "power_spacing",
        )?;
        power_grid.build()?;
        if power_grid.min < 0.0 {
            return Err(ParamsError::NegativePower(power_grid.min).into());
        }

        let sweep_omega = self.sweep_omega.unwrap_or(1.0);
        if !(sweep_omega.is_finite() && sweep_omega >= 0.0) {
            return Err(value_err(
                "sweep_omega",
                format!("{sweep_omega} (must be finite and >= 0)"),
            ));
        }
        if let Some(gains) = &self.opa_gains {
            if let Some(bad) = gains.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(value_err(
                    "opa_gains",
                    format!("{bad} (must be finite and >= 0)"),
                ));
            }
        }

        Ok(RunConfig {
            source: source.to_owned(),
            params,
            omega_grid,
            power_grid,
            sweep_omega,
            opa_gains: self.opa_gains,
            mode: parse_mode(self.mode.as_deref())?,
            convention: parse_convention(self.chi_d_prime.as_deref())?,
            thermal: self.thermal.unwrap_or(false),
            format: parse_format(self.format.as_deref())?,
            warnings,
        })
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn value_err(key: &'static str, message: String) -> ConfigError {
    ConfigError::Value { key, message }
}

fn grid_spec(
    default: GridSpec,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    spacing: Option<&str>,
    key: &'static str,
) -> Result<GridSpec, ConfigError> {
    let spacing = match spacing {
        None => default.spacing,
        Some("log") => Spacing::Log,
        Some("linear") => Spacing::Linear,
        Some(other) => return Err(value_err(key, format!("'{other}' (expected linear|log)"))),
    };
    Ok(GridSpec {
        min: min.unwrap_or(default.min),
        max: max.unwrap_or(default.max),
        count: count.unwrap_or(default.count),
        spacing,
    })
}

pub fn parse_mode(s: Option<&str>) -> Result<ModelMode, ConfigError> {
    s.map_or(Ok(ModelMode::default()), |s| {
        s.parse().map_err(|m: String| value_err("mode", m))
    })
}

pub fn parse_convention(s: Option<&str>) -> Result<ChiDPrimeConvention, ConfigError> {
    s.map_or(Ok(ChiDPrimeConvention::default()), |s| {
        s.parse().map_err(|_| {
            value_err(
                "chi_d_prime",
                format!("'{s}' (expected cancelling|displayed)"),
            )
        })
    })
}

pub fn parse_format(s: Option<&str>) -> Result<Format, ConfigError> {
    match s {
        None | Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(other) => Err(value_err(
            "format",
            format!("'{other}' (expected csv|json)"),
        )),
    }
}
