use std::f64::consts::SQRT_2;

use crate::analysis::{
    self, constraint_residual, constraint_roots, cqnc_residual, discrete_slope_sign_changes,
    fig2_series, first_within_fraction, is_non_increasing, minimize_sql, sweep_frequency,
    sweep_power, Curve, RootVariant, SeriesSpec, SweepResult,
};
use crate::oracle::{LinearModel, ModelMode};
use crate::params::PhysicalParams;
use crate::response;
use crate::spectra::{self, NoiseBudget};

use super::config::{ConfigError, GridSpec, RunConfig, Spacing};
use super::output::{format_float, Cell, Table};

/// Tolerances of the consistency checks.
pub mod tolerance {
    pub const ORACLE_EQUIVALENCE: f64 = 1e-6;
    pub const BACKACTION_SHARE: f64 = 1e-8;
    pub const CQNC_RESIDUAL: f64 = 1e-6;
    pub const CHI_M_RESONANCE: f64 = 1e-12;
    pub const SQL_CLOSED_FORM: f64 = 1e-12;
    pub const SQL_NUMERIC: f64 = 1e-6;
    pub const FLOOR_VALUE: f64 = 1e-6;
    pub const ROOT_RESIDUAL: f64 = 1e-10;
    pub const ROOT_AT_RESONANCE: f64 = 1e-12;
}

/// `κ/Ω` used to probe the `ω ≪ κ` limit of the standard closed form.
const FAST_CAVITY_RATIO: f64 = 1e6;

const PSD_DEFAULT_GAINS: [f64; 3] = [0.0, 0.1, 0.3];
const POWER_DEFAULT_GAINS: [f64; 2] = [0.1, 0.3];

/// A finished command: the table to write, diagnostics for stderr and the
/// exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(table: Table, diagnostics: Vec<String>) -> Self {
        Self {
            table,
            diagnostics,
            exit_code: 0,
        }
    }
}

fn header(table: &mut Table, command: &str, cfg: &RunConfig) {
    table.meta("command", command);
    for (k, v) in cfg.params.snapshot() {
        table.meta_num(format!("param.{k}"), v);
    }
    table.meta("mode", cfg.mode.name());
    table.meta("chi_d_prime", cfg.convention.name());
    table.meta("thermal", if cfg.thermal { "on" } else { "off" });
    for w in &cfg.warnings {
        table.meta("warning", w);
    }
}

fn grid_meta(table: &mut Table, prefix: &str, g: &GridSpec) {
    table.meta_num(format!("{prefix}_min"), g.min);
    table.meta_num(format!("{prefix}_max"), g.max);
    table.meta(format!("{prefix}_count"), g.count);
    let spacing = match g.spacing {
        Spacing::Linear => "linear",
        Spacing::Log => "log",
    };
    table.meta(format!("{prefix}_spacing"), spacing);
}

fn gains_meta(gains: &[f64]) -> String {
    gains
        .iter()
        .map(|g| format_float(*g))
        .collect::<Vec<_>>()
        .join(";")
}

fn sweep_warnings(table: &mut Table, sweep: &SweepResult, diagnostics: &mut Vec<String>) {
    for (label, w) in sweep.warnings() {
        table.meta("warning", format!("{label}: {w}"));
        diagnostics.push(format!("{label}: {w}"));
    }
}

fn argmin(values: &[f64]) -> Option<usize> {
    (0..values.len())
        .filter(|&i| values[i].is_finite())
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
}

/// Frequency sweep of every model on the configured grid.
pub fn cmd_psd(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    let p = &cfg.params;
    let w_m = p.mech_frequency();
    let grid = cfg.omega_grid.build()?.scaled(w_m)?;
    let gains = cfg
        .opa_gains
        .clone()
        .unwrap_or_else(|| PSD_DEFAULT_GAINS.to_vec());

    let mut specs = fig2_series(p, &gains)?;
    specs.push(SeriesSpec {
        label: "oracle".into(),
        params: p.clone(),
        curve: Curve::Oracle {
            mode: cfg.mode,
            convention: cfg.convention,
        },
    });
    let sweep = sweep_frequency(&specs, &grid, cfg.thermal);
    let (standard, rest) = sweep.series.split_first().expect("standard series present");
    let (oracle, closed) = rest.split_last().expect("oracle series present");

    let mut columns = vec![
        "omega_over_Omega".to_owned(),
        "s_standard".into(),
        "s_standard_shot".into(),
        "s_standard_backaction".into(),
    ];
    columns.extend(closed.iter().map(|s| s.label.clone()));
    columns.extend(
        [
            "total",
            "thermal",
            "shot",
            "backaction",
            "qubit_x",
            "qubit_p",
        ]
        .iter()
        .map(|c| format!("oracle_{c}")),
    );
    let mut table = Table::new(columns);
    header(&mut table, "psd", cfg);
    grid_meta(&mut table, "omega_over_Omega", &cfg.omega_grid);
    table.meta("opa_gains_over_kappa", gains_meta(&gains));
    table.meta("oracle_params", "as configured");

    let mut diagnostics = Vec::new();
    let mut poles = 0usize;
    for (i, &w) in grid.points().iter().enumerate() {
        let mut row = vec![Cell::Num(w / w_m)];
        match &standard.points[i] {
            Ok(b) => row.extend([b.total, b.shot, b.backaction].map(Cell::Num)),
            Err(_) => {
                poles += 1;
                row.extend([Cell::Pole, Cell::Pole, Cell::Pole]);
            }
        }
        for s in closed {
            row.push(match &s.points[i] {
                Ok(b) => Cell::Num(b.total),
                Err(_) => {
                    poles += 1;
                    Cell::Pole
                }
            });
        }
        match &oracle.points[i] {
            Ok(b) => row.extend(
                [
                    b.total,
                    b.thermal,
                    b.shot,
                    b.backaction,
                    b.qubit_x,
                    b.qubit_p,
                ]
                .map(Cell::Num),
            ),
            Err(_) => {
                poles += 1;
                row.extend(std::iter::repeat_n(Cell::Pole, 6));
            }
        }
        table.push(row);
    }
    if poles > 0 {
        diagnostics.push(format!(
            "{poles} cells fell on a pole and are marked 'pole'"
        ));
    }

    // suppression of the cancellation floor relative to the standard curve
    for x in [0.5, 1.5] {
        let w = x * w_m;
        let key = format!("ratio_standard_over_floor@{x}Omega");
        match spectra::s_standard_om(p, w, false) {
            Ok(s) => table.meta_num(
                key,
                s.total / spectra::s_cqnc_floor(&p.apply_cqnc_matching().0, w),
            ),
            Err(e) => table.meta(key, e),
        }
    }
    for s in &sweep.series {
        if let Some(i) = argmin(&s.totals()) {
            table.meta_num(
                format!("argmin_omega_over_Omega.{}", s.label),
                grid.points()[i] / w_m,
            );
        }
    }
    sweep_warnings(&mut table, &sweep, &mut diagnostics);
    Ok(Outcome::ok(table, diagnostics))
}

/// Laser-power sweep at a fixed frequency.
pub fn cmd_power_sweep(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    let p = &cfg.params;
    let w = cfg.sweep_omega * p.mech_frequency();
    let powers = cfg.power_grid.build()?;
    let gains = cfg
        .opa_gains
        .clone()
        .unwrap_or_else(|| POWER_DEFAULT_GAINS.to_vec());
    let sweep = sweep_power(p, w, powers.points(), &gains, cfg.thermal)?;

    let mut columns = vec!["P_L_watts".to_owned(), "g".into()];
    columns.extend(sweep.series.iter().map(|s| s.label.clone()));
    let mut table = Table::new(columns);
    header(&mut table, "power-sweep", cfg);
    grid_meta(&mut table, "P_L_watts", &cfg.power_grid);
    table.meta_num("omega_over_Omega", cfg.sweep_omega);
    table.meta("opa_gains_over_kappa", gains_meta(&gains));

    let couplings = &sweep.aux[0].1;
    let mut diagnostics = Vec::new();
    let mut poles = 0usize;
    for (i, &power) in sweep.axis.iter().enumerate() {
        let mut row = vec![Cell::Num(power), Cell::Num(couplings[i])];
        for s in &sweep.series {
            row.push(match &s.points[i] {
                Ok(b) => Cell::Num(b.total),
                Err(_) => {
                    poles += 1;
                    Cell::Pole
                }
            });
        }
        table.push(row);
    }
    if poles > 0 {
        diagnostics.push(format!(
            "{poles} cells fell on a pole and are marked 'pole'"
        ));
    }

    let standard = sweep.series[0].totals();
    let changes = discrete_slope_sign_changes(&standard);
    table.meta("s_standard.slope_sign_changes", changes);
    table.meta("s_standard.interior_minimum", changes == 1);
    if let Some(i) = argmin(&standard) {
        table.meta_num("s_standard.argmin_P_L_watts", sweep.axis[i]);
        table.meta_num("s_standard.min", standard[i]);
    }
    for s in &sweep.series[1..] {
        let totals = s.totals();
        let floor = s
            .points
            .iter()
            .find_map(|b| b.as_ref().ok())
            .map(NoiseBudget::qubit_residual);
        table.meta(
            format!("{}.non_increasing", s.label),
            is_non_increasing(&totals),
        );
        if let Some(floor) = floor {
            table.meta_num(format!("{}.floor", s.label), floor);
            match first_within_fraction(&totals, floor, 0.01) {
                Some(i) => table.meta_num(
                    format!("{}.first_within_1pct_P_L_watts", s.label),
                    sweep.axis[i],
                ),
                None => table.meta(format!("{}.first_within_1pct_P_L_watts", s.label), "none"),
            }
        }
    }
    sweep_warnings(&mut table, &sweep, &mut diagnostics);
    Ok(Outcome::ok(table, diagnostics))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Info,
    Flagged,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
            Status::Flagged => "flagged",
        }
    }
}

struct Checks {
    table: Table,
    failed: usize,
}

impl Checks {
    fn at_most(&mut self, name: &str, measured: f64, tol: f64) {
        self.record(name, measured, Some(tol), measured <= tol);
    }

    fn below(&mut self, name: &str, measured: f64, tol: f64) {
        self.record(name, measured, Some(tol), measured < tol);
    }

    fn record(&mut self, name: &str, measured: f64, tol: Option<f64>, ok: bool) {
        let status = if ok { Status::Pass } else { Status::Fail };
        if !ok {
            self.failed += 1;
        }
        self.push(name, measured, tol, status);
    }

    fn info(&mut self, name: &str, measured: f64) {
        self.push(name, measured, None, Status::Info);
    }

    fn push(&mut self, name: &str, measured: f64, tol: Option<f64>, status: Status) {
        self.table.push(vec![
            Cell::Text(name.to_owned()),
            Cell::Num(measured),
            tol.map_or(Cell::Text("-".into()), Cell::Num),
            Cell::Text(status.name().into()),
        ]);
    }
}

/// Cancellation, oracle, SQL, floor and root consistency checks.
pub fn cmd_check(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    let p = &cfg.params;
    let w_m = p.mech_frequency();
    let gm = p.mech_damping();
    let grid = cfg.omega_grid.build()?.scaled(w_m)?;

    let mut table = Table::new(["check", "measured", "tolerance", "status"]);
    header(&mut table, "check", cfg);
    grid_meta(&mut table, "omega_over_Omega", &cfg.omega_grid);
    let mut checks = Checks { table, failed: 0 };

    let report = cqnc_residual(p, &grid, cfg.convention);
    let f = report.flags;
    checks.table.meta(
        "matching",
        format!(
            "Delta_q==Omega:{} Gamma==gamma_m:{} G_em==g:{} Omega/Gamma={}",
            f.detuning,
            f.damping,
            f.coupling,
            format_float(f.separation_ratio)
        ),
    );
    checks.at_most(
        "cqnc_residual_max_relative",
        report.max_relative_residual,
        tolerance::CQNC_RESIDUAL,
    );

    // oracle against the back-action-free closed form, thermal off
    let model = LinearModel::assemble(p, cfg.mode, cfg.convention);
    let mut worst_rel = 0.0_f64;
    let mut worst_share = 0.0_f64;
    for &w in grid.points() {
        let oracle = model.force_psd(w, false);
        let closed = spectra::s_add_closed_form(p, w, false);
        match (oracle, closed) {
            (Ok(o), Ok(c)) => {
                worst_rel = worst_rel.max((o.total / c.total - 1.0).abs());
                worst_share = worst_share.max(o.backaction / o.total);
            }
            _ => {
                worst_rel = f64::INFINITY;
                worst_share = f64::INFINITY;
            }
        }
    }
    checks.at_most(
        "oracle_vs_closed_form_max_relative",
        worst_rel,
        tolerance::ORACLE_EQUIVALENCE,
    );
    checks.below(
        "oracle_backaction_share_max",
        worst_share,
        tolerance::BACKACTION_SHARE,
    );
    for w in &model.warnings {
        checks.table.meta("warning", w);
    }

    let chi = response::chi_m(p, w_m).norm();
    checks.at_most(
        "chi_m_at_resonance_vs_inverse_gamma_m",
        (chi * gm - 1.0).abs(),
        tolerance::CHI_M_RESONANCE,
    );
    checks.at_most(
        "sql_closed_form_at_resonance_minus_1",
        (spectra::s_sql(p, w_m) - 1.0).abs(),
        tolerance::SQL_CLOSED_FORM,
    );
    let sql = minimize_sql(p, w_m);
    checks.at_most(
        "sql_numeric_minimum_minus_sqrt2",
        (sql.s_min - SQRT_2).abs(),
        tolerance::SQL_NUMERIC,
    );
    checks.info("sql_closed_form_over_numeric", sql.analytic_over_numeric);
    checks.info(
        "sql_numeric_g_min_over_g_sql",
        sql.g_min / sql.g_sql_analytic,
    );

    // standard closed form against the bare linear model at resonance
    let bare = p.modify(|b| {
        b.em_coupling = Some(0.0);
        b.qubit_phonon_coupling = None;
        b.opa_gain = 0.0;
    })?;
    let bare_model = LinearModel::assemble(&bare, ModelMode::Consistent, cfg.convention);
    if let (Ok(o), Ok(c)) = (
        bare_model.force_psd(w_m, false),
        spectra::s_standard_om(&bare, w_m, false),
    ) {
        checks.info(
            "standard_closed_form_over_linear_model_at_resonance",
            c.total / o.total,
        );
    }
    let fast = bare.modify(|b| b.cavity_decay = FAST_CAVITY_RATIO * b.mech_frequency)?;
    let fast_model = LinearModel::assemble(&fast, ModelMode::Consistent, cfg.convention);
    if let (Ok(o), Ok(c)) = (
        fast_model.force_psd(w_m, false),
        spectra::s_standard_om(&fast, w_m, false),
    ) {
        checks.info(
            "standard_closed_form_backaction_over_model_fast_cavity",
            c.backaction / o.backaction,
        );
    }

    checks.at_most(
        "cqnc_floor_at_resonance_minus_1",
        (spectra::s_cqnc_floor(p, w_m) - 1.0).abs(),
        tolerance::FLOOR_VALUE,
    );
    checks.at_most(
        "cqnc_floor_at_zero_minus_half",
        (spectra::s_cqnc_floor(p, 0.0) - 0.5).abs(),
        tolerance::FLOOR_VALUE,
    );

    let roots = constraint_roots(p);
    checks.at_most(
        "roots_companion_max_residual",
        roots.companion.max_residual(),
        tolerance::ROOT_RESIDUAL,
    );
    let at_resonance =
        constraint_residual(w_m, gm, gm, w_m).max(constraint_residual(w_m, gm, gm, -w_m));
    checks.below(
        "roots_g_eq_gamma_m_residual_at_pm_Omega",
        at_resonance,
        tolerance::ROOT_AT_RESONANCE,
    );
    for v in RootVariant::ALL {
        let c = roots.comparison(v);
        let status = if c.disagrees {
            Status::Flagged
        } else {
            Status::Info
        };
        checks.push(
            &format!("roots_{}_vs_companion_max_relative", v.name()),
            c.max_relative_deviation,
            Some(analysis::ROOT_AGREEMENT_TOLERANCE),
            status,
        );
    }

    // the printed qubit coefficients against the ones the linear model yields
    let w = 0.7 * w_m;
    if let (Ok(model_c), Ok(printed)) = (
        spectra::out_phase_coefficients(p, w, cfg.convention),
        spectra::out_phase_coefficients_as_printed(p, w, cfg.convention),
    ) {
        let rel = |a: crate::Complex64, b: crate::Complex64| {
            if b.norm() == 0.0 {
                if a.norm() == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (a - b).norm() / b.norm()
            }
        };
        let diff = rel(printed.c_xd_in, model_c.c_xd_in).max(rel(printed.c_pd_in, model_c.c_pd_in));
        checks.info("printed_qubit_coefficients_vs_model_at_0.7Omega", diff);
    }

    let failed = checks.failed;
    let mut table = checks.table;
    table.meta("failed_checks", failed);
    let diagnostics = if failed > 0 {
        vec![format!("{failed} check(s) failed")]
    } else {
        Vec::new()
    };
    Ok(Outcome {
        table,
        diagnostics,
        exit_code: if failed > 0 { 1 } else { 0 },
    })
}

/// The four constraint roots from the companion matrix and from each
/// closed-form variant.
pub fn cmd_roots(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    let p: &PhysicalParams = &cfg.params;
    let roots = constraint_roots(p);
    let mut table = Table::new(["set", "index", "re", "im", "real", "residual"]);
    header(&mut table, "roots", cfg);
    for c in &roots.comparisons {
        table.meta_num(
            format!("{}.max_relative_deviation", c.variant.name()),
            c.max_relative_deviation,
        );
        table.meta(format!("{}.disagrees", c.variant.name()), c.disagrees);
    }
    let mut diagnostics = Vec::new();
    for set in std::iter::once(&roots.companion).chain(&roots.closed_forms) {
        for (k, r) in set.roots.iter().enumerate() {
            table.push(vec![
                Cell::Text(set.label.into()),
                Cell::Num((k + 1) as f64),
                Cell::Num(r.re),
                Cell::Num(r.im),
                Cell::from(r.real),
                r.residual.map_or(Cell::Text("excluded".into()), Cell::Num),
            ]);
        }
    }
    if roots.any_disagreement() {
        diagnostics.push(
            "closed-form roots disagree with the companion-matrix roots; see metadata".into(),
        );
    }
    Ok(Outcome::ok(table, diagnostics))
}
