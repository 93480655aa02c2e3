//! Cancellation diagnostics, constraint roots, SQL minimization and sweeps.

mod cqnc;
mod roots;
mod sql;
mod sweep;

pub use cqnc::{cqnc_residual, CqncReport, MatchingFlags, ResidualPoint};
pub use roots::{
    constraint_residual, constraint_roots, constraint_roots_for, ConstraintRoots, Root, RootSet,
    RootVariant, VariantComparison, ROOT_AGREEMENT_TOLERANCE,
};
pub use sql::{golden_section_min, minimize_sql, minimize_sql_in, GoldenSection, SqlMinimum};
pub use sweep::{
    discrete_slope_sign_changes, fig2_series, first_within_fraction, is_non_increasing,
    sweep_frequency, sweep_power, Curve, PointError, Series, SeriesSpec, SweepResult,
};
