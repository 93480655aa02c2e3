//! Optimizes the standard readout over the coupling at fixed frequency and
//! compares with the closed-form SQL.
//!
//! `cargo run --release --example sql_minimum`

use cqnc::analysis::minimize_sql;
use cqnc::PhysicalParams;

fn main() {
    let p = PhysicalParams::fig2();
    let w_m = p.mech_frequency();
    println!(
        "{:>8} {:>13} {:>13} {:>13} {:>13} {:>10}",
        "w/Omega", "g_min", "g_sql", "s_min", "s_sql", "ratio"
    );
    for x in [0.5, 0.9, 1.0, 1.1, 1.5] {
        let m = minimize_sql(&p, x * w_m);
        println!(
            "{x:>8.2} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e} {:>10.8}",
            m.g_min, m.g_sql_analytic, m.s_min, m.s_sql_analytic, m.analytic_over_numeric
        );
    }
}
