//! The built-in parameter sets, matching, and the power/coupling relation.
//!
//! `cargo run --release --example params_presets`

use cqnc::PhysicalParams;

fn main() {
    let fig2 = PhysicalParams::fig2();
    let (matched, warnings) = fig2.apply_cqnc_matching();
    for (name, p) in [("fig2", &fig2), ("cqnc-matched", &matched)] {
        println!("[{name}]");
        for (key, value) in p.snapshot() {
            println!("  {key:<8} = {value:e}");
        }
    }
    println!("matching warnings: {warnings:?}");

    for power in [1e-9, 1e-6, 1e-3, 0.1] {
        let g = fig2.g_from_power(power).unwrap();
        println!(
            "P_L = {power:e} W -> g = {g:.6e} rad/s -> P_L = {:e} W",
            fig2.power_from_g(g)
        );
    }

    let cold = fig2.with_temperature(0.01).unwrap();
    println!("n_bar at 10 mK: {:.4}", cold.thermal_occupation());
    match fig2.modify(|b| b.cavity_decay = -1.0) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
