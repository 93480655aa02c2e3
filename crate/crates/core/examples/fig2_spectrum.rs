//! Force-noise spectra of standard optomechanics, the matched hybrid at
//! several OPA gains and the cancellation floor.
//!
//! `cargo run --release --example fig2_spectrum`

use cqnc::analysis::{fig2_series, sweep_frequency};
use cqnc::{FrequencyGrid, PhysicalParams};

fn main() {
    let p = PhysicalParams::fig2();
    let w_m = p.mech_frequency();
    let grid = FrequencyGrid::log(0.1, 2.0, 2000)
        .unwrap()
        .scaled(w_m)
        .unwrap();
    let specs = fig2_series(&p, &[0.0, 0.1, 0.3]).unwrap();
    let sweep = sweep_frequency(&specs, &grid, false);

    for (label, warning) in sweep.warnings() {
        eprintln!("warning: {label}: {warning}");
    }
    print!("{:>10}", "omega/Omega");
    for s in &sweep.series {
        print!(" {:>32}", s.label);
    }
    println!();
    for (i, w) in grid.points().iter().enumerate().step_by(100) {
        print!("{:>10.4}", w / w_m);
        for s in &sweep.series {
            match &s.points[i] {
                Ok(b) => print!(" {:>32.6e}", b.total),
                Err(e) => print!(" {:>32}", e.to_string()),
            }
        }
        println!();
    }
}
