//! Added noise at resonance as the laser power grows: the standard curve
//! keeps rising with back-action, the matched hybrid settles onto the floor.
//!
//! `cargo run --release --example fig3_power_sweep`

use cqnc::analysis::{
    discrete_slope_sign_changes, first_within_fraction, is_non_increasing, sweep_power,
};
use cqnc::spectra::s_cqnc_floor;
use cqnc::{FrequencyGrid, PhysicalParams};

fn main() {
    let p = PhysicalParams::fig2();
    let w_m = p.mech_frequency();
    let powers = FrequencyGrid::log(1e-9, 1.0, 200).unwrap();
    let sweep = sweep_power(&p, w_m, powers.points(), &[0.1, 0.3], false).unwrap();
    let floor = s_cqnc_floor(&p.apply_cqnc_matching().0, w_m);

    for s in &sweep.series {
        let totals = s.totals();
        let first = first_within_fraction(&totals, floor, 0.01).map(|i| powers.points()[i]);
        println!(
            "{:<24} slope sign changes {}, non-increasing {}, first within 1% of floor {:?} W",
            s.label,
            discrete_slope_sign_changes(&totals),
            is_non_increasing(&totals),
            first
        );
    }
    let g = &sweep.aux[0].1;
    for i in (0..powers.len()).step_by(20) {
        print!("P_L = {:.3e} W  g = {:.3e} rad/s", powers.points()[i], g[i]);
        for s in &sweep.series {
            print!("  {:.4e}", s.totals()[i]);
        }
        println!();
    }
}
