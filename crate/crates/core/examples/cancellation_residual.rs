//! How well the qubit's back-action path cancels the mechanical one, for
//! both sign conventions of the effective qubit susceptibility.
//!
//! `cargo run --release --example cancellation_residual`

use cqnc::analysis::{cqnc_residual, MatchingFlags};
use cqnc::{ChiDPrimeConvention, FrequencyGrid, PhysicalParams};

fn main() {
    let p = PhysicalParams::cqnc_matched();
    println!("{:?}", MatchingFlags::of(&p));
    let grid = FrequencyGrid::log(0.1, 2.0, 2000)
        .unwrap()
        .scaled(p.mech_frequency())
        .unwrap();
    for convention in [
        ChiDPrimeConvention::Cancelling,
        ChiDPrimeConvention::Displayed,
    ] {
        let report = cqnc_residual(&p, &grid, convention);
        println!(
            "{}: max relative residual {:.3e}",
            convention.name(),
            report.max_relative_residual
        );
        for point in report.residual_curve.iter().step_by(250) {
            println!(
                "  omega/Omega = {:.4}  relative = {:.3e}",
                point.omega / p.mech_frequency(),
                point.relative
            );
        }
    }

    // a narrower qubit line brings the cancellation closer to exact
    for scale in [1.0, 0.1, 0.01] {
        let q = p
            .modify(|b| b.mech_damping *= scale)
            .unwrap()
            .apply_cqnc_matching()
            .0;
        let report = cqnc_residual(&q, &grid, ChiDPrimeConvention::Cancelling);
        println!(
            "Gamma = gamma_m = {:.3e} rad/s: max relative {:.3e}",
            q.mech_damping(),
            report.max_relative_residual
        );
    }
}
