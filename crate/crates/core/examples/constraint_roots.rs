//! Frequencies where the standard readout has unit mechanical gain, from
//! the companion matrix and from three closed-form expressions.
//!
//! `cargo run --release --example constraint_roots [Omega gamma_m g]`

use cqnc::analysis::{constraint_roots, constraint_roots_for, RootSet};
use cqnc::PhysicalParams;

fn show(set: &RootSet) {
    println!("{}:", set.label);
    for r in &set.roots {
        match r.residual {
            Some(res) => println!("  {:+.9e} (real, residual {res:.2e})", r.re),
            None => println!("  {:+.9e} {:+.9e}i", r.re, r.im),
        }
    }
}

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let roots = match args[..] {
        [omega, gamma, g] => constraint_roots_for(omega, gamma, g),
        _ => constraint_roots(&PhysicalParams::fig2().with_coupling(1e5).unwrap()),
    };
    println!(
        "Omega = {:e}, gamma_m = {:e}, g = {:e}",
        roots.omega_m, roots.gamma_m, roots.g
    );
    show(&roots.companion);
    for set in &roots.closed_forms {
        show(set);
    }
    for c in &roots.comparisons {
        println!(
            "{}: max relative deviation {:.3e}, disagrees: {}",
            c.variant.name(),
            c.max_relative_deviation,
            c.disagrees
        );
    }
}
