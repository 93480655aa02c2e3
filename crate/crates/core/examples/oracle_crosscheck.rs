//! Solves the linear quantum Langevin model directly and compares the
//! resulting added-noise PSD with the closed forms.
//!
//! `cargo run --release --example oracle_crosscheck`

use cqnc::oracle::{assemble_model, ModelMode};
use cqnc::spectra::s_add_closed_form;
use cqnc::{ChiDPrimeConvention, PhysicalParams};

fn main() {
    let p = PhysicalParams::cqnc_matched();
    let w_m = p.mech_frequency();
    for mode in [ModelMode::Consistent, ModelMode::Literal] {
        let model = assemble_model(&p, mode, ChiDPrimeConvention::Cancelling);
        println!("{} model, stable: {}", mode.name(), model.is_stable());
        println!(
            "{:>8} {:>14} {:>14} {:>12} {:>12}",
            "w/Omega", "oracle", "closed form", "rel diff", "BA share"
        );
        for x in [0.1, 0.3, 0.5, 0.9, 0.99, 1.0, 1.01, 1.5, 2.0] {
            let w = x * w_m;
            let oracle = model.force_psd(w, false).unwrap();
            let closed = s_add_closed_form(&p, w, false).unwrap();
            println!(
                "{x:>8.2} {:>14.6e} {:>14.6e} {:>12.3e} {:>12.3e}",
                oracle.total,
                closed.total,
                (oracle.total / closed.total - 1.0).abs(),
                oracle.backaction / oracle.total
            );
        }
        println!();
    }
}
