//! Eigenvalues of the linear model's drift matrix as the OPA gain crosses
//! its threshold.
//!
//! `cargo run --release --example drift_stability`

use cqnc::oracle::{assemble_model, ModelMode};
use cqnc::{ChiDPrimeConvention, PhysicalParams};

fn main() {
    let base = PhysicalParams::cqnc_matched();
    let kappa = base.cavity_decay();
    for x in [0.0, 0.1, 0.2, 0.25, 0.3] {
        let p = base.with_opa_gain(x * kappa).unwrap();
        let model = assemble_model(&p, ModelMode::Consistent, ChiDPrimeConvention::Cancelling);
        let mut eig = model.eigenvalues();
        eig.sort_by(|a, b| b.re.total_cmp(&a.re));
        println!("G_opa = {x} kappa, stable: {}", model.is_stable());
        for w in &model.warnings {
            println!("  warning: {w}");
        }
        for e in eig {
            println!("  {:+.6e} {:+.6e}i", e.re / kappa, e.im / kappa);
        }
    }
}
