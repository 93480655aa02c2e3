use std::f64::consts::SQRT_2;

use cqnc::analysis::{minimize_sql, sweep_frequency, Curve, SeriesSpec};
use cqnc::oracle::{assemble_model, Channel, ModelMode};
use cqnc::response;
use cqnc::spectra::{self, out_phase_coefficients, s_add_closed_form, s_standard_om};
use cqnc::{ChiDPrimeConvention, Complex64, FrequencyGrid, PhysicalParams};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn consistent_gains_match_closed_form_coefficients() {
    let p = PhysicalParams::cqnc_matched();
    for convention in [
        ChiDPrimeConvention::Cancelling,
        ChiDPrimeConvention::Displayed,
    ] {
        let model = assemble_model(&p, ModelMode::Consistent, convention);
        for x in [0.2, 0.7, 1.3] {
            let w = x * p.mech_frequency();
            let row = model.transfer_row(w).unwrap();
            let c = out_phase_coefficients(&p, w, convention).unwrap();
            let pairs = [
                (Channel::PhaseIn, c.c_pa_in),
                (Channel::External, c.c_force),
                (Channel::QubitXIn, c.c_xd_in),
                (Channel::QubitPIn, c.c_pd_in),
            ];
            for (ch, want) in pairs {
                assert!(
                    rel(row.gain(ch), want) < 1e-6,
                    "{convention:?} {ch:?} at {x}"
                );
            }
            // under cancellation the back-action gain is a tiny difference
            // of two large terms, so compare it on their common scale
            let g2 = p.coupling().powi(2);
            let scale = (p.cavity_decay() * g2)
                * (c.c_force / (p.coupling() * p.mech_damping().sqrt())).norm();
            let diff = (row.gain(Channel::AmplitudeIn) - c.c_xa_in).norm();
            assert!(
                diff <= 1e-6 * scale.max(c.c_xa_in.norm()),
                "{convention:?} x_a at {x}"
            );
        }
    }
}

#[test]
fn transfer_row_has_reality_symmetry() {
    let p = PhysicalParams::cqnc_matched();
    for mode in [ModelMode::Literal, ModelMode::Consistent] {
        let model = assemble_model(&p, mode, ChiDPrimeConvention::Cancelling);
        for x in [0.05, 0.9, 1.0, 2.5] {
            let w = x * p.mech_frequency();
            let plus = model.transfer_row(w).unwrap();
            let minus = model.transfer_row(-w).unwrap();
            for ch in Channel::ALL {
                let (a, b) = (minus.gain(ch), plus.gain(ch).conj());
                assert!(
                    (a - b).norm() <= 1e-12 * b.norm().max(1e-300),
                    "{mode:?} {ch:?}"
                );
            }
        }
    }
}

/// Bare optomechanics with the cavity response kept: shot
/// `1/(2g²|χ_m|²|χ_a|²γ_mκ)` and back-action `κg²|χ_a|²/(2γ_m)`.
fn bare_om_exact(p: &PhysicalParams, w: f64) -> (f64, f64) {
    let (kappa, gm, g) = (p.cavity_decay(), p.mech_damping(), p.coupling());
    let chi_a2 = 1.0 / (w * w + kappa * kappa / 4.0);
    let chi_m2 = response::chi_m(p, w).norm_sqr();
    let shot = 1.0 / (2.0 * g * g * chi_m2 * chi_a2 * gm * kappa);
    let backaction = kappa * g * g * chi_a2 / (2.0 * gm);
    (shot, backaction)
}

#[test]
fn bare_optomechanics_matches_cavity_filtered_form_on_lattice() {
    let base = PhysicalParams::fig2();
    for g in [1e4, 3e6, 3.33e8] {
        let p = base.with_coupling(g).unwrap();
        let model = assemble_model(&p, ModelMode::Consistent, ChiDPrimeConvention::Cancelling);
        for x in [0.1, 0.5, 0.99, 1.0, 1.01, 1.7, 3.0] {
            let w = x * p.mech_frequency();
            let oracle = model.force_psd(w, false).unwrap();
            let (shot, backaction) = bare_om_exact(&p, w);
            assert!((oracle.shot / shot - 1.0).abs() < 1e-8, "g={g} x={x}");
            assert!(
                (oracle.backaction / backaction - 1.0).abs() < 1e-8,
                "g={g} x={x}"
            );
            assert_eq!(oracle.qubit_residual(), 0.0);
        }
    }
}

#[test]
fn standard_closed_form_is_the_fast_cavity_limit_with_doubled_back_action() {
    // κ ≫ ω: the shot term converges to the standard closed form, the
    // back-action term to half of it
    let p = PhysicalParams::fig2()
        .modify(|b| b.cavity_decay = 1e6 * b.mech_frequency)
        .unwrap();
    let model = assemble_model(&p, ModelMode::Consistent, ChiDPrimeConvention::Cancelling);
    for x in [0.3, 1.0, 1.6] {
        let w = x * p.mech_frequency();
        let oracle = model.force_psd(w, false).unwrap();
        let closed = s_standard_om(&p, w, false).unwrap();
        assert!((oracle.shot / closed.shot - 1.0).abs() < 1e-10);
        assert!((oracle.backaction / closed.backaction - 0.5).abs() < 1e-10);
    }
}

#[test]
fn fast_cavity_oracle_minimum_is_the_displayed_sql() {
    // with the back-action the linear model produces, the optimum over g is
    // 1/(γ_m|χ_m|) at g = √κ/(2√|χ_m|)
    let p = PhysicalParams::fig2()
        .modify(|b| b.cavity_decay = 1e6 * b.mech_frequency)
        .unwrap();
    let w = p.mech_frequency();
    let at = p.with_coupling(spectra::g_sql(&p, w)).unwrap();
    let model = assemble_model(&at, ModelMode::Consistent, ChiDPrimeConvention::Cancelling);
    let b = model.force_psd(w, false).unwrap();
    assert!((b.total / spectra::s_sql(&p, w) - 1.0).abs() < 1e-10);
    assert!((b.shot / b.backaction - 1.0).abs() < 1e-10);
    let m = minimize_sql(&p, w);
    assert!((m.s_min / b.total - SQRT_2).abs() < 1e-6);
}

#[test]
fn literal_mode_does_not_cancel_back_action() {
    let p = PhysicalParams::cqnc_matched();
    let w = 0.5 * p.mech_frequency();
    let literal = assemble_model(&p, ModelMode::Literal, ChiDPrimeConvention::Cancelling)
        .force_psd(w, false)
        .unwrap();
    let consistent = assemble_model(&p, ModelMode::Consistent, ChiDPrimeConvention::Cancelling)
        .force_psd(w, false)
        .unwrap();
    assert!(literal.backaction / literal.total > 0.1);
    assert!(consistent.backaction / consistent.total < 1e-8);
}

#[test]
fn consistent_oracle_tracks_hybrid_closed_form_away_from_resonance() {
    let p = PhysicalParams::cqnc_matched();
    let grid = FrequencyGrid::log(0.1, 0.5, 400)
        .unwrap()
        .scaled(p.mech_frequency())
        .unwrap();
    let spec = SeriesSpec {
        label: "oracle".into(),
        params: p.clone(),
        curve: Curve::Oracle {
            mode: ModelMode::Consistent,
            convention: ChiDPrimeConvention::Cancelling,
        },
    };
    let sweep = sweep_frequency(&[spec], &grid, false);
    for (w, b) in grid.points().iter().zip(sweep.series[0].budgets()) {
        let b = b.unwrap();
        let closed = s_add_closed_form(&p, *w, false).unwrap();
        assert!((b.total / closed.total - 1.0).abs() < 1e-6);
        for part in [b.thermal, b.shot, b.backaction, b.qubit_x, b.qubit_p] {
            assert!(part >= 0.0);
        }
    }
}
