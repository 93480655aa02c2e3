use cqnc::analysis::{cqnc_residual, minimize_sql_in};
use cqnc::oracle::{assemble_model, ModelMode};
use cqnc::response;
use cqnc::{ChiDPrimeConvention, FrequencyGrid, PhysicalParams};
use proptest::prelude::*;

fn fig2() -> PhysicalParams {
    PhysicalParams::fig2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_and_coupling_round_trip(log_p in -12.0f64..1.0) {
        let p = fig2();
        let power = 10f64.powf(log_p);
        let g = p.g_from_power(power).unwrap();
        prop_assert!((p.power_from_g(g) / power - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn responses_are_hermitian_in_frequency(x in 1e-3f64..10.0, opa in 0.0f64..0.24) {
        let p = PhysicalParams::cqnc_matched();
        let p = p.with_opa_gain(opa * p.cavity_decay()).unwrap();
        let w = x * p.mech_frequency();
        for (a, b) in [
            (response::chi_a(&p, -w), response::chi_a(&p, w)),
            (response::chi_m(&p, -w), response::chi_m(&p, w)),
            (response::zeta(&p, -w), response::zeta(&p, w)),
            (response::lambda_plus(&p, -w).unwrap(), response::lambda_plus(&p, w).unwrap()),
            (response::lambda_minus(&p, -w), response::lambda_minus(&p, w)),
        ] {
            prop_assert!((a - b.conj()).norm() <= 1e-15 * b.norm());
        }
    }

    #[test]
    fn oracle_psd_components_are_non_negative(
        x in 0.01f64..5.0,
        log_g in 3.0f64..9.0,
        literal in any::<bool>(),
        thermal_k in 0.0f64..1.0,
    ) {
        let p = PhysicalParams::cqnc_matched()
            .with_coupling(10f64.powf(log_g))
            .unwrap()
            .apply_cqnc_matching()
            .0
            .with_temperature(thermal_k)
            .unwrap();
        let mode = if literal { ModelMode::Literal } else { ModelMode::Consistent };
        let model = assemble_model(&p, mode, ChiDPrimeConvention::Cancelling);
        if let Ok(b) = model.force_psd(x * p.mech_frequency(), true) {
            for v in [b.thermal, b.shot, b.backaction, b.qubit_x, b.qubit_p, b.total] {
                prop_assert!(v >= 0.0);
            }
        }
    }

    #[test]
    fn cancellation_residual_shrinks_with_damping(scale in 0.05f64..0.95) {
        let grid = FrequencyGrid::log(0.1, 2.0, 101).unwrap();
        let residual = |gamma: f64| {
            let p = fig2()
                .modify(|b| b.mech_damping = gamma)
                .unwrap()
                .apply_cqnc_matching()
                .0;
            let grid = grid.scaled(p.mech_frequency()).unwrap();
            cqnc_residual(&p, &grid, ChiDPrimeConvention::Cancelling).max_relative_residual
        };
        let gamma = fig2().mech_damping();
        prop_assert!(residual(gamma * scale) <= residual(gamma));
    }

    #[test]
    fn sql_minimum_ignores_bracket_scaling(shift in -1.0f64..1.0) {
        let p = fig2();
        let w = p.mech_frequency();
        let g0 = cqnc::spectra::g_sql(&p, w);
        let s = 10f64.powf(shift);
        let narrow = minimize_sql_in(&p, w, g0 * s / 1e2, g0 * s * 1e2);
        let wide = minimize_sql_in(&p, w, g0 * s / 1e3, g0 * s * 1e3);
        prop_assert!((narrow.s_min / wide.s_min - 1.0).abs() <= 1e-6);
        prop_assert!((narrow.g_min / wide.g_min - 1.0).abs() <= 1e-6);
    }
}
