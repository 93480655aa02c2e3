use serde::Serialize;

use crate::params::PhysicalParams;
use crate::spectra;

/// Bracket half-width around the analytic `g_SQL`, as a factor.
const BRACKET_DECADES: f64 = 1e3;
/// Relative tolerance on the minimizer.
const REL_TOL: f64 = 1e-10;

/// Outcome of a golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenSection {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`, stopping
/// once the bracket is narrower than `tol`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> GoldenSection {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evaluations = 2;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evaluations += 1;
    }
    let (x, value) = if fc < fd { (c, fc) } else { (d, fd) };
    GoldenSection {
        x,
        value,
        evaluations,
    }
}

/// Numeric minimum of the standard optomechanical added noise over `g`,
/// next to the displayed closed-form claims.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqlMinimum {
    pub omega: f64,
    pub g_min: f64,
    pub s_min: f64,
    /// `√κ/(2√|χ_m|)`
    pub g_sql_analytic: f64,
    /// `1/(γ_m|χ_m|)`
    pub s_sql_analytic: f64,
    /// `s_sql_analytic / s_min`; `1/√2` when the search succeeds.
    pub analytic_over_numeric: f64,
    pub evaluations: usize,
}

/// Minimizes the standard optomechanical added noise (thermal off) over
/// `g ∈ [10⁻³, 10³]·g_SQL` at fixed `omega`.
pub fn minimize_sql(p: &PhysicalParams, omega: f64) -> SqlMinimum {
    let g0 = spectra::g_sql(p, omega);
    minimize_sql_in(p, omega, g0 / BRACKET_DECADES, g0 * BRACKET_DECADES)
}

/// [`minimize_sql`] over an explicit bracket `[g_lo, g_hi]`.
///
/// The search runs in `ln g`, where the objective `a/g² + b·g²` is
/// unimodal.
pub fn minimize_sql_in(p: &PhysicalParams, omega: f64, g_lo: f64, g_hi: f64) -> SqlMinimum {
    let objective = |ln_g: f64| spectra::standard_om_terms(p, omega, ln_g.exp(), 0.0).total;
    let found = golden_section_min(objective, g_lo.ln(), g_hi.ln(), REL_TOL);
    let g_min = found.x.exp();
    let s_min = found.value;
    let s_sql_analytic = spectra::s_sql(p, omega);
    SqlMinimum {
        omega,
        g_min,
        s_min,
        g_sql_analytic: spectra::g_sql(p, omega),
        s_sql_analytic,
        analytic_over_numeric: s_sql_analytic / s_min,
        evaluations: found.evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response;
    use std::f64::consts::SQRT_2;

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let r = golden_section_min(|x| (x - 0.3) * (x - 0.3) + 2.0, -4.0, 5.0, 1e-12);
        assert!((r.x - 0.3).abs() < 1e-6);
        assert!(r.value <= 2.0 + 1e-12);
    }

    #[test]
    fn resonant_minimum_is_root_two() {
        let p = PhysicalParams::fig2();
        let w = p.mech_frequency();
        let m = minimize_sql(&p, w);
        assert!((m.s_min - SQRT_2).abs() < 1e-6, "{}", m.s_min);
        assert!((m.s_sql_analytic - 1.0).abs() < 1e-12);
        assert!((m.analytic_over_numeric - 1.0 / SQRT_2).abs() < 1e-6);
        let chi = response::chi_m(&p, w).norm();
        let g2 = p.cavity_decay() / (4.0 * SQRT_2 * chi);
        assert!((m.g_min * m.g_min / g2 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn minimum_is_interior_off_resonance() {
        let p = PhysicalParams::fig2();
        for w in [0.2, 0.9, 1.7].map(|x| x * p.mech_frequency()) {
            let m = minimize_sql(&p, w);
            for f in [1.0 - 1e-3, 1.0 + 1e-3] {
                let s = spectra::standard_om_terms(&p, w, m.g_min * f, 0.0).total;
                assert!(s > m.s_min);
            }
        }
    }

    #[test]
    fn matches_brute_force_scan() {
        let p = PhysicalParams::fig2();
        let w = 0.8 * p.mech_frequency();
        let m = minimize_sql(&p, w);
        let (lo, hi) = ((m.g_sql_analytic / 1e3).ln(), (m.g_sql_analytic * 1e3).ln());
        let n = 1_000_000;
        let best = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .map(|x| spectra::standard_om_terms(&p, w, x.exp(), 0.0).total)
            .fold(f64::INFINITY, f64::min);
        assert!(m.s_min <= best * (1.0 + 1e-12));
        assert!((best / m.s_min - 1.0) < 1e-9);
    }
}
