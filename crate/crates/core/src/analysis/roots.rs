//! Frequencies where the bare optomechanical back-action gain is unity:
//! `g²Ω² / ((Ω² − ω²)² + ω²γ_m²) = 1`.
//!
//! The quartic `(Ω² − ω²)² + ω²γ_m² − g²Ω² = 0` is solved two ways: by the
//! closed-form radicals in `u = ω²` (three variants, see [`RootVariant`]) and
//! by the eigenvalues of its companion matrix, polished with Newton steps on
//! the unexpanded form.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg;
use crate::params::PhysicalParams;

/// Largest relative distance between a closed-form root set and the
/// companion roots that still counts as agreement.
pub const ROOT_AGREEMENT_TOLERANCE: f64 = 1e-8;

/// Imaginary parts below this fraction of `|ω|` are treated as round-off.
const REAL_CUTOFF: f64 = 1e-7;

const NEWTON_STEPS: usize = 4;

/// Closed-form variants of `u∓ = Ω² − γ²/2 ∓ R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootVariant {
    /// `R = √((4Ω²g² − 4Ωγ² + γ⁴)/2)`, transcribed character for character.
    Printed,
    /// `R = √((4Ω²g² − 4Ω²γ² + γ⁴)/2)`: the `Ω γ²` term made dimensionally
    /// consistent, nothing else changed.
    DimensionFixed,
    /// `R = √(4Ω²g² − 4Ω²γ² + γ⁴)/2`, the quadratic formula applied to
    /// `u² − (2Ω² − γ²)u + Ω⁴ − g²Ω² = 0`.
    Exact,
}

impl RootVariant {
    pub const ALL: [RootVariant; 3] = [
        RootVariant::Printed,
        RootVariant::DimensionFixed,
        RootVariant::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RootVariant::Printed => "closed_form_printed",
            RootVariant::DimensionFixed => "closed_form_dimension_fixed",
            RootVariant::Exact => "closed_form_exact",
        }
    }

    fn offset(self, w_m: f64, gamma: f64, g: f64) -> Complex64 {
        let g4 = gamma.powi(4);
        let lead = 4.0 * w_m * w_m * g * g;
        let radicand = match self {
            RootVariant::Printed => (lead - 4.0 * w_m * gamma * gamma + g4) / 2.0,
            RootVariant::DimensionFixed => (lead - 4.0 * w_m * w_m * gamma * gamma + g4) / 2.0,
            RootVariant::Exact => lead - 4.0 * w_m * w_m * gamma * gamma + g4,
        };
        let root = Complex64::new(radicand, 0.0).sqrt();
        match self {
            RootVariant::Exact => root / 2.0,
            _ => root,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub real: bool,
    /// `|g²Ω²/den − 1|`, only for real roots.
    pub residual: Option<f64>,
}

impl Root {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Four roots ordered `ω₁ = +√u₋, ω₂ = −√u₋, ω₃ = +√u₊, ω₄ = −√u₊`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub label: &'static str,
    pub roots: [Root; 4],
}

impl RootSet {
    pub fn omega_12(&self) -> [Root; 2] {
        [self.roots[0], self.roots[1]]
    }

    pub fn omega_34(&self) -> [Root; 2] {
        [self.roots[2], self.roots[3]]
    }

    pub fn real_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.real)
    }

    /// Largest residual over the real roots; 0 when there are none.
    pub fn max_residual(&self) -> f64 {
        self.real_roots()
            .filter_map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariantComparison {
    pub variant: RootVariant,
    /// Max over companion roots of the relative distance to the nearest
    /// closed-form root.
    pub max_relative_deviation: f64,
    pub disagrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintRoots {
    pub omega_m: f64,
    pub gamma_m: f64,
    pub g: f64,
    pub companion: RootSet,
    pub closed_forms: Vec<RootSet>,
    pub comparisons: Vec<VariantComparison>,
}

impl ConstraintRoots {
    pub fn closed_form(&self, variant: RootVariant) -> &RootSet {
        let idx = RootVariant::ALL.iter().position(|v| *v == variant).unwrap();
        &self.closed_forms[idx]
    }

    pub fn comparison(&self, variant: RootVariant) -> VariantComparison {
        let idx = RootVariant::ALL.iter().position(|v| *v == variant).unwrap();
        self.comparisons[idx]
    }

    pub fn any_disagreement(&self) -> bool {
        self.comparisons.iter().any(|c| c.disagrees)
    }
}

/// `|g²Ω² / ((Ω² − ω²)² + ω²γ²) − 1|` at real `omega`.
pub fn constraint_residual(omega_m: f64, gamma_m: f64, g: f64, omega: f64) -> f64 {
    let detune = (omega_m - omega) * (omega_m + omega);
    let den = detune * detune + omega * omega * gamma_m * gamma_m;
    (g * g * omega_m * omega_m / den - 1.0).abs()
}

pub fn constraint_roots(p: &PhysicalParams) -> ConstraintRoots {
    constraint_roots_for(p.mech_frequency(), p.mech_damping(), p.coupling())
}

pub fn constraint_roots_for(omega_m: f64, gamma_m: f64, g: f64) -> ConstraintRoots {
    let companion = RootSet {
        label: "companion_matrix",
        roots: companion_roots(omega_m, gamma_m, g).map(|z| classify(z, omega_m, gamma_m, g)),
    };
    let closed_forms: Vec<RootSet> = RootVariant::ALL
        .iter()
        .map(|&v| closed_form_roots(v, omega_m, gamma_m, g))
        .collect();
    let comparisons = RootVariant::ALL
        .iter()
        .zip(&closed_forms)
        .map(|(&variant, set)| {
            let max_relative_deviation = companion
                .roots
                .iter()
                .map(|c| {
                    let cz = c.value();
                    set.roots
                        .iter()
                        .map(|r| (r.value() - cz).norm() / cz.norm().max(f64::MIN_POSITIVE))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max);
            VariantComparison {
                variant,
                max_relative_deviation,
                disagrees: max_relative_deviation.is_nan()
                    || max_relative_deviation > ROOT_AGREEMENT_TOLERANCE,
            }
        })
        .collect();
    ConstraintRoots {
        omega_m,
        gamma_m,
        g,
        companion,
        closed_forms,
        comparisons,
    }
}

fn closed_form_roots(variant: RootVariant, omega_m: f64, gamma_m: f64, g: f64) -> RootSet {
    let centre = Complex64::new(omega_m * omega_m - gamma_m * gamma_m / 2.0, 0.0);
    let offset = variant.offset(omega_m, gamma_m, g);
    let mut roots = [Root {
        re: 0.0,
        im: 0.0,
        real: false,
        residual: None,
    }; 4];
    for (k, u) in [centre - offset, centre + offset].into_iter().enumerate() {
        let real_u = u.im == 0.0 && u.re >= 0.0;
        let w = if real_u {
            Complex64::new(u.re.sqrt(), 0.0)
        } else {
            u.sqrt()
        };
        for (j, s) in [1.0, -1.0].into_iter().enumerate() {
            let z = w * s;
            roots[2 * k + j] = Root {
                re: z.re,
                im: z.im,
                real: real_u,
                residual: real_u.then(|| constraint_residual(omega_m, gamma_m, g, z.re)),
            };
        }
    }
    RootSet {
        label: variant.name(),
        roots,
    }
}

/// Roots of the quartic in `ω`, in the canonical order.
fn companion_roots(omega_m: f64, gamma_m: f64, g: f64) -> [Complex64; 4] {
    // monic quartic in y = ω/Ω: y⁴ + c2·y² + c0
    let r = gamma_m / omega_m;
    let q = g / omega_m;
    let c2 = r * r - 2.0;
    let c0 = 1.0 - q * q;
    let companion = [
        [0.0, 0.0, 0.0, -c0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, -c2],
        [0.0, 0.0, 1.0, 0.0],
    ];
    let eig = linalg::eigenvalues(&companion).expect("QR converges on a 4x4 companion matrix");
    let mut roots: Vec<Complex64> = eig
        .iter()
        .map(|y| polish(*y * omega_m, omega_m, gamma_m, g))
        .collect();
    roots.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    [roots[0], roots[1], roots[2], roots[3]]
}

/// Newton steps on `f(ω) = (Ω² − ω²)² + ω²γ² − g²Ω²`, keeping the best
/// iterate.
fn polish(mut z: Complex64, omega_m: f64, gamma_m: f64, g: f64) -> Complex64 {
    if (z.im.abs()) <= REAL_CUTOFF * z.norm() {
        z = Complex64::new(z.re, 0.0);
    }
    let f = |w: Complex64| {
        let d = (omega_m - w) * (omega_m + w);
        d * d + w * w * gamma_m * gamma_m - g * g * omega_m * omega_m
    };
    let df = |w: Complex64| {
        let d = (omega_m - w) * (omega_m + w);
        -4.0 * w * d + 2.0 * w * gamma_m * gamma_m
    };
    let mut best = (f(z).norm(), z);
    for _ in 0..NEWTON_STEPS {
        let slope = df(z);
        if slope == Complex64::new(0.0, 0.0) {
            break;
        }
        z -= f(z) / slope;
        let err = f(z).norm();
        if err < best.0 {
            best = (err, z);
        }
    }
    best.1
}

fn classify(z: Complex64, omega_m: f64, gamma_m: f64, g: f64) -> Root {
    let real = z.im == 0.0;
    Root {
        re: z.re,
        im: z.im,
        real,
        residual: real.then(|| constraint_residual(omega_m, gamma_m, g, z.re)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const W: f64 = 2.0 * PI * 3.0e5;
    const GM: f64 = 2.0 * PI * 30.0;

    #[test]
    fn g_equal_gamma_puts_roots_at_resonance() {
        let r = constraint_roots_for(W, GM, GM);
        assert!(constraint_residual(W, GM, GM, W) < 1e-12);
        assert!(constraint_residual(W, GM, GM, -W) < 1e-12);
        let exact = r.closed_form(RootVariant::Exact);
        let [w3, w4] = exact.omega_34();
        assert!((w3.re / W - 1.0).abs() < 1e-15 && (w4.re / W + 1.0).abs() < 1e-15);
        assert!(exact.max_residual() < 1e-12);
    }

    #[test]
    fn undamped_limit_matches_simplified_radicals() {
        let g = 0.1 * W;
        let r = constraint_roots_for(W, 1e-9, g);
        let lo = (W * W - W * g).sqrt();
        let hi = (W * W + W * g).sqrt();
        let got: Vec<f64> = r.companion.roots.iter().map(|z| z.re).collect();
        for (a, b) in got.iter().zip([lo, -lo, hi, -hi]) {
            assert!((a / b - 1.0).abs() < 1e-12, "{got:?}");
        }
        assert!(!r.comparison(RootVariant::Exact).disagrees);
    }

    #[test]
    fn companion_roots_satisfy_constraint() {
        let r = constraint_roots_for(W, GM, 10.0 * GM);
        assert_eq!(r.companion.real_roots().count(), 4);
        assert!(
            r.companion.max_residual() < 1e-10,
            "{}",
            r.companion.max_residual()
        );
        assert!(!r.comparison(RootVariant::Exact).disagrees);
        // the printed radicals miss by far more than round-off
        assert!(r.comparison(RootVariant::Printed).disagrees);
        assert!(r.any_disagreement());
    }

    #[test]
    fn weak_coupling_gives_complex_roots() {
        // below g = γ·√(1 − γ²/4Ω²) the inner roots leave the real axis
        let r = constraint_roots_for(W, GM, 0.5 * GM);
        let exact = r.closed_form(RootVariant::Exact);
        assert!(exact.roots.iter().all(|z| !z.real));
        assert!(exact.roots.iter().all(|z| z.residual.is_none()));
        assert_eq!(exact.max_residual(), 0.0);
        assert!(r.companion.roots.iter().all(|z| !z.real));
    }
}
