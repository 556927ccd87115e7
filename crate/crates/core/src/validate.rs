//! Cross-validation of closed forms against Fock-space numerics.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::entanglement::{entropy_numeric, entropy_psi1_closed, entropy_psi2_closed};
use crate::epr::{epr_numeric, epr_psi1_closed, epr_psi2_closed};
use crate::error::Result;
use crate::fock::TwoModeState;
use crate::resources::{
    build_resource_circuit, build_resource_closed_form, Family, Parity, ResourceSpec,
};
use crate::teleport::{
    fidelity_bk, fidelity_epr_form_for_spec, fidelity_psi1_closed, CharFn, QuadratureRule,
    DEFAULT_NODES,
};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, deviations: &[f64], tolerance: f64) -> Self {
        let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
        let finite = deviations.iter().all(|d| d.is_finite());
        Self {
            name,
            max_deviation,
            tolerance,
            samples: deviations.len(),
            passed: finite && max_deviation <= tolerance,
        }
    }
}

const ALPHAS: [f64; 4] = [0.1, 0.5, 1.0, 1.5];
const PHASES: [f64; 3] = [0.0, FRAC_PI_4, FRAC_PI_2];

fn split_grid() -> Vec<ResourceSpec> {
    let mut out = Vec::new();
    for family in [Family::PacsSplit, Family::OddCatSplit] {
        for &a in &ALPHAS {
            for &p in &PHASES {
                for nm in 0..=2 {
                    out.push(ResourceSpec::split(family, a, p, nm));
                }
            }
        }
    }
    out
}

/// `1 − |⟨circuit|closed⟩|²` over the grid.
pub fn check_circuit_vs_closed_form() -> Result<CheckResult> {
    let mut dev = Vec::new();
    for spec in split_grid() {
        let a = build_resource_circuit(&spec)?;
        let b = build_resource_closed_form(&spec)?;
        dev.push(1.0 - a.fidelity_with(&b));
    }
    Ok(CheckResult::new(
        "circuit vs closed-form resource",
        &dev,
        1e-10,
    ))
}

pub fn check_entropy_closed_forms() -> Result<CheckResult> {
    let mut dev = Vec::new();
    for spec in split_grid() {
        let numeric = entropy_numeric(&build_resource_circuit(&spec)?)?.entropy_bits;
        let closed = match spec.family {
            Family::PacsSplit => entropy_psi1_closed(spec.alpha_mod, spec.n_plus_m())?,
            _ => entropy_psi2_closed(spec.alpha_mod, spec.parity())?,
        }
        .entropy_bits;
        dev.push((numeric - closed).abs());
    }
    Ok(CheckResult::new(
        "entropy closed form vs partial trace",
        &dev,
        1e-8,
    ))
}

pub fn check_epr_closed_forms() -> Result<CheckResult> {
    let mut dev = Vec::new();
    for spec in split_grid() {
        let numeric = epr_numeric(&build_resource_circuit(&spec)?)?.total_variance;
        let closed = match spec.family {
            Family::PacsSplit => epr_psi1_closed(spec.alpha_mod, spec.alpha_phase, spec.n_plus_m()),
            _ => epr_psi2_closed(spec.alpha_mod, spec.alpha_phase, spec.parity())?,
        }
        .total_variance;
        dev.push((numeric - closed).abs());
    }
    Ok(CheckResult::new("EPR closed form vs moments", &dev, 1e-8))
}

/// Deterministic points spread over the disc `|λ| ≤ radius`.
pub fn sample_arguments(count: usize, radius: f64) -> Vec<(Complex64, Complex64)> {
    // additive recurrences with irrational steps
    let steps: [f64; 4] = [
        0.754_877_666_246_692_8,
        0.569_840_290_998_053_3,
        0.362_314_830_403_2,
        0.137_840_421_782_358_6,
    ];
    let mut u = [0.5f64; 4];
    let point =
        |r: f64, t: f64| Complex64::from_polar(radius * r.sqrt(), std::f64::consts::TAU * t);
    (0..count)
        .map(|_| {
            for (x, s) in u.iter_mut().zip(steps) {
                *x = (*x + s).fract();
            }
            (point(u[0], u[1]), point(u[2], u[3]))
        })
        .collect()
}

/// Closed-form characteristic functions against Fock-space evaluation at 50
/// arguments with `|λ| ≤ 2`.
pub fn check_char_fn_closed_forms() -> Result<CheckResult> {
    let args = sample_arguments(50, 2.0);
    let mut dev = Vec::new();
    for family in [Family::PacsSplit, Family::OddCatSplit] {
        for nm in 0..=2 {
            let spec = ResourceSpec::split(family, 0.9, 0.4, nm);
            let closed = CharFn::closed(&spec)?;
            let numeric = CharFn::numeric(&build_resource_circuit(&spec)?)?;
            for &(l2, l3) in &args {
                dev.push((closed.evaluate(l2, l3)? - numeric.evaluate(l2, l3)?).norm());
            }
        }
    }
    Ok(CheckResult::new(
        "characteristic function closed form vs Fock",
        &dev,
        1e-8,
    ))
}

/// The 60-point grid `|α| ∈ [0.05, 2]` × `n+m ∈ {0, 1, 2}`.
pub fn fidelity_grid() -> Vec<(f64, usize)> {
    let mut out = Vec::new();
    for i in 0..20 {
        let a = 0.05 + i as f64 * (2.0 - 0.05) / 19.0;
        for nm in 0..=2 {
            out.push((a, nm));
        }
    }
    out
}

/// Quadrature, input-mode and closed-form fidelities of the photon-added
/// resource at `φ = 0`; the deviation is the largest pairwise difference.
pub fn check_fidelity_routes() -> Result<CheckResult> {
    let rule = QuadratureRule::gauss_hermite(DEFAULT_NODES)?;
    let mut dev = Vec::new();
    for (a, nm) in fidelity_grid() {
        let spec = ResourceSpec::split(Family::PacsSplit, a, 0.0, nm);
        let q = fidelity_bk(&CharFn::psi1_closed(&spec)?, &rule)?.fidelity;
        let e = fidelity_epr_form_for_spec(&spec)?.fidelity;
        let c = fidelity_psi1_closed(a, nm).fidelity;
        dev.push((q - e).abs().max((q - c).abs()).max((e - c).abs()));
    }
    Ok(CheckResult::new(
        "fidelity: quadrature vs input mode vs closed form",
        &dev,
        1e-6,
    ))
}

/// Vacuum and TMSS calibration values.
pub fn check_calibration() -> Result<CheckResult> {
    let rule = QuadratureRule::gauss_hermite(DEFAULT_NODES)?;
    let vac = TwoModeState::vacuum(crate::DEFAULT_CUTOFF);
    let mut dev = vec![
        (epr_numeric(&vac)?.total_variance - 1.0).abs(),
        (fidelity_bk(&CharFn::numeric(&vac)?, &rule)?.fidelity - 0.5).abs(),
    ];
    for lambda in [0.2f64, 0.462, 0.7] {
        let spec = ResourceSpec::tmss(Family::Tmss, lambda).with_cutoff(80);
        let v = epr_numeric(&build_resource_circuit(&spec)?)?.total_variance;
        dev.push((v - (-2.0 * lambda.atanh()).exp()).abs());
    }
    Ok(CheckResult::new("calibration anchors", &dev, 1e-8))
}

/// Odd-cat resources with even `n+m` carry exactly one bit.
pub fn check_even_parity_cat_entropy() -> Result<CheckResult> {
    let mut dev = Vec::new();
    for i in 1..=30 {
        let a = 0.1 * i as f64;
        for nm in [0, 2] {
            let spec = ResourceSpec::split(Family::OddCatSplit, a, 0.3, nm);
            dev.push((entropy_numeric(&build_resource_circuit(&spec)?)?.entropy_bits - 1.0).abs());
        }
        dev.push((entropy_psi2_closed(a, Parity::Even)?.entropy_bits - 1.0).abs());
    }
    Ok(CheckResult::new("even-parity cat entropy", &dev, 1e-10))
}

/// Runs every check; an evaluation error becomes a failed check.
pub fn run_validation() -> Vec<CheckResult> {
    type Check = fn() -> Result<CheckResult>;
    let checks: [(&'static str, Check); 7] = [
        (
            "circuit vs closed-form resource",
            check_circuit_vs_closed_form,
        ),
        (
            "entropy closed form vs partial trace",
            check_entropy_closed_forms,
        ),
        ("EPR closed form vs moments", check_epr_closed_forms),
        (
            "characteristic function closed form vs Fock",
            check_char_fn_closed_forms,
        ),
        (
            "fidelity: quadrature vs input mode vs closed form",
            check_fidelity_routes,
        ),
        ("calibration anchors", check_calibration),
        ("even-parity cat entropy", check_even_parity_cat_entropy),
    ];
    checks
        .iter()
        .map(|(name, f)| {
            f().unwrap_or(CheckResult {
                name,
                max_deviation: f64::NAN,
                tolerance: 0.0,
                samples: 0,
                passed: false,
            })
        })
        .collect()
}
