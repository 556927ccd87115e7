//! Continuous-variable teleportation fidelity for coherent inputs.
//!
//! `F = (1/π) ∫ d²λ C_in(λ) C_in(−λ) C_E(λ*, λ)`. For a coherent input
//! `C_in(λ) C_in(−λ) = e^{−|λ|²}`, so `F` is the Gaussian-weighted integral of
//! the resource's characteristic function. The resource is taken with its
//! local first moments removed (Alice and Bob's displacement gains absorb
//! them), which is what makes the fidelity a function of the fluctuations
//! `⟨e^{−Δ²u − Δ²v}⟩` only.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::charfn::CharFn;
use super::quadrature::{integrate_plane, QuadratureRule};
use crate::error::{Error, Result};
use crate::fock::{Quadrature, SingleModeState};
use crate::optimize::{optimize_phase, Goal, PhaseOptimum};
use crate::resources::{
    build_resource_circuit, subtracted_input, Family, NormalizationConstants, ResourceSpec,
};
use crate::CONVERGENCE_TOLERANCE;

/// Classical benchmark for coherent-state teleportation.
pub const CLASSICAL_LIMIT: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FidelityMethod {
    Quadrature,
    EprForm,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityResult {
    pub fidelity: f64,
    pub method: FidelityMethod,
    /// Node-doubling shift for quadrature, refinement shift for the EPR form,
    /// zero for the closed form.
    pub quadrature_error_estimate: f64,
    /// `fidelity > 1/2`.
    pub beats_classical: bool,
}

impl FidelityResult {
    fn new(fidelity: f64, method: FidelityMethod, error: f64) -> Self {
        Self {
            fidelity,
            method,
            quadrature_error_estimate: error,
            beats_classical: fidelity > CLASSICAL_LIMIT,
        }
    }
}

fn doubled_estimate<F>(rule: &QuadratureRule, integrand: F) -> Result<FidelityResult>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let coarse = integrate_plane(rule, &integrand)?.re;
    let fine = integrate_plane(&rule.doubled()?, &integrand)?.re;
    let shift = (fine - coarse).abs();
    if shift > rule.target {
        return Err(Error::QuadratureNotConverged {
            shift,
            tolerance: rule.target,
        });
    }
    Ok(FidelityResult::new(fine, FidelityMethod::Quadrature, shift))
}

/// Fidelity with the resource's first moments removed.
pub fn fidelity_bk(char_fn: &CharFn, rule: &QuadratureRule) -> Result<FidelityResult> {
    doubled_estimate(rule, |l| char_fn.evaluate_centered(l.conj(), l))
}

/// Fidelity of the resource exactly as given, without moment removal.
pub fn fidelity_bk_raw(char_fn: &CharFn, rule: &QuadratureRule) -> Result<FidelityResult> {
    doubled_estimate(rule, |l| char_fn.evaluate(l.conj(), l))
}

/// [`fidelity_bk`] with the coherent input `|β⟩` kept explicitly in the
/// integrand: `C_in(λ) = e^{−|λ|²/2 + λβ* − λ*β}`.
pub fn fidelity_bk_with_input(
    char_fn: &CharFn,
    beta: Complex64,
    rule: &QuadratureRule,
) -> Result<FidelityResult> {
    doubled_estimate(rule, |l| {
        let forward = (l * beta.conj() - l.conj() * beta).exp();
        let backward = (-l * beta.conj() + l.conj() * beta).exp();
        Ok(forward * backward * char_fn.evaluate_centered(l.conj(), l)?)
    })
}

/// Fidelity of a split resource from its input modes:
/// `⟨e^{−2(X−⟨X⟩)²}⟩_vacuum · ⟨e^{−2(X−⟨X⟩)²}⟩_signal` with the vacuum
/// factor `1/√2`. `signal` is the subtracted single-mode input
/// `a^{n+m}|ψ⟩`, normalized.
///
/// With the beam-splitter convention used here, `u = X_A − X_B` and
/// `v = P_A + P_B` map to `√2 X` of the signal and `√2 P` of the vacuum input.
pub fn fidelity_epr_form(signal: &SingleModeState) -> Result<FidelityResult> {
    let signal = if signal.is_normalized() {
        signal.clone()
    } else {
        signal.normalized()?
    };
    let r = signal.gaussian_filter(Quadrature::X, CONVERGENCE_TOLERANCE)?;
    Ok(FidelityResult::new(
        FRAC_1_SQRT_2 * r.value,
        FidelityMethod::EprForm,
        r.refinement_shift,
    ))
}

/// Closed form for the photon-added coherent resource at its optimal phase:
/// `[M(M + |αβ|) + (|α|²/2)(1 + |β|²/2)] e^{−(|α| − |β|/2)²} / (2N₁)`,
/// `|β| = 2|α|(1 + (M + |α|²)/N₁)`, `M = n+m`.
pub fn fidelity_psi1_closed(alpha_mod: f64, n_plus_m: usize) -> FidelityResult {
    let k = NormalizationConstants::new(alpha_mod, n_plus_m);
    let m = n_plus_m as f64;
    let a = alpha_mod;
    let f = if k.n1 == 0.0 {
        // α = 0, n+m = 0: single photon on the signal input
        0.25
    } else {
        let b = 2.0 * a * (1.0 + (m + a * a) / k.n1);
        (m * (m + a * b) + a * a / 2.0 * (1.0 + b * b / 2.0)) / (2.0 * k.n1)
            * (-(a - b / 2.0).powi(2)).exp()
    };
    FidelityResult::new(f, FidelityMethod::ClosedForm, 0.0)
}

/// Fidelity of a resource: closed-form characteristic function for the split
/// families, Fock-space characteristic function otherwise.
pub fn fidelity_for_spec(spec: &ResourceSpec, rule: &QuadratureRule) -> Result<FidelityResult> {
    let cf = if spec.family.is_split() {
        CharFn::closed(spec)?
    } else {
        CharFn::numeric(&build_resource_circuit(spec)?)?
    };
    fidelity_bk(&cf, rule)
}

/// Fidelity of a split resource through the subtracted input mode.
pub fn fidelity_epr_form_for_spec(spec: &ResourceSpec) -> Result<FidelityResult> {
    fidelity_epr_form(&subtracted_input(spec)?)
}

/// Phase of `α` maximizing the fidelity of a split resource, scanned with a
/// single rule; the returned result is re-evaluated with node doubling.
pub fn fidelity_optimized(
    family: Family,
    alpha_mod: f64,
    n_plus_m: usize,
    cutoff: usize,
    rule: &QuadratureRule,
) -> Result<(PhaseOptimum, FidelityResult)> {
    let spec_at = |phase: f64| {
        let mut s = ResourceSpec::split(family, alpha_mod, phase, n_plus_m);
        s.cutoff = cutoff;
        s
    };
    CharFn::closed(&spec_at(0.0))?;
    let opt = optimize_phase(
        |phase| {
            CharFn::closed(&spec_at(phase))
                .and_then(|cf| integrate_plane(rule, |l| cf.evaluate_centered(l.conj(), l)))
                .map(|v| v.re)
                .unwrap_or(f64::NEG_INFINITY)
        },
        Goal::Maximize,
    );
    let result = fidelity_bk(&CharFn::closed(&spec_at(opt.phase))?, rule)?;
    Ok((opt, result))
}
