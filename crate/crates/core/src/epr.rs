//! Second-order EPR correlation: the total variance
//! `Δ²(x_A − x_B) + Δ²(p_A + p_B)` with `x = (a + a†)/2`, `p = −i(a − a†)/2`.
//! Vacuum gives 1; values below 1 witness entanglement.

use crate::error::{Error, Result};
use crate::fock::{MomentSet, TwoModeState};
use crate::optimize::{optimize_phase, Goal};
use crate::resources::{NormalizationConstants, Parity};

/// Distance from 1 within which a variance is reported as a boundary case.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// Largest imaginary part tolerated in the moment combination.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Numeric,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EprResult {
    pub total_variance: f64,
    /// Phase of `α` the value refers to; `None` for numerics on a given state.
    pub phase_used: Option<f64>,
    /// `total_variance < 1`.
    pub correlated: bool,
    /// `|total_variance − 1| ≤ 1e-12`.
    pub boundary: bool,
    pub method: Method,
}

impl EprResult {
    fn new(total_variance: f64, phase_used: Option<f64>, method: Method) -> Self {
        Self {
            total_variance,
            phase_used,
            correlated: total_variance < 1.0,
            boundary: (total_variance - 1.0).abs() <= BOUNDARY_BAND,
            method,
        }
    }
}

/// `1 + (⟨a†a⟩ + ⟨b†b⟩ − ⟨ab⟩ − ⟨a†b†⟩) − (⟨a⟩ − ⟨b†⟩)(⟨a†⟩ − ⟨b⟩)`.
pub fn total_variance_from_moments(m: &MomentSet) -> Result<f64> {
    let fluct = m.n_a + m.n_b - m.ab - m.a_dag_b_dag;
    let shift = (m.mean_a - m.mean_b.conj()) * (m.mean_a.conj() - m.mean_b);
    let v = 1.0 + fluct - shift;
    if v.im.abs() > IMAGINARY_RESIDUE_LIMIT {
        return Err(Error::NumericalInstability(format!(
            "total variance has imaginary part {:.3e}",
            v.im
        )));
    }
    Ok(v.re)
}

pub fn epr_numeric(state: &TwoModeState) -> Result<EprResult> {
    let state = if state.is_normalized() {
        state.clone()
    } else {
        state.normalized()?
    };
    let v = total_variance_from_moments(&state.moments())?;
    Ok(EprResult::new(v, None, Method::Numeric))
}

/// Closed form for the photon-added coherent resource at `α = |α|e^{iφ}`:
/// `1 + |α|²[(M₁+1)² + |α|²](1 + cos 2φ)/N₁ − |α|² cos 2φ / N₁
///  − 2|α|²(N₁+M₁)² cos²φ / N₁²`.
pub fn epr_psi1_closed(alpha_mod: f64, phase: f64, n_plus_m: usize) -> EprResult {
    let k = NormalizationConstants::new(alpha_mod, n_plus_m);
    let a2 = alpha_mod * alpha_mod;
    let v = if k.n1 == 0.0 {
        // α = 0, n+m = 0: (|1,0⟩ − |0,1⟩)/√2
        2.0
    } else {
        let c2 = (2.0 * phase).cos();
        let c = phase.cos();
        1.0 + a2 * ((k.m1 + 1.0).powi(2) + a2) * (1.0 + c2) / k.n1
            - a2 * c2 / k.n1
            - 2.0 * a2 * (k.n1 + k.m1).powi(2) * c * c / (k.n1 * k.n1)
    };
    EprResult::new(v, Some(phase), Method::ClosedForm)
}

/// Closed form for the odd-cat resource:
/// `1 + |α|²[(1 + s e^{−2|α|²})/(1 − s e^{−2|α|²}) + cos 2φ]`, `s = (−1)^{n+m}`.
pub fn epr_psi2_closed(alpha_mod: f64, phase: f64, parity: Parity) -> Result<EprResult> {
    let a2 = alpha_mod * alpha_mod;
    let e = (-2.0 * a2).exp();
    let ratio = match parity {
        Parity::Even => {
            if alpha_mod == 0.0 {
                return Err(Error::DegenerateState(
                    "odd-cat resource with even n+m vanishes at alpha = 0".into(),
                ));
            }
            // (1 + e)/(1 − e) with the denominator kept accurate for small α
            (1.0 + e) / -(-2.0 * a2).exp_m1()
        }
        Parity::Odd => (1.0 - e) / (1.0 + e),
    };
    let v = 1.0 + a2 * (ratio + (2.0 * phase).cos());
    Ok(EprResult::new(v, Some(phase), Method::ClosedForm))
}

/// `1 − 2|α|² e^{−2|α|²}/(1 + e^{−2|α|²})`: the odd-parity closed form at `φ = π/2`.
pub fn epr_psi2_odd_optimal(alpha_mod: f64) -> f64 {
    let a2 = alpha_mod * alpha_mod;
    let e = (-2.0 * a2).exp();
    1.0 - 2.0 * a2 * e / (1.0 + e)
}

/// Photon-added coherent resource at its numerically optimal phase.
pub fn epr_psi1_optimized(alpha_mod: f64, n_plus_m: usize) -> EprResult {
    let opt = optimize_phase(
        |phi| epr_psi1_closed(alpha_mod, phi, n_plus_m).total_variance,
        Goal::Minimize,
    );
    epr_psi1_closed(alpha_mod, opt.phase, n_plus_m)
}

/// Odd-cat resource at its numerically optimal phase.
pub fn epr_psi2_optimized(alpha_mod: f64, parity: Parity) -> Result<EprResult> {
    epr_psi2_closed(alpha_mod, 0.0, parity)?;
    let opt = optimize_phase(
        |phi| {
            epr_psi2_closed(alpha_mod, phi, parity)
                .map(|r| r.total_variance)
                .unwrap_or(f64::INFINITY)
        },
        Goal::Minimize,
    );
    epr_psi2_closed(alpha_mod, opt.phase, parity)
}
