//! Degree of entanglement: von Neumann entropy of a reduced state, in bits.

use crate::error::{Error, Result};
use crate::fock::{Mode, TwoModeState};
use crate::resources::{NormalizationConstants, Parity};

/// Eigenvalues in `[−CLIP, 0)` are treated as zero.
pub const EIGENVALUE_CLIP: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Numeric,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyResult {
    pub entropy_bits: f64,
    /// Reduced-state spectrum in descending order, after clipping.
    pub eigenvalues: Vec<f64>,
    pub method: Method,
}

impl EntropyResult {
    fn from_spectrum(raw: Vec<f64>, method: Method) -> Result<Self> {
        let mut eigenvalues = Vec::with_capacity(raw.len());
        for v in raw {
            if v < -EIGENVALUE_CLIP {
                return Err(Error::NumericalInstability(format!(
                    "reduced state has eigenvalue {v:.3e}"
                )));
            }
            eigenvalues.push(v.max(0.0));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let entropy_bits = shannon_bits(&eigenvalues);
        Ok(Self {
            entropy_bits,
            eigenvalues,
            method,
        })
    }
}

/// `−Σ pᵢ log₂ pᵢ` with `0·log 0 = 0`.
pub fn shannon_bits(probabilities: &[f64]) -> f64 {
    let s: f64 = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    s.max(0.0)
}

/// Entropy from the eigenvalues of `Tr_B |ψ⟩⟨ψ|`.
pub fn entropy_numeric(state: &TwoModeState) -> Result<EntropyResult> {
    let state = if state.is_normalized() {
        state.clone()
    } else {
        state.normalized()?
    };
    let rho = state.partial_trace(Mode::A);
    EntropyResult::from_spectrum(rho.eigenvalues()?, Method::Numeric)
}

/// Photon-added coherent resource: spectrum of
/// `(1/2N₁)[[|α|²+2M₁², √2α*M₁], [√2αM₁, |α|²]]`, independent of the phase.
pub fn entropy_psi1_closed(alpha_mod: f64, n_plus_m: usize) -> Result<EntropyResult> {
    if !(alpha_mod >= 0.0 && alpha_mod.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "alpha modulus must be finite and non-negative, got {alpha_mod}"
        )));
    }
    let k = NormalizationConstants::new(alpha_mod, n_plus_m);
    let a2 = alpha_mod * alpha_mod;
    if k.n1 == 0.0 {
        // α = 0, n+m = 0: the limit (|1,0⟩ − |0,1⟩)/√2
        return EntropyResult::from_spectrum(vec![0.5, 0.5], Method::ClosedForm);
    }
    let p = (a2 + 2.0 * k.m1 * k.m1) / (2.0 * k.n1);
    let q = a2 / (2.0 * k.n1);
    let off_sqr = 2.0 * a2 * k.m1 * k.m1 / (4.0 * k.n1 * k.n1);
    let trace = p + q;
    let det = p * q - off_sqr;
    let disc = ((trace * trace - 4.0 * det).max(0.0)).sqrt();
    let large = (trace + disc) / 2.0;
    let small = if large > 0.0 { det / large } else { 0.0 };
    EntropyResult::from_spectrum(vec![large, small], Method::ClosedForm)
}

/// Odd-cat resource: eigenvalues `λ±/N₂` with
/// `λ± = (1 ± e^{−|α|²})(1 ∓ (−1)^{n+m} e^{−|α|²})`.
pub fn entropy_psi2_closed(alpha_mod: f64, parity: Parity) -> Result<EntropyResult> {
    if !(alpha_mod >= 0.0 && alpha_mod.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "alpha modulus must be finite and non-negative, got {alpha_mod}"
        )));
    }
    let a2 = alpha_mod * alpha_mod;
    let e = (-a2).exp();
    let one_minus_e = -(-a2).exp_m1();
    let (plus, minus) = match parity {
        Parity::Even => {
            if alpha_mod == 0.0 {
                return Err(Error::DegenerateState(
                    "odd-cat resource with even n+m vanishes at alpha = 0".into(),
                ));
            }
            ((1.0 + e) * one_minus_e, one_minus_e * (1.0 + e))
        }
        Parity::Odd => ((1.0 + e) * (1.0 + e), one_minus_e * one_minus_e),
    };
    let total = plus + minus;
    EntropyResult::from_spectrum(vec![plus / total, minus / total], Method::ClosedForm)
}
