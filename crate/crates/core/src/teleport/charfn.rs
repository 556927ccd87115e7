//! Two-mode characteristic functions `C(λ₂, λ₃) = ⟨D_A(λ₂) D_B(λ₃)⟩` in
//! symmetric ordering, `D(λ) = exp(λa† − λ*a)`.

use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{displacement_matrix, TwoModeState};
use crate::resources::{Family, NormalizationConstants, ResourceSpec};

/// Amplitudes outside the retained block carry at most this much probability.
const SUPPORT_TAIL: f64 = 1e-24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharFnKind {
    ClosedPsi1,
    ClosedPsi2,
    NumericFock,
}

#[derive(Clone, Debug)]
enum Evaluator {
    Psi1 {
        alpha: Complex64,
        n1: f64,
        m1: f64,
    },
    Psi2 {
        alpha: Complex64,
        n2: f64,
        sign: f64,
    },
    Fock {
        psi: DMatrix<Complex64>,
        cutoff: usize,
    },
}

/// A characteristic function together with the first moments `⟨a⟩`, `⟨b⟩`
/// of the state it describes.
#[derive(Clone, Debug)]
pub struct CharFn {
    kind: CharFnKind,
    evaluator: Evaluator,
    mean_a: Complex64,
    mean_b: Complex64,
}

impl CharFn {
    /// Photon-added coherent resource:
    /// `e^{−(|λ₂|²+|λ₃|²)/2 + δ − δ*} [|α|² + (M₁+δ)(M₁−δ*)] / N₁`,
    /// `δ = α*(λ₂ − λ₃)/√2`.
    pub fn psi1_closed(spec: &ResourceSpec) -> Result<Self> {
        spec.validate()?;
        if spec.family != Family::PacsSplit {
            return Err(Error::InvalidSpec(format!(
                "{} has no photon-added closed form",
                spec.family
            )));
        }
        let k = NormalizationConstants::new(spec.alpha_mod, spec.n_plus_m());
        let alpha = spec.alpha();
        let mean_a = if k.n1 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            alpha / SQRT_2 * (1.0 + k.m1 / k.n1)
        };
        Ok(Self {
            kind: CharFnKind::ClosedPsi1,
            evaluator: Evaluator::Psi1 {
                alpha,
                n1: k.n1,
                m1: k.m1,
            },
            mean_a,
            mean_b: -mean_a,
        })
    }

    /// Odd-cat resource:
    /// `2e^{−(|λ₂|²+|λ₃|²)/2} [cosh(δ−δ*) − (−1)^{n+m} e^{−2|α|²} cosh(δ+δ*)] / N₂`.
    pub fn psi2_closed(spec: &ResourceSpec) -> Result<Self> {
        spec.validate()?;
        if spec.family != Family::OddCatSplit {
            return Err(Error::InvalidSpec(format!(
                "{} has no cat closed form",
                spec.family
            )));
        }
        let k = NormalizationConstants::new(spec.alpha_mod, spec.n_plus_m());
        if k.n2 == 0.0 {
            return Err(Error::DegenerateState(
                "odd-cat resource with even n+m vanishes at alpha = 0".into(),
            ));
        }
        let zero = Complex64::new(0.0, 0.0);
        Ok(Self {
            kind: CharFnKind::ClosedPsi2,
            evaluator: Evaluator::Psi2 {
                alpha: spec.alpha(),
                n2: k.n2,
                sign: spec.parity().sign(),
            },
            mean_a: zero,
            mean_b: zero,
        })
    }

    /// Closed form matching the spec's family.
    pub fn closed(spec: &ResourceSpec) -> Result<Self> {
        match spec.family {
            Family::PacsSplit => Self::psi1_closed(spec),
            Family::OddCatSplit => Self::psi2_closed(spec),
            f => Err(Error::InvalidSpec(format!("{f} has no closed form"))),
        }
    }

    /// `Tr(ψ† D(λ₂) ψ D(λ₃)ᵀ)` from the Fock amplitudes. Displacement matrix
    /// elements are exact, so only the state's own truncation enters; the
    /// block beyond which the state carries negligible weight is dropped.
    pub fn numeric(state: &TwoModeState) -> Result<Self> {
        let state = if state.is_normalized() {
            state.clone()
        } else {
            state.normalized()?
        };
        let m = state.moments();
        let psi = state.amplitudes();
        let dim = support_dimension(psi);
        Ok(Self {
            kind: CharFnKind::NumericFock,
            evaluator: Evaluator::Fock {
                psi: psi.view((0, 0), (dim, dim)).into_owned(),
                cutoff: state.cutoff(),
            },
            mean_a: m.mean_a,
            mean_b: m.mean_b,
        })
    }

    pub fn kind(&self) -> CharFnKind {
        self.kind
    }

    pub fn mean_a(&self) -> Complex64 {
        self.mean_a
    }

    pub fn mean_b(&self) -> Complex64 {
        self.mean_b
    }

    /// Largest `|λ|²` the evaluator accepts, if bounded.
    pub fn max_argument_sqr(&self) -> Option<f64> {
        match &self.evaluator {
            Evaluator::Fock { cutoff, .. } => Some(*cutoff as f64),
            _ => None,
        }
    }

    pub fn evaluate(&self, l2: Complex64, l3: Complex64) -> Result<Complex64> {
        let gauss = (-(l2.norm_sqr() + l3.norm_sqr()) / 2.0).exp();
        match &self.evaluator {
            Evaluator::Psi1 { alpha, n1, m1 } => {
                let d = (l2 - l3) / SQRT_2;
                let delta = alpha.conj() * d;
                let a2 = alpha.norm_sqr();
                let ratio = if *m1 == a2 {
                    // n+m = 0: M₁ = |α|², divide |α|² out so that α = 0 is regular
                    (1.0 + a2 + delta - delta.conj() - d.norm_sqr()) / (1.0 + a2)
                } else {
                    (a2 + (*m1 + delta) * (*m1 - delta.conj())) / *n1
                };
                Ok((delta - delta.conj()).exp() * gauss * ratio)
            }
            Evaluator::Psi2 { alpha, n2, sign } => {
                let delta = alpha.conj() * (l2 - l3) / SQRT_2;
                let e = (-2.0 * alpha.norm_sqr()).exp();
                let bracket =
                    (delta - delta.conj()).cosh() - *sign * e * (delta + delta.conj()).cosh();
                Ok(bracket * 2.0 * gauss / *n2)
            }
            Evaluator::Fock { psi, cutoff } => {
                let limit = *cutoff as f64;
                for l in [l2, l3] {
                    if l.norm_sqr() > limit {
                        return Err(Error::CutoffTooSmall {
                            cutoff: *cutoff,
                            amplitude_sq: l.norm_sqr(),
                            limit,
                        });
                    }
                }
                let dim = psi.nrows();
                let d2 = displacement_matrix(l2, dim);
                let d3 = displacement_matrix(l3, dim);
                let u = &d2 * psi * d3.transpose();
                Ok(psi.iter().zip(u.iter()).map(|(p, v)| p.conj() * v).sum())
            }
        }
    }

    /// The characteristic function of the state with its first moments
    /// removed by local displacements:
    /// `C(λ₂, λ₃) · exp(λ₂* ⟨a⟩ − λ₂ ⟨a⟩* + λ₃* ⟨b⟩ − λ₃ ⟨b⟩*)`.
    pub fn evaluate_centered(&self, l2: Complex64, l3: Complex64) -> Result<Complex64> {
        let phase = l2.conj() * self.mean_a - l2 * self.mean_a.conj() + l3.conj() * self.mean_b
            - l3 * self.mean_b.conj();
        Ok(self.evaluate(l2, l3)? * phase.exp())
    }
}

fn support_dimension(psi: &DMatrix<Complex64>) -> usize {
    let n = psi.nrows();
    // mass in the L-shaped shell max(i, j) = d, accumulated from the top
    let mut tail = 0.0;
    let mut dim = n;
    for d in (1..n).rev() {
        let shell: f64 = (0..=d)
            .map(|k| psi[(d, k)].norm_sqr() + if k < d { psi[(k, d)].norm_sqr() } else { 0.0 })
            .sum();
        if tail + shell > SUPPORT_TAIL {
            break;
        }
        tail += shell;
        dim = d;
    }
    dim
}
