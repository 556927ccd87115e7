//! Constructors for the single-mode inputs and the two-mode resources.
//!
//! The split resources are `a^n b^m B(|ψ⟩ ⊗ |0⟩)` for `|ψ⟩ = a†|α⟩`
//! (photon-added coherent state) or `|ψ⟩ = |α⟩ − |−α⟩` (odd cat). Each can be
//! built by running the operator circuit in Fock space or directly from its
//! closed form; the two paths share no code beyond the basic ladder and
//! displacement primitives.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{check_displacement, coherent_amplitudes, Mode, SingleModeState, TwoModeState};
use crate::{DEFAULT_CUTOFF, DEFAULT_TAIL_TOLERANCE};

/// Resource families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Photon-added coherent state split with vacuum.
    PacsSplit,
    /// Odd cat state split with vacuum.
    OddCatSplit,
    /// Two-mode squeezed vacuum.
    Tmss,
    /// `a|TMSS⟩` (subtraction counts taken from the spec).
    TmssSubA,
    /// `a†b†|TMSS⟩`.
    TmssAddAb,
    /// `a†b†ab|TMSS⟩`.
    TmssAddSubAb,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::PacsSplit,
        Family::OddCatSplit,
        Family::Tmss,
        Family::TmssSubA,
        Family::TmssAddAb,
        Family::TmssAddSubAb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PacsSplit => "PACS_SPLIT",
            Family::OddCatSplit => "ODD_CAT_SPLIT",
            Family::Tmss => "TMSS",
            Family::TmssSubA => "TMSS_SUB_A",
            Family::TmssAddAb => "TMSS_ADD_AB",
            Family::TmssAddSubAb => "TMSS_ADDSUB_AB",
        }
    }

    /// Families parameterized by the squeezing `λ` instead of `α`.
    pub fn is_tmss(self) -> bool {
        matches!(
            self,
            Family::Tmss | Family::TmssSubA | Family::TmssAddAb | Family::TmssAddSubAb
        )
    }

    /// Families obtained by splitting a single-mode state with vacuum.
    pub fn is_split(self) -> bool {
        !self.is_tmss()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown family '{s}'")))
    }
}

/// Parity of the total number of subtracted photons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(−1)^{n+m}`
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Symbolic description of a resource.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResourceSpec {
    pub family: Family,
    pub alpha_mod: f64,
    pub alpha_phase: f64,
    /// Photons subtracted from mode A.
    pub n_sub_a: usize,
    /// Photons subtracted from mode B.
    pub n_sub_b: usize,
    /// Squeezing parameter `λ = tanh s` for the TMSS families.
    pub lambda: f64,
    pub cutoff: usize,
}

impl ResourceSpec {
    pub fn pacs(alpha_mod: f64, alpha_phase: f64, n_sub_a: usize, n_sub_b: usize) -> Self {
        Self {
            family: Family::PacsSplit,
            alpha_mod,
            alpha_phase,
            n_sub_a,
            n_sub_b,
            lambda: 0.0,
            cutoff: DEFAULT_CUTOFF,
        }
    }

    pub fn odd_cat(alpha_mod: f64, alpha_phase: f64, n_sub_a: usize, n_sub_b: usize) -> Self {
        Self {
            family: Family::OddCatSplit,
            ..Self::pacs(alpha_mod, alpha_phase, n_sub_a, n_sub_b)
        }
    }

    /// Split-family resource with all subtractions on mode A.
    pub fn split(family: Family, alpha_mod: f64, alpha_phase: f64, n_plus_m: usize) -> Self {
        Self {
            family,
            ..Self::pacs(alpha_mod, alpha_phase, n_plus_m, 0)
        }
    }

    pub fn tmss(family: Family, lambda: f64) -> Self {
        let n_sub_a = usize::from(family == Family::TmssSubA);
        Self {
            family,
            alpha_mod: 0.0,
            alpha_phase: 0.0,
            n_sub_a,
            n_sub_b: 0,
            lambda,
            cutoff: DEFAULT_CUTOFF,
        }
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.alpha_mod, self.alpha_phase)
    }

    pub fn n_plus_m(&self) -> usize {
        self.n_sub_a + self.n_sub_b
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n_plus_m())
    }

    pub fn validate(&self) -> Result<()> {
        if self.cutoff < 1 {
            return Err(Error::InvalidSpec("cutoff must be at least 1".into()));
        }
        if self.family.is_tmss() {
            if !(0.0..1.0).contains(&self.lambda) {
                return Err(Error::InvalidSpec(format!(
                    "lambda must lie in [0, 1), got {}",
                    self.lambda
                )));
            }
            if self.alpha_mod != 0.0 {
                return Err(Error::InvalidSpec(
                    "TMSS families take lambda, not alpha".into(),
                ));
            }
        } else {
            if !(self.alpha_mod >= 0.0 && self.alpha_mod.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "alpha modulus must be finite and non-negative, got {}",
                    self.alpha_mod
                )));
            }
            if !self.alpha_phase.is_finite() {
                return Err(Error::InvalidSpec("alpha phase must be finite".into()));
            }
            if self.lambda != 0.0 {
                return Err(Error::InvalidSpec(
                    "split families take alpha, not lambda".into(),
                ));
            }
        }
        Ok(())
    }

    /// Subtraction totals above 4 are outside the validated range.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.n_plus_m() > 4 {
            w.push(format!(
                "n+m = {} exceeds the validated range (<= 4); check convergence",
                self.n_plus_m()
            ));
        }
        w
    }
}

/// `N₁ = (n+m+|α|²)² + |α|²`, `N₂ = 2[1 − (−1)^{n+m} e^{−2|α|²}]`, `M₁ = n+m+|α|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizationConstants {
    pub n1: f64,
    pub n2: f64,
    pub m1: f64,
}

impl NormalizationConstants {
    pub fn new(alpha_mod: f64, n_plus_m: usize) -> Self {
        let a2 = alpha_mod * alpha_mod;
        let m1 = n_plus_m as f64 + a2;
        let n2 = match Parity::of(n_plus_m) {
            // 1 − e^{−2|α|²} without cancellation
            Parity::Even => -2.0 * (-2.0 * a2).exp_m1(),
            Parity::Odd => 2.0 * (1.0 + (-2.0 * a2).exp()),
        };
        Self {
            n1: m1 * m1 + a2,
            n2,
            m1,
        }
    }
}

/// Normalized coherent state `|α⟩`. The weight beyond the cutoff is removed by
/// renormalization and recorded as truncation loss.
pub fn coherent(alpha: Complex64, cutoff: usize) -> Result<SingleModeState> {
    check_displacement(alpha, cutoff)?;
    let amps = coherent_amplitudes(alpha, cutoff);
    renormalize(amps)
}

fn renormalize(amps: DVector<Complex64>) -> Result<SingleModeState> {
    let norm_sqr: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    if norm_sqr.sqrt() < crate::fock::DEGENERATE_NORM {
        return Err(Error::DegenerateState("zero single-mode state".into()));
    }
    let loss = (1.0 - norm_sqr).max(0.0);
    let scaled = amps / Complex64::new(norm_sqr.sqrt(), 0.0);
    Ok(SingleModeState::from_vector(scaled, loss))
}

/// `a†|α⟩` before normalization; its squared norm is `1 + |α|²` up to truncation.
pub fn photon_added_coherent_unnormalized(
    alpha: Complex64,
    cutoff: usize,
) -> Result<SingleModeState> {
    check_displacement(alpha, cutoff)?;
    let raw = SingleModeState::from_vector(coherent_amplitudes(alpha, cutoff), 0.0);
    raw.create(f64::INFINITY)
}

/// Normalized photon-added coherent state `a†|α⟩ / √(1+|α|²)`.
pub fn photon_added_coherent(alpha: Complex64, cutoff: usize) -> Result<SingleModeState> {
    let raw = photon_added_coherent_unnormalized(alpha, cutoff)?;
    let loss = (1.0 - raw.norm_sqr() / (1.0 + alpha.norm_sqr())).max(0.0);
    let s = raw.normalized()?;
    Ok(SingleModeState::from_vector(s.amplitudes().clone(), loss))
}

fn cat(alpha: Complex64, cutoff: usize, parity: Parity) -> Result<SingleModeState> {
    check_displacement(alpha, cutoff)?;
    let base = coherent_amplitudes(alpha, cutoff);
    let mut amps = DVector::from_element(cutoff + 1, Complex64::new(0.0, 0.0));
    for n in 0..=cutoff {
        // |α⟩ ∓ |−α⟩ keeps 2·c_n on the matching parity and cancels the rest exactly
        if Parity::of(n) == parity {
            amps[n] = base[n] * 2.0;
        }
    }
    let norm_sqr: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    if norm_sqr.sqrt() < crate::fock::DEGENERATE_NORM {
        return Err(Error::DegenerateState(format!(
            "{} cat state vanishes at alpha = {alpha}",
            if parity == Parity::Odd { "odd" } else { "even" }
        )));
    }
    let a2 = alpha.norm_sqr();
    let exact = match parity {
        Parity::Odd => -2.0 * (-2.0 * a2).exp_m1(),
        Parity::Even => 2.0 * (1.0 + (-2.0 * a2).exp()),
    };
    let loss = (1.0 - norm_sqr / exact).max(0.0);
    let scaled = amps / Complex64::new(norm_sqr.sqrt(), 0.0);
    Ok(SingleModeState::from_vector(scaled, loss))
}

/// Normalized odd cat state `(|α⟩ − |−α⟩)/√(2(1 − e^{−2|α|²}))`.
pub fn odd_cat(alpha: Complex64, cutoff: usize) -> Result<SingleModeState> {
    cat(alpha, cutoff, Parity::Odd)
}

/// Normalized even cat state `(|α⟩ + |−α⟩)/√(2(1 + e^{−2|α|²}))`.
pub fn even_cat(alpha: Complex64, cutoff: usize) -> Result<SingleModeState> {
    cat(alpha, cutoff, Parity::Even)
}

/// `√(1−λ²) Σ λⁿ |n, n⟩`, renormalized within the cutoff.
pub fn tmss(lambda: f64, cutoff: usize) -> Result<TwoModeState> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::InvalidSpec(format!(
            "lambda must lie in [0, 1), got {lambda}"
        )));
    }
    let mut s = TwoModeState::zeros(cutoff);
    let pre = (1.0 - lambda * lambda).sqrt();
    let mut term = pre;
    let mut kept = 0.0;
    let mut terms = Vec::with_capacity(cutoff + 1);
    for n in 0..=cutoff {
        terms.push((n, n, Complex64::new(term, 0.0)));
        kept += term * term;
        term *= lambda;
    }
    s = s.add(&TwoModeState::from_terms(cutoff, &terms)?)?;
    let mut s = s.normalized()?;
    s.add_truncation_loss((1.0 - kept).max(0.0));
    Ok(s)
}

/// The single-mode state `(1/√2)^{n+m} a^{n+m} |ψ⟩`, normalized: the factor that
/// enters the beam splitter once the subtractions are commuted through it.
pub fn subtracted_input(spec: &ResourceSpec) -> Result<SingleModeState> {
    spec.validate()?;
    let psi = split_input(spec)?;
    let mut s = psi;
    for _ in 0..spec.n_plus_m() {
        s = s.annihilate();
    }
    s.normalized()
}

fn split_input(spec: &ResourceSpec) -> Result<SingleModeState> {
    match spec.family {
        Family::PacsSplit => photon_added_coherent(spec.alpha(), spec.cutoff),
        Family::OddCatSplit => odd_cat(spec.alpha(), spec.cutoff),
        f => Err(Error::InvalidSpec(format!("{f} is not a split family"))),
    }
}

/// Runs the operator circuit: input ⊗ vacuum, beam splitter, `n` subtractions
/// on A and `m` on B, renormalization. TMSS families apply their ladder
/// operators to the squeezed vacuum instead.
pub fn build_resource_circuit(spec: &ResourceSpec) -> Result<TwoModeState> {
    build_resource_circuit_with_tolerance(spec, DEFAULT_TAIL_TOLERANCE)
}

pub fn build_resource_circuit_with_tolerance(
    spec: &ResourceSpec,
    tail_tolerance: f64,
) -> Result<TwoModeState> {
    spec.validate()?;
    let unnormalized = match spec.family {
        Family::PacsSplit | Family::OddCatSplit => {
            let psi = split_input(spec)?;
            let vac = SingleModeState::vacuum(spec.cutoff)?;
            let mixed = TwoModeState::product(&psi, &vac)?.beam_splitter_50_50(tail_tolerance)?;
            mixed
                .annihilate_n(Mode::A, spec.n_sub_a)
                .annihilate_n(Mode::B, spec.n_sub_b)
        }
        Family::Tmss | Family::TmssSubA => tmss(spec.lambda, spec.cutoff)?
            .annihilate_n(Mode::A, spec.n_sub_a)
            .annihilate_n(Mode::B, spec.n_sub_b),
        Family::TmssAddAb => tmss(spec.lambda, spec.cutoff)?
            .create(Mode::B, tail_tolerance)?
            .create(Mode::A, tail_tolerance)?,
        Family::TmssAddSubAb => tmss(spec.lambda, spec.cutoff)?
            .annihilate(Mode::B)
            .annihilate(Mode::A)
            .create(Mode::B, tail_tolerance)?
            .create(Mode::A, tail_tolerance)?,
    };
    unnormalized.normalized()
}

/// Closed form of the split resources before normalization.
///
/// * PACS: `M₁|β,0⟩_A|−β,0⟩_B + β(|β,1⟩_A|−β,0⟩_B − |β,0⟩_A|−β,1⟩_B)` with
///   `β = α/√2` and displaced Fock states `|β,k⟩ = D(β)|k⟩`; squared norm `N₁`.
/// * Odd cat: `|β⟩|−β⟩ − (−1)^{n+m} |−β⟩|β⟩`; squared norm `N₂`.
pub fn closed_form_unnormalized(spec: &ResourceSpec) -> Result<TwoModeState> {
    spec.validate()?;
    let cutoff = spec.cutoff;
    let beta = spec.alpha() / SQRT_2;
    match spec.family {
        Family::PacsSplit => {
            let m1 = NormalizationConstants::new(spec.alpha_mod, spec.n_plus_m()).m1;
            let zero = SingleModeState::vacuum(cutoff)?;
            let one = SingleModeState::fock(1, cutoff)?;
            let a0 = zero.displace(beta)?;
            let a1 = one.displace(beta)?;
            let b0 = zero.displace(-beta)?;
            let b1 = one.displace(-beta)?;
            let t00 = TwoModeState::product(&a0, &b0)?.scaled(Complex64::new(m1, 0.0));
            let t10 = TwoModeState::product(&a1, &b0)?.scaled(beta);
            let t01 = TwoModeState::product(&a0, &b1)?.scaled(-beta);
            t00.add(&t10)?.add(&t01)
        }
        Family::OddCatSplit => {
            check_displacement(beta, cutoff)?;
            let plus = SingleModeState::from_vector(coherent_amplitudes(beta, cutoff), 0.0);
            let minus = SingleModeState::from_vector(coherent_amplitudes(-beta, cutoff), 0.0);
            let sign = spec.parity().sign();
            let first = TwoModeState::product(&plus, &minus)?;
            let second = TwoModeState::product(&minus, &plus)?.scaled(Complex64::new(-sign, 0.0));
            first.add(&second)
        }
        f => Err(Error::InvalidSpec(format!("{f} has no closed form"))),
    }
}

/// Normalized closed-form resource.
pub fn build_resource_closed_form(spec: &ResourceSpec) -> Result<TwoModeState> {
    closed_form_unnormalized(spec)?.normalized()
}

/// Low-order expansions of the split resources in `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallAlphaKind {
    /// PACS resource, `n+m = 0`, first order.
    Psi1,
    /// The same after one subtraction.
    Psi1Sub,
    /// Odd-cat resource, `n+m = 0`, third order.
    Psi2,
    /// The same after one subtraction.
    Psi2Sub,
}

/// The unnormalized truncated expansion, term by term.
pub fn small_alpha_state(
    kind: SmallAlphaKind,
    alpha: Complex64,
    cutoff: usize,
) -> Result<TwoModeState> {
    let one = Complex64::new(1.0, 0.0);
    let sqrt3 = 3f64.sqrt();
    let terms: Vec<(usize, usize, Complex64)> = match kind {
        SmallAlphaKind::Psi1 => vec![
            (1, 0, one),
            (0, 1, -one),
            (2, 0, alpha),
            (0, 2, alpha),
            (1, 1, -alpha * SQRT_2),
        ],
        SmallAlphaKind::Psi1Sub => {
            vec![(0, 0, one), (1, 0, alpha * SQRT_2), (0, 1, -alpha * SQRT_2)]
        }
        SmallAlphaKind::Psi2 => {
            let c = alpha * alpha / (2.0 * 6f64.sqrt());
            vec![
                (1, 0, one),
                (0, 1, -one),
                (3, 0, c),
                (0, 3, -c),
                (2, 1, -c * sqrt3),
                (1, 2, c * sqrt3),
            ]
        }
        SmallAlphaKind::Psi2Sub => {
            let c = alpha * alpha / (2.0 * SQRT_2);
            vec![(0, 0, one), (2, 0, c), (0, 2, c), (1, 1, -c * SQRT_2)]
        }
    };
    TwoModeState::from_terms(cutoff, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coherent_at_zero_is_vacuum() {
        let s = coherent(c(0.0, 0.0), 10).unwrap();
        assert_eq!(s.amplitude(0), c(1.0, 0.0));
        assert!((1..=10).all(|n| s.amplitude(n) == c(0.0, 0.0)));
    }

    #[test]
    fn coherent_overlap_identity() {
        let a = c(0.7, -0.4);
        let b = c(-0.3, 0.9);
        let sa = coherent(a, 40).unwrap();
        let sb = coherent(b, 40).unwrap();
        let expected = (-(a - b).norm_sqr()).exp();
        assert!((sb.inner(&sa).norm_sqr() - expected).abs() < 1e-12);
    }

    #[test]
    fn coherent_mean_photon_number() {
        let s = coherent(c(1.0, 0.0), 40).unwrap();
        assert!((s.mean_photon_number() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_guard() {
        assert!(matches!(
            coherent(c(4.0, 0.0), 40),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn photon_added_vacuum_is_single_photon() {
        let s = photon_added_coherent(c(0.0, 0.0), 8).unwrap();
        assert!((s.amplitude(1) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn photon_added_norm_before_normalization() {
        let raw = photon_added_coherent_unnormalized(c(1.0, 0.0), 40).unwrap();
        assert!((raw.norm_sqr() - 2.0).abs() < 1e-12);
        let raw = photon_added_coherent_unnormalized(c(0.6, 0.8), 40).unwrap();
        assert!((raw.norm_sqr() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn photon_added_has_zero_vacuum_overlap() {
        // ⟨β|a†|α⟩ = β*⟨β|α⟩ vanishes at β = 0
        let s = photon_added_coherent(c(0.8, 0.3), 40).unwrap();
        assert_eq!(s.amplitude(0), c(0.0, 0.0));
        let vac = SingleModeState::vacuum(40).unwrap();
        assert_eq!(vac.inner(&s), c(0.0, 0.0));
    }

    #[test]
    fn cat_parities() {
        let odd = odd_cat(c(1.2, 0.5), 40).unwrap();
        let even = even_cat(c(1.2, 0.5), 40).unwrap();
        for n in (0..=40).step_by(2) {
            assert_eq!(odd.amplitude(n), c(0.0, 0.0));
        }
        for n in (1..=40).step_by(2) {
            assert_eq!(even.amplitude(n), c(0.0, 0.0));
        }
        assert!(odd.inner(&even).norm() < 1e-15);
        assert!((odd.norm_sqr() - 1.0).abs() < 1e-14);
        assert!((even.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_cat_degenerate_at_zero() {
        assert!(matches!(
            odd_cat(c(0.0, 0.0), 10),
            Err(Error::DegenerateState(_))
        ));
        assert!(even_cat(c(0.0, 0.0), 10).is_ok());
    }

    #[test]
    fn odd_cat_small_alpha_points_to_single_photon() {
        let s = odd_cat(c(1e-3, 0.0), 20).unwrap();
        assert!(s.amplitude(1).norm_sqr() > 1.0 - 1e-4);
    }

    #[test]
    fn normalization_constants() {
        let k = NormalizationConstants::new(1.0, 0);
        assert_eq!(k.m1, 1.0);
        assert_eq!(k.n1, 2.0);
        assert!((k.n2 - 2.0 * (1.0 - (-2.0f64).exp())).abs() < 1e-15);
        let k = NormalizationConstants::new(0.0, 1);
        assert_eq!(k.n2, 4.0);
        assert_eq!(NormalizationConstants::new(0.0, 0).n2, 0.0);
    }

    #[test]
    fn spec_validation() {
        assert!(ResourceSpec::pacs(-0.1, 0.0, 0, 0).validate().is_err());
        assert!(ResourceSpec::tmss(Family::Tmss, 1.0).validate().is_err());
        assert!(ResourceSpec::tmss(Family::TmssSubA, 0.3).validate().is_ok());
        assert_eq!(ResourceSpec::tmss(Family::TmssSubA, 0.3).n_sub_a, 1);
        assert!(ResourceSpec::pacs(0.5, 0.0, 3, 2).warnings().len() == 1);
        assert!("odd-cat-split".parse::<Family>().unwrap() == Family::OddCatSplit);
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn pacs_at_zero_alpha_is_antisymmetric_pair() {
        let s = build_resource_circuit(&ResourceSpec::pacs(0.0, 0.0, 0, 0)).unwrap();
        let r = 1.0 / SQRT_2;
        assert!((s.amplitude(1, 0) - c(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(0, 1) - c(-r, 0.0)).norm() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_cat_single_subtraction_matches_plus_phase_closed_form() {
        // n+m odd: |β,−β⟩ + |−β,β⟩
        for alpha in [0.3, 1.1, 2.0] {
            let spec = ResourceSpec::odd_cat(alpha, 0.0, 1, 0);
            let circuit = build_resource_circuit(&spec).unwrap();
            let closed = build_resource_closed_form(&spec).unwrap();
            assert!(circuit.phase_aligned_distance(&closed) < 1e-10);
            let k = spec.cutoff;
            let b = alpha / SQRT_2;
            let plus = SingleModeState::from_vector(coherent_amplitudes(c(b, 0.0), k), 0.0);
            let minus = SingleModeState::from_vector(coherent_amplitudes(c(-b, 0.0), k), 0.0);
            let direct = TwoModeState::product(&plus, &minus)
                .unwrap()
                .add(&TwoModeState::product(&minus, &plus).unwrap())
                .unwrap()
                .normalized()
                .unwrap();
            assert!(circuit.phase_aligned_distance(&direct) < 1e-10);
        }
    }

    #[test]
    fn tmss_schmidt_coefficients() {
        let lambda: f64 = 0.5;
        let s = build_resource_circuit(&ResourceSpec::tmss(Family::Tmss, lambda)).unwrap();
        for n in 0..10 {
            let expected = (1.0 - lambda * lambda).sqrt() * lambda.powi(n as i32);
            assert!((s.amplitude(n, n).re - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_norms() {
        for (alpha, nm) in [(0.7, 0), (0.7, 1), (1.3, 2), (0.2, 3)] {
            let spec = ResourceSpec::split(Family::PacsSplit, alpha, 0.4, nm);
            let k = NormalizationConstants::new(alpha, nm);
            let raw = closed_form_unnormalized(&spec).unwrap();
            assert!((raw.norm_sqr() - k.n1).abs() < 1e-10 * k.n1.max(1.0));
            let spec = ResourceSpec::split(Family::OddCatSplit, alpha, 0.4, nm);
            let raw = closed_form_unnormalized(&spec).unwrap();
            assert!((raw.norm_sqr() - k.n2).abs() < 1e-10);
        }
    }

    #[test]
    fn circuit_matches_closed_form_elementwise_for_real_alpha() {
        for family in [Family::PacsSplit, Family::OddCatSplit] {
            for nm in 0..=2 {
                let spec = ResourceSpec::split(family, 0.7, 0.0, nm);
                let circuit = build_resource_circuit(&spec).unwrap();
                let closed = build_resource_closed_form(&spec).unwrap();
                assert!(
                    circuit.max_abs_difference(&closed) < 1e-10,
                    "{family} n+m={nm}: {}",
                    circuit.max_abs_difference(&closed)
                );
            }
        }
    }

    #[test]
    fn circuit_matches_closed_form_on_phase_grid() {
        for family in [Family::PacsSplit, Family::OddCatSplit] {
            for alpha in [0.1, 0.5, 1.0, 1.5] {
                for phase in [0.0, PI / 4.0, PI / 2.0] {
                    for nm in 0..=2 {
                        let spec = ResourceSpec::split(family, alpha, phase, nm);
                        let f = build_resource_circuit(&spec)
                            .unwrap()
                            .fidelity_with(&build_resource_closed_form(&spec).unwrap());
                        assert!(f >= 1.0 - 1e-10, "{family} {alpha} {phase} {nm}: {f}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_alpha_expansions_at_zero() {
        let s = small_alpha_state(SmallAlphaKind::Psi1Sub, c(0.0, 0.0), 5).unwrap();
        assert_eq!(s, TwoModeState::basis(0, 0, 5).unwrap());
        let s = small_alpha_state(SmallAlphaKind::Psi2, c(0.0, 0.0), 5).unwrap();
        let expected =
            TwoModeState::from_terms(5, &[(1, 0, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0))]).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn small_alpha_expansion_tracks_circuit() {
        let alpha = 0.05;
        let cases = [
            (SmallAlphaKind::Psi1, Family::PacsSplit, 0),
            (SmallAlphaKind::Psi1Sub, Family::PacsSplit, 1),
            (SmallAlphaKind::Psi2, Family::OddCatSplit, 0),
            (SmallAlphaKind::Psi2Sub, Family::OddCatSplit, 1),
        ];
        for (kind, family, nm) in cases {
            let approx = small_alpha_state(kind, c(alpha, 0.0), 40)
                .unwrap()
                .normalized()
                .unwrap();
            let exact =
                build_resource_circuit(&ResourceSpec::split(family, alpha, 0.0, nm)).unwrap();
            let f = approx.fidelity_with(&exact);
            assert!(f >= 1.0 - 1e-4, "{kind:?}: {f}");
        }
    }

    #[test]
    fn subtraction_split_between_modes_only_changes_sign() {
        let a = build_resource_circuit(&ResourceSpec::pacs(0.8, 0.3, 1, 0)).unwrap();
        let b = build_resource_circuit(&ResourceSpec::pacs(0.8, 0.3, 0, 1)).unwrap();
        assert!(a.fidelity_with(&b) > 1.0 - 1e-12);
    }

    #[test]
    fn tmss_family_states_are_normalized() {
        for family in [Family::TmssSubA, Family::TmssAddAb, Family::TmssAddSubAb] {
            let s = build_resource_circuit(&ResourceSpec::tmss(family, 0.3)).unwrap();
            assert!(s.is_normalized());
        }
        // a†b†ab|TMSS⟩ ∝ Σ n² λⁿ |n,n⟩
        let s = build_resource_circuit(&ResourceSpec::tmss(Family::TmssAddSubAb, 0.3)).unwrap();
        let ratio = s.amplitude(2, 2).re / s.amplitude(1, 1).re;
        assert!((ratio - 4.0 * 0.3).abs() < 1e-12);
    }
}
