use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Norm below which a state is treated as the zero vector.
pub const DEGENERATE_NORM: f64 = 1e-14;

/// Selects one of the two modes of a [`TwoModeState`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    pub fn other(self) -> Mode {
        match self {
            Mode::A => Mode::B,
            Mode::B => Mode::A,
        }
    }
}

/// Complex amplitudes over the truncated single-mode Fock basis `|0⟩..|cutoff⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleModeState {
    amplitudes: DVector<Complex64>,
    truncation_loss: f64,
}

impl SingleModeState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidSpec(format!(
                "single-mode state needs cutoff >= 1, got {} amplitudes",
                amplitudes.len()
            )));
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
            truncation_loss: 0.0,
        })
    }

    pub(crate) fn from_vector(amplitudes: DVector<Complex64>, truncation_loss: f64) -> Self {
        debug_assert!(amplitudes.len() >= 2);
        Self {
            amplitudes,
            truncation_loss,
        }
    }

    /// Fock state `|n⟩`.
    pub fn fock(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff,
                amplitude_sq: n as f64,
                limit: cutoff as f64,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::fock(0, cutoff)
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes[n]
    }

    /// Probability mass dropped at the truncation boundary while building this state.
    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    /// Relative weight of the highest retained Fock level.
    pub fn tail_mass(&self) -> f64 {
        let norm = self.norm_sqr();
        if norm == 0.0 {
            return 0.0;
        }
        self.amplitudes[self.cutoff()].norm_sqr() / norm
    }

    pub fn is_converged(&self, tail_tolerance: f64) -> bool {
        self.tail_mass() < tail_tolerance
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm.is_nan() || norm < DEGENERATE_NORM {
            return Err(Error::DegenerateState(format!(
                "cannot normalize single-mode vector of norm {norm:.3e}"
            )));
        }
        Ok(Self {
            amplitudes: &self.amplitudes / Complex64::new(norm, 0.0),
            truncation_loss: self.truncation_loss,
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: &self.amplitudes * factor,
            truncation_loss: self.truncation_loss,
        }
    }

    /// Zero-padded copy with a larger cutoff, or a truncated copy with a smaller one.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let mut amps = DVector::zeros(cutoff + 1);
        let keep = (cutoff + 1).min(self.amplitudes.len());
        amps.rows_mut(0, keep)
            .copy_from(&self.amplitudes.rows(0, keep));
        Self {
            amplitudes: amps,
            truncation_loss: self.truncation_loss,
        }
    }

    /// `a|ψ⟩`, not renormalized.
    pub fn annihilate(&self) -> Self {
        let k = self.cutoff();
        let mut out = DVector::zeros(k + 1);
        for n in 0..k {
            out[n] = self.amplitudes[n + 1] * ((n + 1) as f64).sqrt();
        }
        Self {
            amplitudes: out,
            truncation_loss: self.truncation_loss,
        }
    }

    /// `a†|ψ⟩`, not renormalized. The amplitude pushed beyond the cutoff is
    /// dropped and its relative weight added to the truncation loss.
    pub fn create(&self, tail_tolerance: f64) -> Result<Self> {
        let k = self.cutoff();
        let mut out = DVector::zeros(k + 1);
        for n in 0..k {
            out[n + 1] = self.amplitudes[n] * ((n + 1) as f64).sqrt();
        }
        let dropped = self.amplitudes[k].norm_sqr() * (k + 1) as f64;
        let total = out.iter().map(|c| c.norm_sqr()).sum::<f64>() + dropped;
        let loss = if total > 0.0 { dropped / total } else { 0.0 };
        if loss > tail_tolerance {
            return Err(Error::TruncationOverflow {
                dropped: loss,
                tolerance: tail_tolerance,
            });
        }
        Ok(Self {
            amplitudes: out,
            truncation_loss: self.truncation_loss + loss,
        })
    }

    /// Mean photon number of the normalized state.
    pub fn mean_photon_number(&self) -> f64 {
        let norm = self.norm_sqr();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum::<f64>()
            / norm
    }
}

/// Complex amplitudes over the truncated two-mode basis `|n_A, n_B⟩`,
/// stored as a square matrix with rows indexed by `n_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    amplitudes: DMatrix<Complex64>,
    truncation_loss: f64,
}

impl TwoModeState {
    pub fn new(amplitudes: DMatrix<Complex64>) -> Result<Self> {
        if amplitudes.nrows() != amplitudes.ncols() {
            return Err(Error::InvalidSpec(format!(
                "two-mode state needs a symmetric cutoff, got {}x{}",
                amplitudes.nrows(),
                amplitudes.ncols()
            )));
        }
        if amplitudes.nrows() < 2 {
            return Err(Error::InvalidSpec(
                "two-mode state needs cutoff >= 1".into(),
            ));
        }
        Ok(Self {
            amplitudes,
            truncation_loss: 0.0,
        })
    }

    pub(crate) fn from_matrix(amplitudes: DMatrix<Complex64>, truncation_loss: f64) -> Self {
        debug_assert_eq!(amplitudes.nrows(), amplitudes.ncols());
        Self {
            amplitudes,
            truncation_loss,
        }
    }

    pub fn zeros(cutoff: usize) -> Self {
        Self::from_matrix(DMatrix::zeros(cutoff + 1, cutoff + 1), 0.0)
    }

    /// Basis state `|n_a, n_b⟩`.
    pub fn basis(n_a: usize, n_b: usize, cutoff: usize) -> Result<Self> {
        if n_a > cutoff || n_b > cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff,
                amplitude_sq: n_a.max(n_b) as f64,
                limit: cutoff as f64,
            });
        }
        let mut s = Self::zeros(cutoff);
        s.amplitudes[(n_a, n_b)] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::basis(0, 0, cutoff).expect("vacuum always fits")
    }

    /// Builds a state from a list of `(n_a, n_b, amplitude)` terms.
    pub fn from_terms(cutoff: usize, terms: &[(usize, usize, Complex64)]) -> Result<Self> {
        let mut s = Self::zeros(cutoff);
        for &(na, nb, c) in terms {
            if na > cutoff || nb > cutoff {
                return Err(Error::CutoffTooSmall {
                    cutoff,
                    amplitude_sq: na.max(nb) as f64,
                    limit: cutoff as f64,
                });
            }
            s.amplitudes[(na, nb)] += c;
        }
        Ok(s)
    }

    /// `|a⟩ ⊗ |b⟩`.
    pub fn product(a: &SingleModeState, b: &SingleModeState) -> Result<Self> {
        if a.cutoff() != b.cutoff() {
            return Err(Error::InvalidSpec(format!(
                "product of states with different cutoffs {} and {}",
                a.cutoff(),
                b.cutoff()
            )));
        }
        let amps = a.amplitudes() * b.amplitudes().transpose();
        Ok(Self::from_matrix(
            amps,
            a.truncation_loss() + b.truncation_loss(),
        ))
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.nrows() - 1
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.amplitudes[(n_a, n_b)]
    }

    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub(crate) fn add_truncation_loss(&mut self, loss: f64) {
        self.truncation_loss += loss;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm.is_nan() || norm < DEGENERATE_NORM {
            return Err(Error::DegenerateState(format!(
                "cannot normalize two-mode vector of norm {norm:.3e}"
            )));
        }
        Ok(Self::from_matrix(
            &self.amplitudes / Complex64::new(norm, 0.0),
            self.truncation_loss,
        ))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    /// `|⟨self|other⟩|²` for normalized states.
    pub fn fidelity_with(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_matrix(&self.amplitudes * factor, self.truncation_loss)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.cutoff() != other.cutoff() {
            return Err(Error::InvalidSpec(
                "adding states with different cutoffs".into(),
            ));
        }
        Ok(Self::from_matrix(
            &self.amplitudes + &other.amplitudes,
            self.truncation_loss + other.truncation_loss,
        ))
    }

    /// Zero-padded (or truncated) copy with a new cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let mut amps = DMatrix::zeros(cutoff + 1, cutoff + 1);
        let keep = (cutoff + 1).min(self.amplitudes.nrows());
        amps.view_mut((0, 0), (keep, keep))
            .copy_from(&self.amplitudes.view((0, 0), (keep, keep)));
        Self::from_matrix(amps, self.truncation_loss)
    }

    /// Largest elementwise deviation after removing the global phase that
    /// maximizes the overlap.
    pub fn phase_aligned_distance(&self, other: &Self) -> f64 {
        let ov = self.inner(other);
        let phase = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| (x * phase - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Weight of the outermost retained shell (`n_A = cutoff` or `n_B = cutoff`).
    pub fn tail_mass(&self) -> f64 {
        let k = self.cutoff();
        let norm = self.norm_sqr();
        if norm == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0;
        for j in 0..=k {
            edge += self.amplitudes[(k, j)].norm_sqr();
            if j != k {
                edge += self.amplitudes[(j, k)].norm_sqr();
            }
        }
        edge / norm
    }
}
