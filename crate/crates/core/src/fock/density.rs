use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::state::{Mode, TwoModeState};
use crate::error::{Error, Result};

const NEGLIGIBLE_ENTRY: f64 = 1e-30;

/// Reduced density matrix of one mode.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidSpec("density matrix must be square".into()));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|c| c.re).sum()
    }

    /// Largest `|ρ − ρ†|` entry.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dimension();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in descending order.
    ///
    /// Entries smaller than `1e-30` times the largest one are set to zero
    /// first; they shift the spectrum by far less than rounding, and left in
    /// place (they reach the subnormal range for weakly excited states) they
    /// can make the QR iteration diverge.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let scale = self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let floor = scale * NEGLIGIBLE_ENTRY;
        let mut m = self.entries.clone();
        for c in m.iter_mut() {
            if c.norm() < floor {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        let eig = SymmetricEigen::new(m);
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalInstability(
                "eigen-decomposition produced non-finite values".into(),
            ));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(values)
    }

    /// `Tr(ρ O)` for an operator on the same truncated space.
    pub fn expectation(&self, op: &DMatrix<Complex64>) -> Complex64 {
        (&self.entries * op).trace()
    }

    /// Checks the Hermiticity, unit trace and positivity invariants.
    pub fn validate(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::NumericalInstability(format!(
                "density matrix not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::NumericalInstability(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        if let Some(min) = self.eigenvalues()?.last() {
            if *min < -1e-10 {
                return Err(Error::NumericalInstability(format!(
                    "density matrix has negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }
}

impl TwoModeState {
    /// Reduced state of the kept mode. For `keep = A`,
    /// `ρ[m, n] = Σ_k ψ[m, k] ψ*[n, k]`.
    pub fn partial_trace(&self, keep: Mode) -> DensityMatrix {
        let psi = self.amplitudes();
        let entries = match keep {
            Mode::A => psi * psi.adjoint(),
            Mode::B => psi.transpose() * psi.conjugate(),
        };
        DensityMatrix { entries }
    }
}
