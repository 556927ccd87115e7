//! Gaussian filter `⟨exp(−2(Q − ⟨Q⟩)²)⟩` of a quadrature, evaluated through
//! the spectral decomposition of the truncated quadrature matrix.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::state::{Mode, SingleModeState, TwoModeState};
use crate::error::{Error, Result};
use crate::CONVERGENCE_TOLERANCE;

/// Quadratures `x = (a + a†)/2` and `p = −i(a − a†)/2`; vacuum variance 1/4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    P,
}

pub fn quadrature_matrix(quadrature: Quadrature, dim: usize) -> DMatrix<Complex64> {
    let mut q = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for n in 0..dim.saturating_sub(1) {
        let s = ((n + 1) as f64).sqrt() / 2.0;
        match quadrature {
            Quadrature::X => {
                q[(n, n + 1)] = Complex64::new(s, 0.0);
                q[(n + 1, n)] = Complex64::new(s, 0.0);
            }
            Quadrature::P => {
                q[(n, n + 1)] = Complex64::new(0.0, -s);
                q[(n + 1, n)] = Complex64::new(0.0, s);
            }
        }
    }
    q
}

struct Spectrum {
    operator: DMatrix<Complex64>,
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

type SpectrumCache = Mutex<HashMap<(Quadrature, usize), Arc<Spectrum>>>;

fn spectrum(quadrature: Quadrature, dim: usize) -> Arc<Spectrum> {
    static CACHE: OnceLock<SpectrumCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&(quadrature, dim)) {
        return Arc::clone(s);
    }
    let operator = quadrature_matrix(quadrature, dim);
    let eig = SymmetricEigen::new(operator.clone());
    let s = Arc::new(Spectrum {
        operator,
        values: eig.eigenvalues.iter().copied().collect(),
        vectors: eig.eigenvectors,
    });
    cache
        .lock()
        .unwrap()
        .insert((quadrature, dim), Arc::clone(&s));
    s
}

fn filter_at_dimension(rho: &DMatrix<Complex64>, quadrature: Quadrature) -> f64 {
    let sp = spectrum(quadrature, rho.nrows());
    let mean = (rho * &sp.operator).trace().re;
    let rotated = sp.vectors.adjoint() * rho * &sp.vectors;
    sp.values
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let d = q - mean;
            rotated[(i, i)].re * (-2.0 * d * d).exp()
        })
        .sum()
}

/// A value together with the shift observed when the truncation is doubled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefinedValue {
    pub value: f64,
    pub refinement_shift: f64,
}

/// `⟨exp(−2(Q − ⟨Q⟩)²)⟩` for a single-mode density matrix, checked against
/// the same quantity with the quadrature matrix of twice the dimension.
pub fn gaussian_filter_expectation(
    rho: &DMatrix<Complex64>,
    quadrature: Quadrature,
    tolerance: f64,
) -> Result<RefinedValue> {
    let dim = rho.nrows();
    let coarse = filter_at_dimension(rho, quadrature);
    let mut padded = DMatrix::from_element(2 * dim, 2 * dim, Complex64::new(0.0, 0.0));
    padded.view_mut((0, 0), (dim, dim)).copy_from(rho);
    let fine = filter_at_dimension(&padded, quadrature);
    let shift = (fine - coarse).abs();
    if shift > tolerance {
        return Err(Error::ConvergenceFailure { shift, tolerance });
    }
    Ok(RefinedValue {
        value: fine,
        refinement_shift: shift,
    })
}

impl SingleModeState {
    /// `⟨ψ|exp(−2(Q − ⟨Q⟩)²)|ψ⟩` for a normalized state.
    pub fn gaussian_filter(&self, quadrature: Quadrature, tolerance: f64) -> Result<RefinedValue> {
        let v = self.amplitudes();
        let rho = v * v.adjoint();
        gaussian_filter_expectation(&rho, quadrature, tolerance)
    }
}

/// `⟨exp(−2(Q − ⟨Q⟩)²)⟩` of one mode of a normalized two-mode state, with the
/// default refinement tolerance.
pub fn hermitian_function_expectation(
    state: &TwoModeState,
    quadrature: Quadrature,
    mode: Mode,
) -> Result<f64> {
    hermitian_function_expectation_with_tolerance(state, quadrature, mode, CONVERGENCE_TOLERANCE)
        .map(|r| r.value)
}

pub fn hermitian_function_expectation_with_tolerance(
    state: &TwoModeState,
    quadrature: Quadrature,
    mode: Mode,
    tolerance: f64,
) -> Result<RefinedValue> {
    let rho = state.partial_trace(mode);
    gaussian_filter_expectation(rho.entries(), quadrature, tolerance)
}
