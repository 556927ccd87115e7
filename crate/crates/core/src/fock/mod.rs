//! Truncated Fock-space states and operators.

mod density;
mod filter;
mod moments;
mod ops;
mod state;

pub use density::DensityMatrix;
pub use filter::{
    gaussian_filter_expectation, hermitian_function_expectation,
    hermitian_function_expectation_with_tolerance, quadrature_matrix, Quadrature, RefinedValue,
};
pub use moments::MomentSet;
pub(crate) use ops::check_displacement;
pub use ops::{coherent_amplitudes, displacement_limit, displacement_matrix};
pub use state::{Mode, SingleModeState, TwoModeState, DEGENERATE_NORM};
