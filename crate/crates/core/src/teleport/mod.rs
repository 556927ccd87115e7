//! Continuous-variable teleportation of coherent states.

pub mod charfn;
pub mod fidelity;
pub mod quadrature;
pub mod thresholds;

pub use charfn::{CharFn, CharFnKind};
pub use fidelity::{
    fidelity_bk, fidelity_bk_raw, fidelity_bk_with_input, fidelity_epr_form,
    fidelity_epr_form_for_spec, fidelity_for_spec, fidelity_optimized, fidelity_psi1_closed,
    FidelityMethod, FidelityResult, CLASSICAL_LIMIT,
};
pub use quadrature::{integrate_plane, QuadratureRule, DEFAULT_NODES, QUADRATURE_TOLERANCE};
pub use thresholds::{
    find_thresholds, threshold_objective, threshold_scan, Route, Threshold, ThresholdKind,
};
