//! Crossing points in `|α|` for the photon-added coherent resource.

use std::fmt;

use crate::epr::{epr_numeric, epr_psi1_closed};
use crate::error::Result;
use crate::optimize::{bisect, Root};
use crate::resources::{build_resource_circuit, Family, ResourceSpec};

use super::fidelity::{fidelity_epr_form_for_spec, fidelity_psi1_closed, CLASSICAL_LIMIT};

/// Default bracket. The lower end stays off zero, where the `n+m = 0`
/// resource degenerates to `|0,0⟩`.
pub const DEFAULT_BRACKET: (f64, f64) = (1e-6, 2.5);

/// Default bisection width on `|α|`.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThresholdKind {
    /// `F(n+m=0) = 1/2`.
    FidelityClassical,
    /// `F(n+m=1) = F(n+m=0)`.
    FidelityCrossover,
    /// `EPR(n+m=1) = EPR(n+m=0)` at `φ = 0`.
    EprCrossover,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 3] = [
        ThresholdKind::FidelityClassical,
        ThresholdKind::FidelityCrossover,
        ThresholdKind::EprCrossover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ThresholdKind::FidelityClassical => "fidelity_classical_limit",
            ThresholdKind::FidelityCrossover => "fidelity_subtraction_crossover",
            ThresholdKind::EprCrossover => "epr_subtraction_crossover",
        }
    }
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the metrics inside the bisection are evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Route {
    /// Closed-form fidelity and total variance.
    ClosedForm,
    /// Fock-space states at the given cutoff: fidelity through the subtracted
    /// input mode, total variance from moments of the circuit-built resource.
    Numeric { cutoff: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub kind: ThresholdKind,
    pub alpha: f64,
    pub residual: f64,
    pub width: f64,
}

fn spec(alpha: f64, n_plus_m: usize, cutoff: usize) -> ResourceSpec {
    ResourceSpec::split(Family::PacsSplit, alpha, 0.0, n_plus_m).with_cutoff(cutoff)
}

fn fidelity(alpha: f64, n_plus_m: usize, route: Route) -> Result<f64> {
    match route {
        Route::ClosedForm => Ok(fidelity_psi1_closed(alpha, n_plus_m).fidelity),
        Route::Numeric { cutoff } => {
            Ok(fidelity_epr_form_for_spec(&spec(alpha, n_plus_m, cutoff))?.fidelity)
        }
    }
}

fn epr(alpha: f64, n_plus_m: usize, route: Route) -> Result<f64> {
    match route {
        Route::ClosedForm => Ok(epr_psi1_closed(alpha, 0.0, n_plus_m).total_variance),
        Route::Numeric { cutoff } => Ok(epr_numeric(&build_resource_circuit(&spec(
            alpha, n_plus_m, cutoff,
        ))?)?
        .total_variance),
    }
}

/// The function whose sign change defines the threshold.
pub fn threshold_objective(kind: ThresholdKind, alpha: f64, route: Route) -> Result<f64> {
    match kind {
        ThresholdKind::FidelityClassical => Ok(fidelity(alpha, 0, route)? - CLASSICAL_LIMIT),
        ThresholdKind::FidelityCrossover => {
            Ok(fidelity(alpha, 1, route)? - fidelity(alpha, 0, route)?)
        }
        ThresholdKind::EprCrossover => Ok(epr(alpha, 1, route)? - epr(alpha, 0, route)?),
    }
}

/// Bisection for one threshold on `bracket`.
pub fn threshold_scan(
    kind: ThresholdKind,
    route: Route,
    bracket: (f64, f64),
    tolerance: f64,
) -> Result<Threshold> {
    let Root {
        x, residual, width, ..
    } = bisect(
        |a| threshold_objective(kind, a, route),
        bracket.0,
        bracket.1,
        tolerance,
    )?;
    Ok(Threshold {
        kind,
        alpha: x,
        residual,
        width,
    })
}

/// All three thresholds on the default bracket.
pub fn find_thresholds(route: Route, tolerance: f64) -> Result<Vec<Threshold>> {
    ThresholdKind::ALL
        .iter()
        .map(|&k| threshold_scan(k, route, DEFAULT_BRACKET, tolerance))
        .collect()
}
