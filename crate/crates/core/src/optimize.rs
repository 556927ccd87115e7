//! One-dimensional phase optimization and bracketed root finding.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Scan resolution for [`optimize_phase`].
pub const PHASE_SCAN_STEP: f64 = PI / 360.0;

/// Golden-section stopping width on the phase.
pub const PHASE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseOptimum {
    /// Optimal phase in `[0, π)`.
    pub phase: f64,
    pub value: f64,
    /// The scan saw no variation; `phase` is arbitrary.
    pub flat: bool,
}

/// Optimizes a metric of period `π` in the phase (all metrics here depend on
/// `φ` through `cos 2φ` or `cos² φ`): grid scan on `[0, π)` followed by
/// golden-section refinement around the best grid point.
pub fn optimize_phase<F>(metric: F, goal: Goal) -> PhaseOptimum
where
    F: Fn(f64) -> f64,
{
    optimize_phase_with(metric, goal, 360)
}

pub fn optimize_phase_with<F>(metric: F, goal: Goal, scan_points: usize) -> PhaseOptimum
where
    F: Fn(f64) -> f64,
{
    let scan_points = scan_points.max(3);
    let step = PI / scan_points as f64;
    let sign = match goal {
        Goal::Minimize => 1.0,
        Goal::Maximize => -1.0,
    };
    let objective = |phi: f64| sign * metric(phi);

    let mut best_idx = 0;
    let mut best = f64::INFINITY;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..scan_points {
        let v = objective(i as f64 * step);
        if v < best {
            best = v;
            best_idx = i;
        }
        worst = worst.max(v);
    }
    if worst - best <= 1e-14 * best.abs().max(1.0) {
        return PhaseOptimum {
            phase: 0.0,
            value: sign * best,
            flat: true,
        };
    }

    let centre = best_idx as f64 * step;
    let (phase, value) = golden_section(objective, centre - step, centre + step, PHASE_TOLERANCE);
    let (phase, value) = if value <= best {
        (phase, value)
    } else {
        (centre, best)
    };
    let mut phase = phase.rem_euclid(PI);
    if PI - phase < PHASE_TOLERANCE {
        phase = 0.0;
    }
    PhaseOptimum {
        phase,
        value: sign * value,
        flat: false,
    }
}

/// Minimum of a unimodal function on `[lo, hi]`.
pub fn golden_section<F>(f: F, mut lo: f64, mut hi: f64, tolerance: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tolerance {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    /// `|f(x)|` at the returned point.
    pub residual: f64,
    /// Final bracket width.
    pub width: f64,
    pub iterations: usize,
}

/// Bisection to a bracket width of `tolerance`.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tolerance: f64) -> Result<Root>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: 0.0,
            width: 0.0,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: 0.0,
            width: 0.0,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::BracketFailure { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(Root {
                x: mid,
                residual: 0.0,
                width: hi - lo,
                iterations,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok(Root {
        x,
        residual: f(x)?.abs(),
        width: hi - lo,
        iterations,
    })
}
