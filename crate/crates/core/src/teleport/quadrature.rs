//! Gauss–Hermite rules and the tensor-product integral over the complex plane.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Nodes per axis used by default.
pub const DEFAULT_NODES: usize = 80;

/// Largest change of an integral under node doubling that is accepted.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

/// Nodes whose weight product falls below this are skipped; their total weight
/// bounds the omitted contribution of an integrand bounded by 1.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-17;

/// Total skipped weight tolerated before an integral is refused.
pub const TAIL_WEIGHT_LIMIT: f64 = 1e-12;

/// One-dimensional Gauss–Hermite rule for `∫ e^{−x²} f(x) dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Accuracy the rule is meant to deliver under node doubling.
    pub target: f64,
}

impl QuadratureRule {
    pub fn gauss_hermite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec(
                "quadrature needs at least one node".into(),
            ));
        }
        let (nodes, weights) = gauss_hermite(n);
        Ok(Self {
            nodes,
            weights,
            target: QUADRATURE_TOLERANCE,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The rule with twice as many nodes.
    pub fn doubled(&self) -> Result<Self> {
        let mut r = Self::gauss_hermite(2 * self.len())?;
        r.target = self.target;
        Ok(r)
    }
}

/// Nodes (ascending) and weights by Newton iteration on the orthonormal
/// Hermite recurrence.
fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    const EPS: f64 = 1e-15;
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let m = n.div_ceil(2);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= EPS * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}

/// `(1/π) ∫ d²λ e^{−|λ|²} f(λ)` with `λ = x + iy`, as a tensor-product rule.
///
/// Rows are summed in parallel and combined in index order, so the result
/// does not depend on the thread count.
pub fn integrate_plane<F>(rule: &QuadratureRule, f: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let inv_pi = 1.0 / std::f64::consts::PI;
    let rows: Vec<Result<(Complex64, f64)>> = (0..rule.len())
        .into_par_iter()
        .map(|i| {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut skipped = 0.0;
            for j in 0..rule.len() {
                let weight = rule.weights[i] * rule.weights[j] * inv_pi;
                if weight < NEGLIGIBLE_WEIGHT {
                    skipped += weight;
                    continue;
                }
                sum += f(Complex64::new(rule.nodes[i], rule.nodes[j]))? * weight;
            }
            Ok((sum, skipped))
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut skipped = 0.0;
    for row in rows {
        let (s, k) = row?;
        total += s;
        skipped += k;
    }
    if skipped > TAIL_WEIGHT_LIMIT {
        return Err(Error::NumericalInstability(format!(
            "quadrature skipped weight {skipped:.3e}"
        )));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn moments_of_the_weight() {
        for n in [5, 20, 80, 160] {
            let r = QuadratureRule::gauss_hermite(n).unwrap();
            let m0: f64 = r.weights.iter().sum();
            let m2: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x * x).sum();
            let m4: f64 = r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(x, w)| w * x.powi(4))
                .sum();
            assert!((m0 - PI.sqrt()).abs() < 1e-13, "{n}");
            assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-13, "{n}");
            assert!((m4 - 3.0 * PI.sqrt() / 4.0).abs() < 1e-12, "{n}");
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let r = QuadratureRule::gauss_hermite(11).unwrap();
        assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
        assert!(r.nodes[5].abs() < 1e-15);
        for i in 0..11 {
            assert!((r.nodes[i] + r.nodes[10 - i]).abs() < 1e-13);
        }
    }

    #[test]
    fn known_two_point_rule() {
        let r = QuadratureRule::gauss_hermite(2).unwrap();
        assert!((r.nodes[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((r.weights[0] - PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn plane_gaussian_integral() {
        // (1/π) ∫ e^{−2|λ|²} d²λ = 1/2
        let r = QuadratureRule::gauss_hermite(40).unwrap();
        let v = integrate_plane(&r, |l| Ok(Complex64::new((-l.norm_sqr()).exp(), 0.0))).unwrap();
        assert!((v.re - 0.5).abs() < 1e-14);
    }
}
