//! Gauss rules for the symmetric Jacobi weight `(1 - t²)^a` on `[-1, 1]`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::gamma;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

// Monic recurrence coefficient β_k of the weight (1 - t²)^a.
fn beta(k: usize, a: f64) -> f64 {
    let k = k as f64;
    k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0))
}

/// Total mass `∫_{-1}^{1} (1 - t²)^a dt`.
pub fn jacobi_mass(a: f64) -> f64 {
    core::f64::consts::PI.sqrt() * gamma(a + 1.0) / gamma(a + 1.5)
}

/// `q`-point Gauss rule for `(1 - t²)^a`, exact for polynomials of degree `2q - 1`.
///
/// Golub–Welsch for the initial nodes, then Newton polishing and Christoffel weights.
pub fn gauss_gegenbauer(q: usize, a: f64) -> GaussRule {
    assert!(q >= 1 && a > -1.0);
    let mass = jacobi_mass(a);
    if q == 1 {
        return GaussRule { nodes: alloc::vec![0.0], weights: alloc::vec![mass] };
    }
    let betas: Vec<f64> = (1..=q).map(|k| beta(k, a)).collect();
    let mut jacobi = DMatrix::<f64>::zeros(q, q);
    for k in 1..q {
        let b = betas[k - 1].sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    for t in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = monic_with_derivative(q, *t, &betas);
            if dp != 0.0 {
                *t -= p / dp;
            }
        }
    }
    let mut weights: Vec<f64> = nodes.iter().map(|&t| christoffel(q, t, &betas, mass)).collect();

    // Exact reflection symmetry t -> -t.
    for i in 0..q / 2 {
        let j = q - 1 - i;
        let t = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -t;
        nodes[j] = t;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    // Weights sum to the exact mass up to rounding; pin it.
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w *= mass / total);
    GaussRule { nodes, weights }
}

fn monic_with_derivative(q: usize, t: f64, betas: &[f64]) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..q {
        let b = if k == 0 { 0.0 } else { betas[k - 1] };
        let p_next = t * p - b * p_prev;
        let d_next = p + t * d - b * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

fn christoffel(q: usize, t: f64, betas: &[f64], mass: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0 / mass.sqrt();
    let mut sum = cur * cur;
    for k in 0..q - 1 {
        let b_k = if k == 0 { 0.0 } else { betas[k - 1].sqrt() };
        let next = (t * cur - b_k * prev) / betas[k].sqrt();
        prev = cur;
        cur = next;
        sum += cur * cur;
    }
    1.0 / sum
}

/// Gauss–Legendre on `[0, 1]`.
pub fn gauss_legendre_unit(q: usize) -> GaussRule {
    let rule = gauss_gegenbauer(q, 0.0);
    GaussRule {
        nodes: rule.nodes.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        weights: rule.weights.iter().map(|w| 0.5 * w).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // ∫_{-1}^{1} t^{2j} (1-t²)^a dt = B(j + 1/2, a + 1).
    fn moment(j: usize, a: f64) -> f64 {
        let j = j as f64;
        gamma(j + 0.5) * gamma(a + 1.0) / gamma(j + a + 1.5)
    }

    #[test]
    fn legendre_known_nodes() {
        let r = gauss_gegenbauer(2, 0.0);
        assert_relative_eq!(r.nodes[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.weights[0], 1.0, max_relative = 1e-15);
        let r = gauss_gegenbauer(3, 0.0);
        assert_relative_eq!(r.nodes[2], (0.6f64).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.weights[1], 8.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn exact_for_weighted_polynomials() {
        for &a in &[0.0, 0.5, 1.0, 1.5, 2.0, 3.5] {
            for q in [2usize, 4, 7, 12, 40] {
                let r = gauss_gegenbauer(q, a);
                for j in 0..q {
                    let quad: f64 = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * t.powi(2 * j as i32)).sum();
                    assert_relative_eq!(quad, moment(j, a), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn unit_interval_rule() {
        let r = gauss_legendre_unit(5);
        let quad: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(9)).sum();
        assert_relative_eq!(quad, 0.1, max_relative = 1e-14);
    }
}
