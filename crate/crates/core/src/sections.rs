//! Measures, volumes and section measures through polar coordinates.
//!
//! `μ(K) = ∫_{S^{n-1}} ∫_0^{ρ_K(θ)} r^{n-1} f(rθ) dr dθ`, and for a `d`-dimensional subspace `H`
//! `μ(K∩H) = ∫_{S^{n-1}∩H} ∫_0^{ρ_K(θ)} r^{d-1} f(rθ) dr dθ`, i.e. the spherical Radon transform
//! of the inner radial integral.

use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::body::StarBody;
use crate::density::Density;
use crate::error::{check_dim, Error, Result};
use crate::grassmann::Subspace;
use crate::quadrature::{check_frame, sphere_rule_for, subsphere_rule, QuadratureSpec, RadialRule, SphericalRule, Symmetry};

/// Value of an integral with a doubling-based error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    /// `|value(refined spec) - value(spec)|`.
    pub est_error: f64,
    /// Sphere nodes used at the base spec.
    pub nodes_used: usize,
}

impl IntegralResult {
    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.est_error
        } else {
            self.est_error / self.value.abs()
        }
    }
}

/// What is integrated along each ray of a (sub)sphere rule.
#[derive(Debug, Clone, Copy)]
pub enum Integrand<'a> {
    /// `ρ^d / d`.
    Volume,
    /// `∫_0^ρ r^{d-1} f(rθ) dr`.
    Measure(&'a Density),
    /// `∫_0^ρ r^{d-1} (f(rθ) - 1) dr`, the stability gap.
    Excess(&'a Density),
}

impl<'a> Integrand<'a> {
    pub fn density(&self) -> Option<&'a Density> {
        match self {
            Integrand::Volume => None,
            Integrand::Measure(f) | Integrand::Excess(f) => Some(f),
        }
    }

    #[inline]
    pub(crate) fn along(&self, body: &StarBody, theta: &[f64], d: u32, radial: &RadialRule) -> f64 {
        let rho = 1.0 / body.gauge(theta);
        let vol = rho.powi(d as i32) / d as f64;
        match self {
            Integrand::Volume => vol,
            Integrand::Measure(f) => f.ray_integral(theta, rho, d - 1, radial),
            Integrand::Excess(f) => f.ray_integral(theta, rho, d - 1, radial) - vol,
        }
    }
}

/// Integrates along a rule whose nodes live in the body's space but span a `d`-dimensional sphere.
pub fn integrate_rays(body: &StarBody, integrand: Integrand<'_>, rule: &SphericalRule, d: usize, radial: &RadialRule) -> f64 {
    rule.integrate(|theta| integrand.along(body, theta, d as u32, radial))
}

fn finite(value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Unbounded)
    }
}

const MAX_REFINEMENTS: usize = 6;
/// Extra doublings spent when the estimate misses `rel_tol`.
const MAX_ADAPT: usize = 4;

/// Runs `compute` at `spec` and at the first refinement of it that uses more nodes. While the
/// difference exceeds `rel_tol` (relative), the finer value is promoted and refined again, up to
/// `MAX_ADAPT` times.
pub fn with_doubling(spec: &QuadratureSpec, mut compute: impl FnMut(&QuadratureSpec) -> Result<(f64, usize)>) -> Result<IntegralResult> {
    let mut current = compute(spec)?;
    let mut finer = *spec;
    let mut adapt = 0;
    loop {
        finer = finer.refined();
        let mut fine = compute(&finer)?;
        for _ in 1..MAX_REFINEMENTS {
            if fine.1 > current.1 {
                break;
            }
            finer = QuadratureSpec { sphere_nodes: 2 * finer.sphere_nodes, ..finer };
            fine = compute(&finer)?;
        }
        let (value, fine_value) = (finite(current.0)?, finite(fine.0)?);
        let est_error = (fine_value - value).abs();
        if est_error <= spec.rel_tol * value.abs() || adapt == MAX_ADAPT || fine.1 <= current.1 {
            return Ok(IntegralResult { value, est_error, nodes_used: current.1 });
        }
        adapt += 1;
        current = fine;
    }
}

/// The symmetry a full-sphere rule may exploit for `body` and an optional density.
pub fn symmetry_of(body: &StarBody, density: Option<&Density>) -> Symmetry {
    if body.is_axis_aligned_box() {
        Symmetry::Box
    } else if body.is_unconditional() && density.is_none_or(Density::is_unconditional) {
        Symmetry::Reflections
    } else {
        Symmetry::General
    }
}

fn check_density(body: &StarBody, density: &Density) -> Result<()> {
    check_dim(body.dim(), density.dim())
}

/// Symmetry of the integrand in the coordinates of [`adapted_rule`]: for ellipsoids these are the
/// coordinates `ψ` with `x ∝ Tψ`, where radial densities become functions of `ψᵀ Σ^{-1} ψ`.
pub fn base_symmetry(body: &StarBody, density: Option<&Density>, full_sphere: bool) -> Symmetry {
    if body.ellipsoid_form().is_some() {
        if density.is_none_or(Density::is_radial) {
            Symmetry::Reflections
        } else {
            Symmetry::General
        }
    } else if full_sphere {
        symmetry_of(body, density)
    } else {
        Symmetry::General
    }
}

/// Places a rule on `S^{d-1}` onto `S^{n-1} ∩ span(frame)` (the whole sphere when `frame` is `None`).
///
/// For ellipsoids the nodes are moved by `ψ -> Tψ/|Tψ|`, where `T = P Σ^{-1/2}` and `P Σ Pᵀ` is the
/// quadratic form restricted to the subspace; the weights pick up the Jacobian `|det T| |Tψ|^{-d}`.
/// This is a change of variables, so it is valid for every integrand, and it makes ellipsoid volumes exact.
pub fn adapted_rule(body: &StarBody, base: SphericalRule, frame: Option<&DMatrix<f64>>) -> SphericalRule {
    let Some(a) = body.ellipsoid_form() else {
        return match frame {
            Some(f) => base.mapped(f),
            None => base,
        };
    };
    let m = match frame {
        Some(f) => f.transpose() * &a * f,
        None => a,
    };
    let d = m.nrows();
    let eig = m.symmetric_eigen();
    let inv_sqrt = eig.eigenvalues.map(|v| 1.0 / v.sqrt());
    let det: f64 = inv_sqrt.iter().product();
    let t = &eig.eigenvectors * DMatrix::from_diagonal(&inv_sqrt);
    let mut y = t * &base.nodes;
    let mut weights = Vec::with_capacity(base.weights.len());
    for (mut col, w) in y.column_iter_mut().zip(&base.weights) {
        let r = col.norm();
        col /= r;
        weights.push(w * det / r.powi(d as i32));
    }
    let nodes = match frame {
        Some(f) => f * y,
        None => y,
    };
    SphericalRule { nodes, weights }
}

/// Integral over the full sphere `S^{n-1}` of a ray functional `g(θ, ρ_K(θ), radial rule)`. `g` may depend on
/// `θ` only through `ρ_K` and `density`.
pub fn polar_integral(
    body: &StarBody,
    density: Option<&Density>,
    spec: &QuadratureSpec,
    mut g: impl FnMut(&[f64], f64, &RadialRule) -> f64,
) -> Result<IntegralResult> {
    let symmetry = base_symmetry(body, density, true);
    with_doubling(spec, |s| {
        let rule = adapted_rule(body, sphere_rule_for(body.dim(), s, symmetry)?, None);
        let radial = s.radial_rule();
        let v = rule.integrate(|theta| g(theta, 1.0 / body.gauge(theta), &radial));
        Ok((v, rule.len()))
    })
}

fn full(body: &StarBody, integrand: Integrand<'_>, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let n = body.dim();
    let symmetry = base_symmetry(body, integrand.density(), true);
    with_doubling(spec, |s| {
        let rule = adapted_rule(body, sphere_rule_for(n, s, symmetry)?, None);
        Ok((integrate_rays(body, integrand, &rule, n, &s.radial_rule()), rule.len()))
    })
}

fn section(body: &StarBody, integrand: Integrand<'_>, h: &Subspace, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dim(body.dim(), h.ambient_dim())?;
    check_frame(h)?;
    let d = h.sub_dim();
    let symmetry = base_symmetry(body, integrand.density(), false);
    with_doubling(spec, |s| {
        let rule = adapted_rule(body, sphere_rule_for(d, s, symmetry)?, Some(h.frame()));
        Ok((integrate_rays(body, integrand, &rule, d, &s.radial_rule()), rule.len()))
    })
}

/// `μ(K) = ∫_K f`.
pub fn body_measure(body: &StarBody, density: &Density, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_density(body, density)?;
    full(body, Integrand::Measure(density), spec)
}

/// `|K| = (1/n) ∫ ‖θ‖_K^{-n} dθ`.
pub fn body_volume(body: &StarBody, spec: &QuadratureSpec) -> Result<IntegralResult> {
    full(body, Integrand::Volume, spec)
}

/// `μ(K ∩ H)`.
pub fn section_measure(body: &StarBody, density: &Density, h: &Subspace, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_density(body, density)?;
    section(body, Integrand::Measure(density), h, spec)
}

/// `|K ∩ H| = (1/d) R(‖·‖_K^{-d})(H)` with `d = dim H`.
pub fn section_volume(body: &StarBody, h: &Subspace, spec: &QuadratureSpec) -> Result<IntegralResult> {
    section(body, Integrand::Volume, h, spec)
}

/// `μ(K ∩ H) - |K ∩ H|` evaluated on one node set.
pub fn section_excess(body: &StarBody, density: &Density, h: &Subspace, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_density(body, density)?;
    section(body, Integrand::Excess(density), h, spec)
}

/// Spherical Radon transform `R g(H) = ∫_{S^{n-1} ∩ H} g`.
pub fn radon_transform(g: impl FnMut(&[f64]) -> f64, h: &Subspace, spec: &QuadratureSpec) -> Result<f64> {
    Ok(subsphere_rule(h, spec)?.integrate(g))
}

/// Complex spherical Radon transform `R_c g(ξ) = ∫_{S^{2n-1} ∩ H_ξ} g`.
pub fn complex_radon(g: impl FnMut(&[f64]) -> f64, xi: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    let h = crate::complex::complex_hyperplane_frame(xi)?;
    radon_transform(g, &h, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{ball_volume, sphere_measure};
    use crate::grassmann::haar_sample;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;
    use std::vec;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn volumes() {
        let s = spec();
        let ball = StarBody::euclidean_ball(5).unwrap();
        assert_relative_eq!(body_volume(&ball, &s).unwrap().value, ball_volume(5).unwrap(), max_relative = 1e-12);
        let ell = StarBody::ellipsoid_diag(&[1.0, 4.0]).unwrap();
        assert_relative_eq!(body_volume(&ell, &s).unwrap().value, PI / 2.0, max_relative = 1e-10);
        let cube = StarBody::cube(3).unwrap();
        assert_relative_eq!(body_volume(&cube, &s).unwrap().value, 8.0, max_relative = 1e-12);
        let l1 = StarBody::lp_ball(3, 1.0).unwrap();
        assert_relative_eq!(body_volume(&l1, &s).unwrap().value, 4.0 / 3.0, max_relative = 1e-3);
    }

    #[test]
    fn measures() {
        let s = spec();
        let ball = StarBody::euclidean_ball(3).unwrap();
        let one = Density::constant(3, 1.0).unwrap();
        assert_relative_eq!(body_measure(&ball, &one, &s).unwrap().value, 4.0 * PI / 3.0, max_relative = 1e-12);
        let cube = StarBody::cube(3).unwrap();
        assert_relative_eq!(body_measure(&cube, &one, &s).unwrap().value, 8.0, max_relative = 1e-12);
        // ∫_{B^3} (1 + |x|²) = 4π/3 + 4π/5.
        let p = Density::radial_polynomial(3, vec![1.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(body_measure(&ball, &p, &s).unwrap().value, 4.0 * PI / 3.0 + 4.0 * PI / 5.0, max_relative = 1e-12);
        assert!(body_measure(&ball, &Density::constant(2, 1.0).unwrap(), &s).is_err());
    }

    #[test]
    fn unit_density_matches_volume_exactly() {
        let s = spec();
        let one4 = Density::constant(4, 1.0).unwrap();
        for body in [StarBody::lp_ball(4, 1.0).unwrap(), StarBody::cube(4).unwrap(), StarBody::complex_lp_ball(2, 4.0).unwrap()] {
            let m = body_measure(&body, &one4, &s).unwrap().value;
            let v = body_volume(&body, &s).unwrap().value;
            assert_relative_eq!(m, v, max_relative = 1e-12);
            let h = haar_sample(4, 1, 3).unwrap();
            let sm = section_measure(&body, &one4, &h, &s).unwrap().value;
            let sv = section_volume(&body, &h, &s).unwrap().value;
            assert_relative_eq!(sm, sv, max_relative = 1e-12);
        }
    }

    #[test]
    fn section_examples() {
        let s = spec();
        let ball = StarBody::euclidean_ball(4).unwrap();
        let one = Density::constant(4, 1.0).unwrap();
        let h = haar_sample(4, 1, 1).unwrap();
        assert_relative_eq!(section_measure(&ball, &one, &h, &s).unwrap().value, ball_volume(3).unwrap(), max_relative = 1e-12);
        let line = haar_sample(4, 3, 2).unwrap();
        assert_relative_eq!(section_measure(&ball, &one, &line, &s).unwrap().value, 2.0, max_relative = 1e-14);
        let ball5 = StarBody::euclidean_ball(5).unwrap();
        let h3 = haar_sample(5, 2, 4).unwrap();
        assert_relative_eq!(section_volume(&ball5, &h3, &s).unwrap().value, ball_volume(3).unwrap(), max_relative = 1e-12);
        let cube = StarBody::cube(3).unwrap();
        let plane = Subspace::coordinate(3, &[0, 1]).unwrap();
        assert_relative_eq!(section_volume(&cube, &plane, &s).unwrap().value, 4.0, max_relative = 1e-5);
        // The plane with normal (1,1,0)/√2 cuts a 2 × 2√2 rectangle.
        let diag = Subspace::hyperplane(&[1.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(section_volume(&cube, &diag, &s).unwrap().value, 4.0 * 2f64.sqrt(), max_relative = 1e-5);
    }

    #[test]
    fn radon_examples() {
        let s = spec();
        for (n, k) in [(3, 1), (4, 2), (5, 1), (6, 3)] {
            let h = haar_sample(n, k, 8).unwrap();
            assert_relative_eq!(radon_transform(|_| 1.0, &h, &s).unwrap(), sphere_measure(n - k).unwrap(), max_relative = 1e-12);
        }
        let xy = Subspace::coordinate(3, &[0, 1]).unwrap();
        assert_relative_eq!(radon_transform(|x| x[0] * x[0], &xy, &s).unwrap(), PI, max_relative = 1e-12);
        let h = haar_sample(5, 2, 1).unwrap();
        assert!(radon_transform(|x| x[0] * x[1] * x[2], &h, &s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn radon_is_linear() {
        let s = spec();
        let h = haar_sample(4, 1, 21).unwrap();
        let g = |x: &[f64]| x[0] * x[0] + 0.3 * x[1].abs();
        let k = |x: &[f64]| (x[2] - x[3]).powi(4);
        let lhs = radon_transform(|x| 2.0 * g(x) - 0.5 * k(x), &h, &s).unwrap();
        let rhs = 2.0 * radon_transform(g, &h, &s).unwrap() - 0.5 * radon_transform(k, &h, &s).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn complex_radon_examples() {
        let s = spec();
        for n in [2usize, 3] {
            let mut xi = vec![0.0; 2 * n];
            xi[0] = 0.6;
            xi[3] = 0.8;
            let c = complex_radon(|_| 1.0, &xi, &s).unwrap();
            assert_relative_eq!(c, sphere_measure(2 * n - 2).unwrap(), max_relative = 1e-12);
            let sq = complex_radon(|x| x.iter().map(|v| v * v).sum(), &xi, &s).unwrap();
            assert_relative_eq!(sq, sphere_measure(2 * n - 2).unwrap(), max_relative = 1e-12);
        }
        assert!(complex_radon(|_| 1.0, &[1.0, 0.0, 0.0], &s).is_err());
    }

    #[test]
    fn scaling_laws() {
        let s = spec();
        let body = StarBody::lp_ball(4, 4.0).unwrap();
        let h = haar_sample(4, 2, 5).unwrap();
        let v = body_volume(&body, &s).unwrap().value;
        let sv = section_volume(&body, &h, &s).unwrap().value;
        for t in [0.5, 2.0] {
            let scaled = StarBody::scaled(body.clone(), t).unwrap();
            assert_relative_eq!(body_volume(&scaled, &s).unwrap().value, t.powi(4) * v, max_relative = s.rel_tol);
            assert_relative_eq!(section_volume(&scaled, &h, &s).unwrap().value, t.powi(2) * sv, max_relative = s.rel_tol);
        }
    }

    #[test]
    fn doubling_estimate_is_reported() {
        let s = spec();
        let r = body_volume(&StarBody::lp_ball(4, 1.0).unwrap(), &s).unwrap();
        assert!(r.est_error >= 0.0 && r.est_error < 0.05 * r.value);
        assert!(r.nodes_used > 1000);
    }
}
