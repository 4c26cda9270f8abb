//! The complex structure of `R^{2n} = C^n`: coordinate pairs `(2j, 2j+1)` hold `Re z_j, Im z_j`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::StarBody;
use crate::density::Density;
use crate::error::{invalid, Error, Result};
use crate::grassmann::Subspace;
use crate::linalg;

/// Default number of θ nodes for [`rtheta_symmetrize`].
pub const THETA_NODES: usize = 64;
/// Upper bound for θ-node escalation.
pub const MAX_THETA_NODES: usize = 512;
/// Invariance tolerance used when a body must be `R_θ`-invariant.
pub const INVARIANCE_TOL: f64 = 1e-8;

/// `C^n` viewed as `R^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexStructure {
    pub n: usize,
}

impl ComplexStructure {
    /// Structure on `R^real_dim`; the dimension must be even.
    pub fn new(real_dim: usize) -> Result<Self> {
        if real_dim == 0 || real_dim % 2 != 0 {
            return Err(Error::OddDimension(real_dim));
        }
        Ok(Self { n: real_dim / 2 })
    }

    pub fn real_dim(&self) -> usize {
        2 * self.n
    }

    /// Real coordinates (0-based) of the complex coordinate `j`.
    pub fn pairing(&self, j: usize) -> (usize, usize) {
        (2 * j, 2 * j + 1)
    }
}

/// `out = R_θ x` given `cos θ`, `sin θ`.
#[inline]
pub(crate) fn rotate_into(c: f64, s: f64, x: &[f64], out: &mut [f64]) {
    for (o, p) in out.chunks_exact_mut(2).zip(x.chunks_exact(2)) {
        o[0] = c * p[0] - s * p[1];
        o[1] = s * p[0] + c * p[1];
    }
}

/// Coordinate-wise rotation `R_θ` of every pair.
pub fn rtheta_apply(theta: f64, x: &[f64]) -> Result<Vec<f64>> {
    ComplexStructure::new(x.len())?;
    let (s, c) = theta.sin_cos();
    let mut out = alloc::vec![0.0; x.len()];
    rotate_into(c, s, x, &mut out);
    Ok(out)
}

/// Result of a sampled invariance test.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub max_deviation: f64,
    /// `(θ, x)` attaining the deviation.
    pub witness: Option<(f64, Vec<f64>)>,
}

fn theta_grid(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |i| 2.0 * PI * i as f64 / m as f64)
}

fn sampled_invariance(dim: usize, theta_grid_size: usize, samples: usize, tol: f64, seed: u64, f: impl Fn(&[f64], usize) -> f64) -> Result<InvarianceReport> {
    ComplexStructure::new(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    let mut witness = None;
    let mut rotated = alloc::vec![0.0; dim];
    // Offset the grid so that it does not coincide with the symmetrization nodes.
    let offset = PI / (3.0 * theta_grid_size.max(1) as f64) + 0.123;
    for i in 0..samples {
        let x = linalg::random_unit(dim, &mut rng);
        let base = f(&x, i);
        for theta in theta_grid(theta_grid_size.max(1)).map(|t| t + offset) {
            let (s, c) = theta.sin_cos();
            rotate_into(c, s, &x, &mut rotated);
            let dev = (f(&rotated, i) - base).abs();
            if dev > worst {
                worst = dev;
                witness = Some((theta, x.clone()));
            }
        }
    }
    Ok(InvarianceReport { invariant: worst <= tol, max_deviation: worst, witness })
}

/// Samples unit `x` and `θ` and reports `max |‖R_θ x‖_K - ‖x‖_K|`.
pub fn is_rtheta_invariant(body: &StarBody, theta_grid_size: usize, sample_count: usize, tol: f64) -> Result<InvarianceReport> {
    sampled_invariance(body.dim(), theta_grid_size, sample_count, tol, 0x5eed, |x, _| body.gauge(x))
}

/// Same test for a density, at points of norm up to `radius`.
pub fn is_density_rtheta_invariant(density: &Density, radius: f64, sample_count: usize, tol: f64) -> Result<InvarianceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd5);
    let radii: Vec<f64> = (0..sample_count).map(|_| radius * rng.random::<f64>()).collect();
    sampled_invariance(density.dim(), 16, sample_count, tol, 0xd6, |x, i| {
        let y: Vec<f64> = x.iter().map(|v| v * radii[i]).collect();
        density.value(&y)
    })
}

pub(crate) fn require_rtheta_invariant(body: &StarBody) -> Result<()> {
    let rep = is_rtheta_invariant(body, 16, 256, INVARIANCE_TOL)?;
    if rep.invariant {
        Ok(())
    } else {
        Err(Error::NotRthetaInvariant(rep.max_deviation))
    }
}

pub(crate) fn require_density_invariant(density: &Density, radius: f64) -> Result<()> {
    let rep = is_density_rtheta_invariant(density, radius, 256, INVARIANCE_TOL)?;
    if rep.invariant {
        Ok(())
    } else {
        Err(Error::NotRthetaInvariant(rep.max_deviation))
    }
}

type Complex = (f64, f64);

fn cmul(a: Complex, b: Complex) -> Complex {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

// Hermitian product Σ a_k conj(b_k).
fn herm(a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).fold((0.0, 0.0), |acc, (x, y)| {
        let p = cmul(*x, (y.0, -y.1));
        (acc.0 + p.0, acc.1 + p.1)
    })
}

fn cproject_out(v: &mut [Complex], basis: &[Vec<Complex>]) {
    for _ in 0..2 {
        for b in basis {
            let c = herm(v, b);
            for (x, y) in v.iter_mut().zip(b) {
                let p = cmul(c, *y);
                x.0 -= p.0;
                x.1 -= p.1;
            }
        }
    }
}

fn cnorm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.0 * z.0 + z.1 * z.1).sum::<f64>().sqrt()
}

/// Orthonormal real frame of `H_ξ = {z : Σ z_k conj(ξ_k) = 0}`, the `(2n-2)`-dimensional subspace
/// orthogonal to `ξ` and `R_{π/2} ξ`.
///
/// Columns come in pairs `(v, R_{π/2} v)`. The construction commutes with `R_θ`: the frame of
/// `R_θ ξ` is `R_θ` applied to the frame of `ξ`.
pub fn complex_hyperplane_frame(xi: &[f64]) -> Result<Subspace> {
    let cs = ComplexStructure::new(xi.len())?;
    let n = cs.n;
    if n < 2 {
        return Err(invalid("complex hyperplanes need complex dimension >= 2"));
    }
    let r = linalg::norm(xi);
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid("complex hyperplane needs a nonzero direction"));
    }
    let z: Vec<Complex> = xi.chunks_exact(2).map(|p| (p[0] / r, p[1] / r)).collect();
    // Strip the phase of the largest-modulus coordinate so that the basis depends on ξ modulo R_θ.
    let pivot = (0..n).fold(0, |b, j| if z[j].0.hypot(z[j].1) > z[b].0.hypot(z[b].1) { j } else { b });
    let m = z[pivot].0.hypot(z[pivot].1);
    let phase = (z[pivot].0 / m, z[pivot].1 / m);
    let unphase = (phase.0, -phase.1);
    let w: Vec<Complex> = z.iter().map(|v| cmul(*v, unphase)).collect();
    let mut basis: Vec<Vec<Complex>> = alloc::vec![w];
    while basis.len() < n {
        let mut best: Option<(f64, Vec<Complex>)> = None;
        for j in 0..n {
            let mut e = alloc::vec![(0.0, 0.0); n];
            e[j] = (1.0, 0.0);
            cproject_out(&mut e, &basis);
            let len = cnorm(&e);
            if best.as_ref().map_or(true, |(b, _)| len > *b) {
                best = Some((len, e));
            }
        }
        let (len, mut e) = best.unwrap();
        e.iter_mut().for_each(|v| {
            v.0 /= len;
            v.1 /= len;
        });
        basis.push(e);
    }
    let mut flat = Vec::with_capacity(2 * n * (2 * n - 2));
    for v in &basis[1..] {
        let v: Vec<Complex> = v.iter().map(|c| cmul(*c, phase)).collect();
        flat.extend(v.iter().flat_map(|c| [c.0, c.1]));
        flat.extend(v.iter().flat_map(|c| [-c.1, c.0]));
    }
    Subspace::from_frame(DMatrix::from_column_slice(2 * n, 2 * n - 2, &flat))
}

fn grid(m: usize) -> (Vec<f64>, Vec<f64>) {
    theta_grid(m).map(|t| t.sin_cos()).map(|(s, c)| (c, s)).unzip()
}

/// `K_c` with `‖x‖_{K_c}^{-2} = (1/2π) ∫_0^{2π} ‖R_θ x‖_K^{-2} dθ`, by the uniform `θ_nodes`-point
/// rule. The node count doubles (up to [`MAX_THETA_NODES`]) while doubling still moves sampled
/// values by more than `1e-10`.
pub fn rtheta_symmetrize(body: &StarBody, theta_nodes: usize) -> Result<StarBody> {
    ComplexStructure::new(body.dim())?;
    if theta_nodes < 4 {
        return Err(invalid("theta_nodes must be >= 4"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7a);
    let probes: Vec<Vec<f64>> = (0..32).map(|_| linalg::random_unit(body.dim(), &mut rng)).collect();
    let mut m = theta_nodes;
    loop {
        let (c, s) = grid(m);
        let current = StarBody::symmetrized(body.clone(), c, s);
        if m >= MAX_THETA_NODES {
            return Ok(current);
        }
        let (c2, s2) = grid(2 * m);
        let finer = StarBody::symmetrized(body.clone(), c2, s2);
        let change = probes
            .iter()
            .map(|x| {
                let a = current.gauge(x);
                (finer.gauge(x) - a).abs() / a
            })
            .fold(0.0, f64::max);
        if change <= 1e-10 {
            return Ok(current);
        }
        m *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::vec;

    #[test]
    fn rotation_examples() {
        let y = rtheta_apply(PI / 2.0, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((y[0]).abs() < 1e-15 && (y[1] - 1.0).abs() < 1e-15);
        assert_eq!(rtheta_apply(0.0, &[1.0, 2.0, 3.0, 4.0]).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert!(rtheta_apply(0.3, &[1.0, 2.0, 3.0]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = linalg::random_gaussian(6, &mut rng);
            let t: f64 = rng.random::<f64>() * 2.0 * PI;
            assert_relative_eq!(linalg::norm(&rtheta_apply(t, &x).unwrap()), linalg::norm(&x), max_relative = 1e-14);
        }
    }

    #[test]
    fn invariance_examples() {
        let ball = StarBody::euclidean_ball(4).unwrap();
        let r = is_rtheta_invariant(&ball, 16, 200, 1e-12).unwrap();
        assert!(r.invariant && r.max_deviation < 1e-14);
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            let b = StarBody::complex_lp_ball(3, p).unwrap();
            assert!(is_rtheta_invariant(&b, 16, 200, 1e-12).unwrap().invariant);
        }
        let cube = StarBody::cube(4).unwrap();
        let r = is_rtheta_invariant(&cube, 16, 200, 1e-8).unwrap();
        assert!(!r.invariant && r.witness.is_some());
        let x = [1.0, 0.0, 0.0, 0.0];
        let y = rtheta_apply(PI / 4.0, &x).unwrap();
        assert!((cube.gauge(&y) - cube.gauge(&x)).abs() > 0.2);
        assert!(is_rtheta_invariant(&StarBody::cube(3).unwrap(), 4, 4, 1e-8).is_err());
        let kc = rtheta_symmetrize(&cube, 64).unwrap();
        assert!(is_rtheta_invariant(&kc, 16, 200, 1e-12).unwrap().invariant);
    }

    #[test]
    fn density_invariance() {
        let g = Density::radial_gaussian(4, 1.0).unwrap();
        assert!(is_density_rtheta_invariant(&g, 2.0, 100, 1e-12).unwrap().invariant);
        let cube = StarBody::cube(4).unwrap();
        let f = Density::indicator_plus(&cube, &cube, &Density::constant(4, 1.0).unwrap()).unwrap();
        assert!(!is_density_rtheta_invariant(&f, 2.0, 200, 1e-8).unwrap().invariant);
    }

    #[test]
    fn frame_examples() {
        let h = complex_hyperplane_frame(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let target = Subspace::coordinate(4, &[2, 3]).unwrap();
        assert!((h.projector() - target.projector()).amax() < 1e-14);
        assert!(complex_hyperplane_frame(&[0.0; 4]).is_err());
        assert!(complex_hyperplane_frame(&[1.0, 0.0, 0.0]).is_err());
        assert!(complex_hyperplane_frame(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn frames_are_orthogonal_and_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [2usize, 3, 4] {
            for _ in 0..50 {
                let xi = linalg::random_unit(2 * n, &mut rng);
                let h = complex_hyperplane_frame(&xi).unwrap();
                assert!(h.orthonormality_deviation() < 1e-12);
                let jxi = rtheta_apply(PI / 2.0, &xi).unwrap();
                for col in h.columns() {
                    assert!(linalg::dot(col, &xi).abs() < 1e-12);
                    assert!(linalg::dot(col, &jxi).abs() < 1e-12);
                }
                let t = rng.random::<f64>() * 2.0 * PI;
                let hr = complex_hyperplane_frame(&rtheta_apply(t, &xi).unwrap()).unwrap();
                assert!((h.projector() - hr.projector()).amax() < 1e-10);
                for (a, b) in h.columns().zip(hr.columns()) {
                    let ra = rtheta_apply(t, a).unwrap();
                    ra.iter().zip(b).for_each(|(u, v)| assert!((u - v).abs() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn symmetrize_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ball = StarBody::euclidean_ball(4).unwrap();
        let bc = rtheta_symmetrize(&ball, THETA_NODES).unwrap();
        let l1 = StarBody::complex_lp_ball(2, 1.0).unwrap();
        let l1c = rtheta_symmetrize(&l1, THETA_NODES).unwrap();
        for _ in 0..200 {
            let x = linalg::random_gaussian(4, &mut rng);
            assert_relative_eq!(bc.gauge(&x), ball.gauge(&x), max_relative = 1e-12);
            assert_relative_eq!(l1c.gauge(&x), l1.gauge(&x), max_relative = 1e-12);
        }
        let ell = StarBody::ellipsoid_diag(&[1.0, 1.0, 4.0, 4.0]).unwrap();
        let ec = rtheta_symmetrize(&ell, THETA_NODES).unwrap();
        assert!(is_rtheta_invariant(&ec, 16, 200, 1e-8).unwrap().invariant);
        let skew = StarBody::ellipsoid_diag(&[1.0, 4.0, 2.0, 9.0]).unwrap();
        let sc = rtheta_symmetrize(&skew, THETA_NODES).unwrap();
        assert!(!is_rtheta_invariant(&skew, 16, 200, 1e-8).unwrap().invariant);
        assert!(is_rtheta_invariant(&sc, 16, 200, 1e-8).unwrap().invariant);
        assert!(rtheta_symmetrize(&StarBody::cube(3).unwrap(), 64).is_err());
        assert!(rtheta_symmetrize(&ball, 2).is_err());
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let skew = StarBody::ellipsoid_diag(&[1.0, 4.0, 2.0, 9.0]).unwrap();
        let once = rtheta_symmetrize(&skew, THETA_NODES).unwrap();
        let twice = rtheta_symmetrize(&once, THETA_NODES).unwrap();
        for _ in 0..200 {
            let x = linalg::random_unit(4, &mut rng);
            assert!((once.gauge(&x) - twice.gauge(&x)).abs() <= 1e-10);
        }
    }

    #[test]
    fn rough_bodies_escalate() {
        let cube = StarBody::cube(4).unwrap();
        let c = rtheta_symmetrize(&cube, 8).unwrap();
        assert!(c.symmetrized_inner().unwrap().1 > 8);
    }
}
