//! Origin-symmetric star bodies, represented by their Minkowski functional.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_dim, invalid, Error, Result};

/// Default relative tolerance for [`StarBody::contains`].
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Catalog tag of a body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BodyKind {
    EuclideanBall,
    Ellipsoid,
    LpBall,
    SlabPolytope,
    ComplexLpBall,
    RthetaSymmetrized,
    Scaled,
    Custom,
}

impl BodyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BodyKind::EuclideanBall => "euclidean-ball",
            BodyKind::Ellipsoid => "ellipsoid",
            BodyKind::LpBall => "lp-ball",
            BodyKind::SlabPolytope => "slab-polytope",
            BodyKind::ComplexLpBall => "complex-lp-ball",
            BodyKind::RthetaSymmetrized => "rtheta-symmetrized",
            BodyKind::Scaled => "scaled",
            BodyKind::Custom => "custom",
        }
    }
}

impl fmt::Display for BodyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// User-supplied gauge for custom bodies.
pub type GaugeFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

#[derive(Clone)]
pub(crate) enum Shape {
    Ball,
    /// Row-major SPD matrix; `‖x‖ = sqrt(xᵀAx)`.
    Ellipsoid { matrix: Vec<f64> },
    Lp { p: f64 },
    /// Row-major normals `a_i`; `‖x‖ = max_i |⟨a_i, x⟩|`.
    Slab { normals: Vec<f64>, count: usize },
    ComplexLp { p: f64 },
    Symmetrized { inner: Arc<StarBody>, cos: Vec<f64>, sin: Vec<f64> },
    Scaled { inner: Arc<StarBody>, scale: f64 },
    Custom { gauge: Arc<GaugeFn>, convex: bool },
}

/// An origin-symmetric star body in `R^dim`.
///
/// Cloning is cheap for wrapped kinds (inner bodies are shared).
#[derive(Clone)]
pub struct StarBody {
    dim: usize,
    shape: Shape,
}

impl fmt::Debug for StarBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("StarBody");
        s.field("kind", &self.kind()).field("dim", &self.dim);
        match &self.shape {
            Shape::Lp { p } | Shape::ComplexLp { p } => {
                s.field("p", p);
            }
            Shape::Scaled { inner, scale } => {
                s.field("inner", inner).field("scale", scale);
            }
            Shape::Symmetrized { inner, cos, .. } => {
                s.field("inner", inner).field("theta_nodes", &cos.len());
            }
            _ => {}
        }
        s.finish()
    }
}

fn lp_norm(values: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    let max = values.clone().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max == 0.0 || p.is_infinite() {
        return max;
    }
    if p == 1.0 {
        return values.map(f64::abs).sum();
    }
    if p == 2.0 {
        let s: f64 = values.map(|v| (v / max) * (v / max)).sum();
        return max * s.sqrt();
    }
    let s: f64 = values.map(|v| (v.abs() / max).powf(p)).sum();
    max * s.powf(1.0 / p)
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(invalid("lp exponent must satisfy p >= 1"))
    } else {
        Ok(())
    }
}

fn smallest_eigenvalue(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

impl StarBody {
    pub fn euclidean_ball(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(Self { dim, shape: Shape::Ball })
    }

    /// Ellipsoid `{x : xᵀAx <= 1}` from a symmetric positive definite matrix given by rows.
    pub fn ellipsoid(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(invalid("ellipsoid matrix is empty"));
        }
        let mut matrix = Vec::with_capacity(n * n);
        for row in rows {
            check_dim(n, row.len())?;
            matrix.extend_from_slice(row);
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(invalid("ellipsoid matrix has non-finite entries"));
        }
        let scale = matrix.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (matrix[i * n + j] - matrix[j * n + i]).abs() > 1e-12 * scale {
                    return Err(invalid("ellipsoid matrix is not symmetric"));
                }
            }
        }
        let dm = DMatrix::from_row_slice(n, n, &matrix);
        if dm.clone().cholesky().is_none() || smallest_eigenvalue(dm) <= 0.0 {
            return Err(invalid("ellipsoid matrix is not positive definite"));
        }
        Ok(Self { dim: n, shape: Shape::Ellipsoid { matrix } })
    }

    /// Axis-aligned ellipsoid `{x : Σ d_i x_i² <= 1}`.
    pub fn ellipsoid_diag(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut r = alloc::vec![0.0; n];
                r[i] = diag[i];
                r
            })
            .collect();
        Self::ellipsoid(&rows)
    }

    /// Unit ball of the lp norm; `p = f64::INFINITY` gives the cube.
    pub fn lp_ball(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        check_exponent(p)?;
        Ok(Self { dim, shape: Shape::Lp { p } })
    }

    /// `{x : |⟨a_i, x⟩| <= 1 for all i}`; the normals must span `R^n`.
    pub fn slab_polytope(normals: &[Vec<f64>]) -> Result<Self> {
        let count = normals.len();
        let dim = normals.first().map(Vec::len).unwrap_or(0);
        if dim == 0 {
            return Err(invalid("slab polytope needs at least one non-empty normal"));
        }
        let mut flat = Vec::with_capacity(count * dim);
        for a in normals {
            check_dim(dim, a.len())?;
            flat.extend_from_slice(a);
        }
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(invalid("slab normals have non-finite entries"));
        }
        let body = Self { dim, shape: Shape::Slab { normals: flat, count } };
        if smallest_eigenvalue(body.slab_gram().unwrap()) <= 1e-12 {
            return Err(invalid("slab normals do not span the space; the polytope is unbounded"));
        }
        Ok(body)
    }

    /// The cube `[-1, 1]^dim` as a slab polytope.
    pub fn cube(dim: usize) -> Result<Self> {
        let normals: Vec<Vec<f64>> = (0..dim)
            .map(|i| {
                let mut e = alloc::vec![0.0; dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Self::slab_polytope(&normals)
    }

    /// `{z ∈ C^n : (Σ |z_j|^p)^(1/p) <= 1}` in `R^(2n)` with pairs `(2j, 2j+1)`.
    pub fn complex_lp_ball(complex_dim: usize, p: f64) -> Result<Self> {
        if complex_dim == 0 {
            return Err(invalid("complex dimension must be positive"));
        }
        check_exponent(p)?;
        Ok(Self { dim: 2 * complex_dim, shape: Shape::ComplexLp { p } })
    }

    /// `scale · body`.
    pub fn scaled(body: StarBody, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("scale must be positive and finite"));
        }
        Ok(Self { dim: body.dim, shape: Shape::Scaled { inner: Arc::new(body), scale } })
    }

    /// Body given by an arbitrary gauge; the caller vouches for symmetry and homogeneity.
    pub fn custom(dim: usize, convex: bool, gauge: Arc<GaugeFn>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(Self { dim, shape: Shape::Custom { gauge, convex } })
    }

    pub(crate) fn symmetrized(inner: StarBody, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { dim: inner.dim, shape: Shape::Symmetrized { inner: Arc::new(inner), cos, sin } }
    }

    pub(crate) fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BodyKind {
        match self.shape {
            Shape::Ball => BodyKind::EuclideanBall,
            Shape::Ellipsoid { .. } => BodyKind::Ellipsoid,
            Shape::Lp { .. } => BodyKind::LpBall,
            Shape::Slab { .. } => BodyKind::SlabPolytope,
            Shape::ComplexLp { .. } => BodyKind::ComplexLpBall,
            Shape::Symmetrized { .. } => BodyKind::RthetaSymmetrized,
            Shape::Scaled { .. } => BodyKind::Scaled,
            Shape::Custom { .. } => BodyKind::Custom,
        }
    }

    /// Kind after peeling off `scaled` wrappers, together with the accumulated scale.
    pub fn base(&self) -> (&StarBody, f64) {
        let mut body = self;
        let mut scale = 1.0;
        while let Shape::Scaled { inner, scale: s } = &body.shape {
            scale *= s;
            body = inner;
        }
        (body, scale)
    }

    /// Row-major ellipsoid matrix, if this is an ellipsoid.
    pub fn ellipsoid_matrix(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Ellipsoid { matrix } => Some(matrix),
            _ => None,
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match self.shape {
            Shape::Lp { p } | Shape::ComplexLp { p } => Some(p),
            _ => None,
        }
    }

    /// Slab normals as rows.
    pub fn slab_normals(&self) -> Option<Vec<&[f64]>> {
        match &self.shape {
            Shape::Slab { normals, .. } => Some(normals.chunks(self.dim).collect()),
            _ => None,
        }
    }

    pub fn symmetrized_inner(&self) -> Option<(&StarBody, usize)> {
        match &self.shape {
            Shape::Symmetrized { inner, cos, .. } => Some((inner, cos.len())),
            _ => None,
        }
    }

    fn slab_gram(&self) -> Option<DMatrix<f64>> {
        let Shape::Slab { normals, count } = &self.shape else {
            return None;
        };
        let n = self.dim;
        let a = DMatrix::from_row_slice(*count, n, normals);
        Some(a.transpose() * a)
    }

    /// Whether the body is convex by construction.
    pub fn is_convex(&self) -> bool {
        match &self.shape {
            Shape::Ball | Shape::Ellipsoid { .. } | Shape::Lp { .. } | Shape::Slab { .. } | Shape::ComplexLp { .. } => true,
            Shape::Scaled { inner, .. } => inner.is_convex(),
            Shape::Custom { convex, .. } => *convex,
            Shape::Symmetrized { .. } => false,
        }
    }

    /// True for boxes whose facets are orthogonal to coordinate axes; their gauge is smooth on every face of the cube `[-1,1]^n`.
    pub fn is_axis_aligned_box(&self) -> bool {
        match &self.shape {
            Shape::Lp { p } => p.is_infinite(),
            Shape::Slab { normals, count } => {
                *count == self.dim
                    && normals.chunks(self.dim).enumerate().all(|(i, a)| {
                        a.iter().enumerate().all(|(j, v)| (j == i) == (*v != 0.0))
                    })
            }
            Shape::Scaled { inner, .. } => inner.is_axis_aligned_box(),
            _ => false,
        }
    }

    /// The matrix `A` with `‖x‖² = xᵀAx`, for ellipsoids and their scalings.
    pub fn ellipsoid_form(&self) -> Option<DMatrix<f64>> {
        let (base, scale) = self.base();
        match &base.shape {
            Shape::Ellipsoid { matrix } => Some(DMatrix::from_row_slice(base.dim, base.dim, matrix) / (scale * scale)),
            _ => None,
        }
    }

    /// Invariance under every coordinate reflection `x_i -> -x_i`, known from the construction.
    pub fn is_unconditional(&self) -> bool {
        match &self.shape {
            Shape::Ball | Shape::Lp { .. } | Shape::ComplexLp { .. } => true,
            Shape::Ellipsoid { matrix } => {
                let n = self.dim;
                (0..n).all(|i| (0..n).all(|j| i == j || matrix[i * n + j] == 0.0))
            }
            Shape::Slab { .. } => self.is_axis_aligned_box(),
            Shape::Scaled { inner, .. } => inner.is_unconditional(),
            Shape::Symmetrized { .. } | Shape::Custom { .. } => false,
        }
    }

    /// Radius of a ball centered at the origin that contains the body, when one is known analytically.
    /// Exact for balls, ellipsoids, lp-balls, boxes and parallelotopes; an upper bound otherwise.
    pub fn circumradius(&self) -> Option<f64> {
        let n = self.dim as f64;
        match &self.shape {
            Shape::Ball => Some(1.0),
            Shape::Ellipsoid { matrix } => {
                let m = DMatrix::from_row_slice(self.dim, self.dim, matrix);
                Some(1.0 / smallest_eigenvalue(m).sqrt())
            }
            Shape::Lp { p } => Some(lp_circumradius(n, *p)),
            Shape::ComplexLp { p } => Some(lp_circumradius(n / 2.0, *p)),
            Shape::Slab { normals, count } => {
                let rows: Vec<&[f64]> = normals.chunks(self.dim).collect();
                if *count == self.dim {
                    parallelotope_circumradius(&rows)
                } else {
                    let lam = smallest_eigenvalue(self.slab_gram()?);
                    Some((*count as f64 / lam).sqrt())
                }
            }
            Shape::Symmetrized { inner, .. } => inner.circumradius(),
            Shape::Scaled { inner, scale } => inner.circumradius().map(|r| r * scale),
            Shape::Custom { .. } => None,
        }
    }

    /// `‖x‖_K` without the dimension check.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Shape::Ellipsoid { matrix } => {
                let n = self.dim;
                let mut q = 0.0;
                for i in 0..n {
                    let row = &matrix[i * n..(i + 1) * n];
                    let ax: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
                    q += x[i] * ax;
                }
                q.max(0.0).sqrt()
            }
            Shape::Lp { p } => lp_norm(x.iter().copied(), *p),
            Shape::ComplexLp { p } => {
                let moduli = x.chunks_exact(2).map(|c| c[0].hypot(c[1]));
                lp_norm(moduli, *p)
            }
            Shape::Slab { normals, .. } => normals
                .chunks(self.dim)
                .map(|a| a.iter().zip(x).map(|(u, v)| u * v).sum::<f64>().abs())
                .fold(0.0, f64::max),
            Shape::Symmetrized { inner, cos, sin } => {
                // Average from the canonical phase of `x` (largest-modulus coordinate on the positive
                // real axis), so the discrete average is exactly R_θ-invariant.
                let pivot = x.chunks_exact(2).map(|p| p[0].hypot(p[1])).enumerate().fold((0, 0.0), |b, (j, m)| if m > b.1 { (j, m) } else { b });
                let (pc, ps) = if pivot.1 > 0.0 { (x[2 * pivot.0] / pivot.1, x[2 * pivot.0 + 1] / pivot.1) } else { (1.0, 0.0) };
                let mut rotated = alloc::vec![0.0; x.len()];
                let mut acc = 0.0;
                for (c, s) in cos.iter().zip(sin) {
                    crate::complex::rotate_into(c * pc + s * ps, s * pc - c * ps, x, &mut rotated);
                    let g = inner.gauge(&rotated);
                    if g == 0.0 {
                        return 0.0;
                    }
                    acc += 1.0 / (g * g);
                }
                (acc / cos.len() as f64).powf(-0.5)
            }
            Shape::Scaled { inner, scale } => inner.gauge(x) / scale,
            Shape::Custom { gauge, .. } => gauge(x),
        }
    }

    /// Minkowski functional `‖x‖_K = min{a >= 0 : x ∈ aK}`.
    pub fn minkowski_functional(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.gauge(x))
    }

    /// Radial function `ρ_K(θ) = ‖θ‖_K^{-1}`.
    pub fn radial_function(&self, theta: &[f64]) -> Result<f64> {
        check_dim(self.dim, theta.len())?;
        if theta.iter().all(|v| *v == 0.0) {
            return Err(invalid("radial function is undefined at the origin"));
        }
        Ok(1.0 / self.gauge(theta))
    }

    /// `‖x‖_K <= 1 + tol`.
    pub fn contains_with_tol(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.minkowski_functional(x)? <= 1.0 + tol)
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.contains_with_tol(x, CONTAINMENT_TOL)
    }

    pub(crate) fn require_convex(&self) -> Result<()> {
        if self.is_convex() {
            Ok(())
        } else {
            Err(Error::NotConvex(self.kind().as_str()))
        }
    }
}

fn lp_circumradius(n: f64, p: f64) -> f64 {
    if p >= 2.0 {
        n.powf(0.5 - 1.0 / p)
    } else {
        1.0
    }
}

// Largest vertex norm of {x : |⟨a_i, x⟩| <= 1}, i = 1..n; vertices are A^{-1}s, s ∈ {±1}^n.
fn parallelotope_circumradius(rows: &[&[f64]]) -> Option<f64> {
    let n = rows.len();
    let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    let inv = DMatrix::from_row_slice(n, n, &flat).try_inverse()?;
    if n > 20 {
        let fro: f64 = inv.iter().map(|v| v * v).sum::<f64>().sqrt();
        return Some(fro * (n as f64).sqrt());
    }
    let mut best = 0.0_f64;
    for mask in 0..(1_u32 << (n - 1)) {
        let mut norm2 = 0.0;
        for i in 0..n {
            let mut v = 0.0;
            for j in 0..n {
                let s = if j == n - 1 || mask & (1 << j) != 0 { 1.0 } else { -1.0 };
                v += inv[(i, j)] * s;
            }
            norm2 += v * v;
        }
        best = best.max(norm2);
    }
    Some(best.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::vec;

    fn catalog() -> Vec<StarBody> {
        vec![
            StarBody::euclidean_ball(4).unwrap(),
            StarBody::ellipsoid(&[
                vec![2.0, 0.3, 0.0, 0.1],
                vec![0.3, 1.0, 0.2, 0.0],
                vec![0.0, 0.2, 3.0, 0.4],
                vec![0.1, 0.0, 0.4, 1.5],
            ])
            .unwrap(),
            StarBody::lp_ball(4, 1.0).unwrap(),
            StarBody::lp_ball(4, 4.0).unwrap(),
            StarBody::lp_ball(4, f64::INFINITY).unwrap(),
            StarBody::cube(4).unwrap(),
            StarBody::slab_polytope(&[
                vec![1.0, 0.5, 0.0, 0.0],
                vec![0.0, 1.0, -0.3, 0.0],
                vec![0.2, 0.0, 1.0, 0.7],
                vec![0.0, 0.0, 0.0, 2.0],
                vec![1.0, 1.0, 1.0, 1.0],
            ])
            .unwrap(),
            StarBody::complex_lp_ball(2, 1.0).unwrap(),
            StarBody::complex_lp_ball(2, 3.0).unwrap(),
            StarBody::scaled(StarBody::lp_ball(4, 1.5).unwrap(), 0.7).unwrap(),
        ]
    }

    #[test]
    fn functional_examples() {
        let ball = StarBody::euclidean_ball(3).unwrap();
        assert_eq!(ball.minkowski_functional(&[2.0, 0.0, 0.0]).unwrap(), 2.0);
        let ell = StarBody::ellipsoid_diag(&[1.0, 4.0]).unwrap();
        assert_eq!(ell.minkowski_functional(&[0.0, 1.0]).unwrap(), 2.0);
        let l1 = StarBody::lp_ball(2, 1.0).unwrap();
        assert_eq!(l1.minkowski_functional(&[0.5, 0.5]).unwrap(), 1.0);
        assert!(matches!(
            ball.minkowski_functional(&[1.0, 0.0]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn radial_examples() {
        let ball = StarBody::euclidean_ball(4).unwrap();
        assert_relative_eq!(ball.radial_function(&[0.5, 0.5, 0.5, 0.5]).unwrap(), 1.0, epsilon = 1e-15);
        let big = StarBody::scaled(ball.clone(), 3.0).unwrap();
        assert_relative_eq!(big.radial_function(&[0.0, 1.0, 0.0, 0.0]).unwrap(), 3.0, epsilon = 1e-15);
        let l1 = StarBody::lp_ball(2, 1.0).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(l1.radial_function(&[s, s]).unwrap(), s, epsilon = 1e-15);
        assert!(ball.radial_function(&[0.0; 4]).is_err());
    }

    #[test]
    fn containment_examples() {
        let disk = StarBody::euclidean_ball(2).unwrap();
        assert!(disk.contains(&[0.5, 0.5]).unwrap());
        let l1 = StarBody::lp_ball(2, 1.0).unwrap();
        assert!(!l1.contains(&[0.9, 0.9]).unwrap());
        for body in catalog() {
            assert!(body.contains(&vec![0.0; body.dim()]).unwrap());
            assert_eq!(body.gauge(&vec![0.0; body.dim()]), 0.0);
        }
        assert!(disk.contains(&[1.0 + 1e-10, 0.0]).unwrap());
        assert!(!disk.contains(&[1.0 + 1e-8, 0.0]).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StarBody::lp_ball(3, 0.5).is_err());
        assert!(StarBody::ellipsoid(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        assert!(StarBody::ellipsoid(&[vec![1.0, 0.5], vec![0.4, 1.0]]).is_err());
        assert!(StarBody::slab_polytope(&[vec![1.0, 0.0], vec![2.0, 0.0]]).is_err());
        assert!(StarBody::scaled(StarBody::euclidean_ball(2).unwrap(), 0.0).is_err());
        assert!(StarBody::euclidean_ball(0).is_err());
    }

    #[test]
    fn circumradii() {
        assert_relative_eq!(StarBody::cube(5).unwrap().circumradius().unwrap(), 5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(StarBody::ellipsoid_diag(&[1.0, 0.25]).unwrap().circumradius().unwrap(), 2.0, max_relative = 1e-12);
        assert_relative_eq!(StarBody::lp_ball(4, 4.0).unwrap().circumradius().unwrap(), 4f64.powf(0.25), max_relative = 1e-14);
        let boxed = StarBody::slab_polytope(&[vec![0.5, 0.0], vec![0.0, 2.0]]).unwrap();
        assert_relative_eq!(boxed.circumradius().unwrap(), (4.0f64 + 0.25).sqrt(), max_relative = 1e-12);
        assert!(boxed.is_axis_aligned_box());
        assert!(!StarBody::lp_ball(3, 1.0).unwrap().is_axis_aligned_box());
        assert!(StarBody::lp_ball(3, 1.0).unwrap().is_unconditional());
        assert!(StarBody::ellipsoid_diag(&[1.0, 2.0]).unwrap().is_unconditional());
        assert!(!StarBody::ellipsoid(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap().is_unconditional());
    }

    #[test]
    fn circumradius_dominates_sampled_radii() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for body in catalog() {
            let r = body.circumradius().unwrap();
            for _ in 0..2000 {
                let theta = crate::linalg::random_unit(body.dim(), &mut rng);
                assert!(body.radial_function(&theta).unwrap() <= r * (1.0 + 1e-12), "{body:?}");
            }
        }
    }

    #[test]
    fn symmetry_is_exact() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for body in catalog() {
            for _ in 0..200 {
                let x = crate::linalg::random_gaussian(body.dim(), &mut rng);
                let neg: Vec<f64> = x.iter().map(|v| -v).collect();
                assert_eq!(body.gauge(&x), body.gauge(&neg), "{body:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn homogeneity(seed in any::<u64>(), lambda in -20.0f64..20.0) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for body in catalog() {
                let x = crate::linalg::random_gaussian(body.dim(), &mut rng);
                let lx: Vec<f64> = x.iter().map(|v| lambda * v).collect();
                let g = body.gauge(&x);
                prop_assert!((body.gauge(&lx) - lambda.abs() * g).abs() <= 1e-12 * (1.0 + g) * (1.0 + lambda.abs()));
                prop_assert!(g > 0.0);
            }
        }

        #[test]
        fn midpoint_convexity(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for body in catalog().into_iter().filter(StarBody::is_convex) {
                let x = crate::linalg::random_gaussian(body.dim(), &mut rng);
                let y = crate::linalg::random_gaussian(body.dim(), &mut rng);
                let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
                let rhs = 0.5 * (body.gauge(&x) + body.gauge(&y));
                prop_assert!(body.gauge(&mid) <= rhs * (1.0 + 1e-12));
            }
        }

        #[test]
        fn scaling_orders_functionals(seed in any::<u64>(), s in 0.05f64..1.0) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for body in catalog() {
                let small = StarBody::scaled(body.clone(), s).unwrap();
                let x = crate::linalg::random_gaussian(body.dim(), &mut rng);
                prop_assert!(body.gauge(&x) <= small.gauge(&x));
            }
        }
    }
}
