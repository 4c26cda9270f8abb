//! Sandwiching ellipsoids `K` with `(1/s) K ⊂ L ⊂ K`.
//!
//! Catalog bodies get closed forms with `s <= √n`; anything else falls back to an inertia
//! ellipsoid fitted to sampled boundary points, flagged as uncertified.

use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix};
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::{Shape, StarBody};
use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg;

/// Tolerance of the containment checks.
pub const SANDWICH_TOL: f64 = 1e-9;
const FALLBACK_SAMPLES: usize = 8192;

/// The ellipsoid `{x : xᵀ A x <= 1}` together with a ratio `s` such that `(1/s) K ⊂ L ⊂ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichEllipsoid {
    pub shape: DMatrix<f64>,
    pub ratio: f64,
    /// Analytic (true) or sampled (false).
    pub certified: bool,
}

impl SandwichEllipsoid {
    /// Checks that `shape` is symmetric positive definite and `ratio >= 1`.
    pub fn new(shape: DMatrix<f64>, ratio: f64, certified: bool) -> Result<Self> {
        if !shape.is_square() || (&shape - shape.transpose()).amax() > 1e-12 * shape.amax().max(1.0) {
            return Err(invalid("sandwich matrix must be square and symmetric"));
        }
        if Cholesky::new(shape.clone()).is_none() {
            return Err(invalid("sandwich matrix must be positive definite"));
        }
        if !(ratio >= 1.0) || !ratio.is_finite() {
            return Err(invalid("sandwich ratio must be a finite number >= 1"));
        }
        Ok(Self { shape, ratio, certified })
    }

    pub fn dim(&self) -> usize {
        self.shape.nrows()
    }

    /// The outer ellipsoid `K` as a body.
    pub fn outer_body(&self) -> Result<StarBody> {
        let rows: Vec<Vec<f64>> = self.shape.row_iter().map(|r| r.iter().copied().collect()).collect();
        StarBody::ellipsoid(&rows)
    }
}

fn ball_sandwich(n: usize, outer_radius: f64, ratio: f64) -> Result<SandwichEllipsoid> {
    SandwichEllipsoid::new(DMatrix::identity(n, n) / (outer_radius * outer_radius), ratio, true)
}

/// `(outer radius, ratio)` for the unit ball of the `p`-norm on `R^m`.
fn lp_radii(m: f64, p: f64) -> (f64, f64) {
    if p >= 2.0 {
        let r = m.powf(0.5 - 1.0 / p);
        (r, r)
    } else {
        (1.0, m.powf(1.0 / p - 0.5))
    }
}

/// A sandwich ellipsoid for a convex body.
pub fn sandwich_ellipsoid(body: &StarBody) -> Result<SandwichEllipsoid> {
    body.require_convex()?;
    let (base, scale) = body.base();
    let n = base.dim();
    let unit = match base.shape() {
        Shape::Ball => ball_sandwich(n, 1.0, 1.0)?,
        Shape::Ellipsoid { matrix } => SandwichEllipsoid::new(DMatrix::from_row_slice(n, n, matrix), 1.0, true)?,
        Shape::Lp { p } => {
            let (r, s) = lp_radii(n as f64, *p);
            ball_sandwich(n, r, s)?
        }
        Shape::ComplexLp { p } => {
            let (r, s) = lp_radii((n / 2) as f64, *p);
            ball_sandwich(n, r, s)?
        }
        Shape::Slab { normals, count } if *count == n => {
            // {|Mx|_∞ <= 1} is the image of the cube, sandwiched by {|Mx|² <= n} with ratio √n.
            let m = DMatrix::from_row_slice(n, n, normals);
            SandwichEllipsoid::new(m.transpose() * m / n as f64, (n as f64).sqrt(), true)?
        }
        _ => inertia_sandwich(base)?,
    };
    let s2 = scale * scale;
    Ok(SandwichEllipsoid { shape: unit.shape / s2, ..unit })
}

fn inertia_sandwich(body: &StarBody) -> Result<SandwichEllipsoid> {
    let n = body.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x10b5);
    let mut pts = Vec::with_capacity(FALLBACK_SAMPLES);
    let mut inertia = DMatrix::<f64>::zeros(n, n);
    for _ in 0..FALLBACK_SAMPLES {
        let theta = linalg::random_unit(n, &mut rng);
        let rho = 1.0 / body.gauge(&theta);
        if !rho.is_finite() {
            return Err(Error::Unbounded);
        }
        let x = nalgebra::DVector::from_iterator(n, theta.iter().map(|v| v * rho));
        inertia += &x * x.transpose();
        pts.push(x);
    }
    inertia /= FALLBACK_SAMPLES as f64;
    let e = inertia.try_inverse().ok_or(Error::Unbounded)?;
    let q = |x: &nalgebra::DVector<f64>| (x.transpose() * &e * x)[(0, 0)];
    let outer = pts.iter().map(q).fold(0.0, f64::max) * 1.01 * 1.01;
    let inner = pts.iter().map(q).fold(f64::INFINITY, f64::min);
    let ratio = (outer / inner).sqrt() * 1.01;
    SandwichEllipsoid::new(e / outer, ratio, false)
}

/// Result of a sampled two-sided containment test.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub pass: bool,
    /// Largest relative violation of `ρ_L <= ρ_K`, or of `ρ_K <= s ρ_L` (0 when both hold).
    pub max_violation: f64,
    pub outer_violation: f64,
    pub inner_violation: f64,
    /// Largest observed `ρ_K / ρ_L`.
    pub observed_ratio: f64,
    pub samples: usize,
}

/// Checks `(1/s) K ⊂ L ⊂ K` along sampled directions, for any outer star body `K`.
pub fn check_sandwich(body: &StarBody, outer: &StarBody, ratio: f64, samples: usize, tol: f64, seed: u64) -> Result<SandwichReport> {
    check_dim(body.dim(), outer.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outer_violation = 0.0_f64;
    let mut inner_violation = 0.0_f64;
    let mut observed_ratio = 0.0_f64;
    for _ in 0..samples {
        let theta = linalg::random_unit(body.dim(), &mut rng);
        let rho_l = 1.0 / body.gauge(&theta);
        let rho_k = 1.0 / outer.gauge(&theta);
        outer_violation = outer_violation.max(rho_l / rho_k - 1.0);
        inner_violation = inner_violation.max(rho_k / (ratio * rho_l) - 1.0);
        observed_ratio = observed_ratio.max(rho_k / rho_l);
    }
    let max_violation = outer_violation.max(inner_violation).max(0.0);
    Ok(SandwichReport {
        pass: max_violation <= tol,
        max_violation,
        outer_violation: outer_violation.max(0.0),
        inner_violation: inner_violation.max(0.0),
        observed_ratio,
        samples,
    })
}

/// Checks `ρ_L(θ) <= ρ_K(θ) <= s ρ_L(θ)` on `samples` random directions.
pub fn verify_sandwich(body: &StarBody, ellipsoid: &SandwichEllipsoid, samples: usize, tol: f64) -> Result<SandwichReport> {
    check_dim(body.dim(), ellipsoid.dim())?;
    check_sandwich(body, &ellipsoid.outer_body()?, ellipsoid.ratio, samples, tol, 0x5a4d)
}
