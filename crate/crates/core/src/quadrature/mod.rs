//! Deterministic quadrature on spheres, subsphere slices and radial segments.
//!
//! Three sphere schemes are available:
//!
//! * `ProductGauss`: recursive product of Gauss rules for `(1 - t²)^((m-3)/2)` in the polar
//!   coordinate with an equispaced circle at the bottom, then a fixed seeded rotation so that no
//!   node lattice lines up with coordinate hyperplanes. Exact for polynomials up to the Gauss degree.
//! * `CubedSphere`: tensor Gauss–Legendre on every orthant of every face of `[-1,1]^m`, projected
//!   radially. Gauges of axis-aligned boxes are smooth on each piece, so their volumes come out exact.
//! * `RandomizedQmc`: equal weights on antipodally paired Kronecker points with a seeded shift.
//!
//! `Auto` picks the cubed sphere for axis-aligned boxes, a Gauss rule on one orthant for integrands
//! invariant under every coordinate reflection, the product rule up to `R^6` and QMC above.

pub mod gauss;
pub mod qmc;

use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::sphere_measure;
use crate::error::{invalid, Result};
use crate::grassmann::Subspace;
use crate::linalg::pairwise_sum;

pub use gauss::{gauss_gegenbauer, gauss_legendre_unit, GaussRule};

/// Dimension above which `Auto` switches from the product rule to QMC.
pub const PRODUCT_MAX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Auto,
    ProductGauss,
    CubedSphere,
    RandomizedQmc,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Auto => "auto",
            Scheme::ProductGauss => "product-gauss",
            Scheme::CubedSphere => "cubed-sphere",
            Scheme::RandomizedQmc => "randomized-qmc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Scheme::Auto, Scheme::ProductGauss, Scheme::CubedSphere, Scheme::RandomizedQmc]
            .into_iter()
            .find(|v| v.as_str() == s)
    }

    /// Concrete scheme for `S^(m-1)`; `None` means the orthant rule.
    pub fn resolve(self, m: usize, symmetry: Symmetry) -> Option<Scheme> {
        match (self, symmetry) {
            (Scheme::Auto, Symmetry::Box) => Some(Scheme::CubedSphere),
            (Scheme::Auto, Symmetry::Reflections) => None,
            (Scheme::Auto, _) if m <= PRODUCT_MAX_DIM => Some(Scheme::ProductGauss),
            (Scheme::Auto, _) => Some(Scheme::RandomizedQmc),
            (s, _) => Some(s),
        }
    }
}

/// What an integrand is known to be invariant under; lets `Auto` choose a rule that exploits it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    /// The body is an axis-aligned box (any integrand allowed).
    Box,
    /// Invariant under every `x_i -> -x_i`.
    Reflections,
}

/// Node counts, seed and tolerance controlling every integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Target number of points per sphere rule (actual counts round down to a product grid).
    pub sphere_nodes: usize,
    /// Gauss–Legendre points per radial segment.
    pub radial_nodes: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { sphere_nodes: 4096, radial_nodes: 64, seed: 42, scheme: Scheme::Auto, rel_tol: 1e-3 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sphere_nodes < 2 {
            return Err(invalid("sphere_nodes must be >= 2"));
        }
        if self.radial_nodes < 2 {
            return Err(invalid("radial_nodes must be >= 2"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(invalid("rel_tol must lie in (0, 1)"));
        }
        Ok(())
    }

    /// The spec with both node counts doubled, used for error estimates.
    pub fn refined(&self) -> Self {
        Self { sphere_nodes: 2 * self.sphere_nodes, radial_nodes: 2 * self.radial_nodes, ..*self }
    }

    pub fn with_nodes(&self, sphere_nodes: usize, radial_nodes: usize) -> Self {
        Self { sphere_nodes, radial_nodes, ..*self }
    }

    pub fn radial_rule(&self) -> RadialRule {
        RadialRule::new(self.radial_nodes)
    }
}

/// A weighted point set on `S^(m-1)`; `nodes` holds one unit vector per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalRule {
    pub nodes: DMatrix<f64>,
    pub weights: Vec<f64>,
}

impl SphericalRule {
    pub fn dim(&self) -> usize {
        self.nodes.nrows()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, j: usize) -> &[f64] {
        let m = self.dim();
        &self.nodes.as_slice()[j * m..(j + 1) * m]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.nodes.as_slice().chunks(self.dim().max(1)).zip(self.weights.iter().copied())
    }

    /// `Σ w_j g(x_j)` with a fixed pairwise reduction order.
    pub fn integrate(&self, mut g: impl FnMut(&[f64]) -> f64) -> f64 {
        let terms: Vec<f64> = self.iter().map(|(x, w)| w * g(x)).collect();
        pairwise_sum(&terms)
    }

    /// Rule mapped through an orthonormal frame `F` (nodes `F x_j`, same weights).
    pub fn mapped(&self, frame: &DMatrix<f64>) -> SphericalRule {
        SphericalRule { nodes: frame * &self.nodes, weights: self.weights.clone() }
    }
}

/// Rule on `S^(m-1)` according to the spec. `m = 1` is the two-point sphere `{+1, -1}` with unit weights.
pub fn sphere_rule(m: usize, spec: &QuadratureSpec) -> Result<SphericalRule> {
    sphere_rule_for(m, spec, Symmetry::General)
}

/// Like [`sphere_rule`], letting `Auto` exploit a known symmetry of the integrand. A rule built for
/// `Symmetry::Reflections` is wrong for integrands without that symmetry.
pub fn sphere_rule_for(m: usize, spec: &QuadratureSpec, symmetry: Symmetry) -> Result<SphericalRule> {
    if m == 0 {
        return Err(invalid("sphere dimension m must be >= 1"));
    }
    spec.validate()?;
    if m == 1 {
        return Ok(SphericalRule {
            nodes: DMatrix::from_column_slice(1, 2, &[1.0, -1.0]),
            weights: alloc::vec![1.0, 1.0],
        });
    }
    let rule = match spec.scheme.resolve(m, symmetry) {
        None => orthant_rule(m, spec.sphere_nodes)?,
        Some(Scheme::ProductGauss | Scheme::Auto) => {
            let base = product_rule(m, spec.sphere_nodes);
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ (m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let rotation = random_rotation(m, &mut rng);
            SphericalRule { nodes: rotation * base.nodes, weights: base.weights }
        }
        Some(Scheme::CubedSphere) => cubed_sphere_rule(m, spec.sphere_nodes),
        Some(Scheme::RandomizedQmc) => qmc_rule(m, spec.sphere_nodes, spec.seed)?,
    };
    Ok(rule)
}

/// Rule on `S^(n-1) ∩ H`: a rule on `S^(d-1)` pushed through the frame of `H`.
pub fn subsphere_rule(h: &Subspace, spec: &QuadratureSpec) -> Result<SphericalRule> {
    check_frame(h)?;
    Ok(sphere_rule(h.sub_dim(), spec)?.mapped(h.frame()))
}

pub fn check_frame(h: &Subspace) -> Result<()> {
    let dev = h.orthonormality_deviation();
    if dev > crate::grassmann::FRAME_TOL {
        return Err(crate::error::Error::NonOrthonormalFrame(dev));
    }
    Ok(())
}

/// Largest `q` with `q^e <= budget`, at least 2.
fn int_root(budget: usize, e: usize) -> usize {
    let mut q = ((budget as f64).powf(1.0 / e as f64).round() as usize).max(2);
    while q > 2 && q.checked_pow(e as u32).is_none_or(|v| v > budget) {
        q -= 1;
    }
    while (q + 1).checked_pow(e as u32).is_some_and(|v| v <= budget) {
        q += 1;
    }
    q
}

fn random_rotation(m: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_vec(m, m, crate::linalg::random_gaussian(m * m, rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Polar Gauss points per level for a product rule on `S^(m-1)` within `budget` nodes (circle gets `2q`).
fn product_levels(m: usize, budget: usize) -> usize {
    let count = |q: usize| 2 * q.pow((m - 1) as u32);
    let mut q = ((budget as f64 / 2.0).powf(1.0 / (m - 1) as f64).floor() as usize).max(2);
    while count(q + 1) <= budget {
        q += 1;
    }
    while q > 2 && count(q) > budget {
        q -= 1;
    }
    q
}

fn product_rule(m: usize, budget: usize) -> SphericalRule {
    if m == 2 {
        return circle_rule(budget.max(4) + budget % 2);
    }
    product_rule_levels(m, product_levels(m, budget))
}

fn circle_rule(count: usize) -> SphericalRule {
    let step = 2.0 * core::f64::consts::PI / count as f64;
    let mut nodes = Vec::with_capacity(2 * count);
    for j in 0..count {
        let (s, c) = ((j as f64 + 0.5) * step).sin_cos();
        nodes.push(c);
        nodes.push(s);
    }
    SphericalRule { nodes: DMatrix::from_vec(2, count, nodes), weights: alloc::vec![step; count] }
}

fn product_rule_levels(m: usize, q: usize) -> SphericalRule {
    if m == 2 {
        return circle_rule(2 * q);
    }
    let polar = gauss_gegenbauer(q, (m as f64 - 3.0) / 2.0);
    let sub = product_rule_levels(m - 1, q);
    let total = polar.nodes.len() * sub.len();
    let mut nodes = Vec::with_capacity(total * m);
    let mut weights = Vec::with_capacity(total);
    for (t, wt) in polar.nodes.iter().zip(&polar.weights) {
        let s = (1.0 - t * t).max(0.0).sqrt();
        for (y, wy) in sub.iter() {
            nodes.push(*t);
            nodes.extend(y.iter().map(|v| s * v));
            weights.push(wt * wy);
        }
    }
    SphericalRule { nodes: DMatrix::from_vec(m, total, nodes), weights }
}

fn cubed_sphere_rule(m: usize, budget: usize) -> SphericalRule {
    let pieces = m * (1usize << m);
    let q = int_root(budget / pieces, m - 1);
    let gl = composite_unit(q);
    let q = gl.nodes.len();
    let cells = q.pow((m - 1) as u32);
    let orthants = 1usize << (m - 1);
    let total = 2 * m * orthants * cells;
    let mut nodes = Vec::with_capacity(total * m);
    let mut weights = Vec::with_capacity(total);
    let mut y = alloc::vec![0.0; m];
    for axis in 0..m {
        for face_sign in [1.0, -1.0] {
            for orthant in 0..orthants {
                for cell in 0..cells {
                    let mut idx = cell;
                    let mut w = 1.0;
                    let mut free = 0;
                    for (i, yi) in y.iter_mut().enumerate() {
                        if i == axis {
                            *yi = face_sign;
                            continue;
                        }
                        let g = idx % q;
                        idx /= q;
                        let sign = if orthant & (1 << free) != 0 { -1.0 } else { 1.0 };
                        free += 1;
                        *yi = sign * gl.nodes[g];
                        w *= gl.weights[g];
                    }
                    let r = crate::linalg::norm(&y);
                    nodes.extend(y.iter().map(|v| v / r));
                    weights.push(w / r.powi(m as i32));
                }
            }
        }
    }
    SphericalRule { nodes: DMatrix::from_vec(m, total, nodes), weights }
}

// Composite Gauss–Legendre on [0, 1] with about `q` points in panels of at most 32.
fn composite_unit(q: usize) -> GaussRule {
    let panels = q.div_ceil(32);
    let base = gauss_legendre_unit(q.div_ceil(panels));
    let h = 1.0 / panels as f64;
    let mut nodes = Vec::with_capacity(panels * base.nodes.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for p in 0..panels {
        for (x, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push((p as f64 + x) * h);
            weights.push(w * h);
        }
    }
    GaussRule { nodes, weights }
}

/// Gauss–Legendre in every hyperspherical angle over `[0, π/2]`, i.e. on the positive orthant only,
/// with weights scaled to the whole sphere.
fn orthant_rule(m: usize, budget: usize) -> Result<SphericalRule> {
    let gl = composite_unit(int_root(budget, m - 1));
    let half_pi = core::f64::consts::FRAC_PI_2;
    let angles: Vec<(f64, f64, f64)> = gl
        .nodes
        .iter()
        .zip(&gl.weights)
        .map(|(u, w)| {
            let (s, c) = (half_pi * u).sin_cos();
            (c, s, half_pi * w)
        })
        .collect();
    let mut nodes: Vec<f64> = angles.iter().flat_map(|&(c, s, _)| [c, s]).collect();
    let mut weights: Vec<f64> = angles.iter().map(|a| a.2).collect();
    for level in 3..=m {
        let mut next_nodes = Vec::with_capacity(nodes.len() * angles.len() * level / (level - 1));
        let mut next_weights = Vec::with_capacity(weights.len() * angles.len());
        for &(c, s, w) in &angles {
            let jac = w * s.powi(level as i32 - 2);
            for (y, wy) in nodes.chunks(level - 1).zip(&weights) {
                next_nodes.push(c);
                next_nodes.extend(y.iter().map(|v| s * v));
                next_weights.push(jac * wy);
            }
        }
        nodes = next_nodes;
        weights = next_weights;
    }
    let total: f64 = weights.iter().sum();
    let scale = sphere_measure(m)? / total;
    weights.iter_mut().for_each(|w| *w *= scale);
    let count = weights.len();
    Ok(SphericalRule { nodes: DMatrix::from_vec(m, count, nodes), weights })
}

fn qmc_rule(m: usize, budget: usize, seed: u64) -> Result<SphericalRule> {
    let half = (budget / 2).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1B5_4A32_D192_ED03 ^ m as u64);
    let shift: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let flat = qmc::kronecker_sphere_points(m, half, &shift);
    let w = sphere_measure(m)? / (2 * half) as f64;
    Ok(SphericalRule { nodes: DMatrix::from_vec(m, 2 * half, flat), weights: alloc::vec![w; 2 * half] })
}

/// Gauss–Legendre rule on `[0, 1]`, rescaled per radial segment.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    rule: GaussRule,
}

impl RadialRule {
    pub fn new(points: usize) -> Self {
        Self { rule: gauss_legendre_unit(points.max(1)) }
    }

    pub fn len(&self) -> usize {
        self.rule.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.nodes.is_empty()
    }

    /// `∫_a^b r^power g(r) dr` on one smooth piece.
    pub fn segment(&self, a: f64, b: f64, power: i32, mut g: impl FnMut(f64) -> f64) -> f64 {
        let h = b - a;
        let mut acc = 0.0;
        for (x, w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let r = a + h * x;
            acc += w * r.powi(power) * g(r);
        }
        acc * h
    }
}

/// `∫_0^U r^power g(r) dr`, split at the given breakpoints (points outside `(0, U)` are ignored).
pub fn radial_integral(
    g: impl FnMut(f64) -> f64,
    upper: f64,
    power: u32,
    breakpoints: &[f64],
    rule: &RadialRule,
) -> Result<f64> {
    if !(upper > 0.0) || !upper.is_finite() {
        return Err(invalid("radial upper limit must be positive and finite"));
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|b| *b > 0.0 && *b < upper).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    cuts.push(upper);
    let mut g = g;
    let mut start = 0.0;
    let mut total = 0.0;
    for end in cuts {
        total += rule.segment(start, end, power as i32, &mut g);
        start = end;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::gamma;
    use approx::assert_relative_eq;

    fn spec(nodes: usize, scheme: Scheme) -> QuadratureSpec {
        QuadratureSpec { sphere_nodes: nodes, scheme, ..QuadratureSpec::default() }
    }

    // ∫_{S^(m-1)} Π x_i^(2a_i) dσ = 2 Π Γ(a_i + 1/2) / Γ(Σ a_i + m/2).
    fn monomial_moment(exps: &[usize]) -> f64 {
        let m = exps.len() as f64;
        let num: f64 = exps.iter().map(|&a| gamma(a as f64 + 0.5)).product();
        let total: usize = exps.iter().sum();
        2.0 * num / gamma(total as f64 + m / 2.0)
    }

    #[test]
    fn zero_sphere_is_two_points() {
        let r = sphere_rule(1, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.nodes.as_slice(), &[1.0, -1.0]);
        assert_eq!(r.weights, [1.0, 1.0]);
        assert!(sphere_rule(0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn weights_sum_to_sphere_measure() {
        for m in 2..=7 {
            for scheme in [Scheme::ProductGauss, Scheme::RandomizedQmc] {
                let r = sphere_rule(m, &spec(4096, scheme)).unwrap();
                let sum: f64 = r.weights.iter().sum();
                assert_relative_eq!(sum, sphere_measure(m).unwrap(), max_relative = 1e-12);
                for (x, _) in r.iter() {
                    assert_relative_eq!(crate::linalg::norm(x), 1.0, epsilon = 1e-12);
                }
            }
        }
        let c = sphere_rule(2, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(c.weights.iter().sum::<f64>(), 2.0 * core::f64::consts::PI, max_relative = 1e-13);
    }

    #[test]
    fn constant_on_two_sphere() {
        let r = sphere_rule(3, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.integrate(|_| 1.0), 4.0 * core::f64::consts::PI, max_relative = 1e-3);
    }

    #[test]
    fn product_rule_is_exact_for_even_polynomials() {
        // All exponent patterns with total degree <= 6 (even per coordinate).
        for m in 2..=6 {
            let r = sphere_rule(m, &spec(4096, Scheme::ProductGauss)).unwrap();
            let mut patterns = alloc::vec![alloc::vec![0usize; m]];
            for _ in 0..3 {
                let mut next = Vec::new();
                for p in &patterns {
                    for i in 0..m {
                        let mut q = p.clone();
                        q[i] += 1;
                        next.push(q);
                    }
                }
                patterns.extend(next);
            }
            for p in patterns.iter().filter(|p| p.iter().sum::<usize>() <= 3) {
                let quad = r.integrate(|x| x.iter().zip(p).map(|(v, &a)| v.powi(2 * a as i32)).product());
                assert_relative_eq!(quad, monomial_moment(p), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn cubed_sphere_integrates_smooth_functions() {
        for m in 2..=4 {
            let r = sphere_rule(m, &spec(20_000, Scheme::CubedSphere)).unwrap();
            assert_relative_eq!(r.integrate(|_| 1.0), sphere_measure(m).unwrap(), max_relative = 1e-6);
            let quad = r.integrate(|x| x[0] * x[0]);
            assert_relative_eq!(quad, sphere_measure(m).unwrap() / m as f64, max_relative = 1e-6);
        }
    }

    #[test]
    fn odd_integrands_vanish() {
        for scheme in [Scheme::ProductGauss, Scheme::RandomizedQmc, Scheme::CubedSphere] {
            let r = sphere_rule(4, &spec(4096, scheme)).unwrap();
            let quad = r.integrate(|x| x[0] * x[1] * x[1] + x[2].powi(3) + x[3]);
            assert!(quad.abs() < 1e-12, "{scheme:?}: {quad}");
        }
    }

    #[test]
    fn rules_are_deterministic() {
        for scheme in [Scheme::ProductGauss, Scheme::RandomizedQmc] {
            let s = spec(1000, scheme);
            assert_eq!(sphere_rule(5, &s).unwrap(), sphere_rule(5, &s).unwrap());
        }
    }

    #[test]
    fn auto_resolution() {
        assert_eq!(Scheme::Auto.resolve(4, Symmetry::Box), Some(Scheme::CubedSphere));
        assert_eq!(Scheme::Auto.resolve(6, Symmetry::General), Some(Scheme::ProductGauss));
        assert_eq!(Scheme::Auto.resolve(6, Symmetry::Reflections), None);
        assert_eq!(Scheme::Auto.resolve(7, Symmetry::General), Some(Scheme::RandomizedQmc));
        assert_eq!(Scheme::ProductGauss.resolve(9, Symmetry::Box), Some(Scheme::ProductGauss));
        assert_eq!(Scheme::parse("cubed-sphere"), Some(Scheme::CubedSphere));
    }

    #[test]
    fn subsphere_examples() {
        let s = QuadratureSpec::default();
        let plane = Subspace::coordinate(3, &[0, 1]).unwrap();
        let r = subsphere_rule(&plane, &s).unwrap();
        assert_relative_eq!(r.integrate(|_| 1.0), 2.0 * core::f64::consts::PI, max_relative = 1e-13);
        let line = Subspace::coordinate(3, &[0]).unwrap();
        assert_relative_eq!(subsphere_rule(&line, &s).unwrap().integrate(|_| 1.0), 2.0);
        let h = crate::grassmann::haar_sample(4, 2, 11).unwrap();
        let u: Vec<f64> = h.column(0).iter().zip(h.column(1)).map(|(a, b)| 0.6 * a - 0.8 * b).collect();
        let odd = subsphere_rule(&h, &s).unwrap().integrate(|x| crate::linalg::dot(x, &u));
        assert!(odd.abs() < 1e-12);
    }

    #[test]
    fn radial_examples() {
        let rule = RadialRule::new(64);
        assert_relative_eq!(radial_integral(|_| 1.0, 1.0, 2, &[], &rule).unwrap(), 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(radial_integral(|_| 1.0, 2.0, 0, &[], &rule).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(radial_integral(|r| r, 1.0, 3, &[], &rule).unwrap(), 0.2, max_relative = 1e-14);
        assert!(radial_integral(|_| 1.0, 0.0, 1, &[], &rule).is_err());
    }

    #[test]
    fn breakpoints_remove_jump_error() {
        let rule = RadialRule::new(8);
        let step = |r: f64| if r <= 0.3 { 2.0 } else { 1.0 };
        let exact = 2.0 * 0.3f64.powi(3) / 3.0 + (1.0 - 0.3f64.powi(3)) / 3.0;
        let split = radial_integral(step, 1.0, 2, &[0.3, 5.0], &rule).unwrap();
        assert_relative_eq!(split, exact, max_relative = 1e-14);
        let naive = radial_integral(step, 1.0, 2, &[], &rule).unwrap();
        assert!((naive - exact).abs() > 1e-4);
    }
}
