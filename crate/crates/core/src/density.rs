//! Even, non-negative densities on `R^n`.
//!
//! Every density is a shift plus a non-negative combination of radial profiles, each optionally
//! cut off by the indicator of a star body. Along a ray `rθ` the cut-off of a term is the radial
//! function of its bodies, so radial integrals split into smooth pieces.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::body::StarBody;
use crate::error::{check_dim, invalid, Result};
use crate::quadrature::RadialRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensityKind {
    Constant,
    RadialGaussian,
    RadialPolynomial,
    ShiftedIndicatorSum,
}

impl DensityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityKind::Constant => "constant",
            DensityKind::RadialGaussian => "radial-gaussian",
            DensityKind::RadialPolynomial => "radial-polynomial",
            DensityKind::ShiftedIndicatorSum => "shifted-indicator-sum",
        }
    }
}

/// Radial profile `φ(|x|)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// `exp(-|x|² / (2σ²))`, so the value at the origin is 1.
    Gaussian { sigma: f64 },
    /// `Σ_j c_j |x|^j` with non-negative coefficients.
    Polynomial(Vec<f64>),
}

impl Profile {
    fn validate(&self) -> Result<()> {
        match self {
            Profile::Constant(c) if !(c.is_finite() && *c >= 0.0) => Err(invalid("constant density must be finite and >= 0")),
            Profile::Gaussian { sigma } if !(sigma.is_finite() && *sigma > 0.0) => Err(invalid("gaussian width must be positive")),
            Profile::Polynomial(c) if c.is_empty() || c.iter().any(|v| !(v.is_finite() && *v >= 0.0)) => {
                Err(invalid("radial polynomial needs finite non-negative coefficients"))
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn at(&self, r: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Gaussian { sigma } => (-(r * r) / (2.0 * sigma * sigma)).exp(),
            Profile::Polynomial(c) => c.iter().rev().fold(0.0, |acc, v| acc * r + v),
        }
    }

    /// `∫_0^u r^power φ(r) dr`; closed forms for constants and polynomials.
    fn radial(&self, u: f64, power: u32, rule: &RadialRule) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        match self {
            Profile::Constant(c) => c * u.powi(power as i32 + 1) / (power as f64 + 1.0),
            Profile::Polynomial(coeffs) => coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let e = power as i32 + j as i32 + 1;
                    c * u.powi(e) / e as f64
                })
                .sum(),
            Profile::Gaussian { .. } => rule.segment(0.0, u, power as i32, |r| self.at(r)),
        }
    }
}

/// One term `weight · χ_{B_1 ∩ … ∩ B_m} · φ`.
#[derive(Debug, Clone)]
pub struct Term {
    pub weight: f64,
    pub bodies: Vec<StarBody>,
    pub profile: Profile,
}

#[derive(Debug, Clone)]
pub struct Density {
    dim: usize,
    kind: DensityKind,
    shift: f64,
    terms: Vec<Term>,
}

impl Density {
    fn single(dim: usize, kind: DensityKind, profile: Profile) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        profile.validate()?;
        Ok(Self { dim, kind, shift: 0.0, terms: alloc::vec![Term { weight: 1.0, bodies: Vec::new(), profile }] })
    }

    pub fn constant(dim: usize, c: f64) -> Result<Self> {
        Self::single(dim, DensityKind::Constant, Profile::Constant(c))
    }

    pub fn radial_gaussian(dim: usize, sigma: f64) -> Result<Self> {
        Self::single(dim, DensityKind::RadialGaussian, Profile::Gaussian { sigma })
    }

    /// `Σ_j coefficients[j] · |x|^j`.
    pub fn radial_polynomial(dim: usize, coefficients: Vec<f64>) -> Result<Self> {
        Self::single(dim, DensityKind::RadialPolynomial, Profile::Polynomial(coefficients))
    }

    /// `shift + Σ_i weight_i · χ_{B_i} · g_i`, with `B_i = None` meaning no cut-off. Nested sums are flattened.
    pub fn shifted_indicator_sum(dim: usize, shift: f64, parts: Vec<(f64, Option<StarBody>, Density)>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if !(shift.is_finite() && shift >= 0.0) {
            return Err(invalid("shift must be finite and >= 0"));
        }
        let mut terms = Vec::new();
        let mut extra_shift_terms = Vec::new();
        for (weight, body, density) in parts {
            if !(weight.is_finite() && weight >= 0.0) {
                return Err(invalid("indicator weights must be finite and >= 0"));
            }
            check_dim(dim, density.dim)?;
            if let Some(b) = &body {
                check_dim(dim, b.dim())?;
            }
            // weight·χ_B·(s + Σ w_t χ_{B_t} φ_t) = weight·s·χ_B + Σ weight·w_t·χ_{B ∩ B_t} φ_t.
            if density.shift != 0.0 {
                extra_shift_terms.push(Term {
                    weight: weight * density.shift,
                    bodies: body.iter().cloned().collect(),
                    profile: Profile::Constant(1.0),
                });
            }
            for t in density.terms {
                let mut bodies = t.bodies;
                bodies.extend(body.iter().cloned());
                terms.push(Term { weight: weight * t.weight, bodies, profile: t.profile });
            }
        }
        terms.extend(extra_shift_terms);
        Ok(Self { dim, kind: DensityKind::ShiftedIndicatorSum, shift, terms })
    }

    /// `χ_outer + g · χ_inner`: the density that turns a slicing bound into a stability bound.
    pub fn indicator_plus(outer: &StarBody, inner: &StarBody, g: &Density) -> Result<Self> {
        let dim = outer.dim();
        Self::shifted_indicator_sum(
            dim,
            0.0,
            alloc::vec![
                (1.0, Some(outer.clone()), Density::constant(dim, 1.0)?),
                (1.0, Some(inner.clone()), g.clone()),
            ],
        )
    }

    /// `1 + t · g`.
    pub fn one_plus(g: &Density, t: f64) -> Result<Self> {
        Self::shifted_indicator_sum(g.dim, 1.0, alloc::vec![(t, None, g.clone())])
    }

    /// Invariance under every coordinate reflection (profiles are radial, so only the cut-off bodies matter).
    pub fn is_unconditional(&self) -> bool {
        self.terms.iter().all(|t| t.bodies.iter().all(StarBody::is_unconditional))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// True when the density is the constant 1 everywhere.
    pub fn is_unit(&self) -> bool {
        let total: f64 = self.shift
            + self
                .terms
                .iter()
                .map(|t| match (&t.profile, t.bodies.is_empty()) {
                    (Profile::Constant(c), true) => t.weight * c,
                    _ => f64::NAN,
                })
                .sum::<f64>();
        total == 1.0
    }

    /// True when the value depends on `|x|` only (no indicator cut-offs).
    pub fn is_radial(&self) -> bool {
        self.terms.iter().all(|t| t.bodies.is_empty())
    }

    /// Pointwise value `f(x)`.
    pub fn density_eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.value(x))
    }

    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        let r = crate::linalg::norm(x);
        self.shift
            + self
                .terms
                .iter()
                .filter(|t| t.bodies.iter().all(|b| b.gauge(x) <= 1.0))
                .map(|t| t.weight * t.profile.at(r))
                .sum::<f64>()
    }

    /// `∫_0^upper r^power f(rθ) dr` for a unit direction `θ`.
    pub fn ray_integral(&self, theta: &[f64], upper: f64, power: u32, rule: &RadialRule) -> f64 {
        let mut total = self.shift * upper.powi(power as i32 + 1) / (power as f64 + 1.0);
        for t in &self.terms {
            let cut = t.bodies.iter().map(|b| 1.0 / b.gauge(theta)).fold(upper, f64::min);
            total += t.weight * t.profile.radial(cut, power, rule);
        }
        total
    }

    /// Radii along `θ` where the density jumps.
    pub fn breakpoints(&self, theta: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for t in &self.terms {
            out.extend(t.bodies.iter().map(|b| 1.0 / b.gauge(theta)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::radial_integral;
    use approx::assert_relative_eq;
    use std::vec;

    #[test]
    fn eval_examples() {
        assert_eq!(Density::constant(3, 1.0).unwrap().density_eval(&[4.0, -1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(Density::radial_gaussian(3, 1.0).unwrap().density_eval(&[0.0; 3]).unwrap(), 1.0);
        let k = StarBody::euclidean_ball(2).unwrap();
        let l = StarBody::cube(2).unwrap();
        let g = Density::radial_gaussian(2, 1.0).unwrap();
        let f = Density::indicator_plus(&k, &l, &g).unwrap();
        assert_eq!(f.density_eval(&[3.0, 0.0]).unwrap(), 0.0);
        assert_eq!(f.density_eval(&[0.0, 0.0]).unwrap(), 2.0);
        assert_relative_eq!(f.density_eval(&[0.9, 0.9]).unwrap(), (-0.81f64).exp());
        assert!(f.density_eval(&[0.0]).is_err());
    }

    #[test]
    fn polynomial_and_shift() {
        let p = Density::radial_polynomial(2, vec![1.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(p.density_eval(&[1.0, 1.0]).unwrap(), 3.0, max_relative = 1e-15);
        let g = Density::radial_gaussian(2, core::f64::consts::FRAC_1_SQRT_2).unwrap();
        let f = Density::one_plus(&g, 0.5).unwrap();
        assert_relative_eq!(f.density_eval(&[1.0, 0.0]).unwrap(), 1.0 + 0.5 * (-1.0f64).exp(), max_relative = 1e-15);
        assert!(Density::constant(2, 1.0).unwrap().is_unit());
        assert!(!f.is_unit());
    }

    #[test]
    fn rejects_negative_data() {
        assert!(Density::constant(2, -1.0).is_err());
        assert!(Density::radial_gaussian(2, 0.0).is_err());
        assert!(Density::radial_polynomial(2, vec![1.0, -0.5]).is_err());
        assert!(Density::shifted_indicator_sum(2, -1.0, vec![]).is_err());
    }

    #[test]
    fn ray_integral_matches_piecewise_quadrature() {
        let k = StarBody::scaled(StarBody::euclidean_ball(3).unwrap(), 2.0).unwrap();
        let l = StarBody::lp_ball(3, 1.0).unwrap();
        let g = Density::radial_gaussian(3, 0.7).unwrap();
        let f = Density::indicator_plus(&k, &l, &g).unwrap();
        let rule = RadialRule::new(48);
        let theta = [0.48, -0.6, 0.64];
        let upper = k.radial_function(&theta).unwrap();
        let mut cuts = Vec::new();
        f.breakpoints(&theta, &mut cuts);
        let direct = radial_integral(|r| f.value(&theta.map(|v| r * v)), upper, 2, &cuts, &rule).unwrap();
        assert_relative_eq!(f.ray_integral(&theta, upper, 2, &rule), direct, max_relative = 1e-13);
    }

    #[test]
    fn nested_sums_flatten() {
        let b = StarBody::euclidean_ball(2).unwrap();
        let inner = Density::one_plus(&Density::radial_gaussian(2, 1.0).unwrap(), 2.0).unwrap();
        let f = Density::shifted_indicator_sum(2, 0.5, vec![(3.0, Some(b), inner)]).unwrap();
        let x = [0.3, 0.4];
        let expect = 0.5 + 3.0 * (1.0 + 2.0 * (-0.125f64).exp());
        assert_relative_eq!(f.density_eval(&x).unwrap(), expect, max_relative = 1e-15);
        assert_eq!(f.density_eval(&[2.0, 0.0]).unwrap(), 0.5);
    }
}
