//! JSON descriptions of bodies and densities.
//!
//! ```
//! use slicing::BodySpec;
//! let spec: BodySpec = serde_json::from_str(r#"{"kind":"lp-ball","p":1.0,"dim":5}"#).unwrap();
//! assert_eq!(spec.build(5).unwrap().dim(), 5);
//! ```

use serde::{Deserialize, Serialize};
use slicing_core::{rtheta_symmetrize, Density, StarBody};

use crate::error::{Result, SlicingError};

fn default_theta_nodes() -> usize {
    64
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BodySpec {
    #[serde(alias = "ball")]
    EuclideanBall {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    /// Either a full SPD `matrix` or its `diag`.
    Ellipsoid {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        diag: Option<Vec<f64>>,
    },
    LpBall {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    /// `[-1,1]^n`.
    Cube {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    SlabPolytope { normals: Vec<Vec<f64>> },
    /// `dim` is the real dimension `2n`.
    ComplexLpBall {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    RthetaSymmetrized {
        body: Box<BodySpec>,
        #[serde(default = "default_theta_nodes")]
        theta_nodes: usize,
    },
    Scaled { body: Box<BodySpec>, scale: f64 },
}

impl BodySpec {
    pub fn ball() -> Self {
        BodySpec::EuclideanBall { dim: None }
    }

    pub fn cube() -> Self {
        BodySpec::Cube { dim: None }
    }

    pub fn lp(p: f64) -> Self {
        BodySpec::LpBall { p, dim: None }
    }

    pub fn complex_lp(p: f64) -> Self {
        BodySpec::ComplexLpBall { p, dim: None }
    }

    pub fn ellipsoid_diag(diag: Vec<f64>) -> Self {
        BodySpec::Ellipsoid { matrix: None, diag: Some(diag) }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BodySpec::EuclideanBall { .. } => "euclidean-ball",
            BodySpec::Ellipsoid { .. } => "ellipsoid",
            BodySpec::LpBall { .. } => "lp-ball",
            BodySpec::Cube { .. } => "cube",
            BodySpec::SlabPolytope { .. } => "slab-polytope",
            BodySpec::ComplexLpBall { .. } => "complex-lp-ball",
            BodySpec::RthetaSymmetrized { .. } => "rtheta-symmetrized",
            BodySpec::Scaled { .. } => "scaled",
        }
    }

    /// The dimension pinned by the spec itself, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            BodySpec::EuclideanBall { dim } | BodySpec::LpBall { dim, .. } | BodySpec::Cube { dim } | BodySpec::ComplexLpBall { dim, .. } => *dim,
            BodySpec::Ellipsoid { matrix, diag } => matrix.as_ref().map(Vec::len).or(diag.as_ref().map(Vec::len)),
            BodySpec::SlabPolytope { normals } => normals.first().map(Vec::len),
            BodySpec::RthetaSymmetrized { body, .. } | BodySpec::Scaled { body, .. } => body.fixed_dim(),
        }
    }

    /// Builds the body in real dimension `dim`.
    pub fn build(&self, dim: usize) -> Result<StarBody> {
        self.build_at(dim, "body")
    }

    pub(crate) fn build_at(&self, dim: usize, location: &str) -> Result<StarBody> {
        if let Some(d) = self.fixed_dim() {
            if d != dim {
                return Err(SlicingError::usage(location, format!("{} has dimension {d}, requested {dim}", self.name())));
            }
        }
        let at = |e| SlicingError::at(location, e);
        match self {
            BodySpec::EuclideanBall { .. } => StarBody::euclidean_ball(dim).map_err(at),
            BodySpec::Ellipsoid { matrix, diag } => match (matrix, diag) {
                (Some(m), None) => StarBody::ellipsoid(m).map_err(at),
                (None, Some(d)) => StarBody::ellipsoid_diag(d).map_err(at),
                _ => Err(SlicingError::usage(location, "ellipsoid needs exactly one of `matrix` and `diag`")),
            },
            BodySpec::LpBall { p, .. } => StarBody::lp_ball(dim, *p).map_err(at),
            BodySpec::Cube { .. } => StarBody::cube(dim).map_err(at),
            BodySpec::SlabPolytope { normals } => StarBody::slab_polytope(normals).map_err(at),
            BodySpec::ComplexLpBall { p, .. } => {
                if dim % 2 != 0 {
                    return Err(SlicingError::usage(location, format!("complex-lp-ball needs an even real dimension, got {dim}")));
                }
                StarBody::complex_lp_ball(dim / 2, *p).map_err(at)
            }
            BodySpec::RthetaSymmetrized { body, theta_nodes } => {
                let inner = body.build_at(dim, &format!("{location}.body"))?;
                rtheta_symmetrize(&inner, *theta_nodes).map_err(at)
            }
            BodySpec::Scaled { body, scale } => {
                let inner = body.build_at(dim, &format!("{location}.body"))?;
                StarBody::scaled(inner, *scale).map_err(at)
            }
        }
    }
}

/// One summand `weight · χ_body · density`; a missing body means no cut-off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default = "one")]
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodySpec>,
    pub density: DensitySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensitySpec {
    Constant {
        #[serde(default = "one")]
        c: f64,
    },
    /// `exp(-|x|²/(2σ²))`.
    RadialGaussian { sigma: f64 },
    /// `Σ_j coefficients[j] |x|^j`.
    RadialPolynomial { coefficients: Vec<f64> },
    ShiftedIndicatorSum {
        #[serde(default)]
        shift: f64,
        terms: Vec<TermSpec>,
    },
}

impl DensitySpec {
    pub fn one() -> Self {
        DensitySpec::Constant { c: 1.0 }
    }

    /// `1 + t · inner`.
    pub fn one_plus(inner: DensitySpec, t: f64) -> Self {
        DensitySpec::ShiftedIndicatorSum { shift: 1.0, terms: vec![TermSpec { weight: t, body: None, density: inner }] }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DensitySpec::Constant { .. } => "constant",
            DensitySpec::RadialGaussian { .. } => "radial-gaussian",
            DensitySpec::RadialPolynomial { .. } => "radial-polynomial",
            DensitySpec::ShiftedIndicatorSum { .. } => "shifted-indicator-sum",
        }
    }

    pub fn build(&self, dim: usize) -> Result<Density> {
        self.build_at(dim, "density")
    }

    pub(crate) fn build_at(&self, dim: usize, location: &str) -> Result<Density> {
        let at = |e| SlicingError::at(location, e);
        match self {
            DensitySpec::Constant { c } => Density::constant(dim, *c).map_err(at),
            DensitySpec::RadialGaussian { sigma } => Density::radial_gaussian(dim, *sigma).map_err(at),
            DensitySpec::RadialPolynomial { coefficients } => Density::radial_polynomial(dim, coefficients.clone()).map_err(at),
            DensitySpec::ShiftedIndicatorSum { shift, terms } => {
                let mut parts = Vec::with_capacity(terms.len());
                for (i, t) in terms.iter().enumerate() {
                    let here = format!("{location}.terms[{i}]");
                    let body = t.body.as_ref().map(|b| b.build_at(dim, &format!("{here}.body"))).transpose()?;
                    parts.push((t.weight, body, t.density.build_at(dim, &format!("{here}.density"))?));
                }
                Density::shifted_indicator_sum(dim, *shift, parts).map_err(at)
            }
        }
    }
}

/// Parses a body spec, reporting the failing line and column.
pub fn parse_body(text: &str) -> Result<BodySpec> {
    serde_json::from_str(text).map_err(|e| SlicingError::usage(format!("body line {} column {}", e.line(), e.column()), e.to_string()))
}

pub fn parse_density(text: &str) -> Result<DensitySpec> {
    serde_json::from_str(text).map_err(|e| SlicingError::usage(format!("density line {} column {}", e.line(), e.column()), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_examples_parse() {
        let b = parse_body(r#"{"kind":"lp-ball","p":1.0,"dim":5}"#).unwrap();
        assert_eq!(b, BodySpec::LpBall { p: 1.0, dim: Some(5) });
        let e = parse_body(r#"{"kind":"ellipsoid","matrix":[[1,0],[0,4]]}"#).unwrap();
        let body = e.build(2).unwrap();
        assert!((body.minkowski_functional(&[0.0, 1.0]).unwrap() - 2.0).abs() < 1e-15);
        let d = parse_density(r#"{"kind":"radial-gaussian","sigma":1.0}"#).unwrap();
        assert_eq!(d.build(3).unwrap().dim(), 3);
        assert_eq!(parse_body(r#"{"kind":"ball"}"#).unwrap(), BodySpec::ball());
    }

    #[test]
    fn nested_specs_build() {
        let s = parse_body(r#"{"kind":"scaled","scale":3,"body":{"kind":"euclidean-ball"}}"#).unwrap();
        let b = s.build(4).unwrap();
        assert!((b.radial_function(&[0.0, 1.0, 0.0, 0.0]).unwrap() - 3.0).abs() < 1e-14);
        let sym = parse_body(r#"{"kind":"rtheta-symmetrized","body":{"kind":"ellipsoid","diag":[1,1,4,4]}}"#).unwrap();
        assert_eq!(sym.build(4).unwrap().dim(), 4);
        let f = parse_density(
            r#"{"kind":"shifted-indicator-sum","shift":1,"terms":[{"weight":0.5,"body":{"kind":"cube"},"density":{"kind":"radial-polynomial","coefficients":[0,0,1]}}]}"#,
        )
        .unwrap();
        let f = f.build(2).unwrap();
        assert!((f.density_eval(&[0.5, 0.5]).unwrap() - 1.25).abs() < 1e-15);
        assert!((f.density_eval(&[2.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_locations() {
        let err = parse_body(r#"{"kind":"lp-ball","dim":3}"#).unwrap_err();
        assert!(matches!(err, SlicingError::Usage { .. }));
        let err = parse_body("{\"kind\":\n\"torus\"}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = BodySpec::Scaled { body: Box::new(BodySpec::lp(0.5)), scale: 2.0 }.build(3).unwrap_err();
        assert!(err.to_string().contains("body.body"), "{err}");
        let err = BodySpec::ellipsoid_diag(vec![1.0, 2.0]).build(3).unwrap_err();
        assert!(err.to_string().contains("dimension 2"), "{err}");
        assert!(BodySpec::complex_lp(1.0).build(5).is_err());
    }

    #[test]
    fn specs_round_trip() {
        let specs = vec![
            BodySpec::ball(),
            BodySpec::ellipsoid_diag(vec![1.0, 0.25, 1.0 / 9.0]),
            BodySpec::RthetaSymmetrized { body: Box::new(BodySpec::cube()), theta_nodes: 64 },
            BodySpec::SlabPolytope { normals: vec![vec![1.0, 0.1], vec![0.0, 1.0]] },
        ];
        for s in specs {
            let text = serde_json::to_string(&s).unwrap();
            assert_eq!(parse_body(&text).unwrap(), s);
        }
        let d = DensitySpec::one_plus(DensitySpec::RadialGaussian { sigma: std::f64::consts::FRAC_1_SQRT_2 }, 0.5);
        assert_eq!(parse_density(&serde_json::to_string(&d).unwrap()).unwrap(), d);
    }
}
