use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use slicing_core::{QuadratureSpec, Scheme, SearchConfig, Theorem};

use crate::error::{Result, SlicingError};
use crate::spec::{BodySpec, DensitySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Integrate,
    Oracle,
    Constants,
    Sandwich,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TheoremArg {
    Thm1,
    Km,
    Thm2,
    Thm3,
    Thm4,
}

impl TheoremArg {
    pub fn core(self) -> Theorem {
        match self {
            TheoremArg::Thm1 => Theorem::Thm1,
            TheoremArg::Km => Theorem::Km,
            TheoremArg::Thm2 => Theorem::Thm2,
            TheoremArg::Thm3 => Theorem::Thm3,
            TheoremArg::Thm4 => Theorem::Thm4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    #[default]
    Auto,
    ProductGauss,
    CubedSphere,
    RandomizedQmc,
}

impl SchemeArg {
    pub fn core(self) -> Scheme {
        match self {
            SchemeArg::Auto => Scheme::Auto,
            SchemeArg::ProductGauss => Scheme::ProductGauss,
            SchemeArg::CubedSphere => Scheme::CubedSphere,
            SchemeArg::RandomizedQmc => Scheme::RandomizedQmc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    pub sphere_nodes: usize,
    pub radial_nodes: usize,
    pub rel_tol: f64,
    pub scheme: SchemeArg,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        let d = QuadratureSpec::default();
        Self { sphere_nodes: d.sphere_nodes, radial_nodes: d.radial_nodes, rel_tol: d.rel_tol, scheme: SchemeArg::Auto }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSettings {
    pub restarts: usize,
    pub evals: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub patience: usize,
    pub search_nodes: usize,
    pub search_radial_nodes: usize,
    pub max_doublings: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        let d = SearchConfig::default();
        Self {
            restarts: d.restarts,
            evals: d.evals,
            initial_step: d.initial_step,
            min_step: d.min_step,
            patience: d.patience,
            search_nodes: d.search_nodes,
            search_radial_nodes: d.search_radial_nodes,
            max_doublings: d.max_doublings,
        }
    }
}

fn default_seed() -> u64 {
    42
}

fn default_samples() -> usize {
    1_000_000
}

/// Everything one run needs. For `verify`/`sweep` with a complex theorem, `dims` are complex dimensions;
/// everywhere else they are real dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremArg>,
    #[serde(default)]
    pub bodies: Vec<BodySpec>,
    #[serde(default)]
    pub densities: Vec<DensitySpec>,
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub codims: Vec<usize>,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
    #[serde(default)]
    pub search: SearchSettings,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Monte Carlo sample count for `oracle`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Replay the proof of the slicing theorems step by step.
    #[serde(default)]
    pub replay: bool,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            theorem: None,
            bodies: Vec::new(),
            densities: Vec::new(),
            dims: Vec::new(),
            codims: Vec::new(),
            quadrature: QuadratureSettings::default(),
            search: SearchSettings::default(),
            seed: default_seed(),
            samples: default_samples(),
            replay: false,
            format: Format::Json,
            out: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| SlicingError::usage(format!("config line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            SlicingError::Usage { location, message } => SlicingError::usage(format!("{}: {location}", path.display()), message),
            other => other,
        })
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        let q = &self.quadrature;
        QuadratureSpec { sphere_nodes: q.sphere_nodes, radial_nodes: q.radial_nodes, seed: self.seed, scheme: q.scheme.core(), rel_tol: q.rel_tol }
    }

    pub fn search_config(&self) -> SearchConfig {
        let s = &self.search;
        SearchConfig {
            restarts: s.restarts,
            evals: s.evals,
            seed: self.seed,
            initial_step: s.initial_step,
            min_step: s.min_step,
            patience: s.patience,
            search_nodes: s.search_nodes,
            search_radial_nodes: s.search_radial_nodes,
            max_doublings: s.max_doublings,
        }
    }

    /// The density list, defaulting to `f = 1`.
    pub fn densities_or_default(&self) -> Vec<DensitySpec> {
        if self.densities.is_empty() {
            vec![DensitySpec::one()]
        } else {
            self.densities.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let q = &self.quadrature;
        if q.sphere_nodes < 2 || q.radial_nodes < 2 {
            return Err(SlicingError::usage("quadrature", "node counts must be at least 2"));
        }
        if !(q.rel_tol > 0.0) {
            return Err(SlicingError::usage("quadrature.rel_tol", "must be positive"));
        }
        self.search_config().validate().map_err(|e| SlicingError::at("search", e))?;
        if self.samples == 0 {
            return Err(SlicingError::usage("samples", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips() {
        let mut c = RunConfig::new(Command::Sweep);
        c.theorem = Some(TheoremArg::Thm2);
        c.bodies = vec![BodySpec::ball(), BodySpec::ellipsoid_diag(vec![0.1, 1.0 / 3.0, 7.25])];
        c.densities = vec![DensitySpec::one_plus(DensitySpec::RadialGaussian { sigma: 0.1 + 0.2 }, 0.5)];
        c.dims = vec![3, 4];
        c.codims = vec![1, 2];
        c.quadrature.rel_tol = 1e-5 / 3.0;
        c.format = Format::Csv;
        c.out = Some("out.csv".into());
        let text = c.emit();
        assert_eq!(RunConfig::parse(&text).unwrap(), c);
        assert_eq!(RunConfig::parse(&text).unwrap().emit(), text);
    }

    #[test]
    fn defaults_fill_missing_fields() {
        let c = RunConfig::parse(r#"{"command":"verify","theorem":"km"}"#).unwrap();
        assert_eq!(c.seed, 42);
        assert_eq!(c.quadrature_spec(), QuadratureSpec::default());
        assert_eq!(c.search_config(), SearchConfig::default());
        assert_eq!(c.densities_or_default(), vec![DensitySpec::one()]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = RunConfig::parse("{\"command\":\"verify\",\n \"bodys\":[]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(RunConfig::parse(r#"{"command":"verify","theorem":"thm9"}"#).is_err());
    }
}
