//! Subspaces of `R^n` and budgeted maximization of section functionals over `Gr_{n-k}` and over
//! complex directions.

mod subspace;

pub use subspace::{haar_sample, haar_sample_with, Subspace, FRAME_TOL};

use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::StarBody;
use crate::density::Density;
use crate::error::{check_dim, invalid, Result};
use crate::linalg;
use crate::quadrature::{sphere_rule_for, QuadratureSpec, RadialRule, SphericalRule};
use crate::sections::{adapted_rule, base_symmetry, integrate_rays, Integrand};

/// Budget and schedule of the multistart local search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub evals: usize,
    /// Restart `i` uses seed `seed + i`.
    pub seed: u64,
    pub initial_step: f64,
    pub min_step: f64,
    /// Consecutive rejections before the step halves.
    pub patience: usize,
    /// Sphere nodes of the coarse rule used while searching.
    pub search_nodes: usize,
    pub search_radial_nodes: usize,
    /// Maximum number of restart-budget doublings.
    pub max_doublings: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            evals: 500,
            seed: 42,
            initial_step: 0.5,
            min_step: 1e-4,
            patience: 10,
            search_nodes: 512,
            search_radial_nodes: 16,
            max_doublings: 1,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.evals == 0 {
            return Err(invalid("search needs at least one restart and one evaluation"));
        }
        if !(self.initial_step > 0.0) || !(self.min_step > 0.0) {
            return Err(invalid("search steps must be positive"));
        }
        if self.search_nodes < 2 || self.search_radial_nodes < 2 {
            return Err(invalid("search rule needs at least two nodes"));
        }
        Ok(())
    }

    pub fn with_budget(&self, restarts: usize, evals: usize) -> Self {
        Self { restarts, evals, ..*self }
    }
}

/// A search domain with a cheap and an accurate objective.
pub trait Landscape {
    type Point: Clone;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Point;
    fn perturb(&self, p: &Self::Point, rng: &mut ChaCha8Rng, step: f64) -> Self::Point;
    /// Objective under the search rule.
    fn coarse(&self, p: &Self::Point) -> f64;
    /// Objective under the full quadrature spec.
    fn fine(&self, p: &Self::Point) -> f64;
}

#[derive(Debug, Clone)]
pub struct RestartOutcome<P> {
    pub index: usize,
    pub point: P,
    /// Fine objective at `point`.
    pub value: f64,
    pub trace: Vec<(usize, f64)>,
    pub evaluations: usize,
}

/// One restart: Haar start, then accept-if-better random perturbations with a halving step.
pub fn run_restart<L: Landscape>(land: &L, cfg: &SearchConfig, index: usize) -> RestartOutcome<L::Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(index as u64));
    let mut point = land.sample(&mut rng);
    let mut value = land.coarse(&point);
    let mut evaluations = 1;
    let mut trace = alloc::vec![(0, value)];
    let mut step = cfg.initial_step;
    let mut rejections = 0;
    while evaluations < cfg.evals && step >= cfg.min_step {
        let cand = land.perturb(&point, &mut rng, step);
        let v = land.coarse(&cand);
        evaluations += 1;
        if v > value {
            point = cand;
            value = v;
            rejections = 0;
            trace.push((evaluations - 1, value));
        } else {
            rejections += 1;
            if rejections >= cfg.patience {
                step *= 0.5;
                rejections = 0;
            }
        }
    }
    let value = land.fine(&point);
    RestartOutcome { index, point, value, trace, evaluations }
}

/// Position of the best outcome (largest value, then lowest restart index).
pub fn reduce<P>(outcomes: &[RestartOutcome<P>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, o) in outcomes.iter().enumerate() {
        best = match best {
            Some(b) if outcomes[b].value > o.value || (outcomes[b].value == o.value && outcomes[b].index < o.index) => Some(b),
            _ => Some(i),
        };
    }
    best
}

/// Outcome of a search.
#[derive(Debug, Clone)]
pub struct SearchOutcome<P> {
    pub best: RestartOutcome<P>,
    /// `(restart, value)` of every restart within `rel_tol` of the best.
    pub near_best: Vec<(usize, f64)>,
    pub restarts: usize,
    pub evaluations: usize,
    /// Relative gain of the best value over the last budget doubling.
    pub budget_change: f64,
    pub spread: f64,
}

/// Runs restarts `0..R`, then doubles the restart count while the best value still moves by at
/// least `rel_tol` (at most `max_doublings` times).
pub fn search<L: Landscape>(land: &L, cfg: &SearchConfig, rel_tol: f64) -> Result<SearchOutcome<L::Point>> {
    cfg.validate()?;
    let mut outcomes: Vec<RestartOutcome<L::Point>> = (0..cfg.restarts).map(|i| run_restart(land, cfg, i)).collect();
    let mut budget_change = 0.0;
    let mut doublings = 0;
    loop {
        let prev = outcomes[reduce(&outcomes).unwrap()].value;
        if doublings == cfg.max_doublings {
            break;
        }
        let start = outcomes.len();
        outcomes.extend((start..2 * start).map(|i| run_restart(land, cfg, i)));
        doublings += 1;
        let now = outcomes[reduce(&outcomes).unwrap()].value;
        budget_change = (now - prev) / prev.abs().max(f64::MIN_POSITIVE);
        if budget_change < rel_tol {
            break;
        }
    }
    let b = reduce(&outcomes).unwrap();
    let top = outcomes[b].value;
    let near_best = outcomes
        .iter()
        .filter(|o| top - o.value <= rel_tol * top.abs())
        .map(|o| (o.index, o.value))
        .collect();
    let lo = outcomes.iter().map(|o| o.value).fold(f64::INFINITY, f64::min);
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let restarts = outcomes.len();
    Ok(SearchOutcome { best: outcomes.swap_remove(b), near_best, restarts, evaluations, budget_change, spread: top - lo })
}

/// Best section found by [`max_section`] and friends.
#[derive(Debug, Clone)]
pub struct MaxSectionResult {
    pub best_subspace: Subspace,
    /// Normal (hyperplane search) or `ξ` (complex search) that produced `best_subspace`.
    pub best_direction: Option<Vec<f64>>,
    /// Section functional at `best_subspace` under the full spec.
    pub best_value: f64,
    /// `|value(spec.refined()) - best_value|`.
    pub est_error: f64,
    /// Accepted improvements of the winning restart, as `(evaluation, coarse value)`.
    pub trace: Vec<(usize, f64)>,
    pub evaluations: usize,
    pub best_restart: usize,
    pub restarts: usize,
    pub near_best: Vec<(usize, f64)>,
    pub budget_change: f64,
    /// Max minus min of the restart values.
    pub spread: f64,
}

/// Section functional on frames: `Σ_j w_j I(F y_j)` for a fixed rule `{y_j}` on `S^{d-1}`.
#[derive(Debug, Clone)]
pub struct SectionFunctional<'a> {
    body: &'a StarBody,
    integrand: Integrand<'a>,
    d: usize,
    coarse: (SphericalRule, RadialRule),
    fine: (SphericalRule, RadialRule),
    refined: (SphericalRule, RadialRule),
}

impl<'a> SectionFunctional<'a> {
    pub fn new(body: &'a StarBody, integrand: Integrand<'a>, d: usize, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<Self> {
        if let Integrand::Measure(f) | Integrand::Excess(f) = integrand {
            check_dim(body.dim(), f.dim())?;
        }
        if d == 0 || d >= body.dim() {
            return Err(invalid("section dimension must lie in 1..n-1"));
        }
        let coarse_spec = spec.with_nodes(cfg.search_nodes.min(spec.sphere_nodes), cfg.search_radial_nodes.min(spec.radial_nodes));
        let refined = spec.refined();
        let symmetry = base_symmetry(body, integrand.density(), false);
        let build = |s: &QuadratureSpec| -> Result<(SphericalRule, RadialRule)> { Ok((sphere_rule_for(d, s, symmetry)?, s.radial_rule())) };
        Ok(Self { body, integrand, d, coarse: build(&coarse_spec)?, fine: build(spec)?, refined: build(&refined)? })
    }

    fn eval(&self, rules: &(SphericalRule, RadialRule), frame: &DMatrix<f64>) -> f64 {
        integrate_rays(self.body, self.integrand, &adapted_rule(self.body, rules.0.clone(), Some(frame)), self.d, &rules.1)
    }

    pub fn coarse(&self, frame: &DMatrix<f64>) -> f64 {
        self.eval(&self.coarse, frame)
    }

    pub fn value(&self, frame: &DMatrix<f64>) -> f64 {
        self.eval(&self.fine, frame)
    }

    pub fn refined_value(&self, frame: &DMatrix<f64>) -> f64 {
        self.eval(&self.refined, frame)
    }
}

struct GrassmannLandscape<'a> {
    n: usize,
    k: usize,
    functional: SectionFunctional<'a>,
}

impl Landscape for GrassmannLandscape<'_> {
    type Point = Subspace;

    fn sample(&self, rng: &mut ChaCha8Rng) -> Subspace {
        haar_sample_with(self.n, self.k, rng).expect("k validated")
    }

    fn perturb(&self, p: &Subspace, rng: &mut ChaCha8Rng, step: f64) -> Subspace {
        p.givens_perturb(rng, step)
    }

    fn coarse(&self, p: &Subspace) -> f64 {
        self.functional.coarse(p.frame())
    }

    fn fine(&self, p: &Subspace) -> f64 {
        self.functional.value(p.frame())
    }
}

/// Rotates `u` towards a random orthogonal direction by a Gaussian angle of scale `step`.
pub fn perturb_direction(u: &[f64], rng: &mut ChaCha8Rng, step: f64) -> Vec<f64> {
    let h = Subspace::from_frame_unchecked(DMatrix::from_column_slice(u.len(), 1, u));
    h.givens_perturb(rng, step).column(0).to_vec()
}

struct DirectionLandscape<'a> {
    m: usize,
    frame_of: fn(&[f64]) -> Result<Subspace>,
    functional: SectionFunctional<'a>,
}

impl Landscape for DirectionLandscape<'_> {
    type Point = (Vec<f64>, Subspace);

    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Point {
        let u = linalg::random_unit(self.m, rng);
        let h = (self.frame_of)(&u).expect("unit direction");
        (u, h)
    }

    fn perturb(&self, p: &Self::Point, rng: &mut ChaCha8Rng, step: f64) -> Self::Point {
        let u = perturb_direction(&p.0, rng, step);
        let h = (self.frame_of)(&u).expect("unit direction");
        (u, h)
    }

    fn coarse(&self, p: &Self::Point) -> f64 {
        self.functional.coarse(p.1.frame())
    }

    fn fine(&self, p: &Self::Point) -> f64 {
        self.functional.value(p.1.frame())
    }
}

fn finish(
    out: SearchOutcome<impl Clone>,
    subspace: Subspace,
    direction: Option<Vec<f64>>,
    functional: &SectionFunctional<'_>,
) -> MaxSectionResult {
    let refined = functional.refined_value(subspace.frame());
    MaxSectionResult {
        est_error: (refined - out.best.value).abs(),
        best_value: out.best.value,
        best_subspace: subspace,
        best_direction: direction,
        trace: out.best.trace,
        evaluations: out.evaluations,
        best_restart: out.best.index,
        restarts: out.restarts,
        near_best: out.near_best,
        budget_change: out.budget_change,
        spread: out.spread,
    }
}

fn check_codim(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        Err(invalid("codimension k must satisfy 1 <= k <= n-1"))
    } else {
        Ok(())
    }
}

/// `max_{H ∈ Gr_{n-k}}` of a section integrand, by multistart search over frames.
pub fn max_section_of(body: &StarBody, integrand: Integrand<'_>, k: usize, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<MaxSectionResult> {
    let n = body.dim();
    check_codim(n, k)?;
    let functional = SectionFunctional::new(body, integrand, n - k, spec, cfg)?;
    let land = GrassmannLandscape { n, k, functional };
    let out = search(&land, cfg, spec.rel_tol)?;
    let h = out.best.point.clone();
    Ok(finish(out, h, None, &land.functional))
}

/// `max_{H ∈ Gr_{n-k}} μ(K ∩ H)`.
pub fn max_section(body: &StarBody, density: &Density, k: usize, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<MaxSectionResult> {
    max_section_of(body, Integrand::Measure(density), k, spec, cfg)
}

/// `max_{ξ ∈ S^{n-1}}` over hyperplanes `ξ^⊥`, searching normals directly.
pub fn max_hyperplane_section_of(body: &StarBody, integrand: Integrand<'_>, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<MaxSectionResult> {
    let n = body.dim();
    check_codim(n, 1)?;
    let functional = SectionFunctional::new(body, integrand, n - 1, spec, cfg)?;
    let land = DirectionLandscape { m: n, frame_of: Subspace::hyperplane, functional };
    let out = search(&land, cfg, spec.rel_tol)?;
    let (u, h) = out.best.point.clone();
    Ok(finish(out, h, Some(u), &land.functional))
}

pub fn max_hyperplane_section(body: &StarBody, density: &Density, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<MaxSectionResult> {
    max_hyperplane_section_of(body, Integrand::Measure(density), spec, cfg)
}

/// `max_{ξ ∈ S^{2n-1}}` over complex hyperplanes `H_ξ`. The body must be `R_θ`-invariant.
pub fn max_complex_section_of(body: &StarBody, integrand: Integrand<'_>, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<MaxSectionResult> {
    crate::complex::require_rtheta_invariant(body)?;
    let m = body.dim();
    let functional = SectionFunctional::new(body, integrand, m - 2, spec, cfg)?;
    let land = DirectionLandscape { m, frame_of: crate::complex::complex_hyperplane_frame, functional };
    let out = search(&land, cfg, spec.rel_tol)?;
    let (u, h) = out.best.point.clone();
    Ok(finish(out, h, Some(u), &land.functional))
}

/// `max_{ξ ∈ S^{2n-1}} μ(K ∩ H_ξ)`.
pub fn max_complex_section(body: &StarBody, density: &Density, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<MaxSectionResult> {
    max_complex_section_of(body, Integrand::Measure(density), spec, cfg)
}
