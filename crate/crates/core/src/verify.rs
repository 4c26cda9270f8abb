//! Numerical checks of the stability and slicing inequalities, with optional replay of the
//! intermediate steps of their proofs.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::{Shape, StarBody};
use crate::complex::{self, THETA_NODES};
use crate::constants::{sphere_measure, Factor, SlicingConstants};
use crate::density::Density;
use crate::error::{check_dim, invalid, Error, Result};
use crate::grassmann::{
    max_complex_section, max_complex_section_of, max_section, max_section_of, MaxSectionResult, SearchConfig, Subspace,
};
use crate::john::{check_sandwich, sandwich_ellipsoid, SANDWICH_TOL};
use crate::linalg;
use crate::quadrature::QuadratureSpec;
use crate::sections::{body_measure, body_volume, polar_integral, section_excess, IntegralResult, Integrand};

/// Multiplier turning doubling-based error estimates into a pass margin.
pub const ERROR_SAFETY: f64 = 3.0;
/// Floor of every margin, covering floating-point rounding.
pub const MARGIN_FLOOR: f64 = 1e-12;
const LOWER_BOUND_SAMPLES: usize = 4096;
const SANDWICH_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Real stability: `∫_K f <= |K| + n/(n-k) c_{n,k} |K|^{k/n} ε`.
    Thm1,
    /// `μ(L) <= n/(n-k) c_{n,k} max_H μ(L∩H) |L|^{k/n}` for generalized k-intersection bodies.
    Km,
    /// Real slicing with the extra factor `n^{k/2}`.
    Thm2,
    /// Complex stability with `n/(n-1) d_n`.
    Thm3,
    /// Complex slicing with `2n · n/(n-1) d_n`.
    Thm4,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [Theorem::Thm1, Theorem::Km, Theorem::Thm2, Theorem::Thm3, Theorem::Thm4];

    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::Thm1 => "thm1",
            Theorem::Km => "km",
            Theorem::Thm2 => "thm2",
            Theorem::Thm3 => "thm3",
            Theorem::Thm4 => "thm4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Theorem::Thm3 | Theorem::Thm4)
    }

    pub fn is_stability(self) -> bool {
        matches!(self, Theorem::Thm1 | Theorem::Thm3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        }
    }
}

/// One intermediate inequality (or identity) of a proof, evaluated numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofStep {
    pub name: &'static str,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// Relative tolerance used.
    pub tol: f64,
    pub holds: bool,
}

impl ProofStep {
    pub fn new(name: &'static str, relation: Relation, lhs: f64, rhs: f64, tol: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let slack = tol * scale;
        let holds = match relation {
            Relation::Le => lhs <= rhs + slack,
            Relation::Ge => lhs + slack >= rhs,
            Relation::Eq => (lhs - rhs).abs() <= slack,
        };
        Self { name, relation, lhs, rhs, tol, holds: holds && lhs.is_finite() && rhs.is_finite() }
    }
}

/// Budget actually spent by the search behind a report.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SearchSummary {
    pub restarts: usize,
    pub evaluations: usize,
    pub budget_change: f64,
    pub spread: f64,
}

impl From<&MaxSectionResult> for SearchSummary {
    fn from(r: &MaxSectionResult) -> Self {
        Self { restarts: r.restarts, evaluations: r.evaluations, budget_change: r.budget_change, spread: r.spread }
    }
}

/// Both sides of one theorem instance.
///
/// For the complex theorems `n` is the complex dimension (the body lives in `R^{2n}`) and `k = 1`.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub n: usize,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Measured `ε` for the stability theorems, 0 otherwise.
    pub epsilon: f64,
    /// The maximal section value found (equals `epsilon` for the stability theorems).
    pub max_section: f64,
    pub witness: Subspace,
    pub witness_direction: Option<Vec<f64>>,
    pub constants: SlicingConstants,
    /// Estimated relative error of `ratio`.
    pub est_error: f64,
    pub margin: f64,
    /// `ratio <= 1 + margin` and every proof step holds.
    pub pass: bool,
    pub steps: Vec<ProofStep>,
    pub search: SearchSummary,
    pub seed: u64,
}

impl VerificationReport {
    pub fn steps_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn step(&self, name: &str) -> Option<&ProofStep> {
        self.steps.iter().find(|s| s.name == name)
    }
}

fn rel(r: &IntegralResult) -> f64 {
    r.rel_error()
}

struct Sides {
    lhs: f64,
    rhs: f64,
    /// Relative error of the ratio.
    err: f64,
}

#[allow(clippy::too_many_arguments)]
fn finish(
    theorem: Theorem,
    n: usize,
    k: usize,
    sides: Sides,
    epsilon: f64,
    best: MaxSectionResult,
    constants: SlicingConstants,
    steps: Vec<ProofStep>,
    seed: u64,
) -> Result<VerificationReport> {
    let ratio = sides.lhs / sides.rhs;
    if !ratio.is_finite() || !sides.err.is_finite() {
        return Err(Error::Unbounded);
    }
    let margin = ERROR_SAFETY * sides.err + MARGIN_FLOOR;
    let pass = ratio <= 1.0 + margin && steps.iter().all(|s| s.holds);
    Ok(VerificationReport {
        theorem,
        n,
        k,
        lhs: sides.lhs,
        rhs: sides.rhs,
        ratio,
        epsilon,
        max_section: best.best_value,
        search: SearchSummary::from(&best),
        witness: best.best_subspace,
        witness_direction: best.best_direction,
        constants,
        est_error: sides.err,
        margin,
        pass,
        steps,
        seed,
    })
}

/// Whether the body is a ball or an ellipsoid (possibly scaled), hence a generalized k-intersection body for every k.
pub fn is_certified_real(body: &StarBody) -> bool {
    let (base, _) = body.base();
    match base.shape() {
        Shape::Ball | Shape::Ellipsoid { .. } => true,
        Shape::Lp { p } => *p == 2.0,
        Shape::ComplexLp { p } => *p == 2.0,
        _ => false,
    }
}

/// Whether the body is a ball, an `R_θ`-invariant ellipsoid, or the `R_θ`-symmetrization of an ellipsoid.
pub fn is_certified_complex(body: &StarBody) -> bool {
    if body.dim() % 2 != 0 || body.dim() < 4 {
        return false;
    }
    let (base, _) = body.base();
    match base.shape() {
        Shape::Ellipsoid { .. } => complex::require_rtheta_invariant(base).is_ok(),
        Shape::Symmetrized { inner, .. } => is_certified_real(inner),
        _ => is_certified_real(base),
    }
}

/// Smallest density value over sampled points of the body (origin, interior and boundary).
pub fn density_lower_bound(body: &StarBody, density: &Density, samples: usize, seed: u64) -> Result<f64> {
    check_dim(body.dim(), density.dim())?;
    let n = body.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lo = density.value(&alloc::vec![0.0; n]);
    for i in 0..samples {
        let theta = linalg::random_unit(n, &mut rng);
        let rho = 1.0 / body.gauge(&theta);
        let t = if i % 4 == 0 { 1.0 } else { rng.random::<f64>().powf(1.0 / n as f64) };
        let x: Vec<f64> = theta.iter().map(|v| v * rho * t).collect();
        lo = lo.min(density.value(&x));
    }
    Ok(lo)
}

fn require_at_least_one(body: &StarBody, f: &Density) -> Result<()> {
    let lo = density_lower_bound(body, f, LOWER_BOUND_SAMPLES, 0x1b)?;
    if lo < 1.0 - 1e-9 {
        Err(Error::DensityBelowOne { value: lo })
    } else {
        Ok(())
    }
}

fn check_codim(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        Err(invalid("codimension k must satisfy 1 <= k <= n-1"))
    } else {
        Ok(())
    }
}

/// Real stability check: measures `ε = max_H (∫_{K∩H} f - |K∩H|)` and compares `∫_K f` with
/// `|K| + n/(n-k) c_{n,k} |K|^{k/n} ε`. The proof chain is replayed as separate steps.
pub fn check_stability_real(body: &StarBody, f: &Density, k: usize, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<VerificationReport> {
    let n = body.dim();
    check_dim(n, f.dim())?;
    check_codim(n, k)?;
    if !is_certified_real(body) {
        return Err(Error::NotCertified(format!("`{}` is not a certified generalized k-intersection body", body.kind().as_str())));
    }
    require_at_least_one(body, f)?;
    let consts = SlicingConstants::new(n, k, Factor::Intersection)?;
    let best = max_section_of(body, Integrand::Excess(f), k, spec, cfg)?;
    let eps = best.best_value.max(0.0);
    let measure = body_measure(body, f, spec)?;
    let vol = body_volume(body, spec)?;
    let (nf, kf) = (n as f64, k as f64);
    let growth = consts.factor * vol.value.powf(kf / nf);
    let rhs = vol.value + growth * eps;
    let rhs_err = (vol.est_error * (1.0 + kf / nf * growth * eps / vol.value) + growth * best.est_error) / rhs;
    let sides = Sides { lhs: measure.value, rhs, err: rel(&measure) + rhs_err };
    let tol = ERROR_SAFETY * sides.err + MARGIN_FLOOR;
    let steps = replay_real_stability(body, f, k, eps, measure.value, vol.value, &consts, spec, tol)?;
    finish(Theorem::Thm1, n, k, sides, eps, best, consts, steps, spec.seed)
}

#[allow(clippy::too_many_arguments)]
fn replay_real_stability(
    body: &StarBody,
    f: &Density,
    k: usize,
    eps: f64,
    measure: f64,
    vol: f64,
    consts: &SlicingConstants,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<Vec<ProofStep>> {
    let n = body.dim();
    let (nf, kf) = (n as f64, k as f64);
    let power = (n - k - 1) as u32;
    let a = polar_integral(body, Some(f), spec, |theta, rho, radial| rho.powi(k as i32) * f.ray_integral(theta, rho, power, radial))?;
    let i_n = polar_integral(body, None, spec, |_, rho, _| rho.powi(n as i32))?;
    let i_k = polar_integral(body, None, spec, |_, rho, _| rho.powi(k as i32))?;
    let s_sub = sphere_measure(n - k)?;
    let s_full = sphere_measure(n)?;
    let nu1 = i_k.value / s_sub;
    let tol = tol + ERROR_SAFETY * (rel(&a) + rel(&i_n) + rel(&i_k));
    let holder = s_full.powf((nf - kf) / nf) * i_n.value.powf(kf / nf) / s_sub;
    Ok(alloc::vec![
        ProofStep::new("radon-upper", Relation::Le, a.value, i_n.value / (nf - kf) + eps * nu1, tol),
        // Splitting ρ^k = r^k + (ρ^k - r^k) and using f >= 1 leaves k|K|/(n-k).
        ProofStep::new("polar-lower", Relation::Ge, a.value, measure + kf * vol / (nf - kf), tol),
        ProofStep::new("holder", Relation::Le, nu1, holder, tol),
        ProofStep::new("constant-identity", Relation::Eq, s_full.powf((nf - kf) / nf) * (nf * vol).powf(kf / nf) / s_sub, consts.factor * vol.powf(kf / nf), tol),
    ])
}

/// The intersection-body inequality `μ(L) <= n/(n-k) c_{n,k} max_H μ(L∩H) |L|^{k/n}`.
pub fn check_km(body: &StarBody, g: &Density, k: usize, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<VerificationReport> {
    if !is_certified_real(body) {
        return Err(Error::NotCertified(format!("`{}` is not a certified generalized k-intersection body", body.kind().as_str())));
    }
    slicing_real(Theorem::Km, body, g, k, spec, cfg, false)
}

/// Real slicing check: `μ(L) <= n^{k/2} n/(n-k) c_{n,k} max_H μ(L∩H) |L|^{k/n}` for convex `L`. With `replay`,
/// the proof is rerun through a sandwich ellipsoid `K` and the density `χ_K + g χ_L`.
pub fn check_slicing_real(body: &StarBody, g: &Density, k: usize, spec: &QuadratureSpec, cfg: &SearchConfig, replay: bool) -> Result<VerificationReport> {
    body.require_convex()?;
    slicing_real(Theorem::Thm2, body, g, k, spec, cfg, replay)
}

fn slicing_real(theorem: Theorem, body: &StarBody, g: &Density, k: usize, spec: &QuadratureSpec, cfg: &SearchConfig, replay: bool) -> Result<VerificationReport> {
    let n = body.dim();
    check_dim(n, g.dim())?;
    check_codim(n, k)?;
    let which = if theorem == Theorem::Thm2 { Factor::Slicing } else { Factor::Intersection };
    let consts = SlicingConstants::new(n, k, which)?;
    let best = max_section(body, g, k, spec, cfg)?;
    let measure = body_measure(body, g, spec)?;
    let vol = body_volume(body, spec)?;
    let (nf, kf) = (n as f64, k as f64);
    let rhs = consts.factor * best.best_value * vol.value.powf(kf / nf);
    let err = rel(&measure) + best.est_error / best.best_value.abs() + kf / nf * rel(&vol);
    let sides = Sides { lhs: measure.value, rhs, err };
    let steps = if replay { replay_real_slicing(body, g, k, &best, measure.value, vol.value, spec, ERROR_SAFETY * err + MARGIN_FLOOR)? } else { Vec::new() };
    finish(theorem, n, k, sides, 0.0, best, consts, steps, spec.seed)
}

#[allow(clippy::too_many_arguments)]
fn replay_real_slicing(
    body: &StarBody,
    g: &Density,
    k: usize,
    best: &MaxSectionResult,
    measure: f64,
    vol: f64,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<Vec<ProofStep>> {
    let n = body.dim();
    let (nf, kf) = (n as f64, k as f64);
    let sw = sandwich_ellipsoid(body)?;
    if !sw.certified && sw.ratio > nf.sqrt() {
        return Err(Error::NotCertified(format!("sampled sandwich ratio {} exceeds sqrt(n)", sw.ratio)));
    }
    let outer = sw.outer_body()?;
    let f = Density::indicator_plus(&outer, body, g)?;
    let kf_measure = body_measure(&outer, &f, spec)?;
    let k_vol = body_volume(&outer, spec)?;
    let excess = section_excess(&outer, &f, &best.best_subspace, spec)?;
    let sandwich = check_sandwich(body, &outer, sw.ratio, SANDWICH_SAMPLES, SANDWICH_TOL, spec.seed)?;
    let gap = kf_measure.value - k_vol.value;
    let tol = tol + ERROR_SAFETY * (kf_measure.est_error + k_vol.est_error + excess.est_error) / gap.abs().max(f64::MIN_POSITIVE);
    let c = SlicingConstants::new(n, k, Factor::Intersection)?;
    Ok(alloc::vec![
        ProofStep::new("sandwich", Relation::Le, sandwich.max_violation, SANDWICH_TOL, 0.0),
        ProofStep::new("john-ratio", Relation::Le, sw.ratio, nf.sqrt(), MARGIN_FLOOR),
        ProofStep::new("measure-identity", Relation::Eq, gap, measure, tol),
        ProofStep::new("epsilon-identity", Relation::Eq, excess.value, best.best_value, tol),
        ProofStep::new("stability", Relation::Le, gap, c.factor * k_vol.value.powf(kf / nf) * excess.value, tol),
        ProofStep::new("john-volume", Relation::Le, k_vol.value, sw.ratio.powi(n as i32) * vol, tol),
    ])
}

fn complex_dim(body: &StarBody) -> Result<usize> {
    let cs = complex::ComplexStructure::new(body.dim())?;
    if cs.n < 2 {
        return Err(invalid("complex theorems need complex dimension >= 2"));
    }
    Ok(cs.n)
}

/// Complex stability check: measures `ε = max_ξ (∫_{K∩H_ξ} f - |K∩H_ξ|)` and compares `∫_K f` with
/// `|K| + n/(n-1) d_n |K|^{1/n} ε`; the proof chain is replayed as separate steps.
pub fn check_stability_complex(body: &StarBody, f: &Density, spec: &QuadratureSpec, cfg: &SearchConfig) -> Result<VerificationReport> {
    let n = complex_dim(body)?;
    check_dim(body.dim(), f.dim())?;
    if !is_certified_complex(body) {
        return Err(Error::NotCertified(format!("`{}` is not a certified complex intersection body", body.kind().as_str())));
    }
    let radius = crate::oracle::bounding_radius(body)?;
    complex::require_density_invariant(f, radius)?;
    require_at_least_one(body, f)?;
    let consts = SlicingConstants::new(n, 1, Factor::ComplexIntersection)?;
    let best = max_complex_section_of(body, Integrand::Excess(f), spec, cfg)?;
    let eps = best.best_value.max(0.0);
    let measure = body_measure(body, f, spec)?;
    let vol = body_volume(body, spec)?;
    let nf = n as f64;
    let growth = consts.factor * vol.value.powf(1.0 / nf);
    let rhs = vol.value + growth * eps;
    let rhs_err = (vol.est_error * (1.0 + growth * eps / (nf * vol.value)) + growth * best.est_error) / rhs;
    let sides = Sides { lhs: measure.value, rhs, err: rel(&measure) + rhs_err };
    let tol = ERROR_SAFETY * sides.err + MARGIN_FLOOR;
    let steps = replay_complex_stability(body, f, n, eps, measure.value, vol.value, &consts, spec, tol)?;
    finish(Theorem::Thm3, n, 1, sides, eps, best, consts, steps, spec.seed)
}

#[allow(clippy::too_many_arguments)]
fn replay_complex_stability(
    body: &StarBody,
    f: &Density,
    n: usize,
    eps: f64,
    measure: f64,
    vol: f64,
    consts: &SlicingConstants,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<Vec<ProofStep>> {
    let nf = n as f64;
    let m = 2 * n;
    let a = polar_integral(body, Some(f), spec, |theta, rho, radial| rho * rho * f.ray_integral(theta, rho, (m - 3) as u32, radial))?;
    let i_m = polar_integral(body, None, spec, |_, rho, _| rho.powi(m as i32))?;
    let i_2 = polar_integral(body, None, spec, |_, rho, _| rho * rho)?;
    let s_sub = sphere_measure(m - 2)?;
    let s_full = sphere_measure(m)?;
    let mass = i_2.value / s_sub;
    let tol = tol + ERROR_SAFETY * (rel(&a) + rel(&i_m) + rel(&i_2));
    let holder = s_full.powf((nf - 1.0) / nf) * i_m.value.powf(1.0 / nf) / s_sub;
    Ok(alloc::vec![
        ProofStep::new("radon-upper", Relation::Le, a.value, i_m.value / (2.0 * nf - 2.0) + eps * mass, tol),
        ProofStep::new("radon-identity", Relation::Eq, i_m.value / (2.0 * nf - 2.0), nf / (nf - 1.0) * vol, tol),
        ProofStep::new("polar-lower", Relation::Ge, a.value, measure + vol / (nf - 1.0), tol),
        ProofStep::new("polar-identity", Relation::Eq, i_m.value / (2.0 * (nf - 1.0) * nf), vol / (nf - 1.0), tol),
        ProofStep::new("holder", Relation::Le, mass, holder, tol),
        ProofStep::new("constant-identity", Relation::Eq, s_full.powf((nf - 1.0) / nf) * (2.0 * nf * vol).powf(1.0 / nf) / s_sub, consts.factor * vol.powf(1.0 / nf), tol),
    ])
}

/// Complex slicing check: `γ(L) <= 2n · n/(n-1) d_n max_ξ γ(L∩H_ξ) |L|^{1/n}` for `R_θ`-invariant convex `L`.
/// With `replay`, reruns the proof through `K_c`, the `R_θ`-symmetrized sandwich ellipsoid.
pub fn check_slicing_complex(body: &StarBody, g: &Density, spec: &QuadratureSpec, cfg: &SearchConfig, replay: bool) -> Result<VerificationReport> {
    let n = complex_dim(body)?;
    check_dim(body.dim(), g.dim())?;
    body.require_convex()?;
    complex::require_rtheta_invariant(body)?;
    let consts = SlicingConstants::new(n, 1, Factor::ComplexSlicing)?;
    let best = max_complex_section(body, g, spec, cfg)?;
    let measure = body_measure(body, g, spec)?;
    let vol = body_volume(body, spec)?;
    let nf = n as f64;
    let rhs = consts.factor * best.best_value * vol.value.powf(1.0 / nf);
    let err = rel(&measure) + best.est_error / best.best_value.abs() + rel(&vol) / nf;
    let sides = Sides { lhs: measure.value, rhs, err };
    let steps = if replay { replay_complex_slicing(body, g, n, &best, measure.value, vol.value, spec, ERROR_SAFETY * err + MARGIN_FLOOR)? } else { Vec::new() };
    finish(Theorem::Thm4, n, 1, sides, 0.0, best, consts, steps, spec.seed)
}

#[allow(clippy::too_many_arguments)]
fn replay_complex_slicing(
    body: &StarBody,
    g: &Density,
    n: usize,
    best: &MaxSectionResult,
    measure: f64,
    vol: f64,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<Vec<ProofStep>> {
    let nf = n as f64;
    let bound = (2.0 * nf).sqrt();
    let sw = sandwich_ellipsoid(body)?;
    if !sw.certified && sw.ratio > bound {
        return Err(Error::NotCertified(format!("sampled sandwich ratio {} exceeds sqrt(2n)", sw.ratio)));
    }
    let kc = complex::rtheta_symmetrize(&sw.outer_body()?, THETA_NODES)?;
    let sandwich = check_sandwich(body, &kc, sw.ratio, SANDWICH_SAMPLES, SANDWICH_TOL, spec.seed)?;
    let f = Density::indicator_plus(&kc, body, g)?;
    let kf_measure = body_measure(&kc, &f, spec)?;
    let k_vol = body_volume(&kc, spec)?;
    let excess = section_excess(&kc, &f, &best.best_subspace, spec)?;
    let gap = kf_measure.value - k_vol.value;
    let tol = tol + ERROR_SAFETY * (kf_measure.est_error + k_vol.est_error + excess.est_error) / gap.abs().max(f64::MIN_POSITIVE);
    let c = SlicingConstants::new(n, 1, Factor::ComplexIntersection)?;
    Ok(alloc::vec![
        ProofStep::new("sandwich", Relation::Le, sandwich.max_violation, SANDWICH_TOL, 0.0),
        ProofStep::new("john-ratio", Relation::Le, sw.ratio, bound, MARGIN_FLOOR),
        ProofStep::new("measure-identity", Relation::Eq, gap, measure, tol),
        ProofStep::new("epsilon-identity", Relation::Eq, excess.value, best.best_value, tol),
        ProofStep::new("stability", Relation::Le, gap, c.factor * k_vol.value.powf(1.0 / nf) * excess.value, tol),
        ProofStep::new("john-volume", Relation::Le, k_vol.value.powf(1.0 / nf), 2.0 * nf * vol.powf(1.0 / nf), tol),
    ])
}
