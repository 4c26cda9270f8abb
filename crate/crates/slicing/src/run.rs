use rayon::prelude::*;
use serde::Serialize;
use slicing_core::{
    body_measure, body_volume, check_km, check_slicing_complex, check_slicing_real, check_stability_complex, check_stability_real, haar_sample,
    mc_body_measure, mc_body_volume, mc_section_measure, sandwich_ellipsoid, section_measure, section_volume, verify_sandwich, Factor,
    IntegralResult, McEstimate, SlicingConstants, Theorem, VerificationReport, SANDWICH_TOL,
};

use crate::config::{Command, Format, RunConfig};
use crate::error::{Result, SlicingError};
use crate::report::{emit_reports, emit_summary, summarize, ReportRecord, SummaryRow};
use crate::spec::{BodySpec, DensitySpec};

const SANDWICH_SAMPLES: usize = 10_000;

/// One cell of a theorem grid. `n` is the complex dimension for complex theorems.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub theorem: Theorem,
    pub body: BodySpec,
    pub body_index: usize,
    pub density: DensitySpec,
    pub density_index: usize,
    pub n: usize,
    pub k: usize,
}

impl Instance {
    /// Real dimension of the ambient space.
    pub fn real_dim(&self) -> usize {
        if self.theorem.is_complex() {
            2 * self.n
        } else {
            self.n
        }
    }
}

fn theorem_of(config: &RunConfig) -> Result<Theorem> {
    config.theorem.map(|t| t.core()).ok_or_else(|| SlicingError::usage("theorem", "a theorem is required"))
}

/// Expands bodies × densities × dims × codims in grid order. Bodies with a pinned dimension only
/// join the dims that match it; with no dims given they run at their own dimension.
pub fn plan(config: &RunConfig) -> Result<Vec<Instance>> {
    let theorem = theorem_of(config)?;
    if config.bodies.is_empty() {
        return Err(SlicingError::usage("bodies", "empty body list"));
    }
    let complex = theorem.is_complex();
    let codims: Vec<usize> = if complex {
        if config.codims.iter().any(|&k| k != 1) {
            return Err(SlicingError::usage("codims", "complex theorems only use k = 1"));
        }
        vec![1]
    } else if config.codims.is_empty() {
        return Err(SlicingError::usage("codims", "empty codimension list"));
    } else {
        config.codims.clone()
    };
    let densities = config.densities_or_default();
    let mut out = Vec::new();
    for (bi, body) in config.bodies.iter().enumerate() {
        let own = body.fixed_dim().map(|d| if complex { d / 2 } else { d });
        if complex && body.fixed_dim().is_some_and(|d| d % 2 != 0) {
            return Err(SlicingError::usage(format!("bodies[{bi}]"), "complex theorems need an even real dimension"));
        }
        let dims: Vec<usize> = match (own, config.dims.is_empty()) {
            (Some(d), true) => vec![d],
            (Some(d), false) => config.dims.iter().copied().filter(|&n| n == d).collect(),
            (None, false) => config.dims.clone(),
            (None, true) => return Err(SlicingError::usage(format!("bodies[{bi}]"), "no dimension: give `dims` or pin `dim` in the body")),
        };
        for &n in &dims {
            for (di, density) in densities.iter().enumerate() {
                for &k in &codims {
                    if !complex && (k == 0 || k >= n) {
                        continue;
                    }
                    out.push(Instance { theorem, body: body.clone(), body_index: bi, density: density.clone(), density_index: di, n, k });
                }
            }
        }
    }
    if out.is_empty() {
        return Err(SlicingError::usage("dims", "the grid is empty"));
    }
    Ok(out)
}

/// Runs one instance; spec errors become usage errors located at the body/density index.
pub fn run_instance(config: &RunConfig, inst: &Instance) -> Result<VerificationReport> {
    let dim = inst.real_dim();
    let body = inst.body.build_at(dim, &format!("bodies[{}]", inst.body_index))?;
    let f = inst.density.build_at(dim, &format!("densities[{}]", inst.density_index))?;
    let spec = config.quadrature_spec();
    let cfg = config.search_config();
    let r = match inst.theorem {
        Theorem::Thm1 => check_stability_real(&body, &f, inst.k, &spec, &cfg),
        Theorem::Km => check_km(&body, &f, inst.k, &spec, &cfg),
        Theorem::Thm2 => check_slicing_real(&body, &f, inst.k, &spec, &cfg, config.replay),
        Theorem::Thm3 => check_stability_complex(&body, &f, &spec, &cfg),
        Theorem::Thm4 => check_slicing_complex(&body, &f, &spec, &cfg, config.replay),
    };
    Ok(r?)
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub reports: Vec<ReportRecord>,
    pub summary: Vec<SummaryRow>,
}

impl SweepOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

/// Runs the theorem grid in parallel; reports come back in grid order. Instances that cannot be
/// evaluated (uncertified body, density below one, …) are reported as failures.
pub fn run_sweep(config: &RunConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let instances = plan(config)?;
    let reports: Vec<ReportRecord> = instances
        .par_iter()
        .map(|inst| match run_instance(config, inst) {
            Ok(r) => ReportRecord::from_report(&r, Some(inst.body.clone()), Some(inst.density.clone())),
            Err(e) => ReportRecord::failed(inst.theorem.as_str(), inst.n, inst.k, config.seed, Some(inst.body.clone()), Some(inst.density.clone()), e.to_string()),
        })
        .collect();
    let summary = summarize(&reports);
    Ok(SweepOutcome { reports, summary })
}

/// Rendered output of a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub output: String,
    /// Secondary table (sweep summary in CSV mode).
    pub summary: Option<String>,
    pub success: bool,
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    reports: &'a [ReportRecord],
    summary: &'a [SummaryRow],
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegralRecord {
    pub body: BodySpec,
    pub density: DensitySpec,
    pub n: usize,
    pub measure: IntegralOut,
    pub volume: IntegralOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section: Option<SectionOut<IntegralOut>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegralOut {
    pub value: f64,
    pub est_error: f64,
    pub nodes_used: usize,
}

impl From<IntegralResult> for IntegralOut {
    fn from(r: IntegralResult) -> Self {
        Self { value: r.value, est_error: r.est_error, nodes_used: r.nodes_used }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionOut<T> {
    pub k: usize,
    pub frame: Vec<Vec<f64>>,
    pub measure: T,
    pub volume: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRecord {
    pub body: BodySpec,
    pub density: DensitySpec,
    pub n: usize,
    pub measure: McOut,
    pub volume: McOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section: Option<SectionOut<McOut>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct McOut {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl From<McEstimate> for McOut {
    fn from(e: McEstimate) -> Self {
        Self { mean: e.mean, std_error: e.std_error, samples: e.samples, seed: e.seed }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsRecord {
    pub n: usize,
    pub k: usize,
    pub ball_volume: f64,
    pub sphere_measure: f64,
    pub c_nk: f64,
    /// `d_m` for complex dimension `m = n`, when `n >= 2`.
    pub d_n: Option<f64>,
    pub km_factor: f64,
    pub slicing_factor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichRecord {
    pub body: BodySpec,
    pub n: usize,
    pub shape: Vec<Vec<f64>>,
    pub ratio: f64,
    pub certified: bool,
    pub pass: bool,
    pub max_violation: f64,
    pub observed_ratio: f64,
    pub samples: usize,
}

/// Dimensions for the non-theorem commands (real dimensions).
fn real_dims(config: &RunConfig, body: &BodySpec, bi: usize) -> Result<Vec<usize>> {
    match (body.fixed_dim(), config.dims.is_empty()) {
        (Some(d), true) => Ok(vec![d]),
        (Some(d), false) => Ok(config.dims.iter().copied().filter(|&n| n == d).collect()),
        (None, false) => Ok(config.dims.clone()),
        (None, true) => Err(SlicingError::usage(format!("bodies[{bi}]"), "no dimension: give `dims` or pin `dim` in the body")),
    }
}

fn require_bodies(config: &RunConfig) -> Result<()> {
    if config.bodies.is_empty() {
        Err(SlicingError::usage("bodies", "empty body list"))
    } else {
        Ok(())
    }
}

fn single_codim(config: &RunConfig, n: usize) -> Result<Option<usize>> {
    match config.codims.as_slice() {
        [] => Ok(None),
        [k] if *k >= 1 && *k < n => Ok(Some(*k)),
        [k] => Err(SlicingError::usage("codims", format!("codimension {k} is out of range for n = {n}"))),
        _ => Err(SlicingError::usage("codims", "at most one codimension")),
    }
}

fn to_csv<T>(header: &[&str], rows: &[T], fields: impl Fn(&T) -> Vec<String>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(fields(r))?;
    }
    let bytes = w.into_inner().map_err(|e| SlicingError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn render<T: Serialize>(format: Format, rows: &[T], header: &[&str], fields: impl Fn(&T) -> Vec<String>) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)?),
        Format::Csv => to_csv(header, rows, fields),
    }
}

fn integrate(config: &RunConfig) -> Result<Execution> {
    require_bodies(config)?;
    let spec = config.quadrature_spec();
    let mut rows = Vec::new();
    for (bi, b) in config.bodies.iter().enumerate() {
        for n in real_dims(config, b, bi)? {
            let body = b.build_at(n, &format!("bodies[{bi}]"))?;
            for (di, d) in config.densities_or_default().iter().enumerate() {
                let f = d.build_at(n, &format!("densities[{di}]"))?;
                let section = match single_codim(config, n)? {
                    Some(k) => {
                        let h = haar_sample(n, k, config.seed)?;
                        Some(SectionOut {
                            k,
                            frame: h.columns().map(<[f64]>::to_vec).collect(),
                            measure: section_measure(&body, &f, &h, &spec)?.into(),
                            volume: section_volume(&body, &h, &spec)?.into(),
                        })
                    }
                    None => None,
                };
                rows.push(IntegralRecord {
                    body: b.clone(),
                    density: d.clone(),
                    n,
                    measure: body_measure(&body, &f, &spec)?.into(),
                    volume: body_volume(&body, &spec)?.into(),
                    section,
                });
            }
        }
    }
    let header = ["body", "density", "n", "quantity", "k", "value", "est_error", "nodes_used"];
    let output = match config.format {
        Format::Json => serde_json::to_string_pretty(&rows)?,
        Format::Csv => {
            let mut flat = Vec::new();
            for r in &rows {
                let mut push = |q: &str, k: usize, v: &IntegralOut| flat.push((r.body.name(), r.density.name(), r.n, q.to_string(), k, *v));
                push("measure", 0, &r.measure);
                push("volume", 0, &r.volume);
                if let Some(s) = &r.section {
                    push("section_measure", s.k, &s.measure);
                    push("section_volume", s.k, &s.volume);
                }
            }
            to_csv(&header, &flat, |(b, d, n, q, k, v)| {
                vec![b.to_string(), d.to_string(), n.to_string(), q.clone(), k.to_string(), num(v.value), num(v.est_error), v.nodes_used.to_string()]
            })?
        }
    };
    Ok(Execution { output, summary: None, success: true })
}

fn oracle(config: &RunConfig) -> Result<Execution> {
    require_bodies(config)?;
    let mut rows = Vec::new();
    for (bi, b) in config.bodies.iter().enumerate() {
        for n in real_dims(config, b, bi)? {
            let body = b.build_at(n, &format!("bodies[{bi}]"))?;
            for (di, d) in config.densities_or_default().iter().enumerate() {
                let f = d.build_at(n, &format!("densities[{di}]"))?;
                let section = match single_codim(config, n)? {
                    Some(k) => {
                        let h = haar_sample(n, k, config.seed)?;
                        let one = slicing_core::Density::constant(n, 1.0)?;
                        Some(SectionOut {
                            k,
                            frame: h.columns().map(<[f64]>::to_vec).collect(),
                            measure: mc_section_measure(&body, &f, &h, config.samples, config.seed)?.into(),
                            volume: mc_section_measure(&body, &one, &h, config.samples, config.seed)?.into(),
                        })
                    }
                    None => None,
                };
                rows.push(OracleRecord {
                    body: b.clone(),
                    density: d.clone(),
                    n,
                    measure: mc_body_measure(&body, &f, config.samples, config.seed)?.into(),
                    volume: mc_body_volume(&body, config.samples, config.seed)?.into(),
                    section,
                });
            }
        }
    }
    let output = match config.format {
        Format::Json => serde_json::to_string_pretty(&rows)?,
        Format::Csv => {
            let mut flat = Vec::new();
            for r in &rows {
                let mut push = |q: &str, k: usize, v: &McOut| flat.push((r.body.name(), r.density.name(), r.n, q.to_string(), k, *v));
                push("measure", 0, &r.measure);
                push("volume", 0, &r.volume);
                if let Some(s) = &r.section {
                    push("section_measure", s.k, &s.measure);
                    push("section_volume", s.k, &s.volume);
                }
            }
            let header = ["body", "density", "n", "quantity", "k", "mean", "std_error", "samples", "seed"];
            to_csv(&header, &flat, |(b, d, n, q, k, v)| {
                vec![b.to_string(), d.to_string(), n.to_string(), q.clone(), k.to_string(), num(v.mean), num(v.std_error), v.samples.to_string(), v.seed.to_string()]
            })?
        }
    };
    Ok(Execution { output, summary: None, success: true })
}

/// All `(n, k)` pairs with `n` in `dims` and `k` in `codims` (every `1 <= k < n` when `codims` is empty).
pub fn constants_table(dims: &[usize], codims: &[usize]) -> Result<Vec<ConstantsRecord>> {
    if dims.is_empty() {
        return Err(SlicingError::usage("dims", "empty dimension list"));
    }
    let mut rows = Vec::new();
    for &n in dims {
        let ks: Vec<usize> = if codims.is_empty() { (1..n).collect() } else { codims.to_vec() };
        for k in ks {
            let km = SlicingConstants::new(n, k, Factor::Intersection).map_err(|e| SlicingError::at("codims", e))?;
            let sl = SlicingConstants::new(n, k, Factor::Slicing)?;
            rows.push(ConstantsRecord {
                n,
                k,
                ball_volume: km.ball_vol_n,
                sphere_measure: km.sphere_vol_n,
                c_nk: km.c_nk,
                d_n: if n >= 2 { Some(slicing_core::d_n(n)?) } else { None },
                km_factor: km.factor,
                slicing_factor: sl.factor,
            });
        }
    }
    Ok(rows)
}

fn constants(config: &RunConfig) -> Result<Execution> {
    let rows = constants_table(&config.dims, &config.codims)?;
    let success = rows.iter().all(|r| r.c_nk < 1.0 && r.d_n.is_none_or(|d| d < 1.0));
    let header = ["n", "k", "ball_volume", "sphere_measure", "c_nk", "d_n", "km_factor", "slicing_factor"];
    let output = render(config.format, &rows, &header, |r| {
        vec![
            r.n.to_string(),
            r.k.to_string(),
            num(r.ball_volume),
            num(r.sphere_measure),
            num(r.c_nk),
            r.d_n.map(num).unwrap_or_default(),
            num(r.km_factor),
            num(r.slicing_factor),
        ]
    })?;
    Ok(Execution { output, summary: None, success })
}

fn sandwich(config: &RunConfig) -> Result<Execution> {
    require_bodies(config)?;
    let mut rows = Vec::new();
    for (bi, b) in config.bodies.iter().enumerate() {
        for n in real_dims(config, b, bi)? {
            let body = b.build_at(n, &format!("bodies[{bi}]"))?;
            let e = sandwich_ellipsoid(&body)?;
            let rep = verify_sandwich(&body, &e, SANDWICH_SAMPLES, SANDWICH_TOL)?;
            rows.push(SandwichRecord {
                body: b.clone(),
                n,
                shape: e.shape.row_iter().map(|r| r.iter().copied().collect()).collect(),
                ratio: e.ratio,
                certified: e.certified,
                pass: rep.pass,
                max_violation: rep.max_violation,
                observed_ratio: rep.observed_ratio,
                samples: rep.samples,
            });
        }
    }
    let success = rows.iter().all(|r| r.pass);
    let header = ["body", "n", "ratio", "certified", "pass", "max_violation", "observed_ratio"];
    let output = render(config.format, &rows, &header, |r| {
        vec![r.body.name().to_string(), r.n.to_string(), num(r.ratio), r.certified.to_string(), r.pass.to_string(), num(r.max_violation), num(r.observed_ratio)]
    })?;
    Ok(Execution { output, summary: None, success })
}

fn theorems(config: &RunConfig) -> Result<Execution> {
    let outcome = run_sweep(config)?;
    let success = outcome.all_pass();
    match config.format {
        Format::Json => {
            let output = serde_json::to_string_pretty(&SweepDocument { reports: &outcome.reports, summary: &outcome.summary })?;
            Ok(Execution { output, summary: None, success })
        }
        Format::Csv => Ok(Execution {
            output: emit_reports(&outcome.reports, Format::Csv)?,
            summary: Some(emit_summary(&outcome.summary, Format::Csv)?),
            success,
        }),
    }
}

/// Runs the configured command and renders its output.
pub fn execute(config: &RunConfig) -> Result<Execution> {
    config.validate()?;
    match config.command {
        Command::Verify | Command::Sweep => theorems(config),
        Command::Integrate => integrate(config),
        Command::Oracle => oracle(config),
        Command::Constants => constants(config),
        Command::Sandwich => sandwich(config),
    }
}
