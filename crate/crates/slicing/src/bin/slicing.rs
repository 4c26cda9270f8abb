use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use slicing::{execute, parse_body, parse_density, Command, Format, RunConfig, SlicingError, TheoremArg};

#[derive(Parser)]
#[command(name = "slicing", version, about = "Measures, sections and slicing-inequality checks for star bodies")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Check theorem instances (bodies × densities × dims × codims).
    Verify(Common),
    /// Quadrature values of measures, volumes and (with --codim) a random section.
    Integrate(Common),
    /// Monte Carlo estimates of the same quantities as `integrate`.
    Oracle(Common),
    /// Ball volumes and slicing constants; --max-n tabulates every 1 <= k < n <= N.
    Constants(Common),
    /// Sandwich ellipsoid of a convex body, checked on 10^4 directions.
    Sandwich(Common),
    /// Same as `verify`, usually driven by --config.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    theorem: Option<TheoremArg>,
    /// Body spec as JSON, e.g. '{"kind":"lp-ball","p":1}'. Repeatable.
    #[arg(long)]
    body: Vec<String>,
    /// Density spec as JSON. Repeatable.
    #[arg(long)]
    density: Vec<String>,
    /// Dimensions (comma separated). Complex dimension for thm3/thm4.
    #[arg(long, value_delimiter = ',')]
    dim: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    codim: Vec<usize>,
    /// Alias of --dim for `constants`.
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<usize>,
    /// Alias of --codim for `constants`.
    #[arg(long = "k", value_delimiter = ',')]
    k: Vec<usize>,
    /// For `constants`: all dimensions 2..=N.
    #[arg(long)]
    max_n: Option<usize>,
    /// Sphere nodes per rule.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    radial_nodes: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    evals: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replay the proof steps of thm2/thm4.
    #[arg(long)]
    replay: bool,
}

fn build_config(command: Command, a: Common) -> slicing::Result<RunConfig> {
    let mut c = match &a.config {
        Some(path) => {
            let mut c = RunConfig::load(path)?;
            c.command = command;
            c
        }
        None => RunConfig::new(command),
    };
    if a.theorem.is_some() {
        c.theorem = a.theorem;
    }
    if !a.body.is_empty() {
        c.bodies = a.body.iter().map(|b| parse_body(b)).collect::<slicing::Result<_>>()?;
    }
    if !a.density.is_empty() {
        c.densities = a.density.iter().map(|d| parse_density(d)).collect::<slicing::Result<_>>()?;
    }
    let mut dims: Vec<usize> = a.dim.into_iter().chain(a.n).collect();
    if let Some(m) = a.max_n {
        dims.extend(2..=m);
    }
    if !dims.is_empty() {
        c.dims = dims;
    }
    let codims: Vec<usize> = a.codim.into_iter().chain(a.k).collect();
    if !codims.is_empty() {
        c.codims = codims;
    }
    if let Some(v) = a.nodes {
        c.quadrature.sphere_nodes = v;
    }
    if let Some(v) = a.radial_nodes {
        c.quadrature.radial_nodes = v;
    }
    if let Some(v) = a.restarts {
        c.search.restarts = v;
    }
    if let Some(v) = a.evals {
        c.search.evals = v;
    }
    if let Some(v) = a.samples {
        c.samples = v;
    }
    if let Some(v) = a.seed {
        c.seed = v;
    }
    if let Some(v) = a.format {
        c.format = v;
    }
    if a.out.is_some() {
        c.out = a.out;
    }
    c.replay |= a.replay;
    Ok(c)
}

fn write_output(config: &RunConfig, ex: &slicing::Execution) -> std::io::Result<()> {
    match &config.out {
        Some(path) => {
            std::fs::write(path, &ex.output)?;
            if let Some(s) = &ex.summary {
                let mut p = path.clone().into_os_string();
                p.push(".summary.csv");
                std::fs::write(PathBuf::from(p), s)?;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(ex.output.as_bytes())?;
            if !ex.output.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    if let Some(s) = &ex.summary {
        std::io::stderr().write_all(s.as_bytes())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, SlicingError> {
    let (command, args) = match cli.command {
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Integrate(a) => (Command::Integrate, a),
        Sub::Oracle(a) => (Command::Oracle, a),
        Sub::Constants(a) => (Command::Constants, a),
        Sub::Sandwich(a) => (Command::Sandwich, a),
        Sub::Sweep(a) => (Command::Sweep, a),
    };
    let config = build_config(command, args)?;
    let ex = execute(&config)?;
    write_output(&config, &ex)?;
    Ok(ex.success)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
