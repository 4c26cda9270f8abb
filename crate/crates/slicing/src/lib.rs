//! File formats, reports, sweeps and the command line around [`slicing_core`].
//!
//! A run is described by a [`RunConfig`]; [`execute`] renders its output and [`run_sweep`] exposes the
//! theorem grid as data.

pub mod config;
mod error;
pub mod report;
pub mod run;
pub mod spec;

pub use config::{Command, Format, QuadratureSettings, RunConfig, SchemeArg, SearchSettings, TheoremArg};
pub use error::{Result, SlicingError};
pub use report::{emit_report, emit_reports, emit_summary, parse_csv, parse_json_report, summarize, CsvRow, ReportRecord, SummaryRow, CSV_HEADER};
pub use run::{constants_table, execute, plan, run_instance, run_sweep, Execution, Instance, SweepOutcome};
pub use spec::{parse_body, parse_density, BodySpec, DensitySpec, TermSpec};
pub use slicing_core;
