//! Experiment engine: Monte-Carlo cells, resumable CSV sweeps and
//! concentration diagnostics.

mod config;
mod diagnose;
mod sweep;

pub use config::{parse_list, Grid, SweepConfig};
pub use diagnose::{
    connectivity_margins, diagnose, diagnose_instance, index_slope, DiagnosticRow,
    DIAGNOSTIC_HEADER,
};
pub use sweep::{run_cell, sweep, CellResult, CellSpec, SweepSummary, TrialOutcome, CSV_HEADER};
