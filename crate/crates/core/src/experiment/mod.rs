//! The five benchmark circuits, their three configurations, noisy runs,
//! break-even sweeps and report tables.
//!
//! Fidelity is the fraction of (accepted) shots whose logical outcome lies
//! in the benchmark's success set. The Bell success set only looks at
//! Z-basis correlations, so a phase flip on the pair goes unnoticed.

mod benchmark;
mod report;
mod run;

pub use benchmark::{build_benchmark, compile_options, BenchmarkId, Built, Configuration, Preset};
pub use report::{reference_rows, render_report, ReferenceRow};
pub use run::{
    breakeven_sweep, p2_grid, run_experiment, ExperimentReport, RunSpec, DEFAULT_RUNS, DEFAULT_SHOTS,
};
