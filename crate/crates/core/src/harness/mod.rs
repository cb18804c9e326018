//! Experiment orchestration and machine-readable reports.
//!
//! Every experiment is a pure function of its [`ExperimentConfig`]: trial `r`
//! draws from stream `(seed, r)` and rows are assembled in trial order, so
//! two runs of one config render to identical bytes.

mod config;
mod experiments;
mod report;
pub mod stats;

pub use config::{paired_model, rescale, validate_pair, Experiment, ExperimentConfig, OutputFormat};
pub use experiments::{
    expectation_target, half_regular, log_ratio, run, run_concentration, run_enum_accuracy, run_expectation_r,
    run_normalization, run_ratio_experiment, run_tv_exact, RStatistic, REGULAR_FRACTION, SE_TOLERANCE,
};
pub use report::{
    read_samples_jsonl, write_samples_jsonl, ExperimentReport, Provenance, SampleRecord, SummaryEntry, Verdict,
    THRESHOLDS,
};
