//! Experiment runner: configuration, figure sweeps and table output.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod output;
pub mod units;

pub use config::{ExperimentConfig, ExperimentId, OmegaRequest, OmegaSource};
pub use experiments::{run_fig2, run_fig3, run_fig4, PowerRow, ResultRow, RunContext};
pub use output::{write_table, Format, Metadata};
