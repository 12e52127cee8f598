//! Train, predict, cross-validate and describe per-topic stance corpora.

pub mod commands;
pub mod config;

pub use commands::{cmd_crossval, cmd_predict, cmd_stats, cmd_train, OutputFormat, TrainSummary};
pub use config::PipelineConfig;
