//! Command-line front end for the convdiff solver: problem presets, config
//! files, experiment orchestration and CSV/plot-data persistence.

pub mod config;
pub mod csvio;
pub mod experiments;
pub mod presets;
pub mod run;

pub use config::RunConfig;
pub use presets::PresetAction;
