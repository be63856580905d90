//! Scenario runner for the cavity lattice model: configuration files,
//! figure presets, parameter sweeps and CSV tables.

pub mod config;
pub mod presets;
pub mod runner;
pub mod table;

pub use config::{
    parse_config, parse_config_with_overrides, ConfigError, Scenario, ScenarioConfig,
};
pub use runner::{run_scenario, RunError};
pub use table::{read_csv, ResultTable};
