//! Scenario library, configuration, orchestration and artifact output for
//! the `vortbound` solver and bound engine.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod scenario;

pub use config::{Overrides, ScenarioConfig, ScenarioName};
pub use error::{HarnessError, Result};
pub use run::{run, run_batch, RunManifest, RunOutcome};
pub use scenario::init_scenario;

/// Environment variable naming the directory that relative output paths are
/// resolved against.
pub const OUTPUT_ROOT_ENV: &str = "VORTBOUND_OUTPUT_ROOT";

/// The output root from the environment, if set and nonempty.
pub fn output_root_from_env() -> Option<std::path::PathBuf> {
    std::env::var_os(OUTPUT_ROOT_ENV)
        .filter(|v| !v.is_empty())
        .map(std::path::PathBuf::from)
}
