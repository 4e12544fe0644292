//! Command-line experiments over the `permzero-core` library.

pub mod commands;
pub mod output;
pub mod spec;

pub use commands::run;
pub use output::{Cell, RunResult, Table};
pub use spec::{Cli, Command, ExperimentSpec, Format, Grid};

/// Builds the global worker pool from `PERMZERO_THREADS`, if set.
pub fn init_thread_pool() -> Result<(), String> {
    let Ok(raw) = std::env::var("PERMZERO_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("PERMZERO_THREADS must be a positive integer, got `{raw}`"))?;
    if threads == 0 {
        return Err("PERMZERO_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}
