//! Experiment registry, persistence, aggregation, and plot data.
//!
//! On-disk layout under the output root:
//!
//! ```text
//! <root>/<experiment>/config.toml
//! <root>/<experiment>/aggregate.csv, aggregate.json
//! <root>/<experiment>/<variant>/seed_<n>/summary.json
//! <root>/<experiment>/<variant>/seed_<n>/updates.csv, episodes.csv, scaling.csv   (PPO runs)
//! <root>/<experiment>/<variant>/seed_<n>/regret_*.csv                             (OCO bench)
//! <root>/<experiment>/<variant>/seed_<n>/residuals.csv                            (simplified TRAC)
//! ```

pub mod aggregate;
pub mod config;
pub mod plot;
pub mod runner;
pub mod stats;
pub mod store;

pub use aggregate::{aggregate, normalized_improvement, AggregateRow};
pub use config::{ExperimentConfig, ExperimentKind, Job};
pub use plot::{emit_plot_data, PlotKind};
pub use runner::{run_experiment, ExperimentOutcome};
pub use store::{find_runs, load_run, LoadedRun, SummaryFile};

/// Environment variable naming the default output root.
pub const OUTPUT_ENV: &str = "TRAC_OUTPUT_DIR";
