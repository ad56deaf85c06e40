//! Training orchestration, metrics, plots and the command-line interface.

pub mod cli;
mod config;
mod eval;
mod metrics;
mod plot;
mod train;

pub use config::{RunConfig, SEED_ENV_VAR};
pub use eval::{evaluate, play_episode, EvalSummary};
pub use metrics::{
    csv_row, format_sig6, moving_average, read_metrics_csv, write_metrics_csv, EpisodeRecord,
    MetricsWriter, CSV_HEADER,
};
pub use plot::{emit_reward_plot, render_reward_plot};
pub use train::{
    run_training, train, RunRngs, TrainingOutcome, CHECKPOINT_DIR, MANIFEST_FILE, METRICS_FILE,
    PLOT_FILE,
};
