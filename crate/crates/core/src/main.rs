use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use trac_core::harness::aggregate::{improvements_over, write_aggregate};
use trac_core::harness::{
    aggregate, emit_plot_data, find_runs, load_run, run_experiment, ExperimentConfig, ExperimentKind, PlotKind,
    OUTPUT_ENV,
};

const FILES_HELP: &str = "\
Output layout (root from --out or $TRAC_OUTPUT_DIR, default ./runs):
  <root>/<experiment>/config.toml                 resolved configuration
  <root>/<experiment>/<variant>/seed_<n>/
      summary.json   {experiment, variant, seed, metrics{..}, mean_scale_per_task, task_count}
      updates.csv    update,env_step,task_index,episodes,mean_episode_reward,mean_scale,final_scale,mean_loss
      episodes.csv   start_step,end_step,start_task,end_task,reward
      scaling.csv    step,task_index,S,s_1..s_n   (TRAC runs only)
      regret_*.csv   step,loss,regret_to_date,S   (oco_bench)
      residuals.csv  step,scale,h,rel_residual,discount_gap   (simplified_equivalence)
      timing.json    wall-clock seconds (not part of the reproducible metrics)
  <root>/<experiment>/aggregate.csv   experiment,variant,metric,n,mean,std  ('#' lines document columns)
  <root>/<experiment>/aggregate.json  same rows plus normalized improvements over 'adam'
  <root>/l2_sweep/best_lambda_per_task.csv   task_index,best_variant,mean_reward";

#[derive(Parser)]
#[command(name = "trac", about = "TRAC lifelong-learning experiments", after_help = FILES_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a TOML config (or the defaults of --experiment).
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        experiment: Option<ExperimentKind>,
        /// Comma-separated seed list overriding the config.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        total_env_steps: Option<u64>,
        #[arg(long, env = OUTPUT_ENV, default_value = "runs")]
        out: PathBuf,
    },
    /// Aggregate every run found below a directory.
    Aggregate {
        dir: PathBuf,
        #[arg(long, default_value = "adam")]
        baseline: String,
    },
    /// Emit a tidy CSV series for plotting.
    PlotData {
        dir: PathBuf,
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the default config of an experiment as TOML.
    DefaultConfig {
        #[arg(value_enum)]
        experiment: ExperimentKind,
    },
}

fn load_runs(dir: &Path) -> Result<Vec<trac_core::harness::LoadedRun>> {
    let dirs = find_runs(dir).with_context(|| format!("scanning {}", dir.display()))?;
    if dirs.is_empty() {
        bail!("no runs found below {}", dir.display());
    }
    dirs.iter().map(|d| load_run(d).with_context(|| format!("loading {}", d.display()))).collect()
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config, experiment, seeds, workers, total_env_steps, out } => {
            let mut cfg = match (&config, experiment) {
                (Some(path), _) => ExperimentConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
                (None, Some(kind)) => ExperimentConfig::for_experiment(kind),
                (None, None) => bail!("pass --config or --experiment"),
            };
            if let (Some(_), Some(kind)) = (&config, experiment) {
                cfg.experiment = kind;
            }
            if let Some(s) = seeds {
                cfg.seeds = s;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Some(n) = total_env_steps {
                cfg.total_env_steps = n;
            }
            let outcome = run_experiment(&cfg, &out)?;
            println!("{} runs written to {}", outcome.summaries.len(), outcome.dir.display());
            for (variant, seed, err) in &outcome.failures {
                eprintln!("failed: {variant} seed {seed}: {err}");
            }
            Ok(if outcome.is_complete() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Aggregate { dir, baseline } => {
            let runs = load_runs(&dir)?;
            let summaries: Vec<_> = runs.into_iter().map(|r| r.summary).collect();
            let rows = aggregate(&summaries)?;
            let improvements = improvements_over(&rows, &baseline);
            write_aggregate(&dir, &rows, &improvements)?;
            for r in &rows {
                println!("{}/{} {}: {:.4} ± {:.4} (n={})", r.experiment, r.variant, r.metric, r.mean, r.std, r.n);
            }
            for i in &improvements {
                println!("{} over {}: {:+.2}%", i.variant, i.baseline, 100.0 * i.improvement);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::PlotData { dir, kind, output } => {
            let runs = load_runs(&dir)?;
            let name = match kind {
                PlotKind::RewardCurve => "plot_reward_curve.csv",
                PlotKind::ScalingTrace => "plot_scaling_trace.csv",
                PlotKind::LambdaBars => "plot_lambda_bars.csv",
            };
            let path = output.unwrap_or_else(|| dir.join(name));
            emit_plot_data(&runs, kind, &path)?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::DefaultConfig { experiment } => {
            print!("{}", ExperimentConfig::for_experiment(experiment).to_toml()?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
