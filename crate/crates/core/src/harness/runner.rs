use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use super::aggregate::{aggregate, best_variant_per_task, improvements_over, write_aggregate, write_best_per_task};
use super::config::{ExperimentConfig, ExperimentKind, Job};
use super::store::{load_run, write_rows, write_run, write_summary, SummaryFile};
use crate::error::{Error, Result};
use crate::oco::{alternating_sequence, run_oco, QuadraticLossSeq, StayPut};
use crate::optim::{Optimizer, Sgd};
use crate::ppo::{lifelong_train, OptimizerKind};
use crate::rng::stream;
use crate::trac::{SimplifiedTrac, Trac};

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub dir: PathBuf,
    pub summaries: Vec<SummaryFile>,
    pub failures: Vec<(String, u64, String)>,
}

impl ExperimentOutcome {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run every (variant, seed) job, persist each run, then aggregate.
/// Failed jobs are reported in the outcome; finished runs stay on disk.
pub fn run_experiment(cfg: &ExperimentConfig, root: &Path) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let dir = root.join(cfg.experiment.name());
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("config.toml"), cfg.to_toml()?)?;

    let jobs: Vec<(String, Job, u64)> = cfg
        .variants()
        .into_iter()
        .flat_map(|(name, job)| cfg.seeds.iter().map(move |&s| (name.clone(), job.clone(), s)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let results: Vec<(String, u64, Result<SummaryFile>)> = pool.install(|| {
        jobs.par_iter()
            .map(|(variant, job, seed)| {
                let run_dir = dir.join(variant).join(format!("seed_{seed}"));
                (variant.clone(), *seed, run_job(cfg, variant, job, *seed, &run_dir))
            })
            .collect()
    });

    let mut summaries = Vec::new();
    let mut failures = Vec::new();
    for (variant, seed, r) in results {
        match r {
            Ok(s) => summaries.push(s),
            Err(e) => failures.push((variant, seed, e.to_string())),
        }
    }

    if !summaries.is_empty() {
        let rows = aggregate(&summaries)?;
        let improvements = improvements_over(&rows, "adam");
        write_aggregate(&dir, &rows, &improvements)?;
        if cfg.experiment == ExperimentKind::L2Sweep {
            let runs = summaries
                .iter()
                .map(|s| load_run(&dir.join(&s.variant).join(format!("seed_{}", s.seed))))
                .collect::<Result<Vec<_>>>()?;
            write_best_per_task(&dir.join("best_lambda_per_task.csv"), &best_variant_per_task(&runs))?;
        }
    }
    Ok(ExperimentOutcome { dir, summaries, failures })
}

pub fn run_job(cfg: &ExperimentConfig, variant: &str, job: &Job, seed: u64, dir: &Path) -> Result<SummaryFile> {
    match job {
        Job::Ppo { kind, activation } => run_ppo(cfg, variant, kind, *activation, seed, dir),
        Job::Oco => run_oco_bench(cfg, variant, seed, dir),
        Job::Simplified => run_simplified(cfg, variant, seed, dir),
    }
}

fn run_ppo(
    cfg: &ExperimentConfig,
    variant: &str,
    kind: &OptimizerKind,
    activation: crate::nn::Activation,
    seed: u64,
    dir: &Path,
) -> Result<SummaryFile> {
    let setup = cfg.setup(activation);
    let record = lifelong_train(&setup, kind, cfg.total_env_steps, seed, false)?;
    let s = record.summarize(variant, seed, cfg.env.shift_period);
    let mut metrics = BTreeMap::new();
    metrics.insert("cumulative_mean_episode_reward".into(), s.cumulative_mean_episode_reward);
    metrics.insert("post_shift_mean_reward".into(), s.post_shift_mean_reward);
    if let Some(last) = record.scales.last() {
        metrics.insert("final_scale".into(), last.scale);
        let max = record.scales.iter().map(|r| r.scale.abs()).fold(0.0, f64::max);
        metrics.insert("max_abs_scale".into(), max);
    }
    let summary = SummaryFile {
        experiment: cfg.experiment.name().into(),
        variant: variant.into(),
        seed,
        metrics,
        mean_scale_per_task: s.mean_scale_per_task,
        task_count: s.task_count,
    };
    write_run(dir, &record, &summary)?;
    Ok(summary)
}

fn run_oco_bench(cfg: &ExperimentConfig, variant: &str, seed: u64, dir: &Path) -> Result<SummaryFile> {
    let o = &cfg.oco;
    let mut rng = stream(seed, "oco");
    let center: Vec<f64> = (0..o.dim).map(|_| rng.gen_range(-o.center_scale..o.center_scale)).collect();
    let origin = vec![0.0; o.dim];
    let trac = |lr: f64| Trac::new(origin.clone(), Sgd::new(lr), &cfg.trac);

    let mut metrics = BTreeMap::new();
    for (name, horizon) in [("T", o.horizon), ("2T", 2 * o.horizon)] {
        let seq = QuadraticLossSeq::stationary(center.clone(), horizon)?;
        let rec = run_oco(&mut trac(o.lr)?, &origin, &seq)?;
        metrics.insert(format!("stationary_avg_regret_{name}"), rec.regret / horizon as f64);
        if name == "T" {
            write_rows(&dir.join("regret_stationary_trac.csv"), &rec.rows)?;
        }
    }

    let tasks = o.horizon.div_ceil(o.task_length);
    let seq = alternating_sequence(&mut rng, o.dim, o.center_scale, o.task_length, tasks)?;
    let mut players: Vec<(&str, Box<dyn Optimizer>)> = vec![
        ("trac", Box::new(trac(o.mistuned_lr)?)),
        ("gd", Box::new(Sgd::new(o.mistuned_lr))),
        ("stay", Box::new(StayPut)),
    ];
    for (name, player) in players.iter_mut() {
        let rec = run_oco(player.as_mut(), &origin, &seq)?;
        metrics.insert(format!("shifting_loss_{name}"), rec.cumulative_loss);
        write_rows(&dir.join(format!("regret_{name}.csv")), &rec.rows)?;
    }
    let summary = SummaryFile {
        experiment: cfg.experiment.name().into(),
        variant: variant.into(),
        seed,
        metrics,
        mean_scale_per_task: Vec::new(),
        task_count: tasks as u64,
    };
    write_summary(dir, &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ResidualRow {
    pub step: usize,
    pub scale: f64,
    pub h: f64,
    pub rel_residual: f64,
    pub discount_gap: f64,
}

/// Checks, step by step, that the simplified-TRAC iterate obeys
/// `θ_{t+1} − θ_ref = (β − α h_t / S_t)(θ_t − θ_ref) − η S_{t+1} g_t`, and
/// how far its effective discount sits from the matching L2 discount
/// `1 − λη = β`.
pub fn simplified_residuals(cfg: &super::config::SimplifiedConfig, seed: u64) -> Result<Vec<ResidualRow>> {
    let mut rng = stream(seed, "simplified");
    let theta_ref: Vec<f64> = (0..cfg.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut st = SimplifiedTrac::new(cfg.eta, cfg.beta, cfg.alpha, theta_ref.clone(), cfg.initial_scale);
    let lambda = (1.0 - cfg.beta) / cfg.eta;
    let mut rows = Vec::with_capacity(cfg.steps);
    for step in 1..=cfg.steps {
        let g: Vec<f64> = (0..cfg.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let before: Vec<f64> = st.theta().iter().zip(&theta_ref).map(|(x, r)| x - r).collect();
        let info = st.step(&g)?;
        let discount = cfg.beta - cfg.alpha * info.h / info.scale_prev;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..cfg.dim {
            let lhs = st.theta()[i] - theta_ref[i];
            let rhs = discount * before[i] - cfg.eta * info.scale_next * g[i];
            num += (lhs - rhs) * (lhs - rhs);
            den += lhs * lhs;
        }
        rows.push(ResidualRow {
            step,
            scale: info.scale_next,
            h: info.h,
            rel_residual: if den > 0.0 { (num / den).sqrt() } else { num.sqrt() },
            discount_gap: (discount - (1.0 - lambda * cfg.eta)).abs(),
        });
    }
    Ok(rows)
}

fn run_simplified(cfg: &ExperimentConfig, variant: &str, seed: u64, dir: &Path) -> Result<SummaryFile> {
    let rows = simplified_residuals(&cfg.simplified, seed)?;
    write_rows(&dir.join("residuals.csv"), &rows)?;
    let max = |f: fn(&ResidualRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let mut metrics = BTreeMap::new();
    metrics.insert("max_rel_residual".into(), max(|r| r.rel_residual));
    metrics.insert("max_discount_gap".into(), max(|r| r.discount_gap));
    metrics.insert("min_abs_scale".into(), rows.iter().map(|r| r.scale.abs()).fold(f64::INFINITY, f64::min));
    let summary = SummaryFile {
        experiment: cfg.experiment.name().into(),
        variant: variant.into(),
        seed,
        metrics,
        mean_scale_per_task: Vec::new(),
        task_count: 1,
    };
    write_summary(dir, &summary)?;
    Ok(summary)
}
