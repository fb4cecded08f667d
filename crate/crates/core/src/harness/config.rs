use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::EnvConfig;
use crate::error::{Error, Result};
use crate::nn::Activation;
use crate::optim::{L2_LAMBDA_GRID, WEIGHT_DECAY_GRID};
use crate::ppo::{OptimizerKind, PpoConfig, TrainSetup};
use crate::trac::TracConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ExperimentKind {
    Trac,
    Adam,
    CreluAdam,
    L2Sweep,
    WeightDecaySweep,
    PrivilegedReset,
    WarmstartTrac,
    WarmstartAdam,
    OcoBench,
    SimplifiedEquivalence,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Trac => "trac",
            ExperimentKind::Adam => "adam",
            ExperimentKind::CreluAdam => "crelu_adam",
            ExperimentKind::L2Sweep => "l2_sweep",
            ExperimentKind::WeightDecaySweep => "weight_decay_sweep",
            ExperimentKind::PrivilegedReset => "privileged_reset",
            ExperimentKind::WarmstartTrac => "warmstart_trac",
            ExperimentKind::WarmstartAdam => "warmstart_adam",
            ExperimentKind::OcoBench => "oco_bench",
            ExperimentKind::SimplifiedEquivalence => "simplified_equivalence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub lambda_grid: Vec<f64>,
    pub weight_decay_grid: Vec<f64>,
    pub warm_steps: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { lambda_grid: L2_LAMBDA_GRID.to_vec(), weight_decay_grid: WEIGHT_DECAY_GRID.to_vec(), warm_steps: 30 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OcoConfig {
    pub dim: usize,
    pub horizon: usize,
    pub task_length: usize,
    pub center_scale: f64,
    /// Learning rate of the GD base (and of plain GD).
    pub lr: f64,
    /// Learning rate of the mis-tuned GD run on the shifting stream.
    pub mistuned_lr: f64,
}

impl Default for OcoConfig {
    fn default() -> Self {
        Self { dim: 5, horizon: 500, task_length: 1, center_scale: 1.0, lr: 0.1, mistuned_lr: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimplifiedConfig {
    pub eta: f64,
    pub beta: f64,
    pub alpha: f64,
    pub initial_scale: f64,
    pub dim: usize,
    pub steps: usize,
}

impl Default for SimplifiedConfig {
    fn default() -> Self {
        Self { eta: 0.1, beta: 0.999, alpha: 0.01, initial_scale: 1.0, dim: 4, steps: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seeds: Vec<u64>,
    pub total_env_steps: u64,
    pub workers: usize,
    pub env: EnvConfig,
    pub ppo: PpoConfig,
    pub trac: TracConfig,
    pub sweep: SweepConfig,
    pub oco: OcoConfig,
    pub simplified: SimplifiedConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::Trac,
            seeds: (0..25).collect(),
            total_env_steps: 40_000,
            workers: 1,
            env: EnvConfig::default(),
            ppo: PpoConfig::default(),
            trac: TracConfig::default(),
            sweep: SweepConfig::default(),
            oco: OcoConfig::default(),
            simplified: SimplifiedConfig::default(),
        }
    }
}

/// What a single (variant, seed) job runs.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Ppo { kind: OptimizerKind, activation: Activation },
    Oco,
    Simplified,
}

impl ExperimentConfig {
    pub fn for_experiment(experiment: ExperimentKind) -> Self {
        Self { experiment, ..Default::default() }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seed list is empty".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if matches!(self.experiment, ExperimentKind::OcoBench | ExperimentKind::SimplifiedEquivalence) {
            if self.oco.dim == 0 || self.oco.horizon == 0 || self.oco.task_length == 0 || self.simplified.dim == 0 {
                return Err(Error::Config("OCO dimensions and horizon must be positive".into()));
            }
            return Ok(());
        }
        self.env.validate()?;
        self.ppo.validate()?;
        if self.total_env_steps < self.ppo.steps_per_update as u64 {
            return Err(Error::Config(format!(
                "total_env_steps {} is below one rollout ({})",
                self.total_env_steps, self.ppo.steps_per_update
            )));
        }
        Ok(())
    }

    pub fn setup(&self, activation: Activation) -> TrainSetup {
        TrainSetup {
            ppo: PpoConfig { activation, ..self.ppo.clone() },
            env: self.env.clone(),
            trac: self.trac.clone(),
        }
    }

    /// Named variants of this experiment.
    pub fn variants(&self) -> Vec<(String, Job)> {
        let act = self.ppo.activation;
        let ppo = |kind| Job::Ppo { kind, activation: act };
        match self.experiment {
            ExperimentKind::Trac => vec![("trac".into(), ppo(OptimizerKind::Trac))],
            ExperimentKind::Adam | ExperimentKind::WarmstartAdam => {
                vec![(self.experiment.name().into(), ppo(OptimizerKind::Adam))]
            }
            ExperimentKind::CreluAdam => {
                vec![("crelu_adam".into(), Job::Ppo { kind: OptimizerKind::Adam, activation: Activation::Crelu })]
            }
            ExperimentKind::L2Sweep => self
                .sweep
                .lambda_grid
                .iter()
                .map(|&lambda| (format!("lambda_{lambda}"), ppo(OptimizerKind::L2Init { lambda })))
                .collect(),
            ExperimentKind::WeightDecaySweep => self
                .sweep
                .weight_decay_grid
                .iter()
                .map(|&weight_decay| (format!("wd_{weight_decay}"), ppo(OptimizerKind::WeightDecay { weight_decay })))
                .collect(),
            ExperimentKind::PrivilegedReset => vec![("privileged_reset".into(), ppo(OptimizerKind::PrivilegedReset))],
            ExperimentKind::WarmstartTrac => vec![(
                "warmstart_trac".into(),
                ppo(OptimizerKind::WarmstartTrac { warm_steps: self.sweep.warm_steps }),
            )],
            ExperimentKind::OcoBench => vec![("oco_bench".into(), Job::Oco)],
            ExperimentKind::SimplifiedEquivalence => vec![("simplified_equivalence".into(), Job::Simplified)],
        }
    }
}
