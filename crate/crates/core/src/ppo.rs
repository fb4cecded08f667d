//! PPO on the lifelong CartPole with a pluggable optimizer.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{EnvConfig, LifelongCartPole, N_ACTIONS, OBS_DIM};
use crate::error::{check_dims, Error, Result};
use crate::nn::{Activation, Cache, Categorical, Mlp};
use crate::optim::{Adam, AdamConfig, L2Init, Optimizer};
use crate::rng::stream;
use crate::trac::{PrivilegedReset, ScaleRecord, Trac, TracConfig, Warmstart};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PpoConfig {
    pub steps_per_update: usize,
    pub minibatch_size: usize,
    pub epochs_per_update: usize,
    pub clip_eps: f64,
    pub value_coeff: f64,
    pub entropy_coeff: f64,
    pub base_lr: f64,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub hidden: Vec<usize>,
    pub activation: Activation,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            steps_per_update: 800,
            minibatch_size: 32,
            epochs_per_update: 5,
            clip_eps: 0.2,
            value_coeff: 0.5,
            entropy_coeff: 0.01,
            base_lr: 0.01,
            gamma: 0.99,
            gae_lambda: 0.95,
            hidden: vec![64, 64],
            activation: Activation::Relu,
        }
    }
}

impl PpoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.minibatch_size == 0 || self.steps_per_update % self.minibatch_size != 0 {
            return Err(Error::Config(format!(
                "steps_per_update {} must be a positive multiple of minibatch_size {}",
                self.steps_per_update, self.minibatch_size
            )));
        }
        if !(self.clip_eps > 0.0 && self.clip_eps < 1.0) {
            return Err(Error::Config(format!("clip_eps must lie in (0, 1), got {}", self.clip_eps)));
        }
        if self.epochs_per_update == 0 || self.hidden.is_empty() {
            return Err(Error::Config("need at least one epoch and one hidden layer".into()));
        }
        Ok(())
    }

    /// Optimizer steps taken by one [`train_update`].
    pub fn optimizer_steps_per_update(&self) -> usize {
        self.steps_per_update / self.minibatch_size * self.epochs_per_update
    }
}

/// Separate policy and value MLPs sharing one flat vector `[policy | value]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActorCritic {
    pub policy: Mlp,
    pub value: Mlp,
}

impl ActorCritic {
    pub fn new(obs_dim: usize, n_actions: usize, hidden: &[usize], activation: Activation) -> Result<Self> {
        let sizes = |out| [&[obs_dim][..], hidden, &[out]].concat();
        Ok(Self { policy: Mlp::new(&sizes(n_actions), activation)?, value: Mlp::new(&sizes(1), activation)? })
    }

    pub fn for_cartpole(cfg: &PpoConfig) -> Result<Self> {
        Self::new(OBS_DIM, N_ACTIONS, &cfg.hidden, cfg.activation)
    }

    pub fn param_count(&self) -> usize {
        self.policy.param_count() + self.value.param_count()
    }

    pub fn split<'a>(&self, params: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        params.split_at(self.policy.param_count())
    }

    pub fn init<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut p = self.policy.init(rng);
        p.extend(self.value.init(rng));
        p
    }

    pub fn act(&self, params: &[f64], obs: &[f64]) -> Result<(Categorical, f64)> {
        let (pp, vp) = self.split(params);
        let dist = Categorical::from_logits(&self.policy.forward(pp, obs)?)?;
        let v = self.value.forward(vp, obs)?[0];
        Ok((dist, v))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RolloutBatch {
    pub observations: Vec<[f64; OBS_DIM]>,
    pub actions: Vec<usize>,
    pub log_probs: Vec<f64>,
    pub rewards: Vec<f64>,
    pub values: Vec<f64>,
    pub terminated: Vec<bool>,
    pub truncated: Vec<bool>,
    /// `V(s_final)` on truncated steps, zero elsewhere.
    pub truncation_values: Vec<f64>,
    /// `V` of the observation following the last step.
    pub last_value: f64,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

impl RolloutBatch {
    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }
}

/// One finished episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRow {
    pub start_step: u64,
    pub end_step: u64,
    pub start_task: u64,
    pub end_task: u64,
    pub reward: f64,
}

/// Environment loop state that persists across rollouts.
pub struct Collector {
    env: LifelongCartPole,
    obs: [f64; OBS_DIM],
    action_rng: ChaCha8Rng,
    episode_reward: f64,
    episode_start: (u64, u64),
}

impl Collector {
    pub fn new(mut env: LifelongCartPole, action_rng: ChaCha8Rng) -> Self {
        let obs = env.reset();
        let start = (env.schedule().global_step(), env.schedule().task_index());
        Self { env, obs, action_rng, episode_reward: 0.0, episode_start: start }
    }

    pub fn env(&self) -> &LifelongCartPole {
        &self.env
    }

    /// Step the environment `steps` times under the current policy.
    /// `on_boundary` fires at every task boundary and may rewrite `params`.
    pub fn collect(
        &mut self,
        net: &ActorCritic,
        params: &mut Vec<f64>,
        steps: usize,
        episodes: &mut Vec<EpisodeRow>,
        on_boundary: &mut dyn FnMut(&mut Vec<f64>),
    ) -> Result<RolloutBatch> {
        let mut b = RolloutBatch::default();
        for _ in 0..steps {
            let (dist, value) = net.act(params, &self.obs)?;
            let action = dist.sample(&mut self.action_rng);
            let tr = self.env.step(action)?;
            b.observations.push(self.obs);
            b.actions.push(action);
            b.log_probs.push(dist.log_prob(action));
            b.rewards.push(tr.reward);
            b.values.push(value);
            b.terminated.push(tr.terminated);
            b.truncated.push(tr.truncated);
            self.episode_reward += tr.reward;
            if tr.task_boundary {
                on_boundary(params);
            }
            let trunc_value = if tr.truncated { net.act(params, &tr.observation)?.1 } else { 0.0 };
            b.truncation_values.push(trunc_value);
            if tr.done() {
                let sched = self.env.schedule();
                episodes.push(EpisodeRow {
                    start_step: self.episode_start.0,
                    end_step: sched.global_step(),
                    start_task: self.episode_start.1,
                    end_task: sched.task_index(),
                    reward: self.episode_reward,
                });
                self.episode_reward = 0.0;
                self.episode_start = (sched.global_step(), sched.task_index());
                self.obs = self.env.reset();
            } else {
                self.obs = tr.observation;
            }
        }
        b.last_value = net.act(params, &self.obs)?.1;
        Ok(b)
    }
}

/// Generalized advantage estimation, cut at episode ends. Truncated steps
/// bootstrap from `V(s_final)`; terminated steps do not bootstrap.
pub fn compute_advantages(batch: &mut RolloutBatch, gamma: f64, gae_lambda: f64) {
    let n = batch.len();
    batch.advantages = vec![0.0; n];
    let mut next_adv = 0.0;
    for t in (0..n).rev() {
        let (next_value, carry) = if batch.terminated[t] {
            (0.0, 0.0)
        } else if batch.truncated[t] {
            (batch.truncation_values[t], 0.0)
        } else if t + 1 == n {
            (batch.last_value, 0.0)
        } else {
            (batch.values[t + 1], next_adv)
        };
        let delta = batch.rewards[t] + gamma * next_value - batch.values[t];
        next_adv = delta + gamma * gae_lambda * carry;
        batch.advantages[t] = next_adv;
    }
    batch.returns = batch.advantages.iter().zip(&batch.values).map(|(a, v)| a + v).collect();
}

/// Zero-mean, unit-variance copy of the advantages.
pub fn normalized_advantages(adv: &[f64]) -> Vec<f64> {
    let n = adv.len() as f64;
    let mean = adv.iter().sum::<f64>() / n;
    let var = adv.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    adv.iter().map(|a| (a - mean) / (std + 1e-8)).collect()
}

/// Per-sample inputs to the surrogate.
#[derive(Debug, Clone, PartialEq)]
pub struct Minibatch {
    pub observations: Vec<[f64; OBS_DIM]>,
    pub actions: Vec<usize>,
    pub behavior_log_probs: Vec<f64>,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

impl Minibatch {
    pub fn gather(batch: &RolloutBatch, norm_adv: &[f64], idx: &[usize]) -> Self {
        Self {
            observations: idx.iter().map(|&i| batch.observations[i]).collect(),
            actions: idx.iter().map(|&i| batch.actions[i]).collect(),
            behavior_log_probs: idx.iter().map(|&i| batch.log_probs[i]).collect(),
            advantages: idx.iter().map(|&i| norm_adv[i]).collect(),
            returns: idx.iter().map(|&i| batch.returns[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossParts {
    pub policy: f64,
    pub value: f64,
    pub entropy: f64,
    pub total: f64,
}

/// Clipped-ratio coefficient `clip(ρ, 1−ε, 1+ε)`.
pub fn clipped_ratio(ratio: f64, clip_eps: f64) -> f64 {
    ratio.clamp(1.0 - clip_eps, 1.0 + clip_eps)
}

/// PPO objective and its exact gradient over `[policy | value]` params.
pub fn ppo_loss_and_grad(net: &ActorCritic, params: &[f64], mb: &Minibatch, cfg: &PpoConfig) -> Result<(LossParts, Vec<f64>)> {
    check_dims(net.param_count(), params.len())?;
    let n = mb.actions.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty minibatch".into()));
    }
    let inv_n = 1.0 / n as f64;
    let (pp, vp) = net.split(params);
    let mut grad = vec![0.0; params.len()];
    let (gp, gv) = grad.split_at_mut(net.policy.param_count());
    let mut parts = LossParts::default();
    let mut pcache = Cache::default();
    let mut vcache = Cache::default();

    for i in 0..n {
        let obs = &mb.observations[i];
        net.policy.forward_cached(pp, obs, &mut pcache)?;
        let dist = Categorical::from_logits(pcache.output())?;
        let a = mb.actions[i];
        let adv = mb.advantages[i];
        let ratio = (dist.log_prob(a) - mb.behavior_log_probs[i]).exp();
        let unclipped = ratio * adv;
        let clipped = clipped_ratio(ratio, cfg.clip_eps) * adv;
        parts.policy -= unclipped.min(clipped) * inv_n;
        let entropy = dist.entropy();
        parts.entropy += entropy * inv_n;

        // d(−min)/d log π is −ρA on the unclipped branch, zero when the clip binds
        let d_logp = if unclipped <= clipped { -unclipped * inv_n } else { 0.0 };
        let gl = dist.grad_log_prob(a);
        let ge = dist.grad_entropy();
        let upstream: Vec<f64> = gl
            .iter()
            .zip(&ge)
            .map(|(l, e)| d_logp * l - cfg.entropy_coeff * inv_n * e)
            .collect();
        net.policy.backward_cached(pp, &pcache, &upstream, gp)?;

        net.value.forward_cached(vp, obs, &mut vcache)?;
        let err = vcache.output()[0] - mb.returns[i];
        parts.value += err * err * inv_n;
        net.value.backward_cached(vp, &vcache, &[cfg.value_coeff * 2.0 * err * inv_n], gv)?;
    }
    parts.total = parts.policy + cfg.value_coeff * parts.value - cfg.entropy_coeff * parts.entropy;
    for (name, v) in [("policy loss", parts.policy), ("value loss", parts.value), ("entropy", parts.entropy)] {
        if !v.is_finite() {
            return Err(Error::NonFinite(name.into()));
        }
    }
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("PPO gradient".into()));
    }
    Ok((parts, grad))
}

#[derive(Debug, Clone, Default)]
pub struct UpdateStats {
    pub optimizer_steps: usize,
    pub mean_loss: f64,
    pub scales: Vec<ScaleRecord>,
}

/// Several epochs of shuffled minibatch steps over one batch.
pub fn train_update(
    net: &ActorCritic,
    params: &mut [f64],
    optimizer: &mut dyn Optimizer,
    batch: &RolloutBatch,
    cfg: &PpoConfig,
    rng: &mut ChaCha8Rng,
) -> Result<UpdateStats> {
    let norm_adv = normalized_advantages(&batch.advantages);
    let mut idx: Vec<usize> = (0..batch.len()).collect();
    let mut stats = UpdateStats::default();
    let mut loss_sum = 0.0;
    for _ in 0..cfg.epochs_per_update {
        idx.shuffle(rng);
        for chunk in idx.chunks(cfg.minibatch_size) {
            let mb = Minibatch::gather(batch, &norm_adv, chunk);
            let (loss, grad) = ppo_loss_and_grad(net, params, &mb, cfg)?;
            optimizer.step(params, &grad)?;
            loss_sum += loss.total;
            stats.optimizer_steps += 1;
            if let Some(scale) = optimizer.scale() {
                stats.scales.push(ScaleRecord {
                    step: 0,
                    scale,
                    tuner_outputs: optimizer.tuner_outputs().map(|o| o.to_vec()).unwrap_or_default(),
                });
            }
        }
    }
    stats.mean_loss = loss_sum / stats.optimizer_steps.max(1) as f64;
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptimizerKind {
    Adam,
    Trac,
    L2Init { lambda: f64 },
    WeightDecay { weight_decay: f64 },
    PrivilegedReset,
    WarmstartTrac { warm_steps: u64 },
    Sgd { lr: f64 },
}

impl OptimizerKind {
    pub fn label(&self) -> String {
        match self {
            OptimizerKind::Adam => "adam".into(),
            OptimizerKind::Trac => "trac".into(),
            OptimizerKind::L2Init { lambda } => format!("l2_init_{lambda}"),
            OptimizerKind::WeightDecay { weight_decay } => format!("weight_decay_{weight_decay}"),
            OptimizerKind::PrivilegedReset => "privileged_reset".into(),
            OptimizerKind::WarmstartTrac { warm_steps } => format!("warmstart_trac_{warm_steps}"),
            OptimizerKind::Sgd { lr } => format!("sgd_{lr}"),
        }
    }
}

/// Everything `lifelong_train` needs beyond the optimizer choice.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainSetup {
    pub ppo: PpoConfig,
    pub env: EnvConfig,
    pub trac: TracConfig,
}

pub fn build_optimizer(
    kind: &OptimizerKind,
    setup: &TrainSetup,
    net: &ActorCritic,
    init: &[f64],
    seed: u64,
) -> Result<Box<dyn Optimizer>> {
    let d = init.len();
    let adam = AdamConfig::default().with_lr(setup.ppo.base_lr);
    Ok(match kind {
        OptimizerKind::Adam => Box::new(Adam::new(d, adam)),
        OptimizerKind::Trac => Box::new(Trac::new(init.to_vec(), Adam::new(d, adam), &setup.trac)?),
        OptimizerKind::L2Init { lambda } => Box::new(L2Init::new(Adam::new(d, adam), *lambda, init.to_vec())?),
        OptimizerKind::WeightDecay { weight_decay } => {
            Box::new(Adam::new(d, adam.with_weight_decay(*weight_decay)))
        }
        OptimizerKind::PrivilegedReset => {
            let net = net.clone();
            let mut rng = stream(seed, "reinit");
            Box::new(PrivilegedReset::new(Adam::new(d, adam), move || net.init(&mut rng)))
        }
        OptimizerKind::WarmstartTrac { warm_steps } => {
            Box::new(Warmstart::new(Adam::new(d, adam), *warm_steps, setup.trac.clone(), init)?)
        }
        OptimizerKind::Sgd { lr } => Box::new(crate::optim::Sgd::new(*lr)),
    })
}

/// One row per PPO update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpdateRow {
    pub update: u64,
    pub env_step: u64,
    pub task_index: u64,
    pub episodes: u64,
    pub mean_episode_reward: f64,
    pub mean_scale: Option<f64>,
    pub final_scale: Option<f64>,
    pub mean_loss: f64,
}

/// One row per optimizer step of a scaled optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub step: u64,
    pub task_index: u64,
    pub scale: f64,
    pub tuner_outputs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub label: String,
    pub seed: u64,
    pub cumulative_mean_episode_reward: f64,
    /// Mean over updates after the first task boundary.
    pub post_shift_mean_reward: f64,
    pub mean_scale_per_task: Vec<Option<f64>>,
    pub task_count: u64,
    pub updates: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunRecord {
    pub updates: Vec<UpdateRow>,
    pub episodes: Vec<EpisodeRow>,
    pub scales: Vec<ScaleRow>,
    /// Parameter vectors written at task boundaries, when requested.
    pub boundary_params: Vec<Vec<f64>>,
    pub wall_time_secs: f64,
}

impl RunRecord {
    pub fn summarize(&self, label: &str, seed: u64, shift_period: u64) -> RunSummary {
        let cumulative = self.updates.iter().map(|u| u.mean_episode_reward).sum();
        let post: Vec<f64> = self
            .updates
            .iter()
            .filter(|u| u.env_step > shift_period)
            .map(|u| u.mean_episode_reward)
            .collect();
        let post_shift_mean_reward = if post.is_empty() { 0.0 } else { post.iter().sum::<f64>() / post.len() as f64 };
        let task_count = self.updates.last().map(|u| u.task_index + 1).unwrap_or(0);
        let mut sums = vec![(0.0, 0usize); task_count as usize];
        for s in &self.scales {
            if let Some(e) = sums.get_mut(s.task_index as usize) {
                e.0 += s.scale;
                e.1 += 1;
            }
        }
        RunSummary {
            label: label.to_string(),
            seed,
            cumulative_mean_episode_reward: cumulative,
            post_shift_mean_reward,
            mean_scale_per_task: sums.iter().map(|(s, n)| (*n > 0).then(|| s / *n as f64)).collect(),
            task_count,
            updates: self.updates.len() as u64,
        }
    }
}

/// Alternate rollouts and updates on the shifting CartPole.
pub fn lifelong_train(
    setup: &TrainSetup,
    kind: &OptimizerKind,
    total_env_steps: u64,
    seed: u64,
    keep_boundary_params: bool,
) -> Result<RunRecord> {
    setup.ppo.validate()?;
    setup.env.validate()?;
    let cfg = &setup.ppo;
    if total_env_steps < cfg.steps_per_update as u64 {
        return Err(Error::Config(format!(
            "total_env_steps {total_env_steps} below one rollout of {}",
            cfg.steps_per_update
        )));
    }
    let started = Instant::now();
    let net = ActorCritic::for_cartpole(cfg)?;
    let mut params = net.init(&mut stream(seed, "init"));
    let mut optimizer = build_optimizer(kind, setup, &net, &params, seed)?;
    let env = LifelongCartPole::new(&setup.env, stream(seed, "schedule"), stream(seed, "reset"));
    let mut collector = Collector::new(env, stream(seed, "actions"));
    let mut shuffle = stream(seed, "shuffle");

    let mut record = RunRecord::default();
    let n_updates = total_env_steps / cfg.steps_per_update as u64;
    let mut opt_step = 0u64;
    for update in 0..n_updates {
        let first_episode = record.episodes.len();
        let boundary_params = &mut record.boundary_params;
        let opt = &mut optimizer;
        let mut on_boundary = |p: &mut Vec<f64>| {
            opt.task_boundary(p);
            if keep_boundary_params {
                boundary_params.push(p.clone());
            }
        };
        let mut batch =
            collector.collect(&net, &mut params, cfg.steps_per_update, &mut record.episodes, &mut on_boundary)?;
        compute_advantages(&mut batch, cfg.gamma, cfg.gae_lambda);
        let task_index = collector.env().schedule().task_index();
        let stats = train_update(&net, &mut params, optimizer.as_mut(), &batch, cfg, &mut shuffle)?;

        let finished = &record.episodes[first_episode..];
        let mean_reward = if finished.is_empty() {
            0.0
        } else {
            finished.iter().map(|e| e.reward).sum::<f64>() / finished.len() as f64
        };
        let mean_scale = (!stats.scales.is_empty())
            .then(|| stats.scales.iter().map(|s| s.scale).sum::<f64>() / stats.scales.len() as f64);
        for s in stats.scales.iter() {
            opt_step += 1;
            record.scales.push(ScaleRow {
                step: opt_step,
                task_index,
                scale: s.scale,
                tuner_outputs: s.tuner_outputs.clone(),
            });
        }
        if stats.scales.is_empty() {
            opt_step += stats.optimizer_steps as u64;
        }
        record.updates.push(UpdateRow {
            update,
            env_step: collector.env().schedule().global_step(),
            task_index,
            episodes: finished.len() as u64,
            mean_episode_reward: mean_reward,
            mean_scale,
            final_scale: stats.scales.last().map(|s| s.scale),
            mean_loss: stats.mean_loss,
        });
    }
    record.wall_time_secs = started.elapsed().as_secs_f64();
    Ok(record)
}
