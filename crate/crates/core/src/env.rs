//! CartPole with piecewise-constant observation offsets.
//!
//! Physics are the classic cart-pole equations integrated with explicit
//! Euler. A [`ShiftSchedule`] adds a per-dimension offset to every
//! observation and redraws it every `period` environment steps; each
//! constant-offset phase is one task.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const OBS_DIM: usize = 4;
pub const N_ACTIONS: usize = 2;

const GRAVITY: f64 = 9.8;
const CART_MASS: f64 = 1.0;
const POLE_MASS: f64 = 0.1;
const TOTAL_MASS: f64 = CART_MASS + POLE_MASS;
const HALF_LENGTH: f64 = 0.5;
const POLE_MASS_LENGTH: f64 = POLE_MASS * HALF_LENGTH;
const FORCE: f64 = 10.0;
const TAU: f64 = 0.02;
const X_LIMIT: f64 = 2.4;
const THETA_LIMIT: f64 = 12.0 * 2.0 * std::f64::consts::PI / 360.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CartPoleState {
    pub x: f64,
    pub x_dot: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub step_in_episode: u32,
}

impl CartPoleState {
    pub fn as_array(&self) -> [f64; OBS_DIM] {
        [self.x, self.x_dot, self.theta, self.theta_dot]
    }

    /// Time derivative `(ẋ, ẍ, θ̇, θ̈)` under `force`.
    pub fn derivative(&self, force: f64) -> [f64; OBS_DIM] {
        let (sin, cos) = self.theta.sin_cos();
        let temp = (force + POLE_MASS_LENGTH * self.theta_dot * self.theta_dot * sin) / TOTAL_MASS;
        let theta_acc =
            (GRAVITY * sin - cos * temp) / (HALF_LENGTH * (4.0 / 3.0 - POLE_MASS * cos * cos / TOTAL_MASS));
        let x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos / TOTAL_MASS;
        [self.x_dot, x_acc, self.theta_dot, theta_acc]
    }

    fn failed(&self) -> bool {
        self.x.abs() > X_LIMIT || self.theta.abs() > THETA_LIMIT
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub observation: [f64; OBS_DIM],
    pub reward: f64,
    /// Pole fell or cart left the track.
    pub terminated: bool,
    /// Episode hit the step cap.
    pub truncated: bool,
    /// A new task began on this step.
    pub task_boundary: bool,
}

impl Transition {
    pub fn done(&self) -> bool {
        self.terminated || self.truncated
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvConfig {
    pub shift_period: u64,
    pub offset_range: f64,
    /// Offsets uniform on `[−range, range]`; otherwise on `[0, range]`.
    pub signed_offsets: bool,
    pub episode_cap: u32,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self { shift_period: 200, offset_range: 2.0, signed_offsets: true, episode_cap: 400 }
    }
}

impl EnvConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shift_period == 0 || self.episode_cap == 0 || !(self.offset_range >= 0.0) {
            return Err(Error::Config(format!("invalid environment config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ShiftSchedule {
    period: u64,
    offset_range: f64,
    signed: bool,
    offsets: [f64; OBS_DIM],
    rng: ChaCha8Rng,
    global_step: u64,
    task_index: u64,
}

impl ShiftSchedule {
    /// Draws the first task's offsets immediately.
    pub fn new(config: &EnvConfig, mut rng: ChaCha8Rng) -> Self {
        let offsets = draw_offsets(&mut rng, config.offset_range, config.signed_offsets);
        Self {
            period: config.shift_period,
            offset_range: config.offset_range,
            signed: config.signed_offsets,
            offsets,
            rng,
            global_step: 0,
            task_index: 0,
        }
    }

    /// A schedule that never perturbs (fixed zero offsets).
    pub fn stationary() -> Self {
        let mut s = Self::new(
            &EnvConfig { shift_period: u64::MAX, offset_range: 0.0, ..Default::default() },
            rand::SeedableRng::seed_from_u64(0),
        );
        s.offsets = [0.0; OBS_DIM];
        s
    }

    pub fn with_offsets(mut self, offsets: [f64; OBS_DIM]) -> Self {
        self.offsets = offsets;
        self
    }

    pub fn offsets(&self) -> [f64; OBS_DIM] {
        self.offsets
    }

    pub fn global_step(&self) -> u64 {
        self.global_step
    }

    pub fn task_index(&self) -> u64 {
        self.task_index
    }

    /// Count one environment step; returns `true` when a new task starts.
    pub fn advance(&mut self) -> bool {
        self.global_step += 1;
        if self.global_step % self.period == 0 {
            self.offsets = draw_offsets(&mut self.rng, self.offset_range, self.signed);
            self.task_index += 1;
            true
        } else {
            false
        }
    }

    pub fn observe(&self, state: &CartPoleState) -> [f64; OBS_DIM] {
        let raw = state.as_array();
        std::array::from_fn(|i| raw[i] + self.offsets[i])
    }
}

fn draw_offsets(rng: &mut ChaCha8Rng, range: f64, signed: bool) -> [f64; OBS_DIM] {
    std::array::from_fn(|_| {
        let u: f64 = rng.gen();
        if signed {
            range * (2.0 * u - 1.0)
        } else {
            range * u
        }
    })
}

/// CartPole plus its shift schedule. The schedule clock runs across episode
/// boundaries.
#[derive(Debug, Clone)]
pub struct LifelongCartPole {
    state: CartPoleState,
    done: bool,
    episode_cap: u32,
    schedule: ShiftSchedule,
    reset_rng: ChaCha8Rng,
}

impl LifelongCartPole {
    pub fn new(config: &EnvConfig, schedule_rng: ChaCha8Rng, reset_rng: ChaCha8Rng) -> Self {
        Self::with_schedule(ShiftSchedule::new(config, schedule_rng), config.episode_cap, reset_rng)
    }

    pub fn with_schedule(schedule: ShiftSchedule, episode_cap: u32, reset_rng: ChaCha8Rng) -> Self {
        Self { state: CartPoleState::default(), done: true, episode_cap, schedule, reset_rng }
    }

    pub fn state(&self) -> &CartPoleState {
        &self.state
    }

    pub fn schedule(&self) -> &ShiftSchedule {
        &self.schedule
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn set_state(&mut self, state: CartPoleState) {
        self.state = state;
        self.done = false;
    }

    pub fn observation(&self) -> [f64; OBS_DIM] {
        self.schedule.observe(&self.state)
    }

    /// Start an episode with each state component uniform on ±0.05.
    pub fn reset(&mut self) -> [f64; OBS_DIM] {
        let mut draw = || self.reset_rng.gen_range(-0.05..0.05);
        self.state = CartPoleState { x: draw(), x_dot: draw(), theta: draw(), theta_dot: draw(), step_in_episode: 0 };
        self.done = false;
        self.observation()
    }

    pub fn step(&mut self, action: usize) -> Result<Transition> {
        if self.done {
            return Err(Error::Protocol("step called on a finished episode; reset first".into()));
        }
        if action >= N_ACTIONS {
            return Err(Error::InvalidArgument(format!("action {action} outside 0..{N_ACTIONS}")));
        }
        let force = if action == 1 { FORCE } else { -FORCE };
        let d = self.state.derivative(force);
        let s = &mut self.state;
        s.x += TAU * d[0];
        s.x_dot += TAU * d[1];
        s.theta += TAU * d[2];
        s.theta_dot += TAU * d[3];
        s.step_in_episode += 1;

        let terminated = s.failed();
        let truncated = !terminated && s.step_in_episode >= self.episode_cap;
        self.done = terminated || truncated;
        let task_boundary = self.schedule.advance();
        Ok(Transition { observation: self.observation(), reward: 1.0, terminated, truncated, task_boundary })
    }
}
