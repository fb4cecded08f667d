//! First-order base optimizers over a flat parameter vector.

use crate::error::{check_dims, check_finite, Error, Result};

/// A stateful first-order update rule `θ ← OPT(θ, g)`.
pub trait Optimizer: Send {
    fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()>;

    /// Discard accumulated state and restart from `params`.
    fn reset(&mut self, params: &[f64]);

    /// Called by a trainer at every task boundary. Only privileged
    /// optimizers act on it.
    fn task_boundary(&mut self, _params: &mut [f64]) {}

    /// Current scaling `S` for meta-optimizers that have one.
    fn scale(&self) -> Option<f64> {
        None
    }

    /// Latest per-tuner outputs, when the optimizer has tuners.
    fn tuner_outputs(&self) -> Option<&[f64]> {
        None
    }
}

impl<O: Optimizer + ?Sized> Optimizer for Box<O> {
    fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        (**self).step(params, grad)
    }
    fn reset(&mut self, params: &[f64]) {
        (**self).reset(params)
    }
    fn task_boundary(&mut self, params: &mut [f64]) {
        (**self).task_boundary(params)
    }
    fn scale(&self) -> Option<f64> {
        (**self).scale()
    }
    fn tuner_outputs(&self) -> Option<&[f64]> {
        (**self).tuner_outputs()
    }
}

pub fn sgd_step(params: &[f64], grad: &[f64], lr: f64) -> Result<Vec<f64>> {
    check_dims(params.len(), grad.len())?;
    Ok(params.iter().zip(grad).map(|(p, g)| p - lr * g).collect())
}

/// Plain gradient descent with a constant learning rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sgd {
    pub lr: f64,
}

impl Sgd {
    pub fn new(lr: f64) -> Self {
        Self { lr }
    }
}

impl Optimizer for Sgd {
    fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        check_dims(params.len(), grad.len())?;
        check_finite("gradient", grad)?;
        for (p, g) in params.iter_mut().zip(grad) {
            *p -= self.lr * g;
        }
        Ok(())
    }

    fn reset(&mut self, _params: &[f64]) {}
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub weight_decay: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { lr: 0.01, beta1: 0.9, beta2: 0.999, eps: 1e-8, weight_decay: 0.0 }
    }
}

impl AdamConfig {
    pub fn with_lr(mut self, lr: f64) -> Self {
        self.lr = lr;
        self
    }

    pub fn with_weight_decay(mut self, wd: f64) -> Self {
        self.weight_decay = wd;
        self
    }
}

/// Bias-corrected Adam with optional decoupled weight decay.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub config: AdamConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(dim: usize, config: AdamConfig) -> Self {
        Self { config, m: vec![0.0; dim], v: vec![0.0; dim], t: 0 }
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn moments(&self) -> (&[f64], &[f64]) {
        (&self.m, &self.v)
    }
}

impl Optimizer for Adam {
    fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        check_dims(self.m.len(), params.len())?;
        check_dims(self.m.len(), grad.len())?;
        check_finite("gradient", grad)?;
        let AdamConfig { lr, beta1, beta2, eps, weight_decay } = self.config;
        self.t += 1;
        let bc1 = 1.0 - beta1.powi(self.t as i32);
        let bc2 = 1.0 - beta2.powi(self.t as i32);
        for i in 0..params.len() {
            let g = grad[i];
            self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * g;
            self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            let mut delta = lr * m_hat / (v_hat.sqrt() + eps);
            if weight_decay > 0.0 {
                delta += lr * weight_decay * params[i];
            }
            params[i] -= delta;
        }
        Ok(())
    }

    fn reset(&mut self, params: &[f64]) {
        self.m = vec![0.0; params.len()];
        self.v = vec![0.0; params.len()];
        self.t = 0;
    }
}

/// `θ' = θ − η [g + λ (θ − θ_ref)]`.
pub fn l2_init_step(lr: f64, lambda: f64, theta_ref: &[f64], params: &[f64], grad: &[f64]) -> Result<Vec<f64>> {
    check_dims(params.len(), grad.len())?;
    check_dims(params.len(), theta_ref.len())?;
    Ok(params
        .iter()
        .zip(grad)
        .zip(theta_ref)
        .map(|((p, g), r)| p - lr * (g + lambda * (p - r)))
        .collect())
}

/// Adds the gradient of `λ/2 ‖θ − θ_ref‖²` before delegating to `inner`.
/// With an [`Sgd`] inner this is exactly [`l2_init_step`].
pub struct L2Init<O> {
    inner: O,
    lambda: f64,
    theta_ref: Vec<f64>,
    scratch: Vec<f64>,
}

impl<O: Optimizer> L2Init<O> {
    pub fn new(inner: O, lambda: f64, theta_ref: Vec<f64>) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::Config(format!("L2 strength must be nonnegative, got {lambda}")));
        }
        let scratch = vec![0.0; theta_ref.len()];
        Ok(Self { inner, lambda, theta_ref, scratch })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn theta_ref(&self) -> &[f64] {
        &self.theta_ref
    }
}

impl<O: Optimizer> Optimizer for L2Init<O> {
    fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        check_dims(self.theta_ref.len(), params.len())?;
        check_dims(self.theta_ref.len(), grad.len())?;
        for i in 0..params.len() {
            self.scratch[i] = grad[i] + self.lambda * (params[i] - self.theta_ref[i]);
        }
        self.inner.step(params, &self.scratch)
    }

    fn reset(&mut self, params: &[f64]) {
        self.theta_ref = params.to_vec();
        self.scratch = vec![0.0; params.len()];
        self.inner.reset(params);
    }
}

/// λ grid for the L2-init sweep.
pub const L2_LAMBDA_GRID: [f64; 13] = [0.2, 0.8, 1.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0];

/// Decoupled weight-decay grid.
pub const WEIGHT_DECAY_GRID: [f64; 9] = [0.0001, 0.001, 0.01, 0.1, 1.0, 5.0, 10.0, 15.0, 50.0];
