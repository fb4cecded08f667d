//! TRAC: a parameter-free scale on top of any base optimizer.
//!
//! The base optimizer runs on its own iterate `θ^Base`, anchored at a
//! reference point `θ_ref`. A bank of discounted tuners watches the
//! projection of each gradient onto the current offset and their summed
//! output `S` shrinks the base's offset toward the reference:
//!
//! ```text
//! θ_{t+1} = θ_ref + S_{t+1} (θ^Base_{t+1} − θ_ref)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, check_finite, Error, Result};
use crate::optim::Optimizer;
use crate::specfun::ErfiDomain;
use crate::tuner::{TunerState, DEFAULT_EPS};

pub const DEFAULT_BETAS: [f64; 6] = [0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999];

/// Which offset the tuners project the gradient onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HMode {
    /// `⟨g_t, θ_t − θ_ref⟩`
    #[default]
    MetaOffset,
    /// `⟨g_t, θ^Base_t − θ_ref⟩`
    BaseOffset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TracConfig {
    pub betas: Vec<f64>,
    pub eps: f64,
    /// Additive floor on `S`, also its initial value.
    pub s_floor: f64,
    pub h_mode: HMode,
    pub clamp_nonneg: bool,
    pub erfi_clamp: f64,
}

impl Default for TracConfig {
    fn default() -> Self {
        Self {
            betas: DEFAULT_BETAS.to_vec(),
            eps: DEFAULT_EPS,
            s_floor: DEFAULT_EPS,
            h_mode: HMode::MetaOffset,
            clamp_nonneg: false,
            erfi_clamp: 6.0,
        }
    }
}

impl TracConfig {
    fn tuners(&self) -> Result<Vec<TunerState>> {
        if self.betas.is_empty() {
            return Err(Error::Config("TRAC needs at least one discount factor".into()));
        }
        let domain = ErfiDomain::new(self.erfi_clamp)?;
        self.betas
            .iter()
            .map(|&b| {
                Ok(TunerState::new(b, self.eps)?
                    .with_clamp_nonneg(self.clamp_nonneg)
                    .with_domain(domain))
            })
            .collect()
    }
}

/// One row of the scaling trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRecord {
    pub step: u64,
    pub scale: f64,
    pub tuner_outputs: Vec<f64>,
}

pub struct Trac<B> {
    base: B,
    theta_ref: Vec<f64>,
    theta_base: Vec<f64>,
    tuners: Vec<TunerState>,
    outputs: Vec<f64>,
    scale: f64,
    s_floor: f64,
    h_mode: HMode,
    t: u64,
}

impl<B: Optimizer> Trac<B> {
    /// `base` must already be positioned at `theta_ref`.
    pub fn new(theta_ref: Vec<f64>, base: B, config: &TracConfig) -> Result<Self> {
        check_finite("reference point", &theta_ref)?;
        let tuners = config.tuners()?;
        Ok(Self {
            base,
            theta_base: theta_ref.clone(),
            theta_ref,
            outputs: vec![0.0; tuners.len()],
            tuners,
            scale: config.s_floor,
            s_floor: config.s_floor,
            h_mode: config.h_mode,
            t: 0,
        })
    }

    pub fn theta_ref(&self) -> &[f64] {
        &self.theta_ref
    }

    pub fn theta_base(&self) -> &[f64] {
        &self.theta_base
    }

    pub fn tuners(&self) -> &[TunerState] {
        &self.tuners
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn record(&self) -> ScaleRecord {
        ScaleRecord { step: self.t, scale: self.scale, tuner_outputs: self.outputs.clone() }
    }

    /// The current iterate `θ_t`.
    pub fn current(&self) -> Vec<f64> {
        self.theta_ref
            .iter()
            .zip(&self.theta_base)
            .map(|(r, b)| r + (b - r) * self.scale)
            .collect()
    }
}

impl<B: Optimizer> Optimizer for Trac<B> {
    /// `params` holds `θ_t` on entry and `θ_{t+1}` on exit.
    fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        let d = self.theta_ref.len();
        check_dims(d, params.len())?;
        check_dims(d, grad.len())?;
        check_finite("gradient", grad)?;

        let anchor: &[f64] = match self.h_mode {
            HMode::MetaOffset => params,
            HMode::BaseOffset => &self.theta_base,
        };
        let h: f64 = grad
            .iter()
            .zip(anchor)
            .zip(&self.theta_ref)
            .map(|((g, x), r)| g * (x - r))
            .sum();

        self.base.step(&mut self.theta_base, grad)?;

        let mut scale = self.s_floor;
        for (tuner, out) in self.tuners.iter_mut().zip(self.outputs.iter_mut()) {
            *out = tuner.step(h)?;
            scale += *out;
        }
        if !scale.is_finite() {
            return Err(Error::NonFinite("TRAC scale".into()));
        }
        self.scale = scale;
        self.t += 1;

        for i in 0..d {
            params[i] = self.theta_ref[i] + (self.theta_base[i] - self.theta_ref[i]) * scale;
        }
        Ok(())
    }

    fn reset(&mut self, params: &[f64]) {
        self.theta_ref = params.to_vec();
        self.theta_base = params.to_vec();
        self.base.reset(params);
        for t in &mut self.tuners {
            t.reset();
        }
        self.outputs.iter_mut().for_each(|o| *o = 0.0);
        self.scale = self.s_floor;
        self.t = 0;
    }

    fn scale(&self) -> Option<f64> {
        Some(self.scale)
    }

    fn tuner_outputs(&self) -> Option<&[f64]> {
        Some(&self.outputs)
    }
}

/// TRAC with a GD base and the tuner replaced by `S_{t+1} = β S_t − α h_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedTrac {
    pub eta: f64,
    pub beta: f64,
    pub alpha: f64,
    theta_ref: Vec<f64>,
    theta_base: Vec<f64>,
    theta: Vec<f64>,
    scale: f64,
}

/// Quantities from one simplified step, for checking the recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedStep {
    pub h: f64,
    pub scale_prev: f64,
    pub scale_next: f64,
}

impl SimplifiedTrac {
    pub fn new(eta: f64, beta: f64, alpha: f64, theta_ref: Vec<f64>, scale: f64) -> Self {
        Self {
            eta,
            beta,
            alpha,
            theta_base: theta_ref.clone(),
            theta: theta_ref.clone(),
            theta_ref,
            scale,
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_ref(&self) -> &[f64] {
        &self.theta_ref
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn step(&mut self, grad: &[f64]) -> Result<SimplifiedStep> {
        check_dims(self.theta.len(), grad.len())?;
        check_finite("gradient", grad)?;
        if self.scale == 0.0 {
            return Err(Error::Degenerate("simplified TRAC needs S_t != 0".into()));
        }
        let h: f64 = grad
            .iter()
            .zip(&self.theta)
            .zip(&self.theta_ref)
            .map(|((g, x), r)| g * (x - r))
            .sum();
        let scale_prev = self.scale;
        let scale_next = self.beta * scale_prev - self.alpha * h;
        for i in 0..self.theta.len() {
            self.theta_base[i] -= self.eta * grad[i];
            self.theta[i] = self.theta_ref[i] + scale_next * (self.theta_base[i] - self.theta_ref[i]);
        }
        self.scale = scale_next;
        Ok(SimplifiedStep { h, scale_prev, scale_next })
    }
}

/// Runs `base` alone for `warm_steps` steps, then engages TRAC with the
/// reference point set to the iterate reached at that moment.
pub struct Warmstart<B> {
    phase: Phase<B>,
    warm_steps: u64,
    config: TracConfig,
}

enum Phase<B> {
    Warm { base: B, done: u64 },
    Engaged(Trac<B>),
    // transient, only observed if engagement failed
    Poisoned,
}

impl<B: Optimizer> Warmstart<B> {
    pub fn new(base: B, warm_steps: u64, config: TracConfig, initial: &[f64]) -> Result<Self> {
        config.tuners()?;
        let phase = if warm_steps == 0 {
            Phase::Engaged(Trac::new(initial.to_vec(), base, &config)?)
        } else {
            Phase::Warm { base, done: 0 }
        };
        Ok(Self { phase, warm_steps, config })
    }

    pub fn engaged(&self) -> Option<&Trac<B>> {
        match &self.phase {
            Phase::Engaged(t) => Some(t),
            _ => None,
        }
    }
}

impl<B: Optimizer> Optimizer for Warmstart<B> {
    fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        match &mut self.phase {
            Phase::Engaged(trac) => trac.step(params, grad),
            Phase::Warm { base, done } => {
                base.step(params, grad)?;
                *done += 1;
                if *done >= self.warm_steps {
                    let Phase::Warm { base, .. } = std::mem::replace(&mut self.phase, Phase::Poisoned) else {
                        unreachable!()
                    };
                    self.phase = Phase::Engaged(Trac::new(params.to_vec(), base, &self.config)?);
                }
                Ok(())
            }
            Phase::Poisoned => Err(Error::Degenerate("warmstart engagement failed earlier".into())),
        }
    }

    fn reset(&mut self, params: &[f64]) {
        match &mut self.phase {
            Phase::Engaged(trac) => trac.reset(params),
            Phase::Warm { base, .. } => base.reset(params),
            Phase::Poisoned => {}
        }
    }

    fn scale(&self) -> Option<f64> {
        self.engaged().map(|t| t.scale)
    }

    fn tuner_outputs(&self) -> Option<&[f64]> {
        self.engaged().map(|t| t.outputs.as_slice())
    }
}

/// Re-draws the parameters and clears the inner optimizer at every task
/// boundary it is told about.
pub struct PrivilegedReset<O> {
    inner: O,
    reinit: Box<dyn FnMut() -> Vec<f64> + Send>,
    resets: u64,
}

impl<O: Optimizer> PrivilegedReset<O> {
    pub fn new(inner: O, reinit: impl FnMut() -> Vec<f64> + Send + 'static) -> Self {
        Self { inner, reinit: Box::new(reinit), resets: 0 }
    }

    pub fn resets(&self) -> u64 {
        self.resets
    }
}

impl<O: Optimizer> Optimizer for PrivilegedReset<O> {
    fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        self.inner.step(params, grad)
    }

    fn reset(&mut self, params: &[f64]) {
        self.inner.reset(params)
    }

    fn task_boundary(&mut self, params: &mut [f64]) {
        let fresh = (self.reinit)();
        params.copy_from_slice(&fresh);
        self.inner.reset(params);
        self.resets += 1;
    }

    fn scale(&self) -> Option<f64> {
        self.inner.scale()
    }

    fn tuner_outputs(&self) -> Option<&[f64]> {
        self.inner.tuner_outputs()
    }
}
