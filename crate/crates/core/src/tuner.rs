//! One-dimensional discounted scale tuner.
//!
//! Consumes a scalar stream `h_t` and emits the scale
//! `s_{t+1} = ε/erfi(1/√2) · erfi(σ_t / (√(2 v_t) + ε))` where
//! `v_t = β² v_{t-1} + h_t²` and `σ_t = β σ_{t-1} − h_t`.

use crate::error::{Error, Result};
use crate::specfun::ErfiDomain;

pub const DEFAULT_EPS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct TunerState {
    beta: f64,
    eps: f64,
    v: f64,
    sigma: f64,
    t: u64,
    /// Clamp negative outputs to zero. Off unless ablating.
    clamp_nonneg: bool,
    domain: ErfiDomain,
}

impl TunerState {
    pub fn new(beta: f64, eps: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::Config(format!("tuner beta must lie in (0, 1], got {beta}")));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Config(format!("tuner eps must be positive, got {eps}")));
        }
        Ok(Self {
            beta,
            eps,
            v: 0.0,
            sigma: 0.0,
            t: 0,
            clamp_nonneg: false,
            domain: ErfiDomain::default(),
        })
    }

    pub fn with_clamp_nonneg(mut self, on: bool) -> Self {
        self.clamp_nonneg = on;
        self
    }

    pub fn with_domain(mut self, domain: ErfiDomain) -> Self {
        self.domain = domain;
        self
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn variance(&self) -> f64 {
        self.v
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    /// Feed one input and return the next scale.
    pub fn step(&mut self, h: f64) -> Result<f64> {
        if !h.is_finite() {
            return Err(Error::InvalidArgument(format!("tuner input must be finite, got {h}")));
        }
        let v = self.beta * self.beta * self.v + h * h;
        let sigma = self.beta * self.sigma - h;
        let arg = sigma / ((2.0 * v).sqrt() + self.eps);
        let mut s = self.eps * self.domain.erfi_norm(arg)?;
        if self.clamp_nonneg {
            s = s.max(0.0);
        }
        self.v = v;
        self.sigma = sigma;
        self.t += 1;
        Ok(s)
    }

    /// Upper bound on |output| implied by the erfi clamp.
    pub fn output_bound(&self) -> f64 {
        self.eps * self.domain.saturation() / crate::specfun::ERFI_INV_SQRT2
    }

    pub fn reset(&mut self) {
        self.v = 0.0;
        self.sigma = 0.0;
        self.t = 0;
    }
}
