//! Parameter-free TRAC meta-optimizer with an online convex optimization
//! bench and a lifelong CartPole PPO harness.

pub mod env;
pub mod error;
pub mod harness;
pub mod nn;
pub mod oco;
pub mod optim;
pub mod ppo;
pub mod rng;
pub mod specfun;
pub mod trac;
pub mod tuner;

pub use error::{Error, Result};
