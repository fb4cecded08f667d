//! Online convex optimization bench on quadratic losses
//! `l_t(x) = ½‖x − c_t‖²`, with exact static-regret accounting.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::optim::Optimizer;

/// Piecewise-constant centers. Task `k` (rounds `k·L+1 ..= (k+1)·L`) uses
/// `centers[k mod centers.len()]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticLossSeq {
    centers: Vec<Vec<f64>>,
    task_length: usize,
    total_steps: usize,
}

impl QuadraticLossSeq {
    pub fn new(centers: Vec<Vec<f64>>, task_length: usize, total_steps: usize) -> Result<Self> {
        if centers.is_empty() || task_length == 0 || total_steps == 0 {
            return Err(Error::Config("loss sequence needs centers, a task length, and T ≥ 1".into()));
        }
        let d = centers[0].len();
        for c in &centers {
            check_dims(d, c.len())?;
            crate::error::check_finite("loss center", c)?;
        }
        Ok(Self { centers, task_length, total_steps })
    }

    pub fn stationary(center: Vec<f64>, total_steps: usize) -> Result<Self> {
        Self::new(vec![center], total_steps, total_steps)
    }

    pub fn dim(&self) -> usize {
        self.centers[0].len()
    }

    pub fn len(&self) -> usize {
        self.total_steps
    }

    pub fn is_empty(&self) -> bool {
        self.total_steps == 0
    }

    /// Center active at round `t` (1-based).
    pub fn center(&self, t: usize) -> Result<&[f64]> {
        if t == 0 || t > self.total_steps {
            return Err(Error::OutOfRange { index: t, len: self.total_steps });
        }
        let task = (t - 1) / self.task_length;
        Ok(&self.centers[task % self.centers.len()])
    }

    pub fn loss(&self, t: usize, x: &[f64]) -> Result<f64> {
        Ok(self.loss_and_grad(t, x)?.0)
    }

    pub fn loss_and_grad(&self, t: usize, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let c = self.center(t)?;
        check_dims(c.len(), x.len())?;
        let grad: Vec<f64> = x.iter().zip(c).map(|(x, c)| x - c).collect();
        let loss = 0.5 * grad.iter().map(|g| g * g).sum::<f64>();
        Ok((loss, grad))
    }

    /// The minimizer of `Σ_t l_t(u)`: the mean of the active centers.
    pub fn best_fixed_comparator(&self) -> Vec<f64> {
        let mut u = vec![0.0; self.dim()];
        for t in 1..=self.total_steps {
            let c = self.center(t).expect("t in range");
            for (ui, ci) in u.iter_mut().zip(c) {
                *ui += ci;
            }
        }
        u.iter_mut().for_each(|ui| *ui /= self.total_steps as f64);
        u
    }

    pub fn cumulative_loss(&self, u: &[f64]) -> Result<f64> {
        (1..=self.total_steps).map(|t| self.loss(t, u)).sum()
    }
}

/// `Σ l_t(x_t) − Σ l_t(u)`.
pub fn static_regret(iterates: &[Vec<f64>], seq: &QuadraticLossSeq, u: &[f64]) -> Result<f64> {
    check_dims(seq.len(), iterates.len())?;
    let mut regret = 0.0;
    for (t, x) in iterates.iter().enumerate() {
        regret += seq.loss(t + 1, x)? - seq.loss(t + 1, u)?;
    }
    Ok(regret)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretRow {
    pub step: usize,
    pub loss: f64,
    pub regret_to_date: f64,
    #[serde(rename = "S")]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretRecord {
    pub iterates: Vec<Vec<f64>>,
    pub rows: Vec<RegretRow>,
    pub cumulative_loss: f64,
    pub comparator: Vec<f64>,
    pub regret: f64,
}

/// Play `x_t`, observe `∇l_t(x_t)`, step; regret is measured against the
/// best fixed comparator of the whole sequence.
pub fn run_oco(opt: &mut dyn Optimizer, x1: &[f64], seq: &QuadraticLossSeq) -> Result<RegretRecord> {
    check_dims(seq.dim(), x1.len())?;
    let comparator = seq.best_fixed_comparator();
    let mut x = x1.to_vec();
    let mut iterates = Vec::with_capacity(seq.len());
    let mut rows = Vec::with_capacity(seq.len());
    let mut cumulative_loss = 0.0;
    let mut regret = 0.0;
    for t in 1..=seq.len() {
        iterates.push(x.clone());
        let (loss, grad) = seq.loss_and_grad(t, &x)?;
        cumulative_loss += loss;
        regret += loss - seq.loss(t, &comparator)?;
        opt.step(&mut x, &grad)?;
        rows.push(RegretRow { step: t, loss, regret_to_date: regret, scale: opt.scale() });
    }
    Ok(RegretRecord { iterates, rows, cumulative_loss, comparator, regret })
}

/// A never-moving player.
pub struct StayPut;

impl Optimizer for StayPut {
    fn step(&mut self, _params: &mut [f64], _grad: &[f64]) -> Result<()> {
        Ok(())
    }
    fn reset(&mut self, _params: &[f64]) {}
}

/// Sequence whose tasks alternate between `+c` and `−c`, so the best fixed
/// comparator is the origin.
pub fn alternating_sequence<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64, task_length: usize, tasks: usize) -> Result<QuadraticLossSeq> {
    let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-scale..scale)).collect();
    let neg = c.iter().map(|v| -v).collect();
    QuadraticLossSeq::new(vec![c, neg], task_length, task_length * tasks)
}
