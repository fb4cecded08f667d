//! Fixed-architecture MLP over a flat parameter vector, with hand-written
//! reverse-mode gradients and a categorical head.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Relu,
    /// Concatenated ReLU: `[relu(z), relu(−z)]`, doubling the layer width.
    Crelu,
}

impl Activation {
    fn width_factor(self) -> usize {
        match self {
            Activation::Relu => 1,
            Activation::Crelu => 2,
        }
    }
}

/// Index ranges of one dense layer inside the flat vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerLayout {
    pub inputs: usize,
    pub outputs: usize,
    /// Row-major `outputs × inputs`.
    pub weights: std::ops::Range<usize>,
    pub bias: std::ops::Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    activation: Activation,
    layers: Vec<LayerLayout>,
    len: usize,
}

/// Per-sample activations kept for the backward pass.
#[derive(Debug, Clone, Default)]
pub struct Cache {
    /// Inputs to each layer (post-activation of the previous one).
    inputs: Vec<Vec<f64>>,
    /// Pre-activations of each hidden layer.
    pre: Vec<Vec<f64>>,
    output: Vec<f64>,
}

impl Cache {
    pub fn output(&self) -> &[f64] {
        &self.output
    }
}

impl Mlp {
    /// `sizes = [input, hidden…, output]`.
    pub fn new(sizes: &[usize], activation: Activation) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::Config(format!("invalid layer sizes {sizes:?}")));
        }
        let mut layers = Vec::with_capacity(sizes.len() - 1);
        let mut offset = 0;
        for l in 0..sizes.len() - 1 {
            let inputs = if l == 0 { sizes[0] } else { sizes[l] * activation.width_factor() };
            let outputs = sizes[l + 1];
            let weights = offset..offset + inputs * outputs;
            let bias = weights.end..weights.end + outputs;
            offset = bias.end;
            layers.push(LayerLayout { inputs, outputs, weights, bias });
        }
        Ok(Self { sizes: sizes.to_vec(), activation, layers, len: offset })
    }

    pub fn param_count(&self) -> usize {
        self.len
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn layers(&self) -> &[LayerLayout] {
        &self.layers
    }

    /// Xavier-uniform weights, zero biases.
    pub fn init<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut params = vec![0.0; self.len];
        for layer in &self.layers {
            let limit = (6.0 / (layer.inputs + layer.outputs) as f64).sqrt();
            for w in &mut params[layer.weights.clone()] {
                *w = rng.gen_range(-limit..limit);
            }
        }
        params
    }

    pub fn forward(&self, params: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let mut cache = Cache::default();
        self.forward_cached(params, x, &mut cache)?;
        Ok(cache.output)
    }

    pub fn forward_cached(&self, params: &[f64], x: &[f64], cache: &mut Cache) -> Result<()> {
        check_dims(self.len, params.len())?;
        check_dims(self.input_dim(), x.len())?;
        let n = self.layers.len();
        cache.inputs.resize(n, Vec::new());
        cache.pre.resize(n - 1, Vec::new());
        cache.inputs[0].clear();
        cache.inputs[0].extend_from_slice(x);
        for (l, layer) in self.layers.iter().enumerate() {
            let w = &params[layer.weights.clone()];
            let b = &params[layer.bias.clone()];
            let mut z = Vec::with_capacity(layer.outputs);
            {
                let input = &cache.inputs[l];
                for o in 0..layer.outputs {
                    let row = &w[o * layer.inputs..(o + 1) * layer.inputs];
                    z.push(b[o] + row.iter().zip(input).map(|(a, b)| a * b).sum::<f64>());
                }
            }
            if l + 1 == n {
                cache.output = z;
            } else {
                let next = &mut cache.inputs[l + 1];
                next.clear();
                match self.activation {
                    Activation::Relu => next.extend(z.iter().map(|v| v.max(0.0))),
                    Activation::Crelu => {
                        next.extend(z.iter().map(|v| v.max(0.0)));
                        next.extend(z.iter().map(|v| (-v).max(0.0)));
                    }
                }
                cache.pre[l] = z;
            }
        }
        Ok(())
    }

    /// Accumulate `∂⟨output, upstream⟩/∂params` into `grad`.
    pub fn backward_cached(&self, params: &[f64], cache: &Cache, upstream: &[f64], grad: &mut [f64]) -> Result<()> {
        check_dims(self.len, params.len())?;
        check_dims(self.len, grad.len())?;
        check_dims(self.output_dim(), upstream.len())?;
        let mut delta = upstream.to_vec();
        for l in (0..self.layers.len()).rev() {
            let layer = &self.layers[l];
            let input = &cache.inputs[l];
            {
                let gw = &mut grad[layer.weights.clone()];
                for o in 0..layer.outputs {
                    let d = delta[o];
                    if d == 0.0 {
                        continue;
                    }
                    let row = &mut gw[o * layer.inputs..(o + 1) * layer.inputs];
                    for (g, a) in row.iter_mut().zip(input) {
                        *g += d * a;
                    }
                }
            }
            for (g, d) in grad[layer.bias.clone()].iter_mut().zip(&delta) {
                *g += d;
            }
            if l == 0 {
                break;
            }
            let w = &params[layer.weights.clone()];
            let mut d_input = vec![0.0; layer.inputs];
            for o in 0..layer.outputs {
                let d = delta[o];
                if d == 0.0 {
                    continue;
                }
                let row = &w[o * layer.inputs..(o + 1) * layer.inputs];
                for (di, wv) in d_input.iter_mut().zip(row) {
                    *di += d * wv;
                }
            }
            let pre = &cache.pre[l - 1];
            delta = match self.activation {
                Activation::Relu => pre.iter().zip(&d_input).map(|(z, d)| if *z > 0.0 { *d } else { 0.0 }).collect(),
                Activation::Crelu => {
                    let (pos, neg) = d_input.split_at(pre.len());
                    pre.iter()
                        .zip(pos.iter().zip(neg))
                        .map(|(z, (dp, dn))| {
                            if *z > 0.0 {
                                *dp
                            } else if *z < 0.0 {
                                -*dn
                            } else {
                                0.0
                            }
                        })
                        .collect()
                }
            };
        }
        Ok(())
    }

    /// Gradient of `⟨forward(x), upstream⟩` with respect to all parameters.
    pub fn backward(&self, params: &[f64], x: &[f64], upstream: &[f64]) -> Result<Vec<f64>> {
        let mut cache = Cache::default();
        self.forward_cached(params, x, &mut cache)?;
        let mut grad = vec![0.0; self.len];
        self.backward_cached(params, &cache, upstream, &mut grad)?;
        Ok(grad)
    }
}

/// Softmax distribution over discrete actions.
#[derive(Debug, Clone, PartialEq)]
pub struct Categorical {
    probs: Vec<f64>,
    log_probs: Vec<f64>,
}

impl Categorical {
    pub fn from_logits(logits: &[f64]) -> Result<Self> {
        if logits.is_empty() {
            return Err(Error::InvalidArgument("empty logits".into()));
        }
        if logits.iter().any(|l| !l.is_finite()) {
            return Err(Error::NonFinite("policy logits".into()));
        }
        let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_z = max + logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
        let log_probs: Vec<f64> = logits.iter().map(|l| l - log_z).collect();
        let probs = log_probs.iter().map(|lp| lp.exp()).collect();
        Ok(Self { probs, log_probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_prob(&self, action: usize) -> f64 {
        self.log_probs[action]
    }

    pub fn entropy(&self) -> f64 {
        -self.probs.iter().zip(&self.log_probs).map(|(p, lp)| if *p > 0.0 { p * lp } else { 0.0 }).sum::<f64>()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (a, p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return a;
            }
        }
        self.probs.len() - 1
    }

    /// `∂ log π(a) / ∂ logits`.
    pub fn grad_log_prob(&self, action: usize) -> Vec<f64> {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| if i == action { 1.0 - p } else { -p })
            .collect()
    }

    /// `∂ H / ∂ logits`.
    pub fn grad_entropy(&self) -> Vec<f64> {
        let h = self.entropy();
        self.probs.iter().zip(&self.log_probs).map(|(p, lp)| -p * (lp + h)).collect()
    }
}
