//! Three-layer sigmoid perceptron trained by online backpropagation with
//! momentum.
//!
//! Parameters are stored flat, in the order they appear in the model file:
//! hidden weights (row-major, `hidden × inputs`), hidden biases, output
//! weights (row-major, `outputs × hidden`), output biases.

mod gradcheck;
mod io;

pub use gradcheck::{compare_gradients, gradient_check, GradientCheck, FD_STEP};
pub use io::{load, read_model, save, write_model, FORMAT_VERSION};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Target for the true class under one-hot encoding.
pub const TARGET_ON: f64 = 0.9;
/// Target for every other class.
pub const TARGET_OFF: f64 = 0.1;
/// Half-width of the uniform initialization range.
pub const INIT_RANGE: f64 = 0.5;

#[derive(Debug, Error)]
pub enum MlpError {
    #[error("invalid layer sizes {inputs}-{hidden}-{outputs}")]
    InvalidSizes { inputs: usize, hidden: usize, outputs: usize },
    #[error("expected {expected} values, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("training set is empty")]
    EmptyDataset,
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("model file: {0}")]
    FormatError(String),
    #[error("model file version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Layer widths of a three-layer network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LayerSizes {
    pub inputs: usize,
    pub hidden: usize,
    pub outputs: usize,
}

impl LayerSizes {
    pub fn new(inputs: usize, hidden: usize, outputs: usize) -> Result<Self, MlpError> {
        if inputs == 0 || hidden == 0 || outputs < 2 {
            return Err(MlpError::InvalidSizes { inputs, hidden, outputs });
        }
        Ok(Self { inputs, hidden, outputs })
    }

    pub fn parameter_count(&self) -> usize {
        self.hidden * (self.inputs + 1) + self.outputs * (self.hidden + 1)
    }

    fn hidden_weights(&self) -> std::ops::Range<usize> {
        0..self.hidden * self.inputs
    }

    fn hidden_bias(&self) -> std::ops::Range<usize> {
        let s = self.hidden * self.inputs;
        s..s + self.hidden
    }

    fn output_weights(&self) -> std::ops::Range<usize> {
        let s = self.hidden * (self.inputs + 1);
        s..s + self.outputs * self.hidden
    }

    fn output_bias(&self) -> std::ops::Range<usize> {
        let s = self.hidden * (self.inputs + 1) + self.outputs * self.hidden;
        s..s + self.outputs
    }
}

/// Per-class confidences in (0, 1).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassScores(Vec<f64>);

impl ClassScores {
    pub fn new(scores: Vec<f64>) -> Self {
        Self(scores)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest-scoring class; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &s) in self.0.iter().enumerate().skip(1) {
            if s > self.0[best] {
                best = i;
            }
        }
        best
    }
}

/// Hyper-parameters for [`train`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub max_epochs: usize,
    /// Training stops once an epoch lowers the SSE by less than this
    /// (a rising SSE never stops it). Zero disables the rule.
    pub sse_tolerance: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { learning_rate: 0.8, momentum: 0.7, max_epochs: 1000, sse_tolerance: 1e-4, seed: 1 }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), MlpError> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(MlpError::InvalidConfig(format!("learning rate {} must be > 0", self.learning_rate)));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(MlpError::InvalidConfig(format!("momentum {} must be in [0, 1)", self.momentum)));
        }
        if self.sse_tolerance.is_nan() || self.sse_tolerance < 0.0 {
            return Err(MlpError::InvalidConfig(format!("sse tolerance {} must be >= 0", self.sse_tolerance)));
        }
        Ok(())
    }
}

/// Gradients of the per-sample loss ½·Σ(target − output)², laid out like
/// [`Mlp::parameters`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: LayerSizes,
    params: Vec<f64>,
}

impl Mlp {
    /// Weights and biases drawn uniformly from [−0.5, 0.5].
    pub fn init(sizes: LayerSizes, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = (0..sizes.parameter_count()).map(|_| rng.gen_range(-INIT_RANGE..=INIT_RANGE)).collect();
        Self { sizes, params }
    }

    pub fn from_parameters(sizes: LayerSizes, params: Vec<f64>) -> Result<Self, MlpError> {
        if params.len() != sizes.parameter_count() {
            return Err(MlpError::DimensionMismatch { expected: sizes.parameter_count(), actual: params.len() });
        }
        Ok(Self { sizes, params })
    }

    pub fn sizes(&self) -> LayerSizes {
        self.sizes
    }

    pub fn parameters(&self) -> &[f64] {
        &self.params
    }

    pub fn parameters_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn check_input(&self, x: &[f64]) -> Result<(), MlpError> {
        if x.len() != self.sizes.inputs {
            return Err(MlpError::DimensionMismatch { expected: self.sizes.inputs, actual: x.len() });
        }
        Ok(())
    }

    /// Hidden and output activations.
    fn activations(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let s = &self.sizes;
        let wh = &self.params[s.hidden_weights()];
        let bh = &self.params[s.hidden_bias()];
        let wo = &self.params[s.output_weights()];
        let bo = &self.params[s.output_bias()];
        let hidden: Vec<f64> = (0..s.hidden)
            .map(|j| {
                let row = &wh[j * s.inputs..(j + 1) * s.inputs];
                sigmoid(bh[j] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>())
            })
            .collect();
        let output = (0..s.outputs)
            .map(|k| {
                let row = &wo[k * s.hidden..(k + 1) * s.hidden];
                sigmoid(bo[k] + row.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>())
            })
            .collect();
        (hidden, output)
    }

    pub fn forward(&self, x: &[f64]) -> Result<ClassScores, MlpError> {
        self.check_input(x)?;
        Ok(ClassScores(self.activations(x).1))
    }

    fn target(&self, label: usize, k: usize) -> f64 {
        if k == label {
            TARGET_ON
        } else {
            TARGET_OFF
        }
    }

    /// Per-sample loss ½·Σ(target − output)².
    pub fn loss(&self, x: &[f64], label: usize) -> Result<f64, MlpError> {
        self.check_sample(x, label)?;
        let (_, out) = self.activations(x);
        Ok(0.5 * out.iter().enumerate().map(|(k, o)| (self.target(label, k) - o).powi(2)).sum::<f64>())
    }

    fn check_sample(&self, x: &[f64], label: usize) -> Result<(), MlpError> {
        self.check_input(x)?;
        if label >= self.sizes.outputs {
            return Err(MlpError::LabelOutOfRange { label, classes: self.sizes.outputs });
        }
        Ok(())
    }

    /// Analytic gradient of [`Mlp::loss`] plus the sample's squared error.
    fn backprop_unchecked(&self, x: &[f64], label: usize) -> (Gradients, f64) {
        let s = &self.sizes;
        let (hidden, output) = self.activations(x);
        let mut grad = vec![0.0; s.parameter_count()];
        let mut sse = 0.0;

        let delta_out: Vec<f64> = output
            .iter()
            .enumerate()
            .map(|(k, &o)| {
                let err = o - self.target(label, k);
                sse += err * err;
                err * o * (1.0 - o)
            })
            .collect();

        let wo = &self.params[s.output_weights()];
        let delta_hidden: Vec<f64> = (0..s.hidden)
            .map(|j| {
                let back: f64 = (0..s.outputs).map(|k| wo[k * s.hidden + j] * delta_out[k]).sum();
                back * hidden[j] * (1.0 - hidden[j])
            })
            .collect();

        let gwh = s.hidden_weights().start;
        for (j, &dh) in delta_hidden.iter().enumerate() {
            for (i, &xi) in x.iter().enumerate() {
                grad[gwh + j * s.inputs + i] = dh * xi;
            }
            grad[s.hidden_bias().start + j] = dh;
        }
        let gwo = s.output_weights().start;
        for (k, &dk) in delta_out.iter().enumerate() {
            for (j, &hj) in hidden.iter().enumerate() {
                grad[gwo + k * s.hidden + j] = dk * hj;
            }
            grad[s.output_bias().start + k] = dk;
        }
        (Gradients(grad), sse)
    }

    pub fn backprop(&self, x: &[f64], label: usize) -> Result<Gradients, MlpError> {
        self.check_sample(x, label)?;
        Ok(self.backprop_unchecked(x, label).0)
    }
}

/// Outcome of [`train`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub net: Mlp,
    /// Sum of squared errors accumulated over each completed epoch.
    pub sse_history: Vec<f64>,
}

/// Online backpropagation with momentum over `samples` in the given order.
///
/// Every sample triggers an update `Δw ← momentum·Δw − lr·∇E`, `w ← w + Δw`.
/// Runs for `max_epochs` epochs unless an epoch improves the SSE by less
/// than `sse_tolerance`.
pub fn train(net: &Mlp, samples: &[(Vec<f64>, usize)], cfg: &TrainConfig) -> Result<TrainOutcome, MlpError> {
    train_with(net, samples, cfg, |_, _| {})
}

/// Like [`train`], calling `on_epoch(epoch, &net)` after every epoch.
pub fn train_with<F: FnMut(usize, &Mlp)>(
    net: &Mlp,
    samples: &[(Vec<f64>, usize)],
    cfg: &TrainConfig,
    mut on_epoch: F,
) -> Result<TrainOutcome, MlpError> {
    cfg.validate()?;
    if samples.is_empty() {
        return Err(MlpError::EmptyDataset);
    }
    for (x, label) in samples {
        net.check_sample(x, *label)?;
    }

    let mut net = net.clone();
    let mut velocity = vec![0.0; net.params.len()];
    let mut history = Vec::with_capacity(cfg.max_epochs);
    for epoch in 0..cfg.max_epochs {
        let mut sse = 0.0;
        for (x, label) in samples {
            let (Gradients(grad), err) = net.backprop_unchecked(x, *label);
            sse += err;
            for ((p, v), g) in net.params.iter_mut().zip(velocity.iter_mut()).zip(&grad) {
                *v = cfg.momentum * *v - cfg.learning_rate * g;
                *p += *v;
            }
        }
        on_epoch(epoch, &net);
        let improvement = history.last().map(|prev: &f64| prev - sse);
        history.push(sse);
        if matches!(improvement, Some(d) if (0.0..cfg.sse_tolerance).contains(&d)) {
            break;
        }
    }
    Ok(TrainOutcome { net, sse_history: history })
}

/// Share of samples whose argmax equals the label, in percent.
pub fn accuracy(net: &Mlp, samples: &[(Vec<f64>, usize)]) -> Result<f64, MlpError> {
    if samples.is_empty() {
        return Err(MlpError::EmptyDataset);
    }
    let mut hits = 0usize;
    for (x, label) in samples {
        if net.forward(x)?.argmax() == *label {
            hits += 1;
        }
    }
    Ok(100.0 * hits as f64 / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> Vec<(Vec<f64>, usize)> {
        vec![(vec![0.0, 0.0], 0), (vec![0.0, 1.0], 1), (vec![1.0, 0.0], 1), (vec![1.0, 1.0], 0)]
    }

    #[test]
    fn init_is_deterministic_and_bounded() {
        let sizes = LayerSizes::new(32, 20, 49).unwrap();
        let a = Mlp::init(sizes, 7);
        assert_eq!(a, Mlp::init(sizes, 7));
        assert_ne!(a, Mlp::init(sizes, 8));
        assert_eq!(a.parameters().len(), 20 * 33 + 49 * 21);
        assert!(a.parameters().iter().all(|p| (-0.5..=0.5).contains(p)));
    }

    #[test]
    fn invalid_sizes() {
        assert!(matches!(LayerSizes::new(32, 0, 49), Err(MlpError::InvalidSizes { .. })));
        assert!(matches!(LayerSizes::new(0, 3, 4), Err(MlpError::InvalidSizes { .. })));
        assert!(matches!(LayerSizes::new(3, 3, 1), Err(MlpError::InvalidSizes { .. })));
    }

    #[test]
    fn zero_network_outputs_half() {
        let sizes = LayerSizes::new(4, 3, 5).unwrap();
        let net = Mlp::from_parameters(sizes, vec![0.0; sizes.parameter_count()]).unwrap();
        let out = net.forward(&[1.0, -2.0, 3.0, 0.5]).unwrap();
        assert!(out.as_slice().iter().all(|&o| o == 0.5));
    }

    #[test]
    fn one_one_one_hand_arithmetic() {
        // Two outputs are the minimum; the first output row mirrors a 1-1-1 net.
        let sizes = LayerSizes::new(1, 1, 2).unwrap();
        // wh, bh, wo(2), bo(2)
        let net = Mlp::from_parameters(sizes, vec![1.0, 0.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        let out = net.forward(&[0.0]).unwrap();
        let expected = 1.0 / (1.0 + (-0.5f64).exp());
        assert!((out.as_slice()[0] - expected).abs() < 1e-15);
        assert!((out.as_slice()[0] - 0.6225).abs() < 1e-4);
    }

    #[test]
    fn forward_rejects_wrong_length() {
        let net = Mlp::init(LayerSizes::new(3, 2, 2).unwrap(), 0);
        assert!(matches!(net.forward(&[1.0]), Err(MlpError::DimensionMismatch { expected: 3, actual: 1 })));
    }

    #[test]
    fn zero_epochs_leave_network_unchanged() {
        let net = Mlp::init(LayerSizes::new(2, 4, 2).unwrap(), 3);
        let cfg = TrainConfig { max_epochs: 0, ..TrainConfig::default() };
        let out = train(&net, &xor(), &cfg).unwrap();
        assert_eq!(out.net, net);
        assert!(out.sse_history.is_empty());
    }

    #[test]
    fn training_errors() {
        let net = Mlp::init(LayerSizes::new(2, 4, 2).unwrap(), 3);
        let cfg = TrainConfig::default();
        assert!(matches!(train(&net, &[], &cfg), Err(MlpError::EmptyDataset)));
        assert!(matches!(
            train(&net, &[(vec![1.0], 0)], &cfg),
            Err(MlpError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            train(&net, &[(vec![1.0, 0.0], 2)], &cfg),
            Err(MlpError::LabelOutOfRange { .. })
        ));
        let bad = TrainConfig { momentum: 1.0, ..cfg };
        assert!(matches!(train(&net, &xor(), &bad), Err(MlpError::InvalidConfig(_))));
    }

    #[test]
    fn training_is_deterministic() {
        let net = Mlp::init(LayerSizes::new(2, 4, 2).unwrap(), 11);
        let cfg = TrainConfig { max_epochs: 50, sse_tolerance: 0.0, ..TrainConfig::default() };
        let a = train(&net, &xor(), &cfg).unwrap();
        let b = train(&net, &xor(), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sse_history.len(), 50);
    }

    #[test]
    fn single_sample_sse_settles() {
        let net = Mlp::init(LayerSizes::new(3, 4, 3).unwrap(), 5);
        let data = vec![(vec![0.2, 0.7, 0.1], 1)];
        let cfg = TrainConfig { max_epochs: 300, sse_tolerance: 0.0, ..TrainConfig::default() };
        let out = train(&net, &data, &cfg).unwrap();
        let tail = &out.sse_history[out.sse_history.len() - 10..];
        assert!(tail.windows(2).all(|w| w[1] <= w[0]), "{tail:?}");
        assert!(tail[9] < out.sse_history[0]);
    }

    #[test]
    fn tolerance_stops_on_plateau() {
        let net = Mlp::init(LayerSizes::new(3, 4, 3).unwrap(), 5);
        let data = vec![(vec![0.2, 0.7, 0.1], 1)];
        let cfg = TrainConfig { max_epochs: 10_000, sse_tolerance: 1e-6, ..TrainConfig::default() };
        let out = train(&net, &data, &cfg).unwrap();
        assert!(out.sse_history.len() < 10_000);
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(ClassScores::new(vec![0.2, 0.7, 0.7]).argmax(), 1);
        assert_eq!(ClassScores::new(vec![0.5, 0.5]).argmax(), 0);
    }
}
