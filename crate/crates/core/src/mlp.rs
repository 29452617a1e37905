//! Baseline 2-7-1 perceptron: sigmoid hidden layer, identity output, online
//! backpropagation on half the squared error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::{mqe, Dataset};
use crate::error::{Error, Result};
use crate::ops;
use crate::scalar::Real;
use crate::train::{EpochOrder, TrainConfig, TrainingHistory};

pub const INPUTS: usize = 2;
pub const HIDDEN: usize = 7;
/// Weights and biases in [`MlpModel::parameters`] order.
pub const PARAMETERS: usize = HIDDEN * INPUTS + HIDDEN + HIDDEN + 1;

#[inline]
pub fn sigmoid<T: Real>(z: T) -> T {
    T::one() / (T::one() + (-z).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel<T> {
    pub hidden_weights: [[T; INPUTS]; HIDDEN],
    pub hidden_biases: [T; HIDDEN],
    pub output_weights: [T; HIDDEN],
    pub output_bias: T,
}

impl<T: Real> MlpModel<T> {
    pub fn zeros() -> Self {
        MlpModel {
            hidden_weights: [[T::zero(); INPUTS]; HIDDEN],
            hidden_biases: [T::zero(); HIDDEN],
            output_weights: [T::zero(); HIDDEN],
            output_bias: T::zero(),
        }
    }

    /// Every weight and bias drawn from uniform(-0.5, 0.5).
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params: Vec<T> = (0..PARAMETERS).map(|_| T::lit(rng.gen_range(-0.5..0.5))).collect();
        Self::from_parameters(&params)
    }

    /// Flat view: hidden weights row by row, hidden biases, output weights, output bias.
    pub fn parameters(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(PARAMETERS);
        out.extend(self.hidden_weights.iter().flatten().copied());
        out.extend(self.hidden_biases);
        out.extend(self.output_weights);
        out.push(self.output_bias);
        out
    }

    pub fn from_parameters(params: &[T]) -> Self {
        assert_eq!(params.len(), PARAMETERS, "parameter vector length");
        let mut it = params.iter().copied();
        let mut next = || it.next().expect("length checked");
        let hidden_weights = std::array::from_fn(|_| std::array::from_fn(|_| next()));
        let hidden_biases = std::array::from_fn(|_| next());
        let output_weights = std::array::from_fn(|_| next());
        let output_bias = next();
        MlpModel { hidden_weights, hidden_biases, output_weights, output_bias }
    }

    pub fn is_finite(&self) -> bool {
        self.parameters().into_iter().all(Real::is_finite)
    }

    pub fn hidden_preactivations(&self, x: [T; INPUTS]) -> [T; HIDDEN] {
        std::array::from_fn(|j| {
            let w = &self.hidden_weights[j];
            w[0] * x[0] + w[1] * x[1] + self.hidden_biases[j]
        })
    }

    pub fn output_from_hidden(&self, hidden: &[T; HIDDEN]) -> T {
        let mut terms = self.output_weights.iter().zip(hidden).map(|(&w, &h)| w * h);
        let first = terms.next().expect("hidden layer is non-empty");
        terms.fold(first, |acc, t| acc + t) + self.output_bias
    }

    fn hidden(&self, x: [T; INPUTS]) -> [T; HIDDEN] {
        self.hidden_preactivations(x).map(sigmoid)
    }

    pub fn forward(&self, x: [T; INPUTS]) -> T {
        self.output_from_hidden(&self.hidden(x))
    }

    /// Gradient of `0.5 * (target - y)^2` with respect to every parameter,
    /// laid out like the model itself.
    pub fn gradient(&self, x: [T; INPUTS], target: T) -> MlpModel<T> {
        let hidden = self.hidden(x);
        let error = target - self.output_from_hidden(&hidden);
        let d_out = -error;
        let mut grad = MlpModel::zeros();
        grad.output_bias = d_out;
        for j in 0..HIDDEN {
            let h = hidden[j];
            grad.output_weights[j] = d_out * h;
            let delta = d_out * self.output_weights[j] * h * (T::one() - h);
            grad.hidden_biases[j] = delta;
            grad.hidden_weights[j] = [delta * x[0], delta * x[1]];
        }
        grad
    }

    /// One backpropagation step; returns the error before the update.
    pub fn train_step(&mut self, x: [T; INPUTS], target: T, learning_rate: T) -> T {
        let error = target - self.forward(x);
        let grad = self.gradient(x, target);
        let updated: Vec<T> = self
            .parameters()
            .into_iter()
            .zip(grad.parameters())
            .map(|(p, g)| p - learning_rate * g)
            .collect();
        *self = Self::from_parameters(&updated);
        error
    }

    pub fn predict(&self, data: &Dataset<T>) -> Vec<T> {
        data.samples().iter().map(|s| self.forward(s.inputs())).collect()
    }

    pub fn dataset_mqe(&self, data: &Dataset<T>) -> Result<T> {
        mqe(&self.predict(data), &data.targets())
    }

    pub fn fit(&mut self, data: &Dataset<T>, cfg: &TrainConfig) -> Result<TrainingHistory> {
        cfg.validate()?;
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let rate = T::lit(cfg.learning_rate);
        let samples = data.samples();
        let mut order = EpochOrder::new(samples.len(), cfg.shuffle_seed);
        let mut history = TrainingHistory::default();
        for _ in 0..cfg.epochs {
            let indices = order.next_epoch(samples.len());
            let ((), spent) = ops::measure(|| {
                for &i in indices {
                    self.train_step(samples[i].inputs(), samples[i].y, rate);
                }
            });
            history.epoch_ops.push(spent);
            history.epoch_mqe.push(self.dataset_mqe(data)?.as_f64());
        }
        Ok(history)
    }

    pub fn train(&self, data: &Dataset<T>, cfg: &TrainConfig) -> Result<Self> {
        let mut m = self.clone();
        m.fit(data, cfg)?;
        Ok(m)
    }

    pub fn map_scalar<U: Real>(&self, f: impl Fn(T) -> U) -> MlpModel<U> {
        let params: Vec<U> = self.parameters().into_iter().map(f).collect();
        MlpModel::from_parameters(&params)
    }
}
