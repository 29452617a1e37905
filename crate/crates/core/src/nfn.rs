//! The neo-fuzzy neuron: one bank of seven weighted triangles per input,
//! summed over inputs, trained online by LMS.

use crate::bench::{mqe, Dataset};
use crate::error::{Error, Result};
use crate::membership::{ActivePair, FuzzyPartition, CURVES};
use crate::ops;
use crate::scalar::Real;
use crate::train::{EpochOrder, TrainConfig, TrainingHistory};

/// Partition and segment weights for one input variable.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNeuron<T> {
    pub partition: FuzzyPartition<T>,
    pub weights: [T; CURVES],
}

#[derive(Debug, Clone, PartialEq)]
pub struct NfnModel<T> {
    inputs: Vec<FuzzyNeuron<T>>,
}

impl<T: Real> NfnModel<T> {
    /// Zero-weight model over the given partitions.
    pub fn new(partitions: Vec<FuzzyPartition<T>>) -> Self {
        NfnModel {
            inputs: partitions
                .into_iter()
                .map(|partition| FuzzyNeuron { partition, weights: [T::zero(); CURVES] })
                .collect(),
        }
    }

    /// Zero-weight model with a uniform partition per domain.
    pub fn uniform(domains: &[(T, T)]) -> Result<Self> {
        let partitions = domains
            .iter()
            .map(|&(lo, hi)| FuzzyPartition::uniform(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(partitions))
    }

    pub fn from_neurons(inputs: Vec<FuzzyNeuron<T>>) -> Self {
        NfnModel { inputs }
    }

    pub fn neurons(&self) -> &[FuzzyNeuron<T>] {
        &self.inputs
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn weights(&self) -> Vec<[T; CURVES]> {
        self.inputs.iter().map(|n| n.weights).collect()
    }

    pub fn set_weights(&mut self, input: usize, weights: [T; CURVES]) {
        self.inputs[input].weights = weights;
    }

    fn check_dims(&self, x: &[T]) -> Result<()> {
        if x.len() != self.inputs.len() {
            return Err(Error::DimensionMismatch { expected: self.inputs.len(), got: x.len() });
        }
        Ok(())
    }

    /// Active curve pair per input.
    pub fn active_pairs(&self, x: &[T]) -> Result<Vec<ActivePair<T>>> {
        self.check_dims(x)?;
        self.inputs.iter().zip(x).map(|(n, &xi)| n.partition.active_pair(xi)).collect()
    }

    /// Weighted sum of the active degrees: two products per input, chained
    /// with one fewer addition than there are products.
    pub fn combine(&self, pairs: &[ActivePair<T>]) -> T {
        let mut terms = self.inputs.iter().zip(pairs).flat_map(|(n, p)| {
            [p.lower_degree * n.weights[p.lower], p.upper_degree * n.weights[p.upper]]
        });
        match terms.next() {
            Some(first) => terms.fold(first, |acc, t| acc + t),
            None => T::zero(),
        }
    }

    pub fn eval(&self, x: &[T]) -> Result<T> {
        let pairs = self.active_pairs(x)?;
        Ok(self.combine(&pairs))
    }

    /// In-place LMS update on one sample. Returns the error `y_d - y`
    /// measured before the update.
    pub fn lms_update(&mut self, x: &[T], target: T, learning_rate: T) -> Result<T> {
        let pairs = self.active_pairs(x)?;
        let error = target - self.combine(&pairs);
        let gain = learning_rate * error;
        for (neuron, p) in self.inputs.iter_mut().zip(&pairs) {
            neuron.weights[p.lower] = neuron.weights[p.lower] + gain * p.lower_degree;
            neuron.weights[p.upper] = neuron.weights[p.upper] + gain * p.upper_degree;
        }
        Ok(error)
    }

    /// Pure LMS step: returns the updated model and leaves `self` untouched.
    pub fn lms_step(&self, x: &[T], target: T, learning_rate: T) -> Result<Self> {
        let mut next = self.clone();
        next.lms_update(x, target, learning_rate)?;
        Ok(next)
    }

    pub fn predict(&self, data: &Dataset<T>) -> Result<Vec<T>> {
        data.samples().iter().map(|s| self.eval(&s.inputs())).collect()
    }

    pub fn dataset_mqe(&self, data: &Dataset<T>) -> Result<T> {
        mqe(&self.predict(data)?, &data.targets())
    }

    /// Online training over `data`, recording per-epoch MQE and update cost.
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
            let (result, spent) = ops::measure(|| -> Result<()> {
                for &i in indices {
                    let s = &samples[i];
                    self.lms_update(&s.inputs(), s.y, rate)?;
                }
                Ok(())
            });
            result?;
            history.epoch_ops.push(spent);
            history.epoch_mqe.push(self.dataset_mqe(data)?.as_f64());
        }
        Ok(history)
    }

    pub fn train_weights(&self, data: &Dataset<T>, cfg: &TrainConfig) -> Result<Self> {
        let mut model = self.clone();
        model.fit(data, cfg)?;
        Ok(model)
    }

    pub fn map_scalar<U: Real>(&self, f: impl Fn(T) -> U + Copy) -> NfnModel<U> {
        NfnModel {
            inputs: self
                .inputs
                .iter()
                .map(|n| FuzzyNeuron { partition: n.partition.map_scalar(f), weights: n.weights.map(f) })
                .collect(),
        }
    }
}
