//! Settings and sample ordering shared by the online trainers.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::OpCounter;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub shuffle_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { learning_rate: 0.1, epochs: 10, shuffle_seed: 0 }
    }
}

impl TrainConfig {
    /// A zero learning rate is accepted so that identity runs are expressible.
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning_rate must be finite and non-negative, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Seeded per-epoch visiting order: every epoch is a fresh permutation of
/// `0..len` drawn from one ChaCha stream.
pub struct EpochOrder {
    rng: ChaCha8Rng,
    order: Vec<usize>,
}

impl EpochOrder {
    pub fn new(len: usize, seed: u64) -> Self {
        EpochOrder { rng: ChaCha8Rng::seed_from_u64(seed), order: Vec::with_capacity(len) }
    }

    pub fn next_epoch(&mut self, len: usize) -> &[usize] {
        self.order.clear();
        self.order.extend(0..len);
        self.order.shuffle(&mut self.rng);
        &self.order
    }
}

/// Per-epoch record of an online training run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingHistory {
    /// Training-set MQE measured after each epoch.
    pub epoch_mqe: Vec<f64>,
    /// Arithmetic spent on the updates of each epoch (zero unless the scalar is instrumented).
    pub epoch_ops: Vec<OpCounter>,
}

impl TrainingHistory {
    pub fn final_mqe(&self) -> Option<f64> {
        self.epoch_mqe.last().copied()
    }

    /// Running totals of `epoch_ops`.
    pub fn cumulative_ops(&self) -> Vec<OpCounter> {
        self.epoch_ops
            .iter()
            .scan(OpCounter::default(), |acc, ops| {
                *acc += *ops;
                Some(*acc)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_are_permutations_and_reproducible() {
        let mut a = EpochOrder::new(20, 7);
        let mut b = EpochOrder::new(20, 7);
        for _ in 0..3 {
            let oa = a.next_epoch(20).to_vec();
            let ob = b.next_epoch(20).to_vec();
            assert_eq!(oa, ob);
            let mut sorted = oa.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..20).collect::<Vec<_>>());
        }
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        assert!(TrainConfig { learning_rate: 0.0, ..Default::default() }.validate().is_ok());
        assert!(TrainConfig { learning_rate: -0.1, ..Default::default() }.validate().is_err());
        assert!(TrainConfig { epochs: 0, ..Default::default() }.validate().is_err());
    }
}
