//! Two-phase training protocol.
//!
//! Phase one runs a Kohonen map per input on that input's coordinates and
//! redraws the partitions from the learned prototypes; the weights do not
//! exist yet. Phase two fits the segment weights by LMS with the partitions
//! frozen. Each phase runs once, in that order.

use serde::{Deserialize, Serialize};

use crate::bench::{count_mlp_eval, count_nfn_eval, Dataset, EvalOpCount};
use crate::error::{Error, Result};
use crate::membership::{FuzzyPartition, CURVES};
use crate::mlp::MlpModel;
use crate::nfn::NfnModel;
use crate::ops::{self, Counted, OpCounter};
use crate::scalar::Real;
use crate::som::{SomOutcome, SomSchedule, SomState};
use crate::train::{TrainConfig, TrainingHistory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// `(min, max)` per input variable.
    pub domains: Vec<(f64, f64)>,
    #[serde(default)]
    pub som: SomSchedule,
    /// Seed of the first input's map; input `i` uses `som_seed + i`.
    #[serde(default)]
    pub som_seed: u64,
    #[serde(default)]
    pub train: TrainConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            domains: vec![(-10.0, 10.0), (-10.0, 10.0)],
            som: SomSchedule::default(),
            som_seed: 0,
            train: TrainConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.domains.len() != 2 {
            return Err(Error::InvalidConfig(format!(
                "expected 2 input domains, got {}",
                self.domains.len()
            )));
        }
        for &(lo, hi) in &self.domains {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidDomain { min: lo, max: hi });
            }
        }
        self.som.validate()?;
        self.train.validate()
    }

    fn check_data<T: Real>(&self, data: &Dataset<T>) -> Result<()> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for s in data.samples() {
            for (&v, &(lo, hi)) in s.inputs().iter().zip(&self.domains) {
                let v = v.as_f64();
                if !(v >= lo && v <= hi) {
                    return Err(Error::OutOfDomain { value: v, min: lo, max: hi });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub model_name: String,
    pub config: PipelineConfig,
    pub samples: usize,
    /// Observed `(min, max)` of the targets.
    pub target_range: (f64, f64),
    pub initial_vertices: Vec<[f64; CURVES]>,
    pub learned_vertices: Vec<[f64; CURVES]>,
    /// Prototype order straight out of training, before sorting and clamping.
    pub pre_sort_prototypes: Vec<[f64; CURVES]>,
    pub weights: Vec<[f64; CURVES]>,
    pub epoch_mqe: Vec<f64>,
    pub final_mqe: f64,
    pub som_ops: OpCounter,
    /// Running total of update arithmetic after each weight epoch.
    pub training_ops: Vec<OpCounter>,
    /// Worst-case cost of a single evaluation over the training samples.
    pub eval_ops: EvalOpCount,
    pub warnings: Vec<String>,
}

fn to_f64s<T: Real>(v: &[T; CURVES]) -> [f64; CURVES] {
    v.map(Real::as_f64)
}

/// Phase one: one map per input on that input's coordinates.
pub fn learn_vertices<T: Real>(cfg: &PipelineConfig, data: &Dataset<T>) -> Result<Vec<SomOutcome<T>>> {
    cfg.domains
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| {
            let state = SomState::init(T::lit(lo), T::lit(hi))?;
            state.train(&data.column(i), &cfg.som, cfg.som_seed.wrapping_add(i as u64))
        })
        .collect()
}

/// Redraws one partition per input from the learned prototypes.
pub fn rebuild_partitions<T: Real>(outcomes: &[SomOutcome<T>]) -> Result<Vec<FuzzyPartition<T>>> {
    outcomes
        .iter()
        .map(|o| {
            let (lo, hi) = o.state.domain();
            FuzzyPartition::rebuild(o.state.prototypes(), lo, hi)
        })
        .collect()
}

/// Phase two: LMS weight fitting on frozen partitions.
pub fn fit_weights<T: Real>(
    partitions: Vec<FuzzyPartition<T>>,
    data: &Dataset<T>,
    cfg: &TrainConfig,
) -> Result<(NfnModel<T>, TrainingHistory)> {
    let mut model = NfnModel::new(partitions);
    let history = model.fit(data, cfg)?;
    Ok((model, history))
}

fn worst_case<E: Copy + Default>(samples: impl Iterator<Item = Result<E>>, key: impl Fn(&E) -> u64) -> Result<E> {
    let mut worst = E::default();
    for s in samples {
        let s = s?;
        if key(&s) > key(&worst) {
            worst = s;
        }
    }
    Ok(worst)
}

/// Runs both phases on any scalar. Operation counts in the report are zero
/// unless `T` is instrumented.
pub fn run_pipeline_generic<T: Real>(
    cfg: &PipelineConfig,
    data: &Dataset<T>,
) -> Result<(NfnModel<T>, PipelineReport)> {
    cfg.validate()?;
    cfg.check_data(data)?;

    let initial_vertices = cfg
        .domains
        .iter()
        .map(|&(lo, hi)| SomState::init(T::lit(lo), T::lit(hi)).map(|s| to_f64s(&s.prototypes())))
        .collect::<Result<Vec<_>>>()?;

    let (outcomes, som_ops) = ops::measure(|| learn_vertices(cfg, data));
    let outcomes = outcomes?;
    let partitions = rebuild_partitions(&outcomes)?;

    let mut warnings = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        let v = o.state.prototypes();
        let coincident: Vec<String> = (0..CURVES - 1)
            .filter(|&k| v[k] == v[k + 1])
            .map(|k| format!("{}/{}", k, k + 1))
            .collect();
        if !coincident.is_empty() {
            warnings.push(format!("input {}: coincident prototypes at {}", i + 1, coincident.join(", ")));
        }
        if o.crossed() {
            warnings.push(format!("input {}: prototypes crossed during training and were re-sorted", i + 1));
        }
    }

    let (model, history) = fit_weights(partitions, data, &cfg.train)?;

    let eval_ops = if T::COUNTS_OPS {
        worst_case(data.samples().iter().map(|s| count_nfn_eval(&model, &s.inputs())), EvalOpCount::total)?
    } else {
        EvalOpCount::default()
    };
    let (lo, hi) = data.target_range().expect("dataset checked non-empty");

    let report = PipelineReport {
        model_name: "NFN-MK".into(),
        config: cfg.clone(),
        samples: data.len(),
        target_range: (lo.as_f64(), hi.as_f64()),
        initial_vertices,
        learned_vertices: outcomes.iter().map(|o| to_f64s(&o.state.prototypes())).collect(),
        pre_sort_prototypes: outcomes.iter().map(|o| to_f64s(&o.pre_sort)).collect(),
        weights: model.weights().iter().map(to_f64s).collect(),
        final_mqe: history.final_mqe().expect("at least one epoch"),
        training_ops: history.cumulative_ops(),
        epoch_mqe: history.epoch_mqe,
        som_ops,
        eval_ops,
        warnings,
    };
    Ok((model, report))
}

/// Runs the protocol on the instrumented scalar and returns the plain `f64`
/// model; the arithmetic is identical, so are the results.
pub fn run_pipeline(cfg: &PipelineConfig, data: &Dataset<f64>) -> Result<(NfnModel<f64>, PipelineReport)> {
    let counted = data.map_scalar(Counted);
    let (model, report) = run_pipeline_generic(cfg, &counted)?;
    Ok((model.map_scalar(Counted::into_inner), report))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineConfig {
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub init_seed: u64,
}


#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub model_name: String,
    pub config: BaselineConfig,
    pub samples: usize,
    pub epoch_mqe: Vec<f64>,
    pub final_mqe: f64,
    pub training_ops: Vec<OpCounter>,
    pub eval_ops: EvalOpCount,
}

/// Trains the perceptron baseline under the same epoch and seed protocol.
pub fn run_baseline(cfg: &BaselineConfig, data: &Dataset<f64>) -> Result<(MlpModel<f64>, BaselineReport)> {
    cfg.train.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let counted = data.map_scalar(Counted);
    let mut model = MlpModel::<Counted<f64>>::random(cfg.init_seed);
    let history = model.fit(&counted, &cfg.train)?;
    let eval_ops = worst_case(
        counted.samples().iter().map(|s| count_mlp_eval(&model, s.inputs())),
        EvalOpCount::total,
    )?;
    let report = BaselineReport {
        model_name: "NN".into(),
        config: *cfg,
        samples: data.len(),
        final_mqe: history.final_mqe().expect("at least one epoch"),
        training_ops: history.cumulative_ops(),
        epoch_mqe: history.epoch_mqe,
        eval_ops,
    };
    Ok((model.map_scalar(Counted::into_inner), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::gen_grid;

    #[test]
    fn identity_pipeline_keeps_uniform_partitions_and_zero_weights() {
        let data = gen_grid(15, -10.0, 10.0).unwrap();
        let cfg = PipelineConfig {
            som: SomSchedule { initial_rate: 0.0, final_rate: 0.0, ..Default::default() },
            train: TrainConfig { learning_rate: 0.0, ..Default::default() },
            ..Default::default()
        };
        let (model, report) = run_pipeline(&cfg, &data).unwrap();
        let uniform = NfnModel::uniform(&[(-10.0, 10.0), (-10.0, 10.0)]).unwrap();
        assert_eq!(model, uniform);
        assert_eq!(report.initial_vertices, report.learned_vertices);
        assert!(report.weights.iter().flatten().all(|&w| w == 0.0));
    }

    #[test]
    fn counted_and_plain_runs_agree_bitwise() {
        let data = gen_grid(9, -10.0, 10.0).unwrap();
        let cfg = PipelineConfig::default();
        let (plain, plain_report) = run_pipeline_generic(&cfg, &data).unwrap();
        let (counted, report) = run_pipeline(&cfg, &data).unwrap();
        assert_eq!(plain, counted);
        assert_eq!(plain_report.epoch_mqe, report.epoch_mqe);
        assert_eq!(plain_report.training_ops.last().unwrap().total(), 0);
        assert!(report.training_ops.last().unwrap().total() > 0);
    }

    #[test]
    fn config_errors_surface() {
        let data = gen_grid(3, -10.0, 10.0).unwrap();
        let cfg = PipelineConfig { domains: vec![(-10.0, 10.0)], ..Default::default() };
        assert!(matches!(run_pipeline(&cfg, &data), Err(Error::InvalidConfig(_))));
        let cfg = PipelineConfig { domains: vec![(-5.0, 5.0), (-10.0, 10.0)], ..Default::default() };
        assert!(matches!(run_pipeline(&cfg, &data), Err(Error::OutOfDomain { .. })));
        let empty = Dataset::<f64>::new(vec![]);
        assert!(matches!(run_pipeline(&PipelineConfig::default(), &empty), Err(Error::EmptyDataset)));
    }
}
