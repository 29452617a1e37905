//! Neo-fuzzy neuron whose triangular membership partitions are placed by a
//! one-dimensional Kohonen map, plus the benchmark harness used to compare it
//! against a small backpropagation perceptron on the Mexican-hat surface.
//!
//! The numeric code is generic over [`Real`](scalar::Real). Use the `f64`
//! aliases below for ordinary work; [`Counted`](ops::Counted) replays the same
//! code while counting arithmetic.
//!
//! ```
//! use nfn_mk::{gen_grid, run_pipeline, PipelineConfig};
//!
//! let data = gen_grid(15, -10.0, 10.0).unwrap();
//! let (model, report) = run_pipeline(&PipelineConfig::default(), &data).unwrap();
//! assert_eq!(report.epoch_mqe.len(), 10);
//! assert!(model.eval(&[0.5, -1.5]).is_ok());
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod io;
pub mod membership;
pub mod mlp;
pub mod nfn;
pub mod ops;
pub mod pipeline;
pub mod scalar;
pub mod som;
pub mod train;

pub use bench::{compare_models, count_eval_ops, gen_grid, mexican_hat, mqe, ComparisonTable, EvalOpCount};
pub use error::{Error, Result};
pub use membership::{ActivePair, FuzzyLabel, CURVES};
pub use ops::{Counted, OpCounter};
pub use pipeline::{run_baseline, run_pipeline, BaselineConfig, BaselineReport, PipelineConfig, PipelineReport};
pub use scalar::Real;
pub use som::SomSchedule;
pub use train::{TrainConfig, TrainingHistory};

pub type TriangularMf = membership::TriangularMf<f64>;
pub type TriangularMf32 = membership::TriangularMf<f32>;
pub type FuzzyPartition = membership::FuzzyPartition<f64>;
pub type FuzzyPartition32 = membership::FuzzyPartition<f32>;
pub type NfnModel = nfn::NfnModel<f64>;
pub type NfnModel32 = nfn::NfnModel<f32>;
pub type SomState = som::SomState<f64>;
pub type SomState32 = som::SomState<f32>;
pub type MlpModel = mlp::MlpModel<f64>;
pub type MlpModel32 = mlp::MlpModel<f32>;
pub type Sample = bench::Sample<f64>;
pub type Dataset = bench::Dataset<f64>;
/// Instrumented double precision.
pub type CountedF64 = Counted<f64>;
