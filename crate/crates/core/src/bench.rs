//! Benchmark harness: the 2-D sinc target, grid datasets, the MQE metric,
//! per-evaluation operation accounting, and the model comparison table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mlp::MlpModel;
use crate::nfn::NfnModel;
use crate::ops::{self, Counted, OpCounter};
use crate::scalar::Real;

/// One input/output pattern `(x1, x2, y_d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub x1: T,
    pub x2: T,
    pub y: T,
}

impl<T: Real> Sample<T> {
    pub fn new(x1: T, x2: T, y: T) -> Self {
        Sample { x1, x2, y }
    }

    pub fn inputs(&self) -> [T; 2] {
        [self.x1, self.x2]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    samples: Vec<Sample<T>>,
}

impl<T: Real> Dataset<T> {
    pub fn new(samples: Vec<Sample<T>>) -> Self {
        Dataset { samples }
    }

    pub fn samples(&self) -> &[Sample<T>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn targets(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.y).collect()
    }

    /// Values of input coordinate `axis` (0 for `x1`, 1 for `x2`) in dataset order.
    pub fn column(&self, axis: usize) -> Vec<T> {
        self.samples.iter().map(|s| s.inputs()[axis]).collect()
    }

    /// Smallest and largest target value.
    pub fn target_range(&self) -> Option<(T, T)> {
        let first = self.samples.first()?.y;
        Some(self.samples.iter().fold((first, first), |(lo, hi), s| {
            (if s.y < lo { s.y } else { lo }, if s.y > hi { s.y } else { hi })
        }))
    }

    pub fn map_scalar<U: Real>(&self, f: impl Fn(T) -> U) -> Dataset<U> {
        Dataset {
            samples: self.samples.iter().map(|s| Sample { x1: f(s.x1), x2: f(s.x2), y: f(s.y) }).collect(),
        }
    }
}

/// `sin(t) / t` with the removable singularity filled in.
pub fn sinc<T: Real>(t: T) -> T {
    if t == T::zero() {
        T::one()
    } else if t.abs() < T::lit(1e-8) {
        T::one() - t * t / T::lit(6.0)
    } else {
        t.sin() / t
    }
}

/// The Mexican-hat target `sin(x1) sin(x2) / (x1 x2)`.
pub fn mexican_hat<T: Real>(x1: T, x2: T) -> T {
    sinc(x1) * sinc(x2)
}

/// `n` equally spaced points from `min` to `max` inclusive, ends exact.
pub fn grid_axis<T: Real>(n: usize, min: T, max: T) -> Vec<T> {
    let steps = T::from_usize(n - 1);
    (0..n)
        .map(|i| match i {
            0 => min,
            i if i == n - 1 => max,
            i => (min * T::from_usize(n - 1 - i) + max * T::from_usize(i)) / steps,
        })
        .collect()
}

/// `n * n` Mexican-hat samples on the inclusive square grid, row-major
/// (`x1` outer, `x2` inner).
pub fn gen_grid<T: Real>(n: usize, min: T, max: T) -> Result<Dataset<T>> {
    if n < 2 {
        return Err(Error::InvalidGridSize(n));
    }
    if !(min < max && min.is_finite() && max.is_finite()) {
        return Err(Error::InvalidDomain { min: min.as_f64(), max: max.as_f64() });
    }
    let axis = grid_axis(n, min, max);
    let samples = axis
        .iter()
        .flat_map(|&x1| axis.iter().map(move |&x2| Sample::new(x1, x2, mexican_hat(x1, x2))))
        .collect();
    Ok(Dataset::new(samples))
}

/// Mean quadratic error `(1/N) * sum (p - t)^2`, summed in input order.
pub fn mqe<T: Real>(predictions: &[T], targets: &[T]) -> Result<T> {
    if predictions.len() != targets.len() {
        return Err(Error::LengthMismatch { predictions: predictions.len(), targets: targets.len() });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let sum = predictions
        .iter()
        .zip(targets)
        .fold(T::zero(), |acc, (&p, &t)| acc + (p - t) * (p - t));
    Ok(sum / T::from_usize(predictions.len()))
}

/// Cost of one forward evaluation, split into the per-function part
/// (membership or activation evaluations) and the combining part (the
/// weighted sum for the fuzzy neuron, the linear layers for the MLP).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOpCount {
    pub function_ops: OpCounter,
    pub combine_ops: OpCounter,
    /// Number of membership or activation evaluations.
    pub function_evals: u64,
}

impl EvalOpCount {
    pub fn total(&self) -> u64 {
        self.function_ops.total() + self.combine_ops.total()
    }

    /// Arithmetic per function evaluation, rounded down.
    pub fn ops_per_function(&self) -> u64 {
        self.function_ops.total().checked_div(self.function_evals).unwrap_or(0)
    }
}

/// Counts one fuzzy-neuron evaluation on an instrumented model.
///
/// Fails with [`Error::InstrumentationDisabled`] unless `T` feeds the op counter.
pub fn count_nfn_eval<T: Real>(model: &NfnModel<T>, x: &[T]) -> Result<EvalOpCount> {
    if !T::COUNTS_OPS {
        return Err(Error::InstrumentationDisabled);
    }
    let (pairs, function_ops) = ops::measure(|| model.active_pairs(x));
    let pairs = pairs?;
    let (_, combine_ops) = ops::measure(|| model.combine(&pairs));
    Ok(EvalOpCount { function_ops, combine_ops, function_evals: 2 * pairs.len() as u64 })
}

/// Counts one MLP forward pass on an instrumented model.
pub fn count_mlp_eval<T: Real>(model: &MlpModel<T>, x: [T; 2]) -> Result<EvalOpCount> {
    if !T::COUNTS_OPS {
        return Err(Error::InstrumentationDisabled);
    }
    let (pre, linear_in) = ops::measure(|| model.hidden_preactivations(x));
    let (hidden, function_ops) = ops::measure(|| pre.map(crate::mlp::sigmoid));
    let (_, linear_out) = ops::measure(|| model.output_from_hidden(&hidden));
    Ok(EvalOpCount {
        function_ops,
        combine_ops: linear_in + linear_out,
        function_evals: hidden.len() as u64,
    })
}

/// Counts one evaluation of an `f64` fuzzy neuron at `x` by replaying it on
/// the instrumented scalar.
pub fn count_eval_ops(model: &NfnModel<f64>, x: &[f64]) -> Result<EvalOpCount> {
    let counted = model.map_scalar(Counted);
    let x: Vec<Counted<f64>> = x.iter().copied().map(Counted).collect();
    count_nfn_eval(&counted, &x)
}

pub fn count_mlp_ops(model: &MlpModel<f64>, x: [f64; 2]) -> Result<EvalOpCount> {
    count_mlp_eval(&model.map_scalar(Counted), x.map(Counted))
}

/// One row of the model comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    /// `+, -, x` per evaluation.
    pub operations: u64,
    pub operations_by_function: u64,
    pub mqe: f64,
    /// `(function, combine)` split of `operations`; absent for reference rows.
    pub split: Option<(u64, u64)>,
    /// Reference rows are literature constants, not measurements.
    pub reference: bool,
}

/// Fixed figures for the two models not reimplemented here.
pub fn reference_rows() -> Vec<ComparisonRow> {
    vec![
        ComparisonRow { model: "NFHQ".into(), operations: 168, operations_by_function: 21, mqe: 0.0150, split: None, reference: true },
        ComparisonRow { model: "FSOM".into(), operations: 200, operations_by_function: 101, mqe: 0.0314, split: None, reference: true },
    ]
}

/// What a trained model contributes to the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSummary {
    pub name: String,
    pub eval_ops: EvalOpCount,
    pub mqe: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    /// Diagnostics for summaries that could not be tabulated.
    pub rejected: Vec<String>,
}

/// Builds the table: one row per valid summary, then the reference rows.
///
/// `operations` of a measured row is the whole evaluation; the split into
/// function and combining arithmetic is kept alongside so either counting
/// convention can be read off.
pub fn compare_models(summaries: &[ModelSummary]) -> ComparisonTable {
    let mut table = ComparisonTable::default();
    for (i, s) in summaries.iter().enumerate() {
        if s.name.trim().is_empty() {
            table.rejected.push(format!("report #{} has an empty model name; row skipped", i + 1));
            continue;
        }
        if !s.mqe.is_finite() {
            table.rejected.push(format!("report {:?} has non-finite MQE {}; row skipped", s.name, s.mqe));
            continue;
        }
        table.rows.push(ComparisonRow {
            model: s.name.clone(),
            operations: s.eval_ops.total(),
            operations_by_function: s.eval_ops.ops_per_function(),
            mqe: s.mqe,
            split: Some((s.eval_ops.function_ops.total(), s.eval_ops.combine_ops.total())),
            reference: false,
        });
    }
    table.rows.extend(reference_rows());
    table
}

impl ComparisonTable {
    const HEADER: [&'static str; 6] = [
        "Models",
        "Number of Operations (+,-,x)",
        "Operations by function",
        "MQE",
        "Function ops",
        "Combine ops",
    ];

    fn cells(&self) -> Vec<[String; 6]> {
        self.rows
            .iter()
            .map(|r| {
                let (function, combine) = match r.split {
                    Some((f, c)) => (f.to_string(), c.to_string()),
                    None => (String::new(), String::new()),
                };
                [
                    r.model.clone(),
                    r.operations.to_string(),
                    r.operations_by_function.to_string(),
                    format!("{:.4}", r.mqe),
                    function,
                    combine,
                ]
            })
            .collect()
    }

    /// Column-aligned plain text.
    pub fn render_text(&self) -> String {
        let cells = self.cells();
        let mut widths = Self::HEADER.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, row: &[&str]| {
            let padded: Vec<String> =
                row.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &Self::HEADER);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        let _ = writeln!(out, "{}", rule.join("  "));
        for row in &cells {
            let refs: Vec<&str> = row.iter().map(String::as_str).collect();
            line(&mut out, &refs);
        }
        out
    }

    pub fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "model",
            "operations",
            "operations_by_function",
            "mqe",
            "function_ops",
            "combine_ops",
            "reference",
        ])
        .map_err(|e| Error::Parse(e.to_string()))?;
        for (r, c) in self.rows.iter().zip(self.cells()) {
            let reference = if r.reference { "true" } else { "false" };
            w.write_record([c[0].as_str(), &c[1], &c[2], &c[3], &c[4], &c[5], reference])
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
