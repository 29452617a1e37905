//! On-disk formats: model and report JSON, dataset/prediction/partition CSV.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bench::{Dataset, Sample};
use crate::error::{Error, Result};
use crate::membership::{FuzzyLabel, FuzzyPartition, CURVES};
use crate::mlp::{MlpModel, HIDDEN, INPUTS};
use crate::nfn::{FuzzyNeuron, NfnModel};
use crate::pipeline::{BaselineReport, PipelineReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub label: String,
    pub left: f64,
    pub vertex: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDoc {
    pub domain: [f64; 2],
    pub curves: Vec<CurveDoc>,
}

impl From<&FuzzyPartition<f64>> for PartitionDoc {
    fn from(p: &FuzzyPartition<f64>) -> Self {
        let (lo, hi) = p.domain();
        PartitionDoc {
            domain: [lo, hi],
            curves: FuzzyLabel::ALL
                .iter()
                .map(|&l| {
                    let c = p.curve(l);
                    CurveDoc { label: l.to_string(), left: c.left(), vertex: c.vertex(), right: c.right() }
                })
                .collect(),
        }
    }
}

impl TryFrom<&PartitionDoc> for FuzzyPartition<f64> {
    type Error = Error;

    /// Rebuilds from the vertices and insists the stored breakpoints agree.
    fn try_from(doc: &PartitionDoc) -> Result<Self> {
        if doc.curves.len() != CURVES {
            return Err(Error::Parse(format!("partition needs {CURVES} curves, found {}", doc.curves.len())));
        }
        for (c, expected) in doc.curves.iter().zip(FuzzyLabel::ALL) {
            let label: FuzzyLabel = c.label.parse()?;
            if label != expected {
                return Err(Error::Parse(format!("curve {label} found where {expected} was expected")));
            }
        }
        let vertices: [f64; CURVES] = std::array::from_fn(|k| doc.curves[k].vertex);
        let p = FuzzyPartition::rebuild(vertices, doc.domain[0], doc.domain[1])?;
        for (c, built) in doc.curves.iter().zip(p.curves()) {
            if c.left != built.left() || c.right != built.right() {
                return Err(Error::Parse(format!(
                    "curve {} has breakpoints ({}, {}) but its neighbours imply ({}, {})",
                    c.label,
                    c.left,
                    c.right,
                    built.left(),
                    built.right()
                )));
            }
        }
        Ok(p)
    }
}

/// Model file envelope, discriminated by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ModelFile {
    #[serde(rename = "nfn-mk")]
    NfnMk { partitions: Vec<PartitionDoc>, weights: Vec<[f64; CURVES]> },
    #[serde(rename = "mlp")]
    Mlp {
        hidden_weights: [[f64; INPUTS]; HIDDEN],
        hidden_biases: [f64; HIDDEN],
        output_weights: [f64; HIDDEN],
        output_bias: f64,
    },
}

/// A model loaded from disk.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModel {
    Nfn(NfnModel<f64>),
    Mlp(MlpModel<f64>),
}

impl AnyModel {
    pub fn eval(&self, x: [f64; 2]) -> Result<f64> {
        match self {
            AnyModel::Nfn(m) => m.eval(&x),
            AnyModel::Mlp(m) => Ok(m.forward(x)),
        }
    }
}

impl From<&NfnModel<f64>> for ModelFile {
    fn from(m: &NfnModel<f64>) -> Self {
        ModelFile::NfnMk {
            partitions: m.neurons().iter().map(|n| PartitionDoc::from(&n.partition)).collect(),
            weights: m.weights(),
        }
    }
}

impl From<&MlpModel<f64>> for ModelFile {
    fn from(m: &MlpModel<f64>) -> Self {
        ModelFile::Mlp {
            hidden_weights: m.hidden_weights,
            hidden_biases: m.hidden_biases,
            output_weights: m.output_weights,
            output_bias: m.output_bias,
        }
    }
}

impl ModelFile {
    pub fn into_model(self) -> Result<AnyModel> {
        match self {
            ModelFile::NfnMk { partitions, weights } => {
                if partitions.len() != weights.len() {
                    return Err(Error::Parse(format!(
                        "{} partitions but {} weight vectors",
                        partitions.len(),
                        weights.len()
                    )));
                }
                let neurons = partitions
                    .iter()
                    .zip(weights)
                    .map(|(doc, weights)| Ok(FuzzyNeuron { partition: FuzzyPartition::try_from(doc)?, weights }))
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyModel::Nfn(NfnModel::from_neurons(neurons)))
            }
            ModelFile::Mlp { hidden_weights, hidden_biases, output_weights, output_bias } => {
                Ok(AnyModel::Mlp(MlpModel { hidden_weights, hidden_biases, output_weights, output_bias }))
            }
        }
    }
}

/// Report file envelope, discriminated by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ReportFile {
    #[serde(rename = "nfn-mk")]
    NfnMk(PipelineReport),
    #[serde(rename = "mlp")]
    Mlp(BaselineReport),
}

impl ReportFile {
    pub fn summary(&self) -> crate::bench::ModelSummary {
        match self {
            ReportFile::NfnMk(r) => crate::bench::ModelSummary {
                name: r.model_name.clone(),
                eval_ops: r.eval_ops,
                mqe: r.final_mqe,
            },
            ReportFile::Mlp(r) => crate::bench::ModelSummary {
                name: r.model_name.clone(),
                eval_ops: r.eval_ops,
                mqe: r.final_mqe,
            },
        }
    }

    pub fn final_mqe(&self) -> f64 {
        match self {
            ReportFile::NfnMk(r) => r.final_mqe,
            ReportFile::Mlp(r) => r.final_mqe,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn csv_error(e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::Parse(format!("line {}: {e}", pos.line())),
        None => Error::Parse(e.to_string()),
    }
}

const DATASET_HEADER: [&str; 3] = ["x1", "x2", "y"];

/// Dataset CSV with header `x1,x2,y`; values use shortest round-trip decimals.
pub fn dataset_to_csv(data: &Dataset<f64>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(DATASET_HEADER).map_err(csv_error)?;
    for s in data.samples() {
        w.write_record([s.x1.to_string(), s.x2.to_string(), s.y.to_string()]).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn dataset_from_csv(text: &str) -> Result<Dataset<f64>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_error)?;
    if header.iter().collect::<Vec<_>>() != DATASET_HEADER {
        return Err(Error::Parse(format!("line 1: expected header x1,x2,y, found {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut samples = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: column {} is not a number: {raw:?}", DATASET_HEADER[i])))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("line {line}: column {} is not finite", DATASET_HEADER[i])));
            }
            Ok(v)
        };
        samples.push(Sample::new(field(0)?, field(1)?, field(2)?));
    }
    Ok(Dataset::new(samples))
}

pub fn read_dataset(path: &Path) -> Result<Dataset<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    dataset_from_csv(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Prediction CSV `x1,x2,y_true,y_pred`.
pub fn predictions_to_csv(data: &Dataset<f64>, predictions: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x1", "x2", "y_true", "y_pred"]).map_err(csv_error)?;
    for (s, p) in data.samples().iter().zip(predictions) {
        w.write_record([s.x1.to_string(), s.x2.to_string(), s.y.to_string(), p.to_string()])
            .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Triangle breakpoints for plotting: `input,label,left,vertex,right`.
pub fn partitions_to_csv(model: &NfnModel<f64>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["input", "label", "left", "vertex", "right"]).map_err(csv_error)?;
    for (i, n) in model.neurons().iter().enumerate() {
        for l in FuzzyLabel::ALL {
            let c = n.partition.curve(l);
            w.write_record([
                (i + 1).to_string(),
                l.to_string(),
                c.left().to_string(),
                c.vertex().to_string(),
                c.right().to_string(),
            ])
            .map_err(csv_error)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
