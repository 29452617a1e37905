//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bench::{compare_models, gen_grid, mqe, Dataset};
use crate::error::{Error, Result};
use crate::io::{self, AnyModel, ModelFile, ReportFile};
use crate::pipeline::{run_baseline, run_pipeline, BaselineConfig, PipelineConfig};
use crate::som::SomSchedule;
use crate::train::TrainConfig;

#[derive(Debug, Parser)]
#[command(name = "nfn-mk", version, about = "Neo-fuzzy neuron with Kohonen-placed membership functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the Mexican-hat grid dataset as CSV.
    GenData {
        #[arg(long, default_value_t = 15)]
        n: usize,
        #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        max: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the training protocol described by a JSON config.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        model_out: PathBuf,
        #[arg(long)]
        report_out: PathBuf,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        shuffle_seed: Option<u64>,
        #[arg(long)]
        som_seed: Option<u64>,
        #[arg(long)]
        som_epochs: Option<usize>,
        #[arg(long)]
        init_seed: Option<u64>,
    },
    /// Evaluate a model on a dataset and write predictions.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate trained reports next to the fixed reference rows.
    Compare {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write the triangle breakpoints of a fuzzy model as CSV.
    Export {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        partitions_out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[default]
    #[serde(rename = "nfn-mk")]
    NfnMk,
    #[serde(rename = "mlp")]
    Mlp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    #[serde(default = "GridSpec::default_min")]
    pub min: f64,
    #[serde(default = "GridSpec::default_max")]
    pub max: f64,
}

impl GridSpec {
    fn default_min() -> f64 {
        -10.0
    }

    fn default_max() -> f64 {
        10.0
    }
}

/// The single JSON document describing one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub kind: ModelKind,
    /// Dataset CSV, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    /// Generate the grid in memory instead of reading a dataset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default = "ExperimentConfig::default_domains")]
    pub domains: Vec<(f64, f64)>,
    #[serde(default)]
    pub som: SomSchedule,
    #[serde(default)]
    pub som_seed: u64,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub init_seed: u64,
}

impl ExperimentConfig {
    fn default_domains() -> Vec<(f64, f64)> {
        vec![(-10.0, 10.0), (-10.0, 10.0)]
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig { domains: self.domains.clone(), som: self.som, som_seed: self.som_seed, train: self.train }
    }

    pub fn baseline(&self) -> BaselineConfig {
        BaselineConfig { train: self.train, init_seed: self.init_seed }
    }

    pub fn load_dataset(&self, base: &Path) -> Result<Dataset<f64>> {
        match (&self.dataset, &self.grid) {
            (Some(path), None) => io::read_dataset(&base.join(path)),
            (None, Some(g)) => gen_grid(g.n, g.min, g.max),
            (Some(_), Some(_)) => Err(Error::InvalidConfig("give either \"dataset\" or \"grid\", not both".into())),
            (None, None) => Err(Error::InvalidConfig("config needs a \"dataset\" path or a \"grid\"".into())),
        }
    }
}

/// Runs one command; data goes to `out`, diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::GenData { n, min, max, out: path } => {
            let rows = cmd_gen_data(n, min, max, &path)?;
            writeln!(out, "wrote {rows} samples to {}", path.display())?;
        }
        Command::Train {
            config,
            model_out,
            report_out,
            learning_rate,
            epochs,
            shuffle_seed,
            som_seed,
            som_epochs,
            init_seed,
        } => {
            let mut cfg: ExperimentConfig = io::read_json(&config)?;
            if let Some(v) = learning_rate {
                cfg.train.learning_rate = v;
            }
            if let Some(v) = epochs {
                cfg.train.epochs = v;
            }
            if let Some(v) = shuffle_seed {
                cfg.train.shuffle_seed = v;
            }
            if let Some(v) = som_seed {
                cfg.som_seed = v;
            }
            if let Some(v) = som_epochs {
                cfg.som.epochs = v;
            }
            if let Some(v) = init_seed {
                cfg.init_seed = v;
            }
            writeln!(err, "nfn-mk train: resolved config {}", serde_json::to_string(&cfg)?)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let report = cmd_train(&cfg, base, &model_out, &report_out)?;
            for w in warnings(&report) {
                writeln!(err, "warning: {w}")?;
            }
            writeln!(out, "final MQE: {:.4}", report.final_mqe())?;
        }
        Command::Eval { model, data, out: path } => {
            let value = cmd_eval(&model, &data, &path, err)?;
            writeln!(out, "MQE: {value:.4}")?;
        }
        Command::Compare { reports, csv } => {
            let table = cmd_compare(&reports)?;
            for r in &table.rejected {
                writeln!(err, "warning: {r}")?;
            }
            write!(out, "{}", table.render_text())?;
            if let Some(path) = csv {
                std::fs::write(path, table.render_csv()?)?;
            }
        }
        Command::Export { model, partitions_out } => {
            let n = cmd_export(&model, &partitions_out)?;
            writeln!(out, "wrote {n} curves to {}", partitions_out.display())?;
        }
    }
    Ok(())
}

fn warnings(report: &ReportFile) -> &[String] {
    match report {
        ReportFile::NfnMk(r) => &r.warnings,
        ReportFile::Mlp(_) => &[],
    }
}

/// Writes the `n * n` grid; returns the number of rows written.
pub fn cmd_gen_data(n: usize, min: f64, max: f64, path: &Path) -> Result<usize> {
    let data = gen_grid(n, min, max)?;
    std::fs::write(path, io::dataset_to_csv(&data)?)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok(data.len())
}

pub fn cmd_train(cfg: &ExperimentConfig, base: &Path, model_out: &Path, report_out: &Path) -> Result<ReportFile> {
    let data = cfg.load_dataset(base)?;
    let (model, report) = match cfg.kind {
        ModelKind::NfnMk => {
            let (model, report) = run_pipeline(&cfg.pipeline(), &data)?;
            (ModelFile::from(&model), ReportFile::NfnMk(report))
        }
        ModelKind::Mlp => {
            let (model, report) = run_baseline(&cfg.baseline(), &data)?;
            (ModelFile::from(&model), ReportFile::Mlp(report))
        }
    };
    io::write_json(model_out, &model)?;
    io::write_json(report_out, &report)?;
    Ok(report)
}

pub fn load_model(path: &Path) -> Result<AnyModel> {
    io::read_json::<ModelFile>(path)?.into_model()
}

/// Writes the prediction CSV and returns the MQE. Every row outside the
/// model's domain is reported before failing.
pub fn cmd_eval(model_path: &Path, data_path: &Path, out_path: &Path, err: &mut dyn Write) -> Result<f64> {
    let model = load_model(model_path)?;
    let data = io::read_dataset(data_path)?;
    let mut predictions = Vec::with_capacity(data.len());
    let mut bad = 0usize;
    for (i, s) in data.samples().iter().enumerate() {
        match model.eval(s.inputs()) {
            Ok(y) => predictions.push(y),
            Err(e) => {
                bad += 1;
                writeln!(err, "row {}: {e}", i + 1)?;
            }
        }
    }
    if bad > 0 {
        return Err(Error::Parse(format!("{bad} rows could not be evaluated")));
    }
    std::fs::write(out_path, io::predictions_to_csv(&data, &predictions)?)?;
    mqe(&predictions, &data.targets())
}

pub fn cmd_compare(paths: &[PathBuf]) -> Result<crate::bench::ComparisonTable> {
    let summaries = paths
        .iter()
        .map(|p| io::read_json::<ReportFile>(p).map(|r| r.summary()))
        .collect::<Result<Vec<_>>>()?;
    Ok(compare_models(&summaries))
}

pub fn cmd_export(model_path: &Path, out_path: &Path) -> Result<usize> {
    match load_model(model_path)? {
        AnyModel::Nfn(m) => {
            std::fs::write(out_path, io::partitions_to_csv(&m)?)?;
            Ok(m.input_count() * crate::membership::CURVES)
        }
        AnyModel::Mlp(_) => Err(Error::InvalidConfig("an mlp model has no membership partitions to export".into())),
    }
}
