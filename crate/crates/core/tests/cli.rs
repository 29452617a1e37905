use std::path::Path;
use std::process::{Command, Output};

use nfn_mk::io::{read_dataset, read_json, ReportFile};
use tempfile::TempDir;

fn nfn_mk(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfn-mk"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn gen(dir: &Path, n: &str) {
    let o = nfn_mk(dir, &["gen-data", "--n", n, "--min", "-10", "--max", "10", "--out", "data.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn gen_data_writes_n_squared_rows() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "15");
    let text = std::fs::read_to_string(dir.path().join("data.csv")).unwrap();
    assert_eq!(text.lines().count(), 226);
    assert_eq!(text.lines().next(), Some("x1,x2,y"));

    let o = nfn_mk(dir.path(), &["gen-data", "--n", "2", "--min", "0", "--max", "1", "--out", "small.csv"]);
    assert!(stdout(&o).contains("wrote 4 samples"));
    assert_eq!(read_dataset(&dir.path().join("small.csv")).unwrap().len(), 4);
}

#[test]
fn gen_data_failures_exit_nonzero() {
    let dir = TempDir::new().unwrap();
    let o = nfn_mk(dir.path(), &["gen-data", "--n", "3", "--out", "missing/dir/data.csv"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("error"));
    assert!(stdout(&o).is_empty());
    let o = nfn_mk(dir.path(), &["gen-data", "--n", "1", "--out", "d.csv"]);
    assert!(!o.status.success());
}

fn train(dir: &Path, config: &str, model: &str, report: &str) -> Output {
    nfn_mk(dir, &["train", "--config", config, "--model-out", model, "--report-out", report])
}

#[test]
fn train_eval_consistency_and_determinism() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    gen(d, "15");
    std::fs::write(d.join("cfg.json"), r#"{"dataset": "data.csv"}"#).unwrap();

    let o = train(d, "cfg.json", "m1.json", "r1.json");
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("final MQE: "));
    assert!(stderr(&o).contains("\"shuffle_seed\":0"), "banner echoes seeds");
    let o = train(d, "cfg.json", "m2.json", "r2.json");
    assert!(o.status.success());
    assert_eq!(std::fs::read(d.join("m1.json")).unwrap(), std::fs::read(d.join("m2.json")).unwrap());
    assert_eq!(std::fs::read(d.join("r1.json")).unwrap(), std::fs::read(d.join("r2.json")).unwrap());

    let report: ReportFile = read_json(&d.join("r1.json")).unwrap();
    assert!(report.final_mqe() <= 0.08);

    let model = d.join("m1.json");
    let data = d.join("data.csv");
    let mut sink = Vec::new();
    let value = nfn_mk::cli::cmd_eval(&model, &data, &d.join("pred.csv"), &mut sink).unwrap();
    assert_eq!(value, report.final_mqe());

    let o = nfn_mk(d, &["eval", "--model", "m1.json", "--data", "data.csv", "--out", "pred.csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), format!("MQE: {:.4}", report.final_mqe()));
    let pred = std::fs::read_to_string(d.join("pred.csv")).unwrap();
    assert!(pred.starts_with("x1,x2,y_true,y_pred\n"));
    assert_eq!(pred.lines().count(), 226);
}

#[test]
fn zero_rate_config_gives_uniform_zero_model() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    gen(d, "15");
    std::fs::write(
        d.join("cfg.json"),
        r#"{"dataset": "data.csv", "som": {"initial_rate": 0.0, "final_rate": 0.0}, "train": {"learning_rate": 0.0}}"#,
    )
    .unwrap();
    assert!(train(d, "cfg.json", "m.json", "r.json").status.success());
    let model = nfn_mk::cli::load_model(&d.join("m.json")).unwrap();
    let uniform = nfn_mk::NfnModel::uniform(&[(-10.0, 10.0), (-10.0, 10.0)]).unwrap();
    assert_eq!(model, nfn_mk::io::AnyModel::Nfn(uniform));

    // zero model: MQE is the mean of y^2 over the grid
    let data = read_dataset(&d.join("data.csv")).unwrap();
    let closed_form = data.samples().iter().map(|s| s.y * s.y).sum::<f64>() / data.len() as f64;
    let mut sink = Vec::new();
    let value = nfn_mk::cli::cmd_eval(&d.join("m.json"), &d.join("data.csv"), &d.join("p.csv"), &mut sink).unwrap();
    assert!((value - closed_form).abs() < 1e-15);
}

#[test]
fn flags_override_config_values() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(d.join("cfg.json"), r#"{"grid": {"n": 7}}"#).unwrap();
    let o = nfn_mk(
        d,
        &["train", "--config", "cfg.json", "--model-out", "m.json", "--report-out", "r.json", "--epochs", "3"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    match read_json::<ReportFile>(&d.join("r.json")).unwrap() {
        ReportFile::NfnMk(r) => assert_eq!(r.epoch_mqe.len(), 3),
        other => panic!("unexpected report {other:?}"),
    }
}

#[test]
fn bad_inputs_are_reported() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(d.join("cfg.json"), r#"{"dataset": "data.csv", "bogus": 1}"#).unwrap();
    let o = train(d, "cfg.json", "m.json", "r.json");
    assert!(!o.status.success());
    assert!(stderr(&o).contains("bogus"));

    gen(d, "3");
    std::fs::write(d.join("cfg.json"), r#"{"dataset": "data.csv"}"#).unwrap();
    assert!(train(d, "cfg.json", "m.json", "r.json").status.success());
    std::fs::write(d.join("trunc.csv"), "x1,x2,y\n0,0,1\n0.5,0.25\n").unwrap();
    let o = nfn_mk(d, &["eval", "--model", "m.json", "--data", "trunc.csv", "--out", "p.csv"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    std::fs::write(d.join("wide.csv"), "x1,x2,y\n0,0,1\n12,0,0\n0,-11,0\n").unwrap();
    let o = nfn_mk(d, &["eval", "--model", "m.json", "--data", "wide.csv", "--out", "p.csv"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("row 2") && err.contains("row 3"), "{err}");
}

#[test]
fn compare_and_export() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    gen(d, "15");
    std::fs::write(d.join("nfn.json"), r#"{"dataset": "data.csv"}"#).unwrap();
    std::fs::write(d.join("mlp.json"), r#"{"kind": "mlp", "dataset": "data.csv"}"#).unwrap();
    assert!(train(d, "nfn.json", "m.json", "r.json").status.success());
    assert!(train(d, "mlp.json", "mm.json", "mr.json").status.success());

    let o = nfn_mk(d, &["compare", "r.json"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2 + 3);

    let o = nfn_mk(d, &["compare", "r.json", "mr.json", "--csv", "table.csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let models: Vec<_> =
        text.lines().skip(2).map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(models, ["NFN-MK", "NN", "NFHQ", "FSOM"]);
    let csv = std::fs::read_to_string(d.join("table.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);

    let o = nfn_mk(d, &["compare", "nope.json"]);
    assert!(!o.status.success());

    let o = nfn_mk(d, &["export", "--model", "m.json", "--partitions-out", "p.csv"]);
    assert!(o.status.success());
    let p = std::fs::read_to_string(d.join("p.csv")).unwrap();
    assert!(p.starts_with("input,label,left,vertex,right\n"));
    assert_eq!(p.lines().count(), 15);
    let o = nfn_mk(d, &["export", "--model", "mm.json", "--partitions-out", "p2.csv"]);
    assert!(!o.status.success());
}
