//! End-to-end checks of the `imboost` binary.

use std::path::Path;
use std::process::{Command, Output};

fn imboost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imboost"))
        .args(args)
        .output()
        .expect("failed to launch imboost")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_train_predict_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let model = dir.path().join("model.json");
    let features = dir.path().join("features.csv");
    let preds = dir.path().join("preds.csv");

    let out = imboost(&[
        "generate",
        "--out",
        path_str(&data),
        "--n-samples",
        "300",
        "--n-features",
        "4",
        "--n-informative",
        "3",
        "--n-classes",
        "3",
        "--weights",
        "0.6,0.3,0.1",
        "--class-sep",
        "1.5",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = imboost(&[
        "train",
        "--data",
        path_str(&data),
        "--k",
        "3",
        "--variant",
        "samme",
        "--rounds",
        "10",
        "--seed",
        "5",
        "--model-out",
        path_str(&model),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // strip the label column to get a prediction input
    let text = std::fs::read_to_string(&data).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let label_pos = header.iter().position(|h| *h == "label").unwrap();
    let mut feature_text = String::new();
    for line in text.lines() {
        let kept: Vec<&str> = line
            .split(',')
            .enumerate()
            .filter(|(i, _)| *i != label_pos)
            .map(|(_, v)| v)
            .collect();
        feature_text.push_str(&kept.join(","));
        feature_text.push('\n');
    }
    std::fs::write(&features, &feature_text).unwrap();

    let out = imboost(&[
        "predict",
        "--model",
        path_str(&model),
        "--input",
        path_str(&features),
        "--output",
        path_str(&preds),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let preds_text = std::fs::read_to_string(&preds).unwrap();
    let mut lines = preds_text.lines();
    assert_eq!(lines.next().unwrap(), "predicted,proba_class_0,proba_class_1,proba_class_2");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 300);
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        let class: usize = fields[0].parse().unwrap();
        assert!(class < 3);
        let proba: Vec<f64> = fields[1..].iter().map(|f| f.parse().unwrap()).collect();
        let total: f64 = proba.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "probabilities sum to {total}");
    }

    // permuting input columns must not change predictions
    let permuted = dir.path().join("permuted.csv");
    let mut permuted_text = String::new();
    for line in feature_text.lines() {
        let fields: Vec<&str> = line.split(',').collect();
        let reordered: Vec<&str> = fields.iter().rev().copied().collect();
        permuted_text.push_str(&reordered.join(","));
        permuted_text.push('\n');
    }
    std::fs::write(&permuted, permuted_text).unwrap();
    let preds2 = dir.path().join("preds2.csv");
    let out = imboost(&[
        "predict",
        "--model",
        path_str(&model),
        "--input",
        path_str(&permuted),
        "--output",
        path_str(&preds2),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(preds_text, std::fs::read_to_string(&preds2).unwrap());

    // evaluate prints a report and exits 0
    let out = imboost(&[
        "evaluate",
        "--model",
        path_str(&model),
        "--data",
        path_str(&data),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("g-mean"));
}

#[test]
fn predict_empty_input_yields_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let model = dir.path().join("model.json");
    let out = imboost(&[
        "generate", "--out", path_str(&data), "--n-samples", "100", "--n-features", "3",
        "--n-informative", "2", "--n-classes", "2", "--weights", "0.7,0.3", "--seed", "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = imboost(&[
        "train", "--data", path_str(&data), "--k", "2", "--variant", "samme",
        "--rounds", "3", "--seed", "1", "--model-out", path_str(&model),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "f0,f1,f2\n").unwrap();
    let preds = dir.path().join("preds.csv");
    let out = imboost(&[
        "predict", "--model", path_str(&model), "--input", path_str(&empty),
        "--output", path_str(&preds),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        std::fs::read_to_string(&preds).unwrap(),
        "predicted,proba_class_0,proba_class_1\n"
    );
}

#[test]
fn predict_schema_mismatch_names_columns() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let model = dir.path().join("model.json");
    let out = imboost(&[
        "generate", "--out", path_str(&data), "--n-samples", "100", "--n-features", "3",
        "--n-informative", "2", "--n-classes", "2", "--weights", "0.7,0.3", "--seed", "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = imboost(&[
        "train", "--data", path_str(&data), "--k", "2", "--variant", "samme",
        "--rounds", "3", "--seed", "1", "--model-out", path_str(&model),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "f0,f1,bogus\n0.1,0.2,0.3\n").unwrap();
    let preds = dir.path().join("preds.csv");
    let out = imboost(&[
        "predict", "--model", path_str(&model), "--input", path_str(&bad),
        "--output", path_str(&preds),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error:"), "stderr was: {stderr}");
    assert!(stderr.contains("f2"), "missing column not named: {stderr}");
    assert!(stderr.contains("bogus"), "extra column not named: {stderr}");
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("gen.conf");
    std::fs::write(
        &config,
        "n_samples=50\nn_features=3\nn_informative=2\nn_classes=2\nweights=0.7,0.3\nseed=1\n",
    )
    .unwrap();
    let data = dir.path().join("data.csv");
    let out = imboost(&[
        "generate", "--config", path_str(&config), "--out", path_str(&data),
        "--n-samples", "80",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(&data).unwrap().lines().count();
    assert_eq!(rows, 81); // header + 80 data rows, flag beats config's 50
}

#[test]
fn benchmark_writes_comparison_table() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("reports");
    let out = imboost(&[
        "benchmark",
        "--n-samples", "500", "--n-features", "4", "--n-informative", "3",
        "--k", "3", "--weights", "0.6,0.3,0.1", "--class-sep", "1.5",
        "--variants", "samme,samme_c2", "--costs", "0.3,0.6,1.0",
        "--rounds", "5", "--seed", "2", "--out-dir", path_str(&out_dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let comparison = std::fs::read_to_string(out_dir.join("comparison.csv")).unwrap();
    assert!(comparison.starts_with("metric,samme,samme_c2"));
    assert!(comparison.contains("gmean"));
    assert!(out_dir.join("manifest.txt").exists());
}
