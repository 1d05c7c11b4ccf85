//! Benchmark harness: trains a set of variants on one dataset, evaluates
//! them on a held-out split, and writes comparable reports plus a run
//! manifest that reproduces every output byte-for-byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::boosting::{self, BoostConfig, CostVector, Ensemble, Variant};
use crate::costsearch::{self, GAConfig};
use crate::data::{self, Dataset};
use crate::datagen::{self, GenConfig};
use crate::derive_seed;
use crate::error::{Error, Result};
use crate::metrics;

#[derive(Debug, Clone)]
pub enum DataSource {
    Generate(GenConfig),
    Csv {
        path: PathBuf,
        label_column: String,
        k: usize,
    },
}

/// One variant to benchmark. Cost-sensitive variants without explicit
/// costs fall back to the GA search when it is enabled.
#[derive(Debug, Clone)]
pub struct VariantSpec {
    pub variant: Variant,
    pub costs: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: DataSource,
    pub train_fraction: f64,
    pub rounds: usize,
    pub smote_k: usize,
    pub seed: u64,
    pub variants: Vec<VariantSpec>,
    /// GA settings used to search costs for cost-sensitive variants that
    /// have none pinned.
    pub ga: Option<GAConfig>,
    pub out_dir: PathBuf,
}

#[derive(Debug)]
pub struct VariantOutcome {
    pub variant: Variant,
    pub costs: Option<Vec<f64>>,
    pub recalls: Vec<f64>,
    pub gmean: f64,
}

#[derive(Debug)]
pub struct BenchmarkReport {
    pub outcomes: Vec<VariantOutcome>,
    pub failures: Vec<(Variant, String)>,
    pub files: Vec<PathBuf>,
}

pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<BenchmarkReport> {
    if cfg.variants.is_empty() {
        return Err(Error::InvalidConfig("no variants selected".into()));
    }
    std::fs::create_dir_all(&cfg.out_dir)?;

    let dataset = match &cfg.source {
        DataSource::Generate(gen) => datagen::generate(gen)?,
        DataSource::Csv {
            path,
            label_column,
            k,
        } => data::load_csv(path, label_column, *k)?,
    };
    let split = data::stratified_split(&dataset, cfg.train_fraction, derive_seed(cfg.seed, &[1]))?;
    let (train, test) = (&split.train, &split.test);

    let mut outcomes: Vec<VariantOutcome> = Vec::new();
    let mut failures = Vec::new();
    let mut files = Vec::new();
    let mut searched_costs: Option<Vec<f64>> = None;

    for spec in &cfg.variants {
        match run_variant(cfg, spec, train, test, &mut searched_costs) {
            Ok((outcome, ensemble)) => {
                files.extend(write_variant_files(cfg, &outcome, &ensemble, test)?);
                outcomes.push(outcome);
            }
            Err(e) => failures.push((spec.variant, e.to_string())),
        }
    }

    files.push(write_comparison(cfg, &outcomes)?);
    files.push(write_manifest(cfg, &outcomes, &failures)?);
    Ok(BenchmarkReport {
        outcomes,
        failures,
        files,
    })
}

fn run_variant(
    cfg: &ExperimentConfig,
    spec: &VariantSpec,
    train: &Dataset,
    test: &Dataset,
    searched_costs: &mut Option<Vec<f64>>,
) -> Result<(VariantOutcome, Ensemble)> {
    let needs_costs = matches!(spec.variant, Variant::AdaC2 | Variant::SammeC2);
    let costs: Option<Vec<f64>> = if let Some(c) = &spec.costs {
        Some(c.clone())
    } else if needs_costs {
        match (&cfg.ga, &searched_costs) {
            (_, Some(found)) => Some(found.clone()),
            (Some(ga), None) => {
                let result = costsearch::ga_search(train, ga)?;
                *searched_costs = Some(result.best_costs.clone());
                Some(result.best_costs)
            }
            (None, None) => {
                return Err(Error::InvalidConfig(format!(
                    "variant {} needs costs: pin them or enable the GA search",
                    spec.variant
                )))
            }
        }
    } else {
        None
    };

    let mut boost_cfg = BoostConfig::new(spec.variant, cfg.rounds, derive_seed(cfg.seed, &[2]));
    boost_cfg.smote_k = cfg.smote_k;
    if let Some(c) = &costs {
        boost_cfg = boost_cfg.with_costs(CostVector::new(c.clone())?);
    }
    let ensemble = boosting::fit(train, &boost_cfg)?;
    let predicted = ensemble.predict_batch(test)?;
    let cm = metrics::confusion(test.labels(), &predicted, test.k())?;
    let stats = metrics::per_class_stats(&cm);
    let g = metrics::gmean(&stats.recall);
    Ok((
        VariantOutcome {
            variant: spec.variant,
            costs,
            recalls: stats.recall,
            gmean: g,
        },
        ensemble,
    ))
}

fn write_variant_files(
    cfg: &ExperimentConfig,
    outcome: &VariantOutcome,
    ensemble: &Ensemble,
    test: &Dataset,
) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let predicted = ensemble.predict_batch(test)?;
    let cm = metrics::confusion(test.labels(), &predicted, test.k())?;

    let confusion_path = cfg.out_dir.join(format!("confusion_{}.csv", outcome.variant));
    let mut text = String::from("predicted\\actual");
    for a in 0..cm.k() {
        write!(text, ",class_{a}").unwrap();
    }
    text.push_str(",row_total\n");
    for p in 0..cm.k() {
        write!(text, "class_{p}").unwrap();
        for a in 0..cm.k() {
            write!(text, ",{}", cm.cell(p, a)).unwrap();
        }
        writeln!(text, ",{}", cm.row_total(p)).unwrap();
    }
    text.push_str("col_total");
    for a in 0..cm.k() {
        write!(text, ",{}", cm.col_total(a)).unwrap();
    }
    writeln!(text, ",{}", cm.total()).unwrap();
    std::fs::write(&confusion_path, text)?;
    files.push(confusion_path);

    let stats_path = cfg.out_dir.join(format!("stats_{}.csv", outcome.variant));
    std::fs::write(&stats_path, metrics::stats_csv(&cm))?;
    files.push(stats_path);

    let importance_path = cfg
        .out_dir
        .join(format!("feature_importance_{}.csv", outcome.variant));
    let importance = ensemble.feature_importance()?;
    let mut text = String::from("feature,importance\n");
    for (name, value) in ensemble.feature_names().iter().zip(importance.iter()) {
        writeln!(text, "{name},{value}").unwrap();
    }
    std::fs::write(&importance_path, text)?;
    files.push(importance_path);

    let model_path = cfg.out_dir.join(format!("model_{}.json", outcome.variant));
    ensemble.save(&model_path)?;
    files.push(model_path);
    Ok(files)
}

/// Comparison table: one recall row per class plus a G-mean row, one
/// column per variant.
fn write_comparison(cfg: &ExperimentConfig, outcomes: &[VariantOutcome]) -> Result<PathBuf> {
    let path = cfg.out_dir.join("comparison.csv");
    let mut text = String::from("metric");
    for o in outcomes {
        write!(text, ",{}", o.variant).unwrap();
    }
    text.push('\n');
    let k = outcomes.first().map(|o| o.recalls.len()).unwrap_or(0);
    for class in 0..k {
        write!(text, "recall_class_{class}").unwrap();
        for o in outcomes {
            write!(text, ",{}", o.recalls[class]).unwrap();
        }
        text.push('\n');
    }
    text.push_str("gmean");
    for o in outcomes {
        write!(text, ",{}", o.gmean).unwrap();
    }
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

fn write_manifest(
    cfg: &ExperimentConfig,
    outcomes: &[VariantOutcome],
    failures: &[(Variant, String)],
) -> Result<PathBuf> {
    let path = cfg.out_dir.join("manifest.txt");
    let mut text = String::new();
    writeln!(text, "tool_version={}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(text, "seed={}", cfg.seed).unwrap();
    writeln!(text, "train_fraction={}", cfg.train_fraction).unwrap();
    writeln!(text, "rounds={}", cfg.rounds).unwrap();
    writeln!(text, "smote_k={}", cfg.smote_k).unwrap();
    match &cfg.source {
        DataSource::Generate(g) => {
            writeln!(text, "source=generate").unwrap();
            writeln!(text, "gen.n_samples={}", g.n_samples).unwrap();
            writeln!(text, "gen.n_features={}", g.n_features).unwrap();
            writeln!(text, "gen.n_informative={}", g.n_informative).unwrap();
            writeln!(text, "gen.n_classes={}", g.n_classes).unwrap();
            writeln!(text, "gen.clusters_per_class={}", g.clusters_per_class).unwrap();
            writeln!(text, "gen.class_sep={}", g.class_sep).unwrap();
            writeln!(text, "gen.weights={}", join_floats(&g.weights)).unwrap();
            writeln!(text, "gen.label_noise={}", g.label_noise).unwrap();
            writeln!(text, "gen.seed={}", g.seed).unwrap();
        }
        DataSource::Csv {
            path: p,
            label_column,
            k,
        } => {
            writeln!(text, "source=csv").unwrap();
            writeln!(text, "csv.path={}", p.display()).unwrap();
            writeln!(text, "csv.label_column={label_column}").unwrap();
            writeln!(text, "csv.k={k}").unwrap();
        }
    }
    if let Some(ga) = &cfg.ga {
        writeln!(text, "ga.population_size={}", ga.population_size).unwrap();
        writeln!(text, "ga.generations={}", ga.generations).unwrap();
        writeln!(text, "ga.tournament_size={}", ga.tournament_size).unwrap();
        writeln!(text, "ga.mutation_sigma={}", ga.mutation_sigma).unwrap();
        writeln!(text, "ga.elitism_count={}", ga.elitism_count).unwrap();
        writeln!(text, "ga.fitness_rounds={}", ga.fitness_rounds).unwrap();
        writeln!(text, "ga.validation_fraction={}", ga.validation_fraction).unwrap();
        writeln!(text, "ga.seed={}", ga.seed).unwrap();
    }
    for o in outcomes {
        if let Some(c) = &o.costs {
            writeln!(text, "costs.{}={}", o.variant, join_floats(c)).unwrap();
        }
    }
    for (variant, message) in failures {
        writeln!(text, "failure.{variant}={message}").unwrap();
    }
    std::fs::write(&path, text)?;
    Ok(path)
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Applies a saved model to a feature CSV, matching columns by name, and
/// writes predicted class plus one probability column per class.
pub fn predict_csv(
    model_path: impl AsRef<Path>,
    input_path: impl AsRef<Path>,
    output_path: impl AsRef<Path>,
) -> Result<()> {
    let ensemble = Ensemble::load(model_path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(input_path.as_ref())?;
    let headers: Vec<String> = reader.headers()?.iter().map(|s| s.to_string()).collect();

    let expected = ensemble.feature_names();
    let missing: Vec<String> = expected
        .iter()
        .filter(|n| !headers.contains(n))
        .cloned()
        .collect();
    let extra: Vec<String> = headers
        .iter()
        .filter(|h| !expected.contains(h))
        .cloned()
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::SchemaMismatch { missing, extra });
    }
    // column j of the input goes to feature position mapping[j]
    let mapping: Vec<usize> = headers
        .iter()
        .map(|h| expected.iter().position(|n| n == h).unwrap())
        .collect();

    let mut writer = csv::Writer::from_path(output_path.as_ref())?;
    let mut header = vec!["predicted".to_string()];
    header.extend((0..ensemble.k()).map(|c| format!("proba_class_{c}")));
    writer.write_record(&header)?;

    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let mut x = vec![0.0; expected.len()];
        for (j, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                return Err(Error::MissingValue {
                    row: i,
                    column: headers[j].clone(),
                });
            }
            x[mapping[j]] = cell.parse().map_err(|_| Error::ParseCell {
                row: i,
                column: headers[j].clone(),
                value: cell.to_string(),
            })?;
        }
        let predicted = ensemble.predict(&x)?;
        let proba = ensemble.predict_proba(&x)?;
        let mut row = vec![predicted.to_string()];
        row.extend(proba.iter().map(|p| p.to_string()));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk_config(out_dir: PathBuf) -> ExperimentConfig {
        ExperimentConfig {
            source: DataSource::Generate(GenConfig {
                n_samples: 600,
                n_features: 5,
                n_informative: 3,
                n_classes: 3,
                clusters_per_class: 1,
                class_sep: 1.5,
                weights: vec![0.7, 0.2, 0.1],
                label_noise: 0.0,
                seed: 4,
            }),
            train_fraction: 0.75,
            rounds: 15,
            smote_k: 5,
            seed: 9,
            variants: vec![
                VariantSpec {
                    variant: Variant::Samme,
                    costs: None,
                },
                VariantSpec {
                    variant: Variant::SammeC2,
                    costs: Some(vec![0.5, 0.5, 0.5]),
                },
            ],
            ga: None,
            out_dir,
        }
    }

    #[test]
    fn rerun_is_byte_identical_and_constant_costs_match_samme() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let report_a = run_benchmark(&desk_config(dir_a.path().to_path_buf())).unwrap();
        let report_b = run_benchmark(&desk_config(dir_b.path().to_path_buf())).unwrap();
        assert!(report_a.failures.is_empty());

        for (fa, fb) in report_a.files.iter().zip(report_b.files.iter()) {
            assert_eq!(fa.file_name(), fb.file_name());
            assert_eq!(
                std::fs::read(fa).unwrap(),
                std::fs::read(fb).unwrap(),
                "{:?} differs between reruns",
                fa.file_name()
            );
        }

        // constant 0.5 costs: samme_c2 row equals samme row exactly
        let a = &report_a.outcomes[0];
        let b = &report_a.outcomes[1];
        assert_eq!(a.recalls, b.recalls);
        assert_eq!(a.gmean, b.gmean);
    }

    #[test]
    fn comparison_gmean_column_is_consistent_with_recalls() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_benchmark(&desk_config(dir.path().to_path_buf())).unwrap();
        for o in &report.outcomes {
            assert_eq!(o.gmean, metrics::gmean(&o.recalls));
        }
    }

    #[test]
    fn failing_variant_is_recorded_and_others_proceed() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = desk_config(dir.path().to_path_buf());
        // ada_c2 on a 3-class problem fails; samme still runs
        cfg.variants.push(VariantSpec {
            variant: Variant::AdaC2,
            costs: Some(vec![0.5, 0.5, 0.5]),
        });
        let report = run_benchmark(&cfg).unwrap();
        assert_eq!(report.outcomes.len(), 2);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].0, Variant::AdaC2);
    }
}
