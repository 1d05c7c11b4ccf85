//! Dataset representation, CSV ingestion and stratified splitting.
//!
//! A [`Dataset`] is immutable after construction: a dense row-major feature
//! matrix, one integer class label per row in `0..k`, and named feature
//! columns. Class labels are 0-based internally; reports may print them
//! however they like.

use std::collections::HashSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>, // row-major, n_rows x n_features
    n_rows: usize,
    n_features: usize,
    labels: Vec<usize>,
    k: usize,
    feature_names: Vec<String>,
}

/// Per-class sample counts and proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDistribution {
    pub counts: Vec<usize>,
    pub proportions: Vec<f64>,
}

/// Result of a stratified split. Warnings record singleton classes that
/// could not be represented on both sides.
#[derive(Debug)]
pub struct SplitResult {
    pub train: Dataset,
    pub test: Dataset,
    pub warnings: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from row vectors, validating every invariant.
    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        k: usize,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if rows.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: labels.len(),
            });
        }
        let d = feature_names.len();
        if d == 0 {
            return Err(Error::InvalidConfig("need at least one feature".into()));
        }
        let mut seen = HashSet::new();
        for name in &feature_names {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateColumn { name: name.clone() });
            }
        }
        let mut features = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            if row.iter().any(|v| v.is_nan()) {
                return Err(Error::MissingValue {
                    row: i,
                    column: "<nan>".into(),
                });
            }
            features.extend_from_slice(row);
        }
        for (i, &y) in labels.iter().enumerate() {
            if y >= k {
                return Err(Error::LabelOutOfRange {
                    row: i,
                    value: y as i64,
                    k,
                });
            }
        }
        Ok(Dataset {
            features,
            n_rows: rows.len(),
            n_features: d,
            labels,
            k,
            feature_names,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.features[i * self.n_features + j]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Rows selected by index, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let rows = indices.iter().map(|&i| self.row(i).to_vec()).collect();
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Dataset::from_rows(rows, labels, self.k, self.feature_names.clone())
    }

    /// Appends extra rows, returning a new dataset.
    pub fn extend_with(&self, rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        let mut all_rows: Vec<Vec<f64>> = (0..self.n_rows).map(|i| self.row(i).to_vec()).collect();
        let mut all_labels = self.labels.clone();
        all_rows.extend(rows);
        all_labels.extend(labels);
        Dataset::from_rows(all_rows, all_labels, self.k, self.feature_names.clone())
    }
}

pub fn class_distribution(ds: &Dataset) -> ClassDistribution {
    let mut counts = vec![0usize; ds.k()];
    for &y in ds.labels() {
        counts[y] += 1;
    }
    let n = ds.n_rows() as f64;
    let proportions = counts.iter().map(|&c| c as f64 / n).collect();
    ClassDistribution {
        counts,
        proportions,
    }
}

/// Loads a CSV file with a header row. All non-label columns must be
/// numeric; rows with missing entries are rejected, not imputed.
pub fn load_csv(path: impl AsRef<Path>, label_column: &str, k: usize) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path.as_ref())?;
    let headers: Vec<String> = reader.headers()?.iter().map(|s| s.to_string()).collect();

    let mut seen = HashSet::new();
    for name in &headers {
        if !seen.insert(name.clone()) {
            return Err(Error::DuplicateColumn { name: name.clone() });
        }
    }
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::MissingColumn {
            name: label_column.to_string(),
        })?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let mut row = Vec::with_capacity(feature_names.len());
        for (j, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                return Err(Error::MissingValue {
                    row: i,
                    column: headers[j].clone(),
                });
            }
            if j == label_idx {
                let value: i64 = cell.parse().map_err(|_| Error::ParseCell {
                    row: i,
                    column: headers[j].clone(),
                    value: cell.to_string(),
                })?;
                if value < 0 || value as usize >= k {
                    return Err(Error::LabelOutOfRange { row: i, value, k });
                }
                labels.push(value as usize);
            } else {
                let value: f64 = cell.parse().map_err(|_| Error::ParseCell {
                    row: i,
                    column: headers[j].clone(),
                    value: cell.to_string(),
                })?;
                if value.is_nan() {
                    return Err(Error::MissingValue {
                        row: i,
                        column: headers[j].clone(),
                    });
                }
                row.push(value);
            }
        }
        rows.push(row);
    }
    Dataset::from_rows(rows, labels, k, feature_names)
}

/// Writes the dataset as CSV with the label in the named column (appended
/// last). `load_csv` on the output reproduces features and labels.
pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>, label_column: &str) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    let mut header: Vec<String> = ds.feature_names().to_vec();
    header.push(label_column.to_string());
    writer.write_record(&header)?;
    for i in 0..ds.n_rows() {
        let mut record: Vec<String> = ds.row(i).iter().map(|v| format!("{v}")).collect();
        record.push(ds.label(i).to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Stratified train/test split.
///
/// Per-class train counts are round-half-up of `train_fraction * count`,
/// clamped so that classes with two or more members keep at least one
/// member on each side. A singleton class goes to train with a warning.
pub fn stratified_split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<SplitResult> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train_fraction must be in (0,1), got {train_fraction}"
        )));
    }
    let dist = class_distribution(ds);
    if dist.counts.contains(&0) {
        return Err(Error::InvalidConfig(
            "every class must have at least one member to split".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    let mut warnings = Vec::new();
    for class in 0..ds.k() {
        let mut members: Vec<usize> = (0..ds.n_rows()).filter(|&i| ds.label(i) == class).collect();
        members.shuffle(&mut rng);
        let count = members.len();
        let n_train = if count == 1 {
            warnings.push(format!(
                "class {class} has a single member; assigned to train, test side is empty for it"
            ));
            1
        } else {
            let rounded = (train_fraction * count as f64 + 0.5).floor() as usize;
            rounded.clamp(1, count - 1)
        };
        train_idx.extend_from_slice(&members[..n_train]);
        test_idx.extend_from_slice(&members[n_train..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    let train = ds.subset(&train_idx)?;
    let test = if test_idx.is_empty() {
        return Err(Error::InvalidConfig(
            "split left the test side empty".into(),
        ));
    } else {
        ds.subset(&test_idx)?
    };
    Ok(SplitResult {
        train,
        test,
        warnings,
    })
}
