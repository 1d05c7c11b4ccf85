//! Imbalance-aware evaluation: confusion matrix, per-class recall,
//! precision and F1, macro aggregates, and the G-mean.
//!
//! Confusion matrix orientation follows the report convention used
//! throughout the crate: rows are predicted classes, columns are actual
//! classes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    cells: Vec<Vec<usize>>, // cells[predicted][actual]
    k: usize,
}

impl ConfusionMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cell(&self, predicted: usize, actual: usize) -> usize {
        self.cells[predicted][actual]
    }

    /// Total predicted as `class` (row sum).
    pub fn row_total(&self, class: usize) -> usize {
        self.cells[class].iter().sum()
    }

    /// Total actually in `class` (column sum).
    pub fn col_total(&self, class: usize) -> usize {
        self.cells.iter().map(|row| row[class]).sum()
    }

    pub fn total(&self) -> usize {
        self.cells.iter().map(|row| row.iter().sum::<usize>()).sum()
    }
}

/// Per-class statistics. A zero-denominator statistic is reported as 0.0
/// with its `defined` flag cleared; aggregates count it as 0 (see
/// [`MacroStats::has_undefined`]).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub recall: Vec<f64>,
    pub precision: Vec<f64>,
    pub f1: Vec<f64>,
    pub recall_defined: Vec<bool>,
    pub precision_defined: Vec<bool>,
    pub f1_defined: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MacroStats {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// True when some per-class statistic was undefined and entered the
    /// averages as 0.
    pub has_undefined: bool,
}

pub fn confusion(actual: &[usize], predicted: &[usize], k: usize) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            got: predicted.len(),
        });
    }
    let mut cells = vec![vec![0usize; k]; k];
    for (i, (&a, &p)) in actual.iter().zip(predicted.iter()).enumerate() {
        if a >= k {
            return Err(Error::LabelOutOfRange {
                row: i,
                value: a as i64,
                k,
            });
        }
        if p >= k {
            return Err(Error::LabelOutOfRange {
                row: i,
                value: p as i64,
                k,
            });
        }
        cells[p][a] += 1;
    }
    Ok(ConfusionMatrix { cells, k })
}

pub fn per_class_stats(cm: &ConfusionMatrix) -> ClassStats {
    let k = cm.k();
    let mut stats = ClassStats {
        recall: vec![0.0; k],
        precision: vec![0.0; k],
        f1: vec![0.0; k],
        recall_defined: vec![true; k],
        precision_defined: vec![true; k],
        f1_defined: vec![true; k],
    };
    for i in 0..k {
        let diag = cm.cell(i, i) as f64;
        let col = cm.col_total(i);
        let row = cm.row_total(i);
        if col == 0 {
            stats.recall_defined[i] = false;
        } else {
            stats.recall[i] = diag / col as f64;
        }
        if row == 0 {
            stats.precision_defined[i] = false;
        } else {
            stats.precision[i] = diag / row as f64;
        }
        let (r, p) = (stats.recall[i], stats.precision[i]);
        if !stats.recall_defined[i] || !stats.precision_defined[i] || r + p == 0.0 {
            stats.f1_defined[i] = stats.recall_defined[i] && stats.precision_defined[i];
            stats.f1[i] = 0.0;
        } else {
            stats.f1[i] = 2.0 * r * p / (r + p);
        }
    }
    stats
}

/// Geometric mean of per-class recalls; exactly 0 if any recall is 0.
pub fn gmean(recalls: &[f64]) -> f64 {
    if recalls.contains(&0.0) {
        return 0.0;
    }
    let log_sum: f64 = recalls.iter().map(|&r| r.ln()).sum();
    (log_sum / recalls.len() as f64).exp()
}

/// Macro precision/recall are arithmetic means; macro F1 is the harmonic
/// combination of the two macro values.
pub fn macro_stats(cs: &ClassStats) -> MacroStats {
    let k = cs.recall.len() as f64;
    let precision = cs.precision.iter().sum::<f64>() / k;
    let recall = cs.recall.iter().sum::<f64>() / k;
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let has_undefined = cs
        .recall_defined
        .iter()
        .chain(cs.precision_defined.iter())
        .any(|&d| !d);
    MacroStats {
        precision,
        recall,
        f1,
        has_undefined,
    }
}

/// Human-readable evaluation report.
pub fn format_report(cm: &ConfusionMatrix, class_names: Option<&[String]>) -> String {
    let k = cm.k();
    let names: Vec<String> = match class_names {
        Some(n) => n.to_vec(),
        None => (0..k).map(|c| format!("class_{c}")).collect(),
    };
    let stats = per_class_stats(cm);
    let macros = macro_stats(&stats);
    let g = gmean(&stats.recall);

    let mut out = String::new();
    out.push_str("confusion matrix (rows = predicted, columns = actual)\n");
    out.push_str(&format!("{:>12}", ""));
    for name in &names {
        out.push_str(&format!("{name:>12}"));
    }
    out.push_str(&format!("{:>12}\n", "row_total"));
    for (p, name) in names.iter().enumerate() {
        out.push_str(&format!("{name:>12}"));
        for a in 0..k {
            out.push_str(&format!("{:>12}", cm.cell(p, a)));
        }
        out.push_str(&format!("{:>12}\n", cm.row_total(p)));
    }
    out.push_str(&format!("{:>12}", "col_total"));
    for a in 0..k {
        out.push_str(&format!("{:>12}", cm.col_total(a)));
    }
    out.push_str(&format!("{:>12}\n\n", cm.total()));

    out.push_str(&format!(
        "{:>12}{:>12}{:>12}{:>12}\n",
        "class", "recall", "precision", "f1"
    ));
    for (c, name) in names.iter().enumerate() {
        out.push_str(&format!(
            "{:>12}{:>12.4}{:>12.4}{:>12.4}{}\n",
            name,
            stats.recall[c],
            stats.precision[c],
            stats.f1[c],
            if stats.recall_defined[c] && stats.precision_defined[c] {
                ""
            } else {
                "  (undefined cells counted as 0)"
            }
        ));
    }
    out.push_str(&format!(
        "\nmacro precision {:.4}\nmacro recall    {:.4}\nmacro f1        {:.4}\ng-mean          {:.4}\n",
        macros.precision, macros.recall, macros.f1, g
    ));
    if macros.has_undefined {
        out.push_str("warning: some statistics had zero denominators and were counted as 0\n");
    }
    out
}

/// CSV report: one row per class plus an aggregate row.
pub fn stats_csv(cm: &ConfusionMatrix) -> String {
    let stats = per_class_stats(cm);
    let macros = macro_stats(&stats);
    let g = gmean(&stats.recall);
    let mut out = String::from("class,recall,precision,f1,defined\n");
    for c in 0..cm.k() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            c,
            stats.recall[c],
            stats.precision[c],
            stats.f1[c],
            stats.recall_defined[c] && stats.precision_defined[c]
        ));
    }
    out.push_str(&format!(
        "macro,{},{},{},{}\n",
        macros.recall, macros.precision, macros.f1, !macros.has_undefined
    ));
    out.push_str(&format!("gmean,{g},,,\n"));
    out
}
