//! Depth-one decision tree weak learner on a weighted sample distribution.
//!
//! The split criterion is the weighted misclassification error itself, the
//! same quantity the boosting loop consumes. Candidate thresholds sit at
//! midpoints between consecutive distinct sorted feature values, plus a
//! negative-infinity sentinel that yields a constant single-leaf rule.
//! Ties in error break toward (lower feature index, lower threshold); leaf
//! majority ties break toward the lower class index.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Axis-aligned depth-one decision rule: `x[feature_index] <= threshold`
/// goes left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature_index: usize,
    #[serde(with = "threshold_serde")]
    pub threshold: f64,
    pub left_class: usize,
    pub right_class: usize,
}

impl Stump {
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        if self.feature_index >= x.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_index + 1,
                got: x.len(),
            });
        }
        Ok(if x[self.feature_index] <= self.threshold {
            self.left_class
        } else {
            self.right_class
        })
    }
}

/// JSON has no literal for infinities; non-finite thresholds are stored as
/// strings ("-inf"/"inf"), finite ones as plain numbers.
pub mod threshold_serde {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_str("inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.as_str() {
                "-inf" => Ok(f64::NEG_INFINITY),
                "inf" => Ok(f64::INFINITY),
                other => Err(D::Error::custom(format!("bad threshold {other:?}"))),
            },
        }
    }
}

/// Reusable split-search state: per-feature argsort of the training rows,
/// built once and shared across boosting rounds.
pub struct SplitSearch<'a> {
    ds: &'a Dataset,
    sorted: Vec<Vec<u32>>, // per feature, row indices sorted by value
}

struct Candidate {
    error: f64, // un-normalized misclassified weight
    feature_index: usize,
    threshold: f64,
    left_class: usize,
    right_class: usize,
}

impl<'a> SplitSearch<'a> {
    pub fn new(ds: &'a Dataset) -> Self {
        let sorted = (0..ds.n_features())
            .map(|j| {
                let mut idx: Vec<u32> = (0..ds.n_rows() as u32).collect();
                idx.sort_by(|&a, &b| {
                    ds.value(a as usize, j).total_cmp(&ds.value(b as usize, j))
                });
                idx
            })
            .collect();
        SplitSearch { ds, sorted }
    }

    /// Fits the error-minimizing stump under the given sample weights.
    /// Weights need not be normalized; they must be non-negative and have
    /// length `n_rows`.
    pub fn fit(&self, w: &[f64]) -> Result<Stump> {
        let ds = self.ds;
        let n = ds.n_rows();
        let k = ds.k();
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: w.len(),
            });
        }

        let mut total = vec![0.0f64; k];
        for i in 0..n {
            total[ds.label(i)] += w[i];
        }
        let total_w: f64 = total.iter().sum();
        let majority = argmax(&total);

        // -inf sentinel: constant single-leaf rule
        let mut best = Candidate {
            error: total_w - total[majority],
            feature_index: 0,
            threshold: f64::NEG_INFINITY,
            left_class: majority,
            right_class: majority,
        };

        let mut left = vec![0.0f64; k];
        for (j, order) in self.sorted.iter().enumerate() {
            left.iter_mut().for_each(|v| *v = 0.0);
            for pos in 0..n {
                let i = order[pos] as usize;
                left[ds.label(i)] += w[i];
                if pos + 1 == n {
                    break; // everything on the left is the constant rule again
                }
                let v = ds.value(i, j);
                let v_next = ds.value(order[pos + 1] as usize, j);
                if v_next == v {
                    continue;
                }
                let lc = argmax(&left);
                let (rc, right_best) = {
                    let mut rc = 0;
                    let mut best_w = total[0] - left[0];
                    for c in 1..k {
                        let rw = total[c] - left[c];
                        if rw > best_w {
                            best_w = rw;
                            rc = c;
                        }
                    }
                    (rc, best_w)
                };
                let error = total_w - left[lc] - right_best;
                if error < best.error {
                    best = Candidate {
                        error,
                        feature_index: j,
                        threshold: v + (v_next - v) / 2.0,
                        left_class: lc,
                        right_class: rc,
                    };
                }
            }
        }

        Ok(Stump {
            feature_index: best.feature_index,
            threshold: best.threshold,
            left_class: best.left_class,
            right_class: best.right_class,
        })
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

/// One-shot convenience wrapper around [`SplitSearch`].
pub fn fit_stump(ds: &Dataset, w: &[f64]) -> Result<Stump> {
    SplitSearch::new(ds).fit(w)
}
