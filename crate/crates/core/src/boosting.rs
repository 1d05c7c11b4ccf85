//! Boosting engine: SAMME, Ada.C2 and SAMME.C2 training loops, the
//! resampling-composed variants (SAMME+SMOTE, RUSBoost, SMOTEBoost),
//! prediction, vote probabilities, feature importance and persistence.
//!
//! All variants share one loop shape: fit a weighted stump, compute the
//! weighted error (costs never enter the error), compute the learner
//! weight, stop if it is not positive, and renormalize the sample
//! distribution. The cost-sensitive variants multiply the update
//! numerator by a per-sample cost; resampling variants swap the dataset
//! the stump sees for that round, while the error and the distribution
//! stay defined over the original samples.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{class_distribution, Dataset};
use crate::derive_seed;
use crate::error::{Error, Result};
use crate::resampling;
use crate::stump::{SplitSearch, Stump};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Samme,
    AdaC2,
    SammeC2,
    SammeSmote,
    RusBoost,
    SmoteBoost,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Samme,
        Variant::AdaC2,
        Variant::SammeC2,
        Variant::SammeSmote,
        Variant::RusBoost,
        Variant::SmoteBoost,
    ];

    fn needs_costs(self) -> bool {
        matches!(self, Variant::AdaC2 | Variant::SammeC2)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Samme => "samme",
            Variant::AdaC2 => "ada_c2",
            Variant::SammeC2 => "samme_c2",
            Variant::SammeSmote => "samme_smote",
            Variant::RusBoost => "rusboost",
            Variant::SmoteBoost => "smoteboost",
        };
        f.write_str(s)
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "samme" => Ok(Variant::Samme),
            "ada_c2" | "adac2" => Ok(Variant::AdaC2),
            "samme_c2" | "sammec2" => Ok(Variant::SammeC2),
            "samme_smote" => Ok(Variant::SammeSmote),
            "rusboost" => Ok(Variant::RusBoost),
            "smoteboost" => Ok(Variant::SmoteBoost),
            other => Err(Error::InvalidConfig(format!("unknown variant {other:?}"))),
        }
    }
}

/// Per-class misclassification costs in (0,1], expanded to per-sample
/// costs through the label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostVector {
    per_class: Vec<f64>,
}

impl CostVector {
    pub fn new(per_class: Vec<f64>) -> Result<Self> {
        if per_class.is_empty() {
            return Err(Error::InvalidConfig("cost vector is empty".into()));
        }
        for (class, &c) in per_class.iter().enumerate() {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "cost for class {class} is {c}, must be in (0,1]"
                )));
            }
        }
        Ok(CostVector { per_class })
    }

    pub fn uniform(k: usize) -> Self {
        CostVector {
            per_class: vec![1.0; k],
        }
    }

    pub fn per_class(&self) -> &[f64] {
        &self.per_class
    }

    pub fn per_sample(&self, labels: &[usize]) -> Vec<f64> {
        labels.iter().map(|&y| self.per_class[y]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct BoostConfig {
    pub variant: Variant,
    /// Maximum number of boosting rounds (T).
    pub rounds: usize,
    /// Required for the cost-sensitive variants.
    pub costs: Option<CostVector>,
    /// SMOTE neighbor count for the SMOTE-composed variants.
    pub smote_k: usize,
    /// Undersampling target as a multiple of the minority count (RUSBoost).
    pub undersample_ratio: f64,
    pub seed: u64,
    /// Weighted error is clamped to `[eps_clamp, 1 - eps_clamp]` before
    /// the learner-weight formula.
    pub eps_clamp: f64,
    /// Coefficient in front of `log((1-eps)/eps)`; 0.5 by default, 1.0
    /// recovers the original SAMME weighting for comparison.
    pub alpha_coeff: f64,
}

impl BoostConfig {
    pub fn new(variant: Variant, rounds: usize, seed: u64) -> Self {
        BoostConfig {
            variant,
            rounds,
            costs: None,
            smote_k: 5,
            undersample_ratio: 1.0,
            seed,
            eps_clamp: 1e-10,
            alpha_coeff: 0.5,
        }
    }

    pub fn with_costs(mut self, costs: CostVector) -> Self {
        self.costs = Some(costs);
        self
    }
}

/// One stored round of the training log.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundLog {
    pub round: usize,
    pub error: f64,
    pub alpha: f64,
    /// Sum of the sample distribution after the round's update.
    pub weight_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember {
    pub stump: Stump,
    pub alpha: f64,
}

/// The final classifier: an alpha-weighted vote of stumps.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<EnsembleMember>,
    k: usize,
    feature_names: Vec<String>,
    variant: Variant,
    log: Vec<RoundLog>,
}

impl Ensemble {
    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn log(&self) -> &[RoundLog] {
        &self.log
    }

    fn votes(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.members.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        if x.len() != self.feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_names.len(),
                got: x.len(),
            });
        }
        let mut votes = vec![0.0; self.k];
        for m in &self.members {
            votes[m.stump.predict(x)?] += m.alpha;
        }
        Ok(votes)
    }

    /// Class maximizing the alpha-weighted vote; ties break toward the
    /// lowest class index.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        let votes = self.votes(x)?;
        let mut best = 0;
        for c in 1..self.k {
            if votes[c] > votes[best] {
                best = c;
            }
        }
        Ok(best)
    }

    /// Vote shares, normalized to sum 1.
    pub fn predict_proba(&self, x: &[f64]) -> Result<Vec<f64>> {
        let votes = self.votes(x)?;
        let sum: f64 = votes.iter().sum();
        Ok(votes.iter().map(|&v| v / sum).collect())
    }

    pub fn predict_batch(&self, ds: &Dataset) -> Result<Vec<usize>> {
        (0..ds.n_rows()).map(|i| self.predict(ds.row(i))).collect()
    }

    /// Per-feature share of total alpha, summing to 1.
    pub fn feature_importance(&self) -> Result<Vec<f64>> {
        if self.members.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let mut importance = vec![0.0; self.feature_names.len()];
        for m in &self.members {
            importance[m.stump.feature_index] += m.alpha;
        }
        let total: f64 = importance.iter().sum();
        importance.iter_mut().for_each(|v| *v /= total);
        Ok(importance)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            variant: self.variant,
            k: self.k,
            feature_names: self.feature_names.clone(),
            members: self
                .members
                .iter()
                .map(|m| MemberRecord {
                    feature_index: m.stump.feature_index,
                    threshold: m.stump.threshold,
                    left_class: m.stump.left_class,
                    right_class: m.stump.right_class,
                    alpha: m.alpha,
                })
                .collect(),
        };
        let json = serde_json::to_string_pretty(&file)
            .map_err(|e| Error::ModelSchema(e.to_string()))?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Ensemble> {
        let text = std::fs::read_to_string(path)?;
        // version gate before full schema validation
        let probe: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Error::ModelSchema(e.to_string()))?;
        let found = probe
            .get("format_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::ModelSchema("missing format_version".into()))?
            as u32;
        if found != MODEL_FORMAT_VERSION {
            return Err(Error::ModelVersion {
                found,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        let file: ModelFile =
            serde_json::from_str(&text).map_err(|e| Error::ModelSchema(e.to_string()))?;
        let d = file.feature_names.len();
        let mut members = Vec::with_capacity(file.members.len());
        for m in file.members {
            if m.feature_index >= d || m.left_class >= file.k || m.right_class >= file.k {
                return Err(Error::ModelSchema(
                    "member references an out-of-range feature or class".into(),
                ));
            }
            if m.alpha.is_nan() || m.alpha <= 0.0 {
                return Err(Error::ModelSchema(format!(
                    "member alpha {} must be positive",
                    m.alpha
                )));
            }
            members.push(EnsembleMember {
                stump: Stump {
                    feature_index: m.feature_index,
                    threshold: m.threshold,
                    left_class: m.left_class,
                    right_class: m.right_class,
                },
                alpha: m.alpha,
            });
        }
        Ok(Ensemble {
            members,
            k: file.k,
            feature_names: file.feature_names,
            variant: file.variant,
            log: Vec::new(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    variant: Variant,
    k: usize,
    feature_names: Vec<String>,
    members: Vec<MemberRecord>,
}

#[derive(Serialize, Deserialize)]
struct MemberRecord {
    feature_index: usize,
    #[serde(with = "threshold_json")]
    threshold: f64,
    left_class: usize,
    right_class: usize,
    alpha: f64,
}

mod threshold_json {
    pub use crate::stump::threshold_serde::{deserialize, serialize};
}

/// Learner weight `coeff * ln((1-eps)/eps) + ln(K-1)` with the error
/// clamped away from 0 and 1 first.
pub fn alpha(eps: f64, k: usize, coeff: f64, eps_clamp: f64) -> f64 {
    let eps = eps.clamp(eps_clamp, 1.0 - eps_clamp);
    coeff * ((1.0 - eps) / eps).ln() + ((k - 1) as f64).ln()
}

/// Weighted misclassification error of a stump; costs are never applied
/// here.
pub fn weighted_error(ds: &Dataset, w: &[f64], s: &Stump) -> Result<f64> {
    if w.len() != ds.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: ds.n_rows(),
            got: w.len(),
        });
    }
    let mut wrong = 0.0;
    let mut total = 0.0;
    for (i, &wi) in w.iter().enumerate() {
        total += wi;
        if s.predict(ds.row(i))? != ds.label(i) {
            wrong += wi;
        }
    }
    Ok(wrong / total)
}

/// One distribution update: `numerator_i = cost_i * w_i * exp(-alpha)` on
/// correct samples, `cost_i * w_i` on errors, renormalized to sum 1.
pub fn update_weights(
    w: &[f64],
    costs: &[f64],
    alpha: f64,
    correct: &[bool],
) -> Result<Vec<f64>> {
    if costs.len() != w.len() || correct.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            got: costs.len().min(correct.len()),
        });
    }
    let shrink = (-alpha).exp();
    let mut next: Vec<f64> = w
        .iter()
        .zip(costs.iter())
        .zip(correct.iter())
        .map(|((&wi, &ci), &ok)| if ok { ci * wi * shrink } else { ci * wi })
        .collect();
    let sum = kahan_sum(&next);
    if sum.is_nan() || sum <= 0.0 {
        return Err(Error::DegenerateWeights);
    }
    next.iter_mut().for_each(|v| *v /= sum);
    Ok(next)
}

/// Compensated summation; naive summation drifts past 1e-12 on
/// 100,000-sample weight vectors.
fn kahan_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for &v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Trains an ensemble under the selected variant.
pub fn fit(ds: &Dataset, cfg: &BoostConfig) -> Result<Ensemble> {
    if ds.n_rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if ds.k() < 2 {
        return Err(Error::InvalidConfig("need at least 2 classes".into()));
    }
    if cfg.rounds == 0 {
        return Err(Error::InvalidConfig("rounds must be >= 1".into()));
    }
    if cfg.variant == Variant::AdaC2 && ds.k() != 2 {
        return Err(Error::InvalidConfig(
            "ada_c2 is a binary method; use samme_c2 for K > 2".into(),
        ));
    }
    let costs = match (&cfg.costs, cfg.variant.needs_costs()) {
        (Some(c), _) if c.per_class().len() != ds.k() => {
            return Err(Error::DimensionMismatch {
                expected: ds.k(),
                got: c.per_class().len(),
            })
        }
        (Some(c), true) => Some(c.clone()),
        (None, true) => {
            return Err(Error::InvalidConfig(format!(
                "variant {} requires a cost vector",
                cfg.variant
            )))
        }
        // costs are ignored by the cost-free variants
        (_, false) => None,
    };

    // SAMME with SMOTE: augment once up front, then a plain SAMME fit.
    let owned_train;
    let train: &Dataset = if cfg.variant == Variant::SammeSmote {
        let dist = class_distribution(ds);
        let target = resampling::oversample_to_majority(&dist.counts);
        owned_train = resampling::smote(
            ds,
            cfg.smote_k,
            &target,
            derive_seed(cfg.seed, &[0x5a]),
        )?;
        &owned_train
    } else {
        ds
    };

    let n = train.n_rows();
    let k = train.k();
    let per_sample_costs = match &costs {
        Some(c) => c.per_sample(train.labels()),
        None => vec![1.0; n],
    };

    let search = SplitSearch::new(train);
    let mut w = vec![1.0 / n as f64; n];
    let mut members = Vec::new();
    let mut log = Vec::new();

    for t in 0..cfg.rounds {
        let stump = match cfg.variant {
            Variant::RusBoost => {
                let dist = class_distribution(train);
                let target =
                    resampling::undersample_to_minority(&dist.counts, cfg.undersample_ratio);
                let keep = resampling::undersample_indices(
                    train,
                    &target,
                    derive_seed(cfg.seed, &[0x52, t as u64]),
                )?;
                let sub = train.subset(&keep)?;
                let sub_w: Vec<f64> = keep.iter().map(|&i| w[i]).collect();
                // SplitSearch::fit normalizes internally
                SplitSearch::new(&sub).fit(&sub_w)?
            }
            Variant::SmoteBoost => {
                let dist = class_distribution(train);
                let target = resampling::oversample_to_majority(&dist.counts);
                let (aug, origins) = resampling::smote_detailed(
                    train,
                    cfg.smote_k,
                    &target,
                    derive_seed(cfg.seed, &[0x53, t as u64]),
                )?;
                // synthetic samples carry the mean current weight of their class
                let mut class_weight = vec![0.0; k];
                for i in 0..n {
                    class_weight[train.label(i)] += w[i];
                }
                let mut aug_w = w.clone();
                aug_w.extend(
                    origins
                        .iter()
                        .map(|o| class_weight[o.class] / dist.counts[o.class] as f64),
                );
                SplitSearch::new(&aug).fit(&aug_w)?
            }
            _ => search.fit(&w)?,
        };

        // error and distribution update always live on the original samples
        let correct: Vec<bool> = (0..n)
            .map(|i| stump.predict(train.row(i)).map(|p| p == train.label(i)))
            .collect::<Result<_>>()?;
        let eps = weighted_error(train, &w, &stump)?;

        let a = match cfg.variant {
            Variant::AdaC2 => {
                let mut cor = 0.0;
                let mut wrong = 0.0;
                for i in 0..n {
                    let m = per_sample_costs[i] * w[i];
                    if correct[i] {
                        cor += m;
                    } else {
                        wrong += m;
                    }
                }
                0.5 * (cor.max(cfg.eps_clamp) / wrong.max(cfg.eps_clamp)).ln()
            }
            _ => alpha(eps, k, cfg.alpha_coeff, cfg.eps_clamp),
        };
        if a <= 0.0 {
            // weak learner no better than the random-guessing threshold: a
            // resampling variant draws fresh data next round, so only the
            // deterministic variants are stuck and must stop
            match cfg.variant {
                Variant::RusBoost | Variant::SmoteBoost => continue,
                _ => break,
            }
        }

        w = update_weights(&w, &per_sample_costs, a, &correct)?;
        log.push(RoundLog {
            round: t,
            error: eps,
            alpha: a,
            weight_sum: kahan_sum(&w),
        });
        members.push(EnsembleMember { stump, alpha: a });
    }

    Ok(Ensemble {
        members,
        k,
        feature_names: train.feature_names().to_vec(),
        variant: cfg.variant,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn random_dataset(n: usize, d: usize, k: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        // labels loosely follow the first feature so boosting has signal
        let labels: Vec<usize> = rows
            .iter()
            .map(|r| {
                let noisy = r[0] + rng.gen_range(-0.7..0.7);
                if noisy < -0.6 {
                    0
                } else if noisy < 0.6 {
                    1 % k
                } else {
                    2 % k
                }
            })
            .collect();
        let names = (0..d).map(|j| format!("f{j}")).collect();
        Dataset::from_rows(rows, labels, k, names).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(0.5, 2, 0.5, 1e-10), 0.0);
        // 0.5*ln(3) + ln(2)
        assert!(approx(alpha(0.25, 3, 0.5, 1e-10), 1.2424533248940002, 1e-12));
        // 0.5*ln(1/9) + ln(2) < 0 => training would stop
        assert!(approx(alpha(0.9, 3, 0.5, 1e-10), -0.4054651081081645, 1e-12));
    }

    #[test]
    fn weighted_error_examples() {
        let ds = Dataset::from_rows(
            vec![vec![0.0], vec![1.0], vec![2.0]],
            vec![0, 0, 0],
            2,
            vec!["x".into()],
        )
        .unwrap();
        let all_left_0 = Stump {
            feature_index: 0,
            threshold: f64::INFINITY,
            left_class: 0,
            right_class: 0,
        };
        let all_left_1 = Stump {
            feature_index: 0,
            threshold: f64::INFINITY,
            left_class: 1,
            right_class: 1,
        };
        let w = vec![1.0 / 3.0; 3];
        assert_eq!(weighted_error(&ds, &w, &all_left_0).unwrap(), 0.0);
        assert_eq!(weighted_error(&ds, &w, &all_left_1).unwrap(), 1.0);

        // w=(0.25,0.25,0.5), first sample right, others wrong
        let split = Stump {
            feature_index: 0,
            threshold: 0.5,
            left_class: 0,
            right_class: 1,
        };
        let w = vec![0.25, 0.25, 0.5];
        assert!(approx(weighted_error(&ds, &w, &split).unwrap(), 0.75, 1e-15));
    }

    #[test]
    fn update_weights_examples() {
        // uniform costs, all correct, uniform w -> unchanged
        let w = vec![0.25; 4];
        let next = update_weights(&w, &[1.0; 4], 0.7, &[true; 4]).unwrap();
        for v in next {
            assert!(approx(v, 0.25, 1e-15));
        }

        let next =
            update_weights(&[0.5, 0.5], &[1.0, 1.0], 2.0f64.ln(), &[true, false]).unwrap();
        assert!(approx(next[0], 1.0 / 3.0, 1e-15));
        assert!(approx(next[1], 2.0 / 3.0, 1e-15));

        // common exp factor cancels; the cost ratio drives the shift
        let next = update_weights(&[0.5, 0.5], &[0.5, 1.0], 1.3, &[true, true]).unwrap();
        assert!(approx(next[0], 1.0 / 3.0, 1e-15));
        assert!(approx(next[1], 2.0 / 3.0, 1e-15));
    }

    #[test]
    fn samme_c2_with_constant_costs_matches_samme_exactly() {
        let ds = random_dataset(300, 4, 3, 41);
        let samme = fit(&ds, &BoostConfig::new(Variant::Samme, 25, 7)).unwrap();
        // constant cost 0.5: a power of two, so the normalized update is
        // bitwise identical to the cost-free one
        let c2 = fit(
            &ds,
            &BoostConfig::new(Variant::SammeC2, 25, 7)
                .with_costs(CostVector::new(vec![0.5; 3]).unwrap()),
        )
        .unwrap();
        assert_eq!(samme.members().len(), c2.members().len());
        for (a, b) in samme.members().iter().zip(c2.members().iter()) {
            assert_eq!(a.stump, b.stump);
            assert_eq!(a.alpha, b.alpha);
        }
        let probe = random_dataset(100, 4, 3, 99);
        assert_eq!(
            samme.predict_batch(&probe).unwrap(),
            c2.predict_batch(&probe).unwrap()
        );
    }

    #[test]
    fn separable_data_trains_to_zero_error() {
        let ds = Dataset::from_rows(
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            vec![0, 0, 1, 1],
            2,
            vec!["x".into()],
        )
        .unwrap();
        let e = fit(&ds, &BoostConfig::new(Variant::Samme, 5, 1)).unwrap();
        assert!(!e.members().is_empty());
        assert_eq!(e.log()[0].error, 0.0); // reported un-clamped
        assert!(e.log()[0].alpha > 10.0); // clamped eps makes alpha large
        let preds = e.predict_batch(&ds).unwrap();
        assert_eq!(preds, vec![0, 0, 1, 1]);
    }

    #[test]
    fn weight_sums_stay_normalized_and_alphas_positive() {
        let ds = random_dataset(200, 3, 3, 5);
        for variant in Variant::ALL {
            if variant == Variant::AdaC2 {
                continue; // binary only
            }
            let mut cfg = BoostConfig::new(variant, 12, 3);
            if variant.needs_costs() {
                cfg = cfg.with_costs(CostVector::new(vec![0.2, 0.7, 1.0]).unwrap());
            }
            let e = fit(&ds, &cfg).unwrap();
            for (i, r) in e.log().iter().enumerate() {
                assert!(approx(r.weight_sum, 1.0, 1e-12), "{variant} round {i}");
                assert!(r.alpha > 0.0);
            }
            // log rounds are monotone
            for pair in e.log().windows(2) {
                assert!(pair[1].round > pair[0].round);
            }
        }
    }

    #[test]
    fn ada_c2_requires_binary_labels() {
        let ds = random_dataset(60, 2, 3, 8);
        let cfg = BoostConfig::new(Variant::AdaC2, 5, 1)
            .with_costs(CostVector::new(vec![0.5, 1.0, 1.0]).unwrap());
        assert!(fit(&ds, &cfg).is_err());
    }

    #[test]
    fn ada_c2_trains_on_binary_data() {
        let ds = random_dataset(120, 3, 2, 8);
        let cfg = BoostConfig::new(Variant::AdaC2, 10, 1)
            .with_costs(CostVector::new(vec![0.4, 1.0]).unwrap());
        let e = fit(&ds, &cfg).unwrap();
        assert!(!e.members().is_empty());
        for r in e.log() {
            assert!(approx(r.weight_sum, 1.0, 1e-12));
        }
    }

    #[test]
    fn cost_sensitive_variants_require_costs() {
        let ds = random_dataset(50, 2, 3, 2);
        assert!(fit(&ds, &BoostConfig::new(Variant::SammeC2, 5, 1)).is_err());
    }

    #[test]
    fn raised_cost_boosts_misclassified_class_weight() {
        // four samples; sample 3 (class 1) will be "misclassified"
        let w = vec![0.25; 4];
        let correct = [true, true, true, false];
        let uniform = update_weights(&w, &[1.0; 4], 0.8, &correct).unwrap();
        // raise the cost of class 1 (samples 2 and 3), keep others fixed
        let raised = update_weights(&w, &[0.5, 0.5, 1.0, 1.0], 0.8, &correct).unwrap();
        assert!(raised[3] > uniform[3]);
    }

    #[test]
    fn predict_examples() {
        let stump = |t: f64, l: usize, r: usize| Stump {
            feature_index: 0,
            threshold: t,
            left_class: l,
            right_class: r,
        };
        let single = Ensemble {
            members: vec![EnsembleMember {
                stump: stump(0.0, 0, 1),
                alpha: 1.0,
            }],
            k: 3,
            feature_names: vec!["x".into()],
            variant: Variant::Samme,
            log: vec![],
        };
        assert_eq!(single.predict(&[-1.0]).unwrap(), 0);
        assert_eq!(single.predict_proba(&[-1.0]).unwrap(), vec![1.0, 0.0, 0.0]);

        // equal-alpha tie between classes 1 and 2 -> lower index wins
        let tie = Ensemble {
            members: vec![
                EnsembleMember {
                    stump: stump(f64::INFINITY, 1, 1),
                    alpha: 0.5,
                },
                EnsembleMember {
                    stump: stump(f64::INFINITY, 2, 2),
                    alpha: 0.5,
                },
            ],
            k: 3,
            feature_names: vec!["x".into()],
            variant: Variant::Samme,
            log: vec![],
        };
        assert_eq!(tie.predict(&[0.0]).unwrap(), 1);

        // three members with alphas (1,2,3) voting classes (0,1,1)
        let voted = Ensemble {
            members: vec![
                EnsembleMember {
                    stump: stump(f64::INFINITY, 0, 0),
                    alpha: 1.0,
                },
                EnsembleMember {
                    stump: stump(f64::INFINITY, 1, 1),
                    alpha: 2.0,
                },
                EnsembleMember {
                    stump: stump(f64::INFINITY, 1, 1),
                    alpha: 3.0,
                },
            ],
            k: 3,
            feature_names: vec!["x".into()],
            variant: Variant::Samme,
            log: vec![],
        };
        assert_eq!(voted.predict(&[0.0]).unwrap(), 1);
        let proba = voted.predict_proba(&[0.0]).unwrap();
        assert!(approx(proba[0], 1.0 / 6.0, 1e-12));
        assert!(approx(proba[1], 5.0 / 6.0, 1e-12));
        assert!(approx(proba.iter().sum::<f64>(), 1.0, 1e-12));
    }

    #[test]
    fn proba_argmax_matches_predict_and_rescaling_is_invariant() {
        let ds = random_dataset(150, 3, 3, 17);
        let e = fit(&ds, &BoostConfig::new(Variant::Samme, 15, 2)).unwrap();
        let mut scaled = e.clone();
        for m in &mut scaled.members {
            m.alpha *= 3.7;
        }
        for i in 0..ds.n_rows() {
            let x = ds.row(i);
            let p = e.predict(x).unwrap();
            let proba = e.predict_proba(x).unwrap();
            let argmax = proba
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
                .unwrap()
                .0;
            assert_eq!(p, argmax);
            assert_eq!(p, scaled.predict(x).unwrap());
        }
    }

    #[test]
    fn feature_importance_examples() {
        let member = |f: usize, a: f64| EnsembleMember {
            stump: Stump {
                feature_index: f,
                threshold: 0.0,
                left_class: 0,
                right_class: 1,
            },
            alpha: a,
        };
        let names = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let e = Ensemble {
            members: vec![member(3, 1.0)],
            k: 2,
            feature_names: names.clone(),
            variant: Variant::Samme,
            log: vec![],
        };
        assert_eq!(
            e.feature_importance().unwrap(),
            vec![0.0, 0.0, 0.0, 1.0]
        );

        let e = Ensemble {
            members: vec![member(0, 1.0), member(1, 3.0)],
            k: 2,
            feature_names: names,
            variant: Variant::Samme,
            log: vec![],
        };
        assert_eq!(
            e.feature_importance().unwrap(),
            vec![0.25, 0.75, 0.0, 0.0]
        );
    }

    #[test]
    fn save_load_round_trip() {
        let ds = random_dataset(200, 4, 3, 23);
        let e = fit(&ds, &BoostConfig::new(Variant::Samme, 20, 6)).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        e.save(f.path()).unwrap();
        let back = Ensemble::load(f.path()).unwrap();
        assert_eq!(e.members(), back.members());
        assert_eq!(e.k(), back.k());
        assert_eq!(e.variant(), back.variant());
        assert_eq!(e.feature_names(), back.feature_names());

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
            assert_eq!(e.predict(&x).unwrap(), back.predict(&x).unwrap());
        }
    }

    #[test]
    fn truncated_model_file_fails_to_load() {
        let ds = random_dataset(80, 2, 2, 3);
        let e = fit(&ds, &BoostConfig::new(Variant::Samme, 5, 1)).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        e.save(f.path()).unwrap();
        let text = std::fs::read_to_string(f.path()).unwrap();
        std::fs::write(f.path(), &text[..text.len() / 2]).unwrap();
        assert!(matches!(
            Ensemble::load(f.path()).unwrap_err(),
            Error::ModelSchema(_)
        ));
    }

    #[test]
    fn unknown_version_is_rejected() {
        let ds = random_dataset(80, 2, 2, 3);
        let e = fit(&ds, &BoostConfig::new(Variant::Samme, 5, 1)).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        e.save(f.path()).unwrap();
        let text = std::fs::read_to_string(f.path()).unwrap();
        std::fs::write(f.path(), text.replace("\"format_version\": 1", "\"format_version\": 99"))
            .unwrap();
        assert!(matches!(
            Ensemble::load(f.path()).unwrap_err(),
            Error::ModelVersion { found: 99, .. }
        ));
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
    }
}
