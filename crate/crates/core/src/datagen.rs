//! Synthetic imbalanced multi-class generator.
//!
//! Class counts are apportioned exactly from the requested proportions
//! (largest remainder). Each class owns `clusters_per_class` cluster
//! centers placed at distinct vertices of the `{-class_sep, +class_sep}`
//! hypercube in the informative subspace; samples are unit-variance
//! Gaussian around a uniformly chosen own-class center, with the
//! remaining coordinates standard-normal noise.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n_samples: usize,
    pub n_features: usize,
    pub n_informative: usize,
    pub n_classes: usize,
    pub clusters_per_class: usize,
    /// Half-distance between cluster centers along each informative axis.
    pub class_sep: f64,
    /// Class proportions, summing to 1.
    pub weights: Vec<f64>,
    /// Fraction of labels uniformly reassigned after generation.
    pub label_noise: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_samples: 100_000,
            n_features: 50,
            n_informative: 10,
            n_classes: 3,
            clusters_per_class: 2,
            class_sep: 2.0,
            weights: vec![0.96, 0.035, 0.005],
            label_noise: 0.0,
            seed: 16,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 || self.n_features == 0 || self.n_informative == 0 {
            return Err(Error::InvalidConfig(
                "n_samples, n_features and n_informative must be positive".into(),
            ));
        }
        if self.n_informative > self.n_features {
            return Err(Error::InvalidConfig(format!(
                "n_informative {} exceeds n_features {}",
                self.n_informative, self.n_features
            )));
        }
        if self.n_classes < 2 {
            return Err(Error::InvalidConfig("n_classes must be >= 2".into()));
        }
        if self.clusters_per_class == 0 {
            return Err(Error::InvalidConfig("clusters_per_class must be >= 1".into()));
        }
        if self.class_sep.is_nan() || self.class_sep <= 0.0 {
            return Err(Error::InvalidConfig("class_sep must be positive".into()));
        }
        if self.weights.len() != self.n_classes {
            return Err(Error::InvalidConfig(format!(
                "{} weights given for {} classes",
                self.weights.len(),
                self.n_classes
            )));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || self.weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidConfig(
                "weights must be non-negative and sum to 1".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.label_noise) {
            return Err(Error::InvalidConfig("label_noise must be in [0,1)".into()));
        }
        let total_clusters = self.n_classes * self.clusters_per_class;
        let vertices = if self.n_informative >= 64 {
            usize::MAX
        } else {
            1usize << self.n_informative
        };
        if total_clusters > vertices {
            return Err(Error::InvalidConfig(format!(
                "{total_clusters} cluster centers do not fit on {vertices} hypercube vertices"
            )));
        }
        Ok(())
    }
}

/// Exact largest-remainder apportionment of `n` samples to `weights`.
/// Errors if a positively weighted class would receive zero samples.
pub fn apportion(n: usize, weights: &[f64]) -> Result<Vec<usize>> {
    let mut counts: Vec<usize> = weights.iter().map(|w| (w * n as f64).floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut remainders: Vec<(f64, usize)> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| (w * n as f64 - counts[i] as f64, i))
        .collect();
    // largest remainder first; ties by class index for determinism
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, class) in remainders.iter().take(n - assigned) {
        counts[class] += 1;
    }
    for (class, (&c, &w)) in counts.iter().zip(weights.iter()).enumerate() {
        if w > 0.0 && c == 0 {
            return Err(Error::InfeasibleApportionment { class, weight: w });
        }
    }
    Ok(counts)
}

pub(crate) struct GenDetails {
    /// centers[class][cluster] -> informative-subspace coordinates
    #[allow(dead_code)]
    pub centers: Vec<Vec<Vec<f64>>>,
}

pub fn generate(cfg: &GenConfig) -> Result<Dataset> {
    generate_detailed(cfg).map(|(ds, _)| ds)
}

pub(crate) fn generate_detailed(cfg: &GenConfig) -> Result<(Dataset, GenDetails)> {
    cfg.validate()?;
    let counts = apportion(cfg.n_samples, &cfg.weights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let m = cfg.n_informative;
    let total_clusters = cfg.n_classes * cfg.clusters_per_class;

    // distinct hypercube vertices, sampled without replacement
    let mut taken = std::collections::HashSet::new();
    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(total_clusters);
    while vertices.len() < total_clusters {
        let signs: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
        if taken.insert(signs.clone()) {
            vertices.push(
                signs
                    .iter()
                    .map(|&s| if s { cfg.class_sep } else { -cfg.class_sep })
                    .collect(),
            );
        }
    }
    let centers: Vec<Vec<Vec<f64>>> = (0..cfg.n_classes)
        .map(|c| {
            vertices[c * cfg.clusters_per_class..(c + 1) * cfg.clusters_per_class].to_vec()
        })
        .collect();

    let mut rows = Vec::with_capacity(cfg.n_samples);
    let mut labels = Vec::with_capacity(cfg.n_samples);
    for (class, &count) in counts.iter().enumerate() {
        for _ in 0..count {
            let center = &centers[class][rng.gen_range(0..cfg.clusters_per_class)];
            let mut row = Vec::with_capacity(cfg.n_features);
            for c in center.iter() {
                let noise: f64 = rng.sample(StandardNormal);
                row.push(c + noise);
            }
            for _ in m..cfg.n_features {
                let noise: f64 = rng.sample(StandardNormal);
                row.push(noise);
            }
            rows.push(row);
            labels.push(class);
        }
    }

    if cfg.label_noise > 0.0 {
        for y in labels.iter_mut() {
            if rng.gen_bool(cfg.label_noise) {
                *y = rng.gen_range(0..cfg.n_classes);
            }
        }
    }

    // scramble row order so splits never rely on generation order
    let mut order: Vec<usize> = (0..cfg.n_samples).collect();
    order.shuffle(&mut rng);
    let rows: Vec<Vec<f64>> = order.iter().map(|&i| std::mem::take(&mut rows[i])).collect();
    let labels: Vec<usize> = order.iter().map(|&i| labels[i]).collect();

    let names = (0..cfg.n_features).map(|j| format!("f{j}")).collect();
    let ds = Dataset::from_rows(rows, labels, cfg.n_classes, names)?;
    Ok((ds, GenDetails { centers }))
}
