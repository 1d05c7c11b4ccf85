//! SMOTE synthetic oversampling and random undersampling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{class_distribution, Dataset};
use crate::error::{Error, Result};

/// Per-class target counts for a resampling operation.
pub type ResampleTarget = Vec<usize>;

/// Targets that raise every class to the majority count.
pub fn oversample_to_majority(counts: &[usize]) -> ResampleTarget {
    let majority = counts.iter().copied().max().unwrap_or(0);
    counts.iter().map(|&c| c.max(majority)).collect()
}

/// Targets that lower every class to `ratio` times the minority count
/// (capped at the current count). `ratio = 1.0` balances to the minority.
pub fn undersample_to_minority(counts: &[usize], ratio: f64) -> ResampleTarget {
    let minority = counts.iter().copied().min().unwrap_or(0);
    let target = ((minority as f64 * ratio).round() as usize).max(1);
    counts.iter().map(|&c| c.min(target)).collect()
}

/// Provenance of one synthetic sample: `point = p + u * (q - p)` where `p`
/// and `q` are row indices of same-class originals.
#[derive(Debug, Clone)]
pub struct SyntheticOrigin {
    pub class: usize,
    pub parent: usize,
    pub neighbor: usize,
    pub u: f64,
}

/// SMOTE oversampling. Original rows are retained unchanged (and first);
/// synthetic rows are appended per class in generation order. Output class
/// counts equal `target` exactly.
pub fn smote(ds: &Dataset, k: usize, target: &ResampleTarget, seed: u64) -> Result<Dataset> {
    smote_detailed(ds, k, target, seed).map(|(out, _)| out)
}

/// As [`smote`], additionally returning the provenance of every synthetic
/// sample so tests can verify the convex-combination construction.
pub fn smote_detailed(
    ds: &Dataset,
    k: usize,
    target: &ResampleTarget,
    seed: u64,
) -> Result<(Dataset, Vec<SyntheticOrigin>)> {
    if k == 0 {
        return Err(Error::InvalidConfig("smote k must be >= 1".into()));
    }
    if target.len() != ds.k() {
        return Err(Error::DimensionMismatch {
            expected: ds.k(),
            got: target.len(),
        });
    }
    let dist = class_distribution(ds);
    for (class, (&t, &c)) in target.iter().zip(dist.counts.iter()).enumerate() {
        if t < c {
            return Err(Error::InvalidConfig(format!(
                "oversampling target {t} for class {class} is below current count {c}"
            )));
        }
        if t > c && c < 2 {
            return Err(Error::ClassTooSmall { class, count: c });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut new_rows = Vec::new();
    let mut new_labels = Vec::new();
    let mut origins = Vec::new();
    for (class, (&t, &c)) in target.iter().zip(dist.counts.iter()).enumerate() {
        let needed = t - c;
        if needed == 0 {
            continue;
        }
        let members: Vec<usize> = (0..ds.n_rows()).filter(|&i| ds.label(i) == class).collect();
        let k_eff = k.min(members.len() - 1);
        let neighbors = nearest_same_class(ds, &members, k_eff);
        for _ in 0..needed {
            let pi = rng.gen_range(0..members.len());
            let p = members[pi];
            let q = neighbors[pi][rng.gen_range(0..k_eff)];
            let u: f64 = rng.gen();
            let row: Vec<f64> = ds
                .row(p)
                .iter()
                .zip(ds.row(q).iter())
                .map(|(&a, &b)| a + u * (b - a))
                .collect();
            new_rows.push(row);
            new_labels.push(class);
            origins.push(SyntheticOrigin {
                class,
                parent: p,
                neighbor: q,
                u,
            });
        }
    }
    let out = ds.extend_with(new_rows, new_labels)?;
    Ok((out, origins))
}

/// For each member, its `k` nearest same-class neighbors by Euclidean
/// distance, excluding itself. Distance ties break by sample index.
fn nearest_same_class(ds: &Dataset, members: &[usize], k: usize) -> Vec<Vec<usize>> {
    members
        .iter()
        .map(|&p| {
            let mut dists: Vec<(f64, usize)> = members
                .iter()
                .filter(|&&q| q != p)
                .map(|&q| {
                    let d2: f64 = ds
                        .row(p)
                        .iter()
                        .zip(ds.row(q).iter())
                        .map(|(&a, &b)| (a - b) * (a - b))
                        .sum();
                    (d2, q)
                })
                .collect();
            dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            dists.into_iter().take(k).map(|(_, q)| q).collect()
        })
        .collect()
}

/// Indices retained by random undersampling, sorted ascending.
pub fn undersample_indices(ds: &Dataset, target: &ResampleTarget, seed: u64) -> Result<Vec<usize>> {
    if target.len() != ds.k() {
        return Err(Error::DimensionMismatch {
            expected: ds.k(),
            got: target.len(),
        });
    }
    let dist = class_distribution(ds);
    for (class, (&t, &c)) in target.iter().zip(dist.counts.iter()).enumerate() {
        if t > c {
            return Err(Error::TargetExceedsCount {
                class,
                target: t,
                count: c,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = Vec::new();
    for class in 0..ds.k() {
        let mut members: Vec<usize> = (0..ds.n_rows()).filter(|&i| ds.label(i) == class).collect();
        members.shuffle(&mut rng);
        keep.extend_from_slice(&members[..target[class]]);
    }
    keep.sort_unstable();
    Ok(keep)
}

/// Uniform undersampling without replacement, per class, down to `target`.
pub fn random_undersample(ds: &Dataset, target: &ResampleTarget, seed: u64) -> Result<Dataset> {
    let keep = undersample_indices(ds, target, seed)?;
    ds.subset(&keep)
}
