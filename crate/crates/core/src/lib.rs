//! Cost-sensitive multi-class boosting for imbalanced classification.
//!
//! The crate bundles a family of stump-based boosting classifiers (SAMME,
//! Ada.C2, SAMME.C2 and resampling-composed variants), SMOTE/undersampling
//! helpers, imbalance-aware evaluation metrics, a genetic-algorithm search
//! over per-class misclassification costs, a synthetic imbalanced data
//! generator, and a benchmark harness tying them together.

pub mod benchmark;
pub mod boosting;
pub mod costsearch;
pub mod data;
pub mod datagen;
pub mod error;
pub mod metrics;
pub mod resampling;
pub mod stump;

pub use error::{Error, Result};

/// Mixes a master seed with a sequence of tags into a derived stream seed.
///
/// Every RNG stream in the crate is derived from one master seed through
/// this function, so a single `--seed` reproduces a whole run.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    // splitmix64 finalizer, folded over the tags
    let mut state = master ^ 0x9e37_79b9_7f4a_7c15;
    for &t in tags {
        state = state.wrapping_add(t).wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    }
    state
}
