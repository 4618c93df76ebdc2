use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Corpus, Label};
use crate::error::{Error, Result};

/// A stratified partition of a corpus into training and test documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSplit {
    /// Ascending document ids.
    pub train_ids: Vec<usize>,
    /// Ascending document ids.
    pub test_ids: Vec<usize>,
    pub train_fraction: f64,
    pub seed: u64,
}

impl CorpusSplit {
    pub fn train_len(&self) -> usize {
        self.train_ids.len()
    }

    pub fn test_len(&self) -> usize {
        self.test_ids.len()
    }
}

/// Per class, shuffles the class's ids with a seeded ChaCha8 stream and puts
/// the first `round_half_up(fraction * class_size)` into the training side.
pub fn split_corpus(corpus: &Corpus, train_fraction: f64, seed: u64) -> Result<CorpusSplit> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::argument(format!(
            "train fraction must lie strictly between 0 and 1, got {train_fraction}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_ids = Vec::new();
    let mut test_ids = Vec::new();
    // Spam first so the RNG stream consumption order is fixed.
    for label in [Label::Spam, Label::Legitimate] {
        let mut ids: Vec<usize> = corpus
            .emails()
            .iter()
            .filter(|e| e.label == label)
            .map(|e| e.id)
            .collect();
        if ids.is_empty() {
            return Err(Error::argument(format!(
                "cannot split: corpus has no {label} documents"
            )));
        }
        ids.shuffle(&mut rng);
        let n_train = stratum_train_count(ids.len(), train_fraction);
        train_ids.extend_from_slice(&ids[..n_train]);
        test_ids.extend_from_slice(&ids[n_train..]);
    }
    train_ids.sort_unstable();
    test_ids.sort_unstable();

    Ok(CorpusSplit {
        train_ids,
        test_ids,
        train_fraction,
        seed,
    })
}

/// Round half up. The epsilon absorbs products like `0.3 * 5` that land a hair
/// under the .5 boundary in binary.
fn stratum_train_count(class_size: usize, fraction: f64) -> usize {
    let exact = fraction * class_size as f64;
    ((exact + 0.5 + 1e-9).floor() as usize).min(class_size)
}
