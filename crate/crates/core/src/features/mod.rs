//! Vocabulary selection and document vectors.
//!
//! Documents become raw occurrence counts over the selected features; no
//! weighting or normalization is applied.

mod gain;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tokenizer::TokenSequence;

pub use gain::{entropy, gain_from_counts, information_gain, select_features, DocumentFrequencies};

/// Ordered feature vocabulary. Position `i` in [`features`](Self::features)
/// is dimension `i` of every [`SparseVector`] built against this set.
#[derive(Debug, Clone)]
pub struct FeatureSet {
    features: Vec<String>,
    gains: Vec<f64>,
    index: HashMap<String, u32>,
    requested: usize,
}

/// Two sets are equal when they map tokens to the same dimensions; gains
/// and the requested size are selection metadata.
impl PartialEq for FeatureSet {
    fn eq(&self, other: &Self) -> bool {
        self.features == other.features
    }
}

impl FeatureSet {
    /// Rebuilds a feature set from an ordered vocabulary, e.g. one read from a
    /// model file. Gains are unknown and reported as NaN.
    pub fn from_vocabulary(features: Vec<String>) -> Result<Self> {
        let n = features.len();
        Self::build(features, vec![f64::NAN; n], n)
    }

    fn build(features: Vec<String>, gains: Vec<f64>, requested: usize) -> Result<Self> {
        if features.len() > u32::MAX as usize {
            return Err(Error::argument("vocabulary too large"));
        }
        let mut index = HashMap::with_capacity(features.len());
        for (i, f) in features.iter().enumerate() {
            if index.insert(f.clone(), i as u32).is_some() {
                return Err(Error::argument(format!("duplicate feature `{f}`")));
            }
        }
        Ok(FeatureSet {
            features,
            gains,
            index,
            requested,
        })
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    /// Information gain per feature, parallel to [`features`](Self::features).
    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    /// The dimension V of vectors built against this set.
    pub fn dimension(&self) -> usize {
        self.features.len()
    }

    pub fn requested_dimension(&self) -> usize {
        self.requested
    }

    /// True when the training vocabulary was smaller than the requested V.
    pub fn is_clamped(&self) -> bool {
        self.features.len() < self.requested
    }

    pub fn index_of(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Feature-index → occurrence-count document vector. Entries have strictly
/// increasing indices and nonzero counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, u32)>", into = "Vec<(u32, u32)>")]
pub struct SparseVector {
    entries: Vec<(u32, u32)>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates ordering and nonzero counts.
    pub fn from_entries(entries: Vec<(u32, u32)>) -> Result<Self> {
        if entries.iter().any(|&(_, c)| c == 0) {
            return Err(Error::argument("sparse vector holds a zero count"));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::argument(
                "sparse vector indices must be strictly increasing",
            ));
        }
        Ok(SparseVector { entries })
    }

    /// Builds a vector from a dense count slice, skipping zeros.
    pub fn from_dense(counts: &[u32]) -> Self {
        let entries = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as u32, c))
            .collect();
        SparseVector { entries }
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of stored (nonzero) dimensions.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Sum of all counts.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c as u64).sum()
    }

    /// Largest stored index plus one, or 0 for the empty vector.
    pub fn min_dimension(&self) -> usize {
        self.entries.last().map_or(0, |&(i, _)| i as usize + 1)
    }

    pub fn squared_norm(&self) -> u128 {
        self.entries
            .iter()
            .map(|&(_, c)| (c as u128) * (c as u128))
            .sum()
    }

    pub fn to_dense(&self, dimension: usize) -> Vec<u32> {
        let mut dense = vec![0; dimension];
        for &(i, c) in &self.entries {
            dense[i as usize] = c;
        }
        dense
    }
}

impl TryFrom<Vec<(u32, u32)>> for SparseVector {
    type Error = Error;

    fn try_from(entries: Vec<(u32, u32)>) -> Result<Self> {
        Self::from_entries(entries)
    }
}

impl From<SparseVector> for Vec<(u32, u32)> {
    fn from(v: SparseVector) -> Self {
        v.entries
    }
}

/// Counts in-vocabulary tokens; everything else is ignored.
pub fn vectorize(tokens: &TokenSequence, fs: &FeatureSet) -> SparseVector {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for token in tokens.iter() {
        if let Some(i) = fs.index_of(token) {
            *counts.entry(i).or_default() += 1;
        }
    }
    SparseVector {
        entries: counts.into_iter().collect(),
    }
}
