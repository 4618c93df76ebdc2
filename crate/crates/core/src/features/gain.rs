//! Binary document-presence information gain, in bits.
//!
//! `IG(t) = H(C) - P(t) H(C | t present) - P(not t) H(C | t absent)`, with
//! every probability estimated from training-document counts and
//! `0 log 0 = 0`.

use std::collections::{HashMap, HashSet};

use super::FeatureSet;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::tokenizer::TokenSequence;

/// Shannon entropy in bits of a count distribution.
pub fn entropy(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Gain from per-class document totals and per-class presence counts
/// (both indexed by [`Label::index`]).
pub fn gain_from_counts(class_docs: [u64; 2], present: [u64; 2]) -> f64 {
    let n = class_docs[0] + class_docs[1];
    if n == 0 {
        return 0.0;
    }
    let absent = [class_docs[0] - present[0], class_docs[1] - present[1]];
    let n_present = present[0] + present[1];
    let p_present = n_present as f64 / n as f64;
    let p_absent = (n - n_present) as f64 / n as f64;
    let gain = entropy(&class_docs) - p_present * entropy(&present) - p_absent * entropy(&absent);
    gain.max(0.0)
}

/// Information gain of a single token, scanning the documents directly.
/// Tokens that never occur have zero gain.
pub fn information_gain<'a, I>(docs: I, token: &str) -> f64
where
    I: IntoIterator<Item = (Label, &'a TokenSequence)>,
{
    let mut class_docs = [0u64; 2];
    let mut present = [0u64; 2];
    for (label, tokens) in docs {
        class_docs[label.index()] += 1;
        if tokens.iter().any(|t| t == token) {
            present[label.index()] += 1;
        }
    }
    gain_from_counts(class_docs, present)
}

/// Per-class document frequencies of every token in a training set.
#[derive(Debug, Clone, Default)]
pub struct DocumentFrequencies {
    class_docs: [u64; 2],
    df: HashMap<String, [u64; 2]>,
}

impl DocumentFrequencies {
    pub fn from_documents<'a, I>(docs: I) -> Self
    where
        I: IntoIterator<Item = (Label, &'a TokenSequence)>,
    {
        let mut out = DocumentFrequencies::default();
        let mut seen: HashSet<&str> = HashSet::new();
        for (label, tokens) in docs {
            out.class_docs[label.index()] += 1;
            seen.clear();
            for token in tokens.iter() {
                if seen.insert(token) {
                    match out.df.get_mut(token) {
                        Some(counts) => counts[label.index()] += 1,
                        None => {
                            let mut counts = [0; 2];
                            counts[label.index()] = 1;
                            out.df.insert(token.to_string(), counts);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn documents(&self) -> u64 {
        self.class_docs[0] + self.class_docs[1]
    }

    pub fn class_documents(&self, label: Label) -> u64 {
        self.class_docs[label.index()]
    }

    pub fn distinct_tokens(&self) -> usize {
        self.df.len()
    }

    pub fn gain(&self, token: &str) -> f64 {
        let present = self.df.get(token).copied().unwrap_or([0, 0]);
        gain_from_counts(self.class_docs, present)
    }

    /// Every token with its gain, best first; ties in ascending token order.
    pub fn ranked(&self) -> Vec<(&str, f64)> {
        let mut ranked: Vec<(&str, f64)> = self
            .df
            .iter()
            .map(|(t, &present)| (t.as_str(), gain_from_counts(self.class_docs, present)))
            .collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked
    }
}

/// Keeps the `dimension` highest-gain training tokens. When the training
/// vocabulary is smaller, every token is kept and the set reports
/// [`is_clamped`](FeatureSet::is_clamped).
pub fn select_features<'a, I>(docs: I, dimension: usize) -> Result<FeatureSet>
where
    I: IntoIterator<Item = (Label, &'a TokenSequence)>,
{
    if dimension == 0 {
        return Err(Error::argument("feature count must be at least 1"));
    }
    let df = DocumentFrequencies::from_documents(docs);
    if df.documents() == 0 {
        return Err(Error::training("cannot select features from an empty training set"));
    }
    let (features, gains): (Vec<String>, Vec<f64>) = df
        .ranked()
        .into_iter()
        .take(dimension)
        .map(|(t, g)| (t.to_string(), g))
        .unzip();
    FeatureSet::build(features, gains, dimension)
}
