//! Multinomial naive Bayes over selected features with additive smoothing.

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::{FeatureSet, SparseVector};

use super::ClassProbs;

/// Laplace (add-one) smoothing.
pub const DEFAULT_SMOOTHING: f64 = 1.0;

/// Per-class arrays are indexed by [`Label::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    priors: [f64; 2],
    feature_counts: [Vec<u64>; 2],
    class_token_total: [u64; 2],
    smoothing: f64,
    log_priors: [f64; 2],
    log_likelihood: [Vec<f64>; 2],
}

impl NaiveBayesModel {
    /// `p(f|c) = (count(f,c) + s) / (total(c) + s V)`; priors are class
    /// document frequencies.
    pub fn train<'a, I>(docs: I, fs: &FeatureSet) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, &'a SparseVector)>,
    {
        let dimension = fs.dimension();
        let mut class_docs = [0u64; 2];
        let mut counts = [vec![0u64; dimension], vec![0u64; dimension]];
        for (label, vector) in docs {
            let c = label.index();
            class_docs[c] += 1;
            for &(i, n) in vector.entries() {
                let slot = counts[c].get_mut(i as usize).ok_or_else(|| {
                    Error::argument(format!(
                        "vector index {i} outside feature dimension {dimension}"
                    ))
                })?;
                *slot += n as u64;
            }
        }
        for label in Label::ALL {
            if class_docs[label.index()] == 0 {
                return Err(Error::training(format!(
                    "no {label} documents in the training set"
                )));
            }
        }
        let n = (class_docs[0] + class_docs[1]) as f64;
        let priors = [class_docs[0] as f64 / n, class_docs[1] as f64 / n];
        let totals = [counts[0].iter().sum(), counts[1].iter().sum()];
        Self::from_parts(priors, counts, totals, DEFAULT_SMOOTHING)
    }

    /// Assembles a model from stored parameters, validating them.
    pub fn from_parts(
        priors: [f64; 2],
        feature_counts: [Vec<u64>; 2],
        class_token_total: [u64; 2],
        smoothing: f64,
    ) -> Result<Self> {
        if !(smoothing.is_finite() && smoothing > 0.0) {
            return Err(Error::argument(format!(
                "smoothing constant must be positive, got {smoothing}"
            )));
        }
        if priors.iter().any(|p| !(p.is_finite() && *p > 0.0 && *p < 1.0))
            || (priors[0] + priors[1] - 1.0).abs() > 1e-9
        {
            return Err(Error::argument(format!(
                "class priors must be in (0, 1) and sum to 1, got {priors:?}"
            )));
        }
        let dimension = feature_counts[0].len();
        if feature_counts[1].len() != dimension {
            return Err(Error::argument("per-class feature counts differ in length"));
        }
        for c in 0..2 {
            let sum: u64 = feature_counts[c].iter().sum();
            if sum != class_token_total[c] {
                return Err(Error::argument(format!(
                    "class token total {} disagrees with feature counts summing to {sum}",
                    class_token_total[c]
                )));
            }
        }

        let log_likelihood = [0, 1].map(|c| {
            let denom = (class_token_total[c] as f64 + smoothing * dimension as f64).ln();
            feature_counts[c]
                .iter()
                .map(|&n| (n as f64 + smoothing).ln() - denom)
                .collect()
        });
        Ok(NaiveBayesModel {
            priors,
            log_priors: priors.map(f64::ln),
            feature_counts,
            class_token_total,
            smoothing,
            log_likelihood,
        })
    }

    pub fn dimension(&self) -> usize {
        self.feature_counts[0].len()
    }

    pub fn prior(&self, label: Label) -> f64 {
        self.priors[label.index()]
    }

    pub fn priors(&self) -> ClassProbs {
        ClassProbs {
            legitimate: self.priors[0],
            spam: self.priors[1],
        }
    }

    pub fn feature_counts(&self, label: Label) -> &[u64] {
        &self.feature_counts[label.index()]
    }

    pub fn class_token_total(&self, label: Label) -> u64 {
        self.class_token_total[label.index()]
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    /// Smoothed `p(feature | label)`.
    pub fn likelihood(&self, label: Label, feature: usize) -> f64 {
        self.log_likelihood[label.index()][feature].exp()
    }

    /// Unnormalized log score `ln prior + Σ count ln p(f|c)` for each class.
    /// Indices beyond the model dimension are ignored.
    pub fn log_scores(&self, d: &SparseVector) -> [f64; 2] {
        [0, 1].map(|c| {
            let ll = &self.log_likelihood[c];
            self.log_priors[c]
                + d.entries()
                    .iter()
                    .filter_map(|&(i, n)| ll.get(i as usize).map(|l| n as f64 * l))
                    .sum::<f64>()
        })
    }

    /// Class posterior, normalized in the log domain so it sums to 1.
    pub fn posterior(&self, d: &SparseVector) -> ClassProbs {
        if d.is_empty() {
            return self.priors();
        }
        let [g, s] = self.log_scores(d);
        let m = g.max(s);
        let (eg, es) = ((g - m).exp(), (s - m).exp());
        let z = eg + es;
        ClassProbs {
            legitimate: eg / z,
            spam: es / z,
        }
    }
}

pub fn train_nb<'a, I>(docs: I, fs: &FeatureSet) -> Result<NaiveBayesModel>
where
    I: IntoIterator<Item = (Label, &'a SparseVector)>,
{
    NaiveBayesModel::train(docs, fs)
}

pub fn nb_posterior(model: &NaiveBayesModel, d: &SparseVector) -> ClassProbs {
    model.posterior(d)
}
