//! Naive Bayes, k-nearest neighbors, and their blend.

mod combine;
mod hybrid;
mod knn;
mod metric;
mod nb;

use serde::{Deserialize, Serialize};

pub use combine::{combine_scores, ClassScores};
pub use hybrid::{classify, nb_only_classify, Decision, HybridConfig, HybridModel, DEFAULT_THRESHOLD};
pub use knn::{knn_probability, knn_search, IndexedDoc, KnnIndex, Neighbor};
pub use metric::{cosine_similarity, dot, euclidean_distance, squared_euclidean, Metric};
pub use nb::{nb_posterior, train_nb, NaiveBayesModel, DEFAULT_SMOOTHING};

/// A probability for each category.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassProbs {
    pub legitimate: f64,
    pub spam: f64,
}

impl ClassProbs {
    pub fn from_legitimate(legitimate: f64) -> Self {
        ClassProbs {
            legitimate,
            spam: 1.0 - legitimate,
        }
    }

    pub fn get(&self, label: crate::Label) -> f64 {
        match label {
            crate::Label::Legitimate => self.legitimate,
            crate::Label::Spam => self.spam,
        }
    }

    /// Both entries in [0, 1] and summing to 1 within 1e-9.
    pub fn is_distribution(&self) -> bool {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        unit(self.legitimate) && unit(self.spam) && (self.legitimate + self.spam - 1.0).abs() <= 1e-9
    }
}
