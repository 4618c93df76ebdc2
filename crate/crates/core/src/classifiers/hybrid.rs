use serde::{Deserialize, Serialize};

use super::combine::{check_weight, combine_scores, ClassScores};
use super::knn::{knn_probability, IndexedDoc, KnnIndex, Neighbor};
use super::metric::Metric;
use super::nb::NaiveBayesModel;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::{select_features, vectorize, FeatureSet, SparseVector};
use crate::tokenizer::{tokenize_email, TokenSequence};

/// Scores at or above this are legitimate.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridConfig {
    /// Naive Bayes weight.
    pub alpha: f64,
    /// kNN weight.
    pub beta: f64,
    pub k: usize,
    pub metric: Metric,
    pub threshold: f64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig {
            alpha: 1.0,
            beta: 1.0,
            k: 1,
            metric: Metric::Euclidean,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl HybridConfig {
    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn with_weights(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn validate(&self, training_size: usize) -> Result<()> {
        check_weight("alpha", self.alpha)?;
        check_weight("beta", self.beta)?;
        if self.k == 0 || self.k > training_size {
            return Err(Error::argument(format!(
                "k = {} must lie in 1..={training_size} (the training set size)",
                self.k
            )));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::argument(format!(
                "threshold must lie in [0, 1], got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// Outcome of classifying one document.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub label: Label,
    pub scores: ClassScores,
    pub neighbors: Vec<Neighbor>,
}

/// Feature vocabulary, naive Bayes parameters and the stored training
/// vectors that kNN scans at query time.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridModel {
    features: FeatureSet,
    nb: NaiveBayesModel,
    index: KnnIndex,
}

impl HybridModel {
    /// Selects `dimension` features from `docs`, then fits naive Bayes and
    /// indexes every training vector. Each item is `(doc id, label, tokens)`.
    pub fn train<'a, I>(docs: I, dimension: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Label, &'a TokenSequence)>,
    {
        let docs: Vec<(usize, Label, &TokenSequence)> = docs.into_iter().collect();
        let features = select_features(docs.iter().map(|&(_, l, t)| (l, t)), dimension)?;
        let indexed: Vec<IndexedDoc> = docs
            .iter()
            .map(|&(id, label, tokens)| IndexedDoc {
                id,
                label,
                vector: vectorize(tokens, &features),
            })
            .collect();
        let nb = NaiveBayesModel::train(indexed.iter().map(|d| (d.label, &d.vector)), &features)?;
        let index = KnnIndex::new(indexed)?;
        Ok(HybridModel {
            features,
            nb,
            index,
        })
    }

    pub fn from_parts(features: FeatureSet, nb: NaiveBayesModel, index: KnnIndex) -> Result<Self> {
        let dim = features.dimension();
        if nb.dimension() != dim {
            return Err(Error::argument(format!(
                "naive Bayes dimension {} does not match {dim} features",
                nb.dimension()
            )));
        }
        if let Some(doc) = index.docs().iter().find(|d| d.vector.min_dimension() > dim) {
            return Err(Error::argument(format!(
                "training vector {} indexes beyond {dim} features",
                doc.id
            )));
        }
        if index.is_empty() {
            return Err(Error::argument("model has no training vectors"));
        }
        Ok(HybridModel {
            features,
            nb,
            index,
        })
    }

    pub fn features(&self) -> &FeatureSet {
        &self.features
    }

    pub fn naive_bayes(&self) -> &NaiveBayesModel {
        &self.nb
    }

    pub fn index(&self) -> &KnnIndex {
        &self.index
    }

    pub fn training_size(&self) -> usize {
        self.index.len()
    }

    pub fn vectorize(&self, tokens: &TokenSequence) -> SparseVector {
        vectorize(tokens, &self.features)
    }

    pub fn classify_vector(&self, d: &SparseVector, cfg: &HybridConfig) -> Result<Decision> {
        cfg.validate(self.training_size())?;
        let pr_nb = self.nb.posterior(d);
        let neighbors = self.index.search(d, cfg.k, cfg.metric)?;
        let pr_knn = knn_probability(&neighbors)?;
        let scores = combine_scores(pr_nb, pr_knn, cfg.alpha, cfg.beta)?;
        Ok(Decision {
            label: scores.decide(cfg.threshold),
            scores,
            neighbors,
        })
    }

    pub fn classify_tokens(&self, tokens: &TokenSequence, cfg: &HybridConfig) -> Result<Decision> {
        self.classify_vector(&self.vectorize(tokens), cfg)
    }

    pub fn classify_raw(&self, raw: &[u8], cfg: &HybridConfig) -> Result<Decision> {
        self.classify_tokens(&tokenize_email(raw), cfg)
    }

    /// Naive Bayes alone: legitimate iff `Pr_nb[G] >= 0.5`.
    pub fn nb_only(&self, d: &SparseVector) -> Label {
        nb_decision(self.nb.posterior(d).legitimate)
    }
}

fn nb_decision(pr_legitimate: f64) -> Label {
    if pr_legitimate >= DEFAULT_THRESHOLD {
        Label::Legitimate
    } else {
        Label::Spam
    }
}

pub fn classify(model: &HybridModel, tokens: &TokenSequence, cfg: &HybridConfig) -> Result<Decision> {
    model.classify_tokens(tokens, cfg)
}

pub fn nb_only_classify(model: &HybridModel, d: &SparseVector) -> Label {
    model.nb_only(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::ClassProbs;

    fn seq(words: &[&str]) -> TokenSequence {
        words.iter().copied().collect()
    }

    fn train(docs: &[(Label, TokenSequence)], v: usize) -> HybridModel {
        HybridModel::train(docs.iter().enumerate().map(|(i, (l, t))| (i, *l, t)), v).unwrap()
    }

    #[test]
    fn knn_can_override_naive_bayes() {
        // Priors 0.2 legitimate / 0.8 spam. An empty query gets exactly the
        // priors from naive Bayes, and its nearest neighbor (smallest norm) is
        // the legitimate document.
        let docs = vec![
            (Label::Legitimate, seq(&["aa"])),
            (Label::Spam, seq(&["bb", "bb"])),
            (Label::Spam, seq(&["bb", "bb", "cc"])),
            (Label::Spam, seq(&["cc", "cc"])),
            (Label::Spam, seq(&["bb", "cc", "cc"])),
        ];
        let model = train(&docs, 10);
        let query = seq(&["zz"]);
        assert!(model.vectorize(&query).is_empty());

        let d = model.classify_tokens(&query, &HybridConfig::default()).unwrap();
        assert_eq!(d.scores.pr_nb, ClassProbs { legitimate: 0.2, spam: 0.8 });
        assert_eq!(d.neighbors[0].id, 0);
        assert_eq!(d.scores.pr_knn, ClassProbs { legitimate: 1.0, spam: 0.0 });
        assert!((d.scores.delta_g - 0.6).abs() < 1e-15);
        assert_eq!(d.label, Label::Legitimate);
        assert_eq!(model.nb_only(&model.vectorize(&query)), Label::Spam);
    }

    #[test]
    fn unanimous_legitimate() {
        let docs = vec![
            (Label::Legitimate, seq(&["meeting", "notes", "agenda"])),
            (Label::Legitimate, seq(&["meeting", "agenda"])),
            (Label::Spam, seq(&["cash", "win"])),
        ];
        let model = train(&docs, 10);
        let d = model
            .classify_tokens(&seq(&["meeting", "agenda", "notes"]), &HybridConfig::default().with_k(2))
            .unwrap();
        assert_eq!(d.label, Label::Legitimate);
        assert_eq!(d.scores.pr_knn.legitimate, 1.0);
        assert!(d.scores.delta_g > 0.5);
    }

    #[test]
    fn config_is_validated_against_training_size() {
        let docs = vec![(Label::Legitimate, seq(&["aa"])), (Label::Spam, seq(&["bb"]))];
        let model = train(&docs, 2);
        let q = seq(&["aa"]);
        assert!(model.classify_tokens(&q, &HybridConfig::default().with_k(3)).is_err());
        assert!(model
            .classify_tokens(&q, &HybridConfig::default().with_weights(0.0, 1.0))
            .is_err());
        assert!(model.classify_tokens(&q, &HybridConfig::default().with_k(2)).is_ok());
    }

    #[test]
    fn nb_only_threshold() {
        assert_eq!(nb_decision(0.5), Label::Legitimate);
        assert_eq!(nb_decision(0.49), Label::Spam);
    }

    #[test]
    fn empty_document_follows_majority_prior() {
        // 10950 legitimate : 5000 spam, scaled down to 219 : 100.
        let mut docs = Vec::new();
        docs.extend(std::iter::repeat_n((Label::Legitimate, seq(&["aa"])), 219));
        docs.extend(std::iter::repeat_n((Label::Spam, seq(&["bb"])), 100));
        let model = train(&docs, 5);
        let p = model.naive_bayes().priors();
        assert!((p.legitimate - 219.0 / 319.0).abs() < 1e-15);
        assert!((p.legitimate - 0.6865).abs() < 1e-4);
        assert_eq!(model.nb_only(&SparseVector::new()), Label::Legitimate);
    }
}
