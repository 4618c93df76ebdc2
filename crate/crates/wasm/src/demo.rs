//! Everything the page does, as plain Rust so it can be tested natively.

use serde::Serialize;

use nbknn::classifiers::Decision;
use nbknn::corpus::split_corpus;
use nbknn::harness::{synthesize, VocabProfile};
use nbknn::{
    tokenize_email, Corpus, CorpusSplit, Error, HybridConfig, HybridModel, Label, Metric, Result,
    SparseVector, TokenSequence,
};

#[derive(Debug, Serialize)]
pub struct TokenView {
    pub tokens: Vec<String>,
    pub tag_count: usize,
}

pub fn tokenize(text: &str) -> TokenView {
    let seq = tokenize_email(text.as_bytes());
    TokenView {
        tag_count: seq.tag_count(),
        tokens: seq.into_tokens(),
    }
}

#[derive(Debug, Serialize)]
pub struct NeighborView {
    pub id: usize,
    pub label: Label,
    pub score: f64,
}

#[derive(Debug, Serialize)]
pub struct Classification {
    pub label: Label,
    pub delta_g: f64,
    pub delta_s: f64,
    pub pr_nb_g: f64,
    pub pr_knn_g: f64,
    pub neighbors: Vec<NeighborView>,
    /// Selected features present in the message, with counts.
    pub features: Vec<(String, u32)>,
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    /// `None` for naive Bayes alone.
    pub k: Option<usize>,
    pub legitimate: f64,
    pub spam: f64,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub documents: usize,
    pub train: usize,
    pub test: usize,
    pub dimension: usize,
    pub top_features: Vec<(String, f64)>,
}

pub struct Demo {
    corpus: Corpus,
    split: CorpusSplit,
    tokens: Vec<TokenSequence>,
    model: HybridModel,
}

fn parse_metric(metric: &str) -> Result<Metric> {
    metric.parse()
}

impl Demo {
    /// Synthesizes a corpus, splits it and trains on the training side.
    pub fn new(seed: u64, n_spam: usize, n_ham: usize, fraction: f64, features: usize) -> Result<Self> {
        let corpus = synthesize(seed, n_spam, n_ham, &VocabProfile::default())?;
        let split = split_corpus(&corpus, fraction, seed)?;
        let tokens: Vec<TokenSequence> = corpus.emails().iter().map(|e| tokenize_email(&e.bytes)).collect();
        let model = HybridModel::train(
            split
                .train_ids
                .iter()
                .map(|&id| (id, corpus.emails()[id].label, &tokens[id])),
            features,
        )?;
        Ok(Demo {
            corpus,
            split,
            tokens,
            model,
        })
    }

    pub fn summary(&self) -> Summary {
        let fs = self.model.features();
        Summary {
            documents: self.corpus.len(),
            train: self.split.train_len(),
            test: self.split.test_len(),
            dimension: fs.dimension(),
            top_features: fs
                .features()
                .iter()
                .zip(fs.gains())
                .take(15)
                .map(|(f, g)| (f.clone(), *g))
                .collect(),
        }
    }

    fn config(&self, k: usize, metric: &str, alpha: f64, beta: f64) -> Result<HybridConfig> {
        Ok(HybridConfig::default()
            .with_k(k)
            .with_metric(parse_metric(metric)?)
            .with_weights(alpha, beta))
    }

    pub fn classify(&self, text: &str, k: usize, metric: &str, alpha: f64, beta: f64) -> Result<Classification> {
        let cfg = self.config(k, metric, alpha, beta)?;
        let vector = self.model.vectorize(&tokenize_email(text.as_bytes()));
        let Decision {
            label,
            scores,
            neighbors,
        } = self.model.classify_vector(&vector, &cfg)?;
        let names = self.model.features().features();
        Ok(Classification {
            label,
            delta_g: scores.delta_g,
            delta_s: scores.delta_s,
            pr_nb_g: scores.pr_nb.legitimate,
            pr_knn_g: scores.pr_knn.legitimate,
            neighbors: neighbors
                .into_iter()
                .map(|n| NeighborView {
                    id: n.id,
                    label: n.label,
                    score: n.score,
                })
                .collect(),
            features: vector
                .entries()
                .iter()
                .map(|&(i, c)| (names[i as usize].clone(), c))
                .collect(),
        })
    }

    /// Per-class test accuracy of naive Bayes alone and of the hybrid for
    /// every k up to `max_k`.
    pub fn accuracy_curve(&self, metric: &str, max_k: usize, alpha: f64, beta: f64) -> Result<Vec<CurvePoint>> {
        if max_k == 0 {
            return Err(Error::Argument("max k must be at least 1".into()));
        }
        let tests: Vec<(Label, SparseVector)> = self
            .split
            .test_ids
            .iter()
            .map(|&id| (self.corpus.emails()[id].label, self.model.vectorize(&self.tokens[id])))
            .collect();
        let point = |k: Option<usize>, predict: &dyn Fn(&SparseVector) -> Result<Label>| -> Result<CurvePoint> {
            let mut right = [0usize; 2];
            let mut total = [0usize; 2];
            for (truth, v) in &tests {
                total[truth.index()] += 1;
                if predict(v)? == *truth {
                    right[truth.index()] += 1;
                }
            }
            let ratio = |c: usize| right[c] as f64 / total[c].max(1) as f64;
            Ok(CurvePoint {
                k,
                legitimate: ratio(Label::Legitimate.index()),
                spam: ratio(Label::Spam.index()),
            })
        };
        let mut out = vec![point(None, &|v| Ok(self.model.nb_only(v)))?];
        for k in 1..=max_k.min(self.model.training_size()) {
            let cfg = self.config(k, metric, alpha, beta)?;
            out.push(point(Some(k), &|v| self.model.classify_vector(v, &cfg).map(|d| d.label))?);
        }
        Ok(out)
    }

    /// Text of the `index`-th held-out message of one class, wrapping around.
    pub fn sample(&self, spam: bool, index: usize) -> String {
        let want = if spam { Label::Spam } else { Label::Legitimate };
        let held_out: Vec<usize> = self
            .split
            .test_ids
            .iter()
            .copied()
            .filter(|&id| self.corpus.emails()[id].label == want)
            .collect();
        match held_out.len() {
            0 => String::new(),
            n => String::from_utf8_lossy(&self.corpus.emails()[held_out[index % n]].bytes).into_owned(),
        }
    }
}
