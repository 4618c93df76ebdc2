//! Spam filtering with a naive Bayes posterior blended with a
//! k-nearest-neighbor vote.
//!
//! The pipeline runs tokenize → select features by information gain →
//! vectorize to raw counts → classify → evaluate. Each stage lives in its
//! own module:
//!
//! * [`corpus`]: directory ingestion, stratified splits, model persistence
//! * [`tokenizer`]: email bytes to lowercase word/number tokens
//! * [`features`]: information gain ranking and sparse count vectors
//! * [`classifiers`]: naive Bayes, kNN under two metrics, score blending
//! * [`harness`]: experiment sweeps, report rendering, synthetic corpora

pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod features;
pub mod harness;
pub mod tokenizer;

pub use classifiers::{
    ClassProbs, ClassScores, HybridConfig, HybridModel, KnnIndex, Metric, NaiveBayesModel,
};
pub use corpus::{Corpus, CorpusSplit, Label, RawEmail};
pub use error::{Error, Result};
pub use features::{FeatureSet, SparseVector};
pub use tokenizer::{tokenize_email, TokenSequence};
