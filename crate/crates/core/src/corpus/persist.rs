//! Versioned JSON model files.
//!
//! The document carries a magic string, a format version and a SHA-256 of
//! the compact JSON encoding of every other field. Loading checks all three
//! before building a model, so a rejected file never yields a partial model.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::Label;
use crate::classifiers::{HybridModel, IndexedDoc, KnnIndex, NaiveBayesModel};
use crate::error::{Error, Result};
use crate::features::{FeatureSet, SparseVector};

pub const MAGIC: &str = "nbknn-model";
pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct PerClass<T> {
    legitimate: T,
    spam: T,
}

#[derive(Debug, Serialize, Deserialize)]
struct TrainingVector {
    id: usize,
    label: Label,
    entries: SparseVector,
}

#[derive(Debug, Serialize, Deserialize)]
struct Payload {
    vocabulary: Vec<String>,
    class_priors: PerClass<f64>,
    feature_counts: PerClass<Vec<u64>>,
    class_token_totals: PerClass<u64>,
    smoothing: f64,
    training_vectors: Vec<TrainingVector>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    magic: String,
    format_version: u64,
    checksum: String,
    #[serde(flatten)]
    payload: Payload,
}

/// Only the fields needed to decide whether to read the rest.
#[derive(Deserialize)]
struct Header {
    magic: Option<String>,
    format_version: Option<u64>,
}

fn checksum(payload: &Payload) -> Result<String> {
    let bytes = serde_json::to_vec(payload).map_err(|e| Error::Format(e.to_string()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn model_to_json(model: &HybridModel) -> Result<String> {
    let nb = model.naive_bayes();
    let priors = nb.priors();
    let payload = Payload {
        vocabulary: model.features().features().to_vec(),
        class_priors: PerClass {
            legitimate: priors.legitimate,
            spam: priors.spam,
        },
        feature_counts: PerClass {
            legitimate: nb.feature_counts(Label::Legitimate).to_vec(),
            spam: nb.feature_counts(Label::Spam).to_vec(),
        },
        class_token_totals: PerClass {
            legitimate: nb.class_token_total(Label::Legitimate),
            spam: nb.class_token_total(Label::Spam),
        },
        smoothing: nb.smoothing(),
        training_vectors: model
            .index()
            .docs()
            .iter()
            .map(|d| TrainingVector {
                id: d.id,
                label: d.label,
                entries: d.vector.clone(),
            })
            .collect(),
    };
    let file = ModelFile {
        magic: MAGIC.to_string(),
        format_version: FORMAT_VERSION,
        checksum: checksum(&payload)?,
        payload,
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::Format(e.to_string()))
}

pub fn model_from_json(text: &str) -> Result<HybridModel> {
    let header: Header =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("not a model file: {e}")))?;
    if header.magic.as_deref() != Some(MAGIC) {
        return Err(Error::Format(format!(
            "missing or wrong magic (expected \"{MAGIC}\")"
        )));
    }
    match header.format_version {
        Some(FORMAT_VERSION) => {}
        Some(found) => {
            return Err(Error::Version {
                found,
                expected: FORMAT_VERSION,
            })
        }
        None => return Err(Error::Format("missing format_version".into())),
    }

    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if checksum(&file.payload)? != file.checksum {
        return Err(Error::Checksum);
    }

    let p = file.payload;
    let bad = |e: Error| Error::Format(e.to_string());
    let features = FeatureSet::from_vocabulary(p.vocabulary).map_err(bad)?;
    let nb = NaiveBayesModel::from_parts(
        [p.class_priors.legitimate, p.class_priors.spam],
        [p.feature_counts.legitimate, p.feature_counts.spam],
        [p.class_token_totals.legitimate, p.class_token_totals.spam],
        p.smoothing,
    )
    .map_err(bad)?;
    let index = KnnIndex::new(
        p.training_vectors
            .into_iter()
            .map(|v| IndexedDoc {
                id: v.id,
                label: v.label,
                vector: v.entries,
            })
            .collect(),
    )
    .map_err(bad)?;
    HybridModel::from_parts(features, nb, index).map_err(bad)
}

pub fn save_model(model: &HybridModel, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, model_to_json(model)?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<HybridModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Ingest {
        path: path.to_path_buf(),
        source,
    })?;
    model_from_json(&text)
}
