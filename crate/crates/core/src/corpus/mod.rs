//! Labeled email corpora: ingestion from a `spam/` + `ham/` directory pair,
//! stratified train/test splits, and model persistence.

mod persist;
mod split;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use persist::{load_model, model_from_json, model_to_json, save_model, FORMAT_VERSION, MAGIC};
pub use split::{split_corpus, CorpusSplit};

/// The two categories an email can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Legitimate,
    Spam,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Legitimate, Label::Spam];

    /// Dense index used for per-class arrays (legitimate = 0, spam = 1).
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Label::Legitimate => 0,
            Label::Spam => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Legitimate => "legitimate",
            Label::Spam => "spam",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEmail {
    pub id: usize,
    pub label: Label,
    /// Header and body exactly as stored, undecoded.
    pub bytes: Vec<u8>,
}

/// An immutable, densely numbered collection of labeled emails.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    emails: Vec<RawEmail>,
}

impl Corpus {
    /// Builds a corpus from in-memory messages, assigning ids in the order given.
    pub fn from_messages<I, B>(messages: I) -> Self
    where
        I: IntoIterator<Item = (Label, B)>,
        B: Into<Vec<u8>>,
    {
        let emails = messages
            .into_iter()
            .enumerate()
            .map(|(id, (label, bytes))| RawEmail {
                id,
                label,
                bytes: bytes.into(),
            })
            .collect();
        Corpus { emails }
    }

    pub fn emails(&self) -> &[RawEmail] {
        &self.emails
    }

    pub fn len(&self) -> usize {
        self.emails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emails.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&RawEmail> {
        self.emails.get(id)
    }

    pub fn count(&self, label: Label) -> usize {
        self.emails.iter().filter(|e| e.label == label).count()
    }

    /// SHA-256 over every (label, length, bytes) triple in id order, hex encoded.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for email in &self.emails {
            hasher.update([email.label.index() as u8]);
            hasher.update((email.bytes.len() as u64).to_le_bytes());
            hasher.update(&email.bytes);
        }
        hex::encode(hasher.finalize())
    }
}

/// Loads `root/spam/*` and `root/ham/*`. Spam files get the lower ids; within
/// each class files are numbered in lexicographic filename order.
pub fn load_corpus(root: impl AsRef<Path>) -> Result<Corpus> {
    let root = root.as_ref();
    let mut messages = Vec::new();
    for (dir, label) in [("spam", Label::Spam), ("ham", Label::Legitimate)] {
        let class_dir = root.join(dir);
        if !class_dir.is_dir() {
            return Err(Error::Config(format!(
                "corpus directory {} has no `{dir}/` subdirectory",
                root.display()
            )));
        }
        for path in list_files(&class_dir)? {
            let bytes = fs::read(&path).map_err(|source| Error::Ingest {
                path: path.clone(),
                source,
            })?;
            messages.push((label, bytes));
        }
    }
    Ok(Corpus::from_messages(messages))
}

fn list_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let ingest = |source| Error::Ingest {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(ingest)? {
        let entry = entry.map_err(ingest)?;
        if !entry.file_type().map_err(ingest)?.is_dir() {
            files.push(entry.path());
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}
