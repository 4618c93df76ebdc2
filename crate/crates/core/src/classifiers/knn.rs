//! Exact k-nearest-neighbor search by linear scan.
//!
//! Ranking uses integer arithmetic for both metrics, so neighbors that are
//! mathematically tied compare equal and fall back to ascending doc id.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::metric::{dot, squared_euclidean, CosineKey, Metric};
use super::ClassProbs;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;

/// A stored training document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedDoc {
    pub id: usize,
    pub label: Label,
    pub vector: SparseVector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub id: usize,
    pub label: Label,
    /// Euclidean distance or cosine similarity, depending on the metric.
    pub score: f64,
}

type RankFn = dyn Fn(&usize, &usize) -> Ordering;

/// The training set, held in ascending doc-id order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnnIndex {
    docs: Vec<IndexedDoc>,
}

impl KnnIndex {
    pub fn new(mut docs: Vec<IndexedDoc>) -> Result<Self> {
        docs.sort_by_key(|d| d.id);
        if let Some(w) = docs.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::argument(format!("duplicate document id {}", w[0].id)));
        }
        Ok(KnnIndex { docs })
    }

    pub fn docs(&self) -> &[IndexedDoc] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// The `k` nearest training documents to `query`, best first; ties go to
    /// the lower doc id.
    pub fn search(&self, query: &SparseVector, k: usize, metric: Metric) -> Result<Vec<Neighbor>> {
        if k == 0 || k > self.docs.len() {
            return Err(Error::argument(format!(
                "k = {k} must lie in 1..={} (the training set size)",
                self.docs.len()
            )));
        }

        let mut ranked: Vec<usize> = (0..self.docs.len()).collect();
        let by_rank: Box<RankFn> = match metric {
            Metric::Euclidean => {
                let d: Vec<u128> = self
                    .docs
                    .iter()
                    .map(|doc| squared_euclidean(query, &doc.vector))
                    .collect();
                Box::new(move |&a, &b| d[a].cmp(&d[b]).then(a.cmp(&b)))
            }
            Metric::Cosine => {
                let keys: Vec<CosineKey> = self
                    .docs
                    .iter()
                    .map(|doc| CosineKey {
                        dot: dot(query, &doc.vector),
                        norm_sq: doc.vector.squared_norm(),
                    })
                    .collect();
                Box::new(move |&a, &b| keys[b].cmp_similarity(&keys[a]).then(a.cmp(&b)))
            }
        };
        // Positions equal id order, so comparing positions breaks ties by id.
        if k < ranked.len() {
            ranked.select_nth_unstable_by(k - 1, &by_rank);
            ranked.truncate(k);
        }
        ranked.sort_unstable_by(&by_rank);

        Ok(ranked
            .into_iter()
            .map(|i| {
                let doc = &self.docs[i];
                Neighbor {
                    id: doc.id,
                    label: doc.label,
                    score: metric.score(query, &doc.vector),
                }
            })
            .collect())
    }
}

pub fn knn_search(
    index: &KnnIndex,
    query: &SparseVector,
    k: usize,
    metric: Metric,
) -> Result<Vec<Neighbor>> {
    index.search(query, k, metric)
}

/// `(n_G / k, n_S / k)` over the neighbor list.
pub fn knn_probability(neighbors: &[Neighbor]) -> Result<ClassProbs> {
    if neighbors.is_empty() {
        return Err(Error::argument("kNN probability needs at least one neighbor"));
    }
    let k = neighbors.len() as f64;
    let n_spam = neighbors.iter().filter(|n| n.label == Label::Spam).count() as f64;
    let n_legit = k - n_spam;
    Ok(ClassProbs {
        legitimate: n_legit / k,
        spam: n_spam / k,
    })
}
