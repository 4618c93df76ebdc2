//! Similarity measures between sparse count vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Smaller distance is nearer.
    Euclidean,
    /// Cosine of the angle between the vectors; larger is nearer.
    Cosine,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Euclidean, Metric::Cosine];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Cosine => "cosine",
        }
    }

    /// Raw score of `v` relative to `u` under this metric.
    pub fn score(self, u: &SparseVector, v: &SparseVector) -> f64 {
        match self {
            Metric::Euclidean => euclidean_distance(u, v),
            Metric::Cosine => cosine_similarity(u, v),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(Metric::Euclidean),
            "cosine" | "angle" => Ok(Metric::Cosine),
            other => Err(Error::Argument(format!(
                "unknown metric `{other}` (expected euclidean or cosine)"
            ))),
        }
    }
}

/// Walks the union of stored indices of two vectors, yielding `(a, b)` count
/// pairs where one side may be zero.
fn merge<'a>(
    u: &'a SparseVector,
    v: &'a SparseVector,
) -> impl Iterator<Item = (u32, u32)> + 'a {
    let (a, b) = (u.entries(), v.entries());
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || match (a.get(i), b.get(j)) {
        (Some(&(ia, ca)), Some(&(ib, cb))) => match ia.cmp(&ib) {
            Ordering::Equal => {
                i += 1;
                j += 1;
                Some((ca, cb))
            }
            Ordering::Less => {
                i += 1;
                Some((ca, 0))
            }
            Ordering::Greater => {
                j += 1;
                Some((0, cb))
            }
        },
        (Some(&(_, ca)), None) => {
            i += 1;
            Some((ca, 0))
        }
        (None, Some(&(_, cb))) => {
            j += 1;
            Some((0, cb))
        }
        (None, None) => None,
    })
}

/// Exact squared Euclidean distance.
pub fn squared_euclidean(u: &SparseVector, v: &SparseVector) -> u128 {
    merge(u, v)
        .map(|(a, b)| {
            let d = (a as i64 - b as i64).unsigned_abs() as u128;
            d * d
        })
        .sum()
}

/// Exact dot product over shared indices.
pub fn dot(u: &SparseVector, v: &SparseVector) -> u128 {
    merge(u, v).map(|(a, b)| a as u128 * b as u128).sum()
}

pub fn euclidean_distance(u: &SparseVector, v: &SparseVector) -> f64 {
    (squared_euclidean(u, v) as f64).sqrt()
}

/// `u·v / (|u| |v|)`, or 0 when either vector is empty.
pub fn cosine_similarity(u: &SparseVector, v: &SparseVector) -> f64 {
    if u.is_empty() || v.is_empty() {
        return 0.0;
    }
    let norms = (u.squared_norm() as f64 * v.squared_norm() as f64).sqrt();
    (dot(u, v) as f64 / norms).min(1.0)
}

/// Exact ordering key for cosine ranking against a fixed query: the
/// similarity is `dot / (|q| sqrt(norm_sq))`, and `|q|` is shared.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CosineKey {
    pub dot: u128,
    pub norm_sq: u128,
}

impl CosineKey {
    /// `Greater` means `self` is more similar to the query.
    pub fn cmp_similarity(&self, other: &CosineKey) -> Ordering {
        match (self.dot, other.dot) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {}
        }
        // dot_a / sqrt(n_a) vs dot_b / sqrt(n_b)  <=>  dot_a² n_b vs dot_b² n_a
        let lhs = self
            .dot
            .checked_mul(self.dot)
            .and_then(|x| x.checked_mul(other.norm_sq));
        let rhs = other
            .dot
            .checked_mul(other.dot)
            .and_then(|x| x.checked_mul(self.norm_sq));
        match (lhs, rhs) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => {
                let a = self.dot as f64 / (self.norm_sq as f64).sqrt();
                let b = other.dot as f64 / (other.norm_sq as f64).sqrt();
                a.total_cmp(&b)
            }
        }
    }
}
