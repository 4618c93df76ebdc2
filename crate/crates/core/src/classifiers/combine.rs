use serde::{Deserialize, Serialize};

use super::ClassProbs;
use crate::corpus::Label;
use crate::error::{Error, Result};

/// The blended scores behind one decision, kept for auditing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub delta_g: f64,
    pub delta_s: f64,
    pub pr_nb: ClassProbs,
    pub pr_knn: ClassProbs,
}

impl ClassScores {
    /// Legitimate iff `delta_g >= threshold`.
    pub fn decide(&self, threshold: f64) -> Label {
        if self.delta_g >= threshold {
            Label::Legitimate
        } else {
            Label::Spam
        }
    }
}

/// `δ_c = (α Pr_nb[c] + β Pr_knn[c]) / (α + β)` for both classes.
pub fn combine_scores(
    pr_nb: ClassProbs,
    pr_knn: ClassProbs,
    alpha: f64,
    beta: f64,
) -> Result<ClassScores> {
    check_weight("alpha", alpha)?;
    check_weight("beta", beta)?;
    for (name, p) in [("naive Bayes", pr_nb), ("kNN", pr_knn)] {
        if !p.is_distribution() {
            return Err(Error::argument(format!(
                "{name} probabilities must lie in [0, 1] and sum to 1, got {p:?}"
            )));
        }
    }
    let w = alpha + beta;
    Ok(ClassScores {
        delta_g: (alpha * pr_nb.legitimate + beta * pr_knn.legitimate) / w,
        delta_s: (alpha * pr_nb.spam + beta * pr_knn.spam) / w,
        pr_nb,
        pr_knn,
    })
}

pub(crate) fn check_weight(name: &str, w: f64) -> Result<()> {
    if w.is_finite() && w > 0.0 {
        Ok(())
    } else {
        Err(Error::argument(format!("{name} must be a positive number, got {w}")))
    }
}
