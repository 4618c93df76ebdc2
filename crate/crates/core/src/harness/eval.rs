//! Experiment cells and full grid sweeps.
//!
//! A cell is one (metric, train fraction, V, k) point. The `-` row of each
//! table is the naive Bayes baseline, with the kNN stage switched off.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classifiers::{
    combine_scores, knn_probability, ClassProbs, HybridModel, Metric, Neighbor, DEFAULT_THRESHOLD,
};
use crate::corpus::{split_corpus, Corpus, CorpusSplit, Label};
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::tokenizer::{tokenize_email, TokenSequence};

/// A row of the report: the naive Bayes baseline or a hybrid with `k` neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KSetting {
    Baseline,
    Hybrid(usize),
}

impl fmt::Display for KSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSetting::Baseline => f.write_str("-"),
            KSetting::Hybrid(k) => write!(f, "{k}"),
        }
    }
}

/// 2×2 confusion counts with spam as the positive class: a false positive is
/// a legitimate message classified as spam.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Confusion {
    /// spam → spam
    pub tp: u64,
    /// legitimate → legitimate
    pub tn: u64,
    /// legitimate → spam
    pub fp: u64,
    /// spam → legitimate
    pub fn_: u64,
}

impl Confusion {
    pub fn record(&mut self, truth: Label, predicted: Label) {
        match (truth, predicted) {
            (Label::Spam, Label::Spam) => self.tp += 1,
            (Label::Legitimate, Label::Legitimate) => self.tn += 1,
            (Label::Legitimate, Label::Spam) => self.fp += 1,
            (Label::Spam, Label::Legitimate) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn legitimate_total(&self) -> u64 {
        self.tn + self.fp
    }

    pub fn spam_total(&self) -> u64 {
        self.tp + self.fn_
    }

    /// Correct legitimate over total legitimate, as `(numerator, denominator)`.
    pub fn legitimate_ratio(&self) -> (u64, u64) {
        (self.tn, self.legitimate_total())
    }

    pub fn spam_ratio(&self) -> (u64, u64) {
        (self.tp, self.spam_total())
    }

    /// Fraction of legitimate test messages kept; NaN if there were none.
    pub fn legitimate_accuracy(&self) -> f64 {
        ratio(self.legitimate_ratio())
    }

    pub fn spam_accuracy(&self) -> f64 {
        ratio(self.spam_ratio())
    }

    /// Mean of the two per-class accuracies.
    pub fn mean_class_accuracy(&self) -> f64 {
        (self.legitimate_accuracy() + self.spam_accuracy()) / 2.0
    }
}

fn ratio((num, den): (u64, u64)) -> f64 {
    if den == 0 {
        f64::NAN
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CellOutcome {
    Evaluated(Confusion),
    Skipped(String),
}

impl CellOutcome {
    pub fn confusion(&self) -> Option<&Confusion> {
        match self {
            CellOutcome::Evaluated(c) => Some(c),
            CellOutcome::Skipped(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub metric: Metric,
    pub fraction: f64,
    /// Requested feature count V.
    pub dimension: usize,
    pub k: KSetting,
    pub outcome: CellOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub fractions: Vec<f64>,
    pub dims: Vec<usize>,
    pub ks: Vec<usize>,
    pub metrics: Vec<Metric>,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for SweepGrid {
    /// Three splits, four feature counts, k = 1..5, both metrics.
    fn default() -> Self {
        SweepGrid {
            fractions: vec![0.25, 0.3, 0.4],
            dims: vec![500, 1000, 1500, 2000],
            ks: (1..=5).collect(),
            metrics: Metric::ALL.to_vec(),
            seed: 0,
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if self.fractions.is_empty()
            || self.dims.is_empty()
            || self.ks.is_empty()
            || self.metrics.is_empty()
        {
            return Err(Error::argument("every sweep axis needs at least one value"));
        }
        if self.ks.contains(&0) {
            return Err(Error::argument("k values must be at least 1"));
        }
        if self.dims.contains(&0) {
            return Err(Error::argument("feature counts must be at least 1"));
        }
        for &f in &self.fractions {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::argument(format!(
                    "train fraction {f} is not strictly between 0 and 1"
                )));
            }
        }
        for (name, w) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::argument(format!("{name} must be positive, got {w}")));
            }
        }
        Ok(())
    }

    /// Rows of every table: the baseline, then each k.
    pub fn rows(&self) -> Vec<KSetting> {
        std::iter::once(KSetting::Baseline)
            .chain(self.ks.iter().map(|&k| KSetting::Hybrid(k)))
            .collect()
    }

    pub fn cell_count(&self) -> usize {
        self.metrics.len() * self.fractions.len() * self.dims.len() * (self.ks.len() + 1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub seed: u64,
    pub corpus_fingerprint: String,
    pub documents: usize,
    pub spam: usize,
    pub legitimate: usize,
    /// Wall-clock time of the run, when the caller records one. Never rendered.
    pub generated_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub grid: SweepGrid,
    /// Ordered by metric, fraction, V, then row.
    pub cells: Vec<Cell>,
    pub metadata: ReportMetadata,
}

/// How often the best hybrid row matched or beat the baseline, one
/// configuration being a (metric, fraction, V) triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementSummary {
    pub configurations: usize,
    /// Best-k mean per-class accuracy ≥ baseline.
    pub at_least_baseline: usize,
    /// Best-k mean per-class accuracy > baseline.
    pub strictly_better: usize,
    /// For each k: configurations where that k alone is ≥ baseline.
    pub per_k_at_least: Vec<(usize, usize)>,
}

/// Hybrid at the smallest V and k = 1 against the baseline at the largest V,
/// on legitimate-class accuracy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedDimensionCheck {
    pub metric: Metric,
    pub fraction: f64,
    pub small_dimension: usize,
    pub large_dimension: usize,
    pub hybrid_legitimate: f64,
    pub baseline_legitimate: f64,
}

impl ReducedDimensionCheck {
    pub fn holds(&self) -> bool {
        self.hybrid_legitimate >= self.baseline_legitimate
    }
}

impl EvaluationReport {
    pub fn cell(&self, metric: Metric, fraction: f64, dimension: usize, k: KSetting) -> Option<&Cell> {
        self.cells.iter().find(|c| {
            c.metric == metric && c.fraction == fraction && c.dimension == dimension && c.k == k
        })
    }

    fn confusion(&self, metric: Metric, fraction: f64, dimension: usize, k: KSetting) -> Option<&Confusion> {
        self.cell(metric, fraction, dimension, k)
            .and_then(|c| c.outcome.confusion())
    }

    pub fn improvement(&self) -> ImprovementSummary {
        let mut summary = ImprovementSummary {
            configurations: 0,
            at_least_baseline: 0,
            strictly_better: 0,
            per_k_at_least: self.grid.ks.iter().map(|&k| (k, 0)).collect(),
        };
        for &metric in &self.grid.metrics {
            for &fraction in &self.grid.fractions {
                for &dim in &self.grid.dims {
                    let Some(base) = self.confusion(metric, fraction, dim, KSetting::Baseline) else {
                        continue;
                    };
                    let base = base.mean_class_accuracy();
                    let mut best: Option<f64> = None;
                    for (slot, &k) in self.grid.ks.iter().enumerate() {
                        let Some(c) = self.confusion(metric, fraction, dim, KSetting::Hybrid(k)) else {
                            continue;
                        };
                        let acc = c.mean_class_accuracy();
                        if acc >= base {
                            summary.per_k_at_least[slot].1 += 1;
                        }
                        if best.is_none_or(|b| acc > b) {
                            best = Some(acc);
                        }
                    }
                    let Some(best) = best else { continue };
                    summary.configurations += 1;
                    if best >= base {
                        summary.at_least_baseline += 1;
                    }
                    if best > base {
                        summary.strictly_better += 1;
                    }
                }
            }
        }
        summary
    }

    pub fn reduced_dimension_checks(&self) -> Vec<ReducedDimensionCheck> {
        let (Some(&small), Some(&large)) = (self.grid.dims.iter().min(), self.grid.dims.iter().max())
        else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for &metric in &self.grid.metrics {
            for &fraction in &self.grid.fractions {
                let hybrid = self.confusion(metric, fraction, small, KSetting::Hybrid(1));
                let base = self.confusion(metric, fraction, large, KSetting::Baseline);
                if let (Some(h), Some(b)) = (hybrid, base) {
                    out.push(ReducedDimensionCheck {
                        metric,
                        fraction,
                        small_dimension: small,
                        large_dimension: large,
                        hybrid_legitimate: h.legitimate_accuracy(),
                        baseline_legitimate: b.legitimate_accuracy(),
                    });
                }
            }
        }
        out
    }
}

/// One split's worth of prepared data: tokens for every corpus document and
/// the split itself.
struct Prepared<'a> {
    corpus: &'a Corpus,
    tokens: &'a [TokenSequence],
    split: &'a CorpusSplit,
}

impl Prepared<'_> {
    fn train(&self, dimension: usize) -> Result<HybridModel> {
        HybridModel::train(
            self.split
                .train_ids
                .iter()
                .map(|&id| (id, self.corpus.emails()[id].label, &self.tokens[id])),
            dimension,
        )
    }

    fn test_vectors(&self, model: &HybridModel) -> Vec<(Label, SparseVector)> {
        self.split
            .test_ids
            .iter()
            .map(|&id| (self.corpus.emails()[id].label, model.vectorize(&self.tokens[id])))
            .collect()
    }
}

fn tokenize_corpus(corpus: &Corpus) -> Vec<TokenSequence> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        corpus.emails().par_iter().map(|e| tokenize_email(&e.bytes)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        corpus.emails().iter().map(|e| tokenize_email(&e.bytes)).collect()
    }
}

fn map_in_order<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

fn skip_reason(k: usize, train: usize) -> String {
    format!("k = {k} exceeds the {train} training documents")
}

/// Runs one grid point end to end: train on the split's training side,
/// classify every test document, count outcomes.
pub fn evaluate_cell(
    corpus: &Corpus,
    split: &CorpusSplit,
    dimension: usize,
    k: KSetting,
    metric: Metric,
    alpha: f64,
    beta: f64,
) -> Result<CellOutcome> {
    if let KSetting::Hybrid(k) = k {
        if k > split.train_len() {
            return Ok(CellOutcome::Skipped(skip_reason(k, split.train_len())));
        }
    }
    let tokens = tokenize_corpus(corpus);
    let prepared = Prepared {
        corpus,
        tokens: &tokens,
        split,
    };
    let model = prepared.train(dimension)?;
    let cfg = crate::classifiers::HybridConfig {
        alpha,
        beta,
        k: match k {
            KSetting::Baseline => 1,
            KSetting::Hybrid(k) => k,
        },
        metric,
        threshold: DEFAULT_THRESHOLD,
    };
    cfg.validate(model.training_size())?;

    let tests = prepared.test_vectors(&model);
    let predictions = map_in_order(&tests, |(_, v)| match k {
        KSetting::Baseline => Ok(model.nb_only(v)),
        KSetting::Hybrid(_) => model.classify_vector(v, &cfg).map(|d| d.label),
    });
    let mut confusion = Confusion::default();
    for ((truth, _), predicted) in tests.iter().zip(predictions) {
        confusion.record(*truth, predicted?);
    }
    Ok(CellOutcome::Evaluated(confusion))
}

/// Every grid cell, with one model per (fraction, V) and one neighbor search
/// per test document and metric shared across all k.
pub fn run_sweep(corpus: &Corpus, grid: &SweepGrid) -> Result<EvaluationReport> {
    grid.validate()?;
    let tokens = tokenize_corpus(corpus);
    let max_k = grid.ks.iter().copied().max().unwrap_or(1);

    // (metric, fraction, dim) -> row outcomes, in grid.rows() order.
    let mut blocks: Vec<((Metric, usize, usize), Vec<CellOutcome>)> = Vec::new();
    for (fi, &fraction) in grid.fractions.iter().enumerate() {
        let split = split_corpus(corpus, fraction, grid.seed)?;
        let prepared = Prepared {
            corpus,
            tokens: &tokens,
            split: &split,
        };
        let train_len = split.train_len();
        for (di, &dim) in grid.dims.iter().enumerate() {
            let model = prepared.train(dim)?;
            let tests = prepared.test_vectors(&model);
            let search_k = max_k.min(train_len);

            struct PerDoc {
                nb: ClassProbs,
                baseline: Label,
                neighbors: Vec<Vec<Neighbor>>,
            }
            let per_doc: Vec<Result<PerDoc>> = map_in_order(&tests, |(_, v)| {
                let nb = model.naive_bayes().posterior(v);
                let neighbors = grid
                    .metrics
                    .iter()
                    .map(|&m| model.index().search(v, search_k, m))
                    .collect::<Result<Vec<_>>>()?;
                Ok(PerDoc {
                    nb,
                    baseline: model.nb_only(v),
                    neighbors,
                })
            });
            let per_doc: Vec<PerDoc> = per_doc.into_iter().collect::<Result<_>>()?;

            let mut baseline = Confusion::default();
            for ((truth, _), doc) in tests.iter().zip(&per_doc) {
                baseline.record(*truth, doc.baseline);
            }

            for (mi, &metric) in grid.metrics.iter().enumerate() {
                let mut row = vec![CellOutcome::Evaluated(baseline)];
                for &k in &grid.ks {
                    if k > train_len {
                        row.push(CellOutcome::Skipped(skip_reason(k, train_len)));
                        continue;
                    }
                    let mut confusion = Confusion::default();
                    for ((truth, _), doc) in tests.iter().zip(&per_doc) {
                        let pr_knn = knn_probability(&doc.neighbors[mi][..k])?;
                        let scores = combine_scores(doc.nb, pr_knn, grid.alpha, grid.beta)?;
                        confusion.record(*truth, scores.decide(DEFAULT_THRESHOLD));
                    }
                    row.push(CellOutcome::Evaluated(confusion));
                }
                blocks.push(((metric, fi, di), row));
            }
        }
    }

    blocks.sort_by(|a, b| {
        let (ma, fa, da) = a.0;
        let (mb, fb, db) = b.0;
        let pos = |m: Metric| grid.metrics.iter().position(|&x| x == m);
        pos(ma).cmp(&pos(mb)).then(fa.cmp(&fb)).then(da.cmp(&db))
    });
    let rows = grid.rows();
    let mut cells = Vec::with_capacity(grid.cell_count());
    for ((metric, fi, di), outcomes) in blocks {
        for (&k, outcome) in rows.iter().zip(outcomes) {
            cells.push(Cell {
                metric,
                fraction: grid.fractions[fi],
                dimension: grid.dims[di],
                k,
                outcome,
            });
        }
    }

    Ok(EvaluationReport {
        grid: grid.clone(),
        cells,
        metadata: ReportMetadata {
            seed: grid.seed,
            corpus_fingerprint: corpus.fingerprint(),
            documents: corpus.len(),
            spam: corpus.count(Label::Spam),
            legitimate: corpus.count(Label::Legitimate),
            generated_at: None,
        },
    })
}

/// Exact comparison of two accuracy ratios `a.0 / a.1` and `b.0 / b.1`.
pub(crate) fn cmp_ratio(a: (u64, u64), b: (u64, u64)) -> Ordering {
    (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128))
}
