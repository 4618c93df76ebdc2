//! End-to-end experiments: grid sweeps over train fraction, feature count,
//! k and metric, report rendering, and a synthetic corpus generator.

mod eval;
mod report;
mod synth;

pub use eval::{
    evaluate_cell, run_sweep, Cell, CellOutcome, Confusion, EvaluationReport, ImprovementSummary,
    KSetting, ReducedDimensionCheck, ReportMetadata, SweepGrid,
};
pub use report::{format_ratio, render_report, ReportFormat, TSV_HEADER};
pub use synth::{generate_synthetic_corpus, synthesize, VocabProfile};
