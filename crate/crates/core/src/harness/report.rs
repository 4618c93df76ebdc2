//! Text-table and TSV rendering of sweep reports.
//!
//! Text output has, per metric, one table of legitimate-class accuracy and
//! one of spam-class accuracy. Rows are `-` (naive Bayes alone) and each k;
//! column groups are V with one sub-column per train fraction. Column maxima
//! carry a `*`.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::str::FromStr;

use super::eval::{cmp_ratio, CellOutcome, Confusion, EvaluationReport, KSetting};
use crate::classifiers::Metric;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Table,
    Tsv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "tsv" => Ok(ReportFormat::Tsv),
            other => Err(Error::Argument(format!(
                "unknown format `{other}` (expected table or tsv)"
            ))),
        }
    }
}

/// `num / den` to four decimals, round half to even, with the leading zero
/// dropped below one (`.9923`).
pub fn format_ratio(num: u64, den: u64) -> String {
    if den == 0 {
        return "n/a".to_string();
    }
    let scaled = num as u128 * 10_000;
    let (den, mut q) = (den as u128, scaled / den as u128);
    let twice_rem = 2 * (scaled % den);
    if twice_rem > den || (twice_rem == den && q % 2 == 1) {
        q += 1;
    }
    let (whole, frac) = (q / 10_000, q % 10_000);
    if whole == 0 {
        format!(".{frac:04}")
    } else {
        format!("{whole}.{frac:04}")
    }
}

/// Like [`format_ratio`] but always with a leading digit (`0.9923`).
fn format_ratio_plain(num: u64, den: u64) -> String {
    let s = format_ratio(num, den);
    if s.starts_with('.') {
        format!("0{s}")
    } else {
        s
    }
}

fn format_fraction(f: f64) -> String {
    format!("{f}")
}

pub fn render_report(report: &EvaluationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => render_tables(report),
        ReportFormat::Tsv => render_tsv(report),
    }
}

#[derive(Clone, Copy)]
enum Class {
    Legitimate,
    Spam,
}

impl Class {
    fn ratio(self, c: &Confusion) -> (u64, u64) {
        match self {
            Class::Legitimate => c.legitimate_ratio(),
            Class::Spam => c.spam_ratio(),
        }
    }

    fn title(self) -> &'static str {
        match self {
            Class::Legitimate => "\"legitimate\" -> \"legitimate\"",
            Class::Spam => "\"spam\" -> \"spam\"",
        }
    }
}

const CELL_WIDTH: usize = 8;

fn render_tables(report: &EvaluationReport) -> String {
    let grid = &report.grid;
    let meta = &report.metadata;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# seed {} | corpus {} | {} documents ({} spam, {} legitimate) | alpha {} beta {}",
        meta.seed,
        meta.corpus_fingerprint,
        meta.documents,
        meta.spam,
        meta.legitimate,
        grid.alpha,
        grid.beta
    );

    for &metric in &grid.metrics {
        for class in [Class::Legitimate, Class::Spam] {
            out.push('\n');
            let _ = writeln!(out, "[{metric}] {}", class.title());
            render_one_table(&mut out, report, metric, class);
        }
    }

    let imp = report.improvement();
    out.push('\n');
    let _ = writeln!(
        out,
        "best-k hybrid >= baseline in {} of {} configurations ({} strictly better)",
        imp.at_least_baseline, imp.configurations, imp.strictly_better
    );
    let per_k: Vec<String> = imp
        .per_k_at_least
        .iter()
        .map(|(k, n)| format!("k={k}: {n}"))
        .collect();
    let _ = writeln!(out, "per-k >= baseline: {}", per_k.join(", "));

    let skipped: Vec<String> = report
        .cells
        .iter()
        .filter_map(|c| match &c.outcome {
            CellOutcome::Skipped(why) => Some(format!(
                "{} f={} V={} k={}: {why}",
                c.metric,
                format_fraction(c.fraction),
                c.dimension,
                c.k
            )),
            CellOutcome::Evaluated(_) => None,
        })
        .collect();
    for line in skipped {
        let _ = writeln!(out, "skipped {line}");
    }
    out
}

fn render_one_table(out: &mut String, report: &EvaluationReport, metric: Metric, class: Class) {
    let grid = &report.grid;
    let rows = grid.rows();
    let group_width = CELL_WIDTH * grid.fractions.len();

    // Column maxima, one per (V, fraction).
    let mut maxima: Vec<Option<(u64, u64)>> = Vec::new();
    for &dim in &grid.dims {
        for &fraction in &grid.fractions {
            let best = rows
                .iter()
                .filter_map(|&k| report.cell(metric, fraction, dim, k))
                .filter_map(|c| c.outcome.confusion())
                .map(|c| class.ratio(c))
                .filter(|r| r.1 > 0)
                .max_by(|a, b| cmp_ratio(*a, *b));
            maxima.push(best);
        }
    }

    let _ = write!(out, "{:<4}", "k");
    for &dim in &grid.dims {
        let _ = write!(out, "| {:<w$}", format!("V = {dim}"), w = group_width);
    }
    end_line(out);
    let _ = write!(out, "{:<4}", "");
    for _ in &grid.dims {
        out.push_str("| ");
        for &fraction in &grid.fractions {
            let _ = write!(out, "{:<w$}", format_fraction(fraction), w = CELL_WIDTH);
        }
    }
    end_line(out);

    for &k in &rows {
        let _ = write!(out, "{:<4}", k.to_string());
        let mut col = 0;
        for &dim in &grid.dims {
            out.push_str("| ");
            for &fraction in &grid.fractions {
                let text = match report
                    .cell(metric, fraction, dim, k)
                    .and_then(|c| c.outcome.confusion())
                {
                    Some(c) => {
                        let r = class.ratio(c);
                        let mut s = format_ratio(r.0, r.1);
                        if r.1 > 0 && maxima[col].is_some_and(|m| cmp_ratio(r, m) == Ordering::Equal) {
                            s.push('*');
                        }
                        s
                    }
                    None => "n/a".to_string(),
                };
                let _ = write!(out, "{text:<w$}", w = CELL_WIDTH);
                col += 1;
            }
        }
        end_line(out);
    }
}

/// Drops the padding after the last cell and ends the line.
fn end_line(out: &mut String) {
    let trimmed = out.trim_end_matches(' ').len();
    out.truncate(trimmed);
    out.push('\n');
}

pub const TSV_HEADER: &str = "metric\tfraction\tV\tk\tlegit_acc\tspam_acc\tfp\tfn\ttp\ttn";

fn render_tsv(report: &EvaluationReport) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for cell in &report.cells {
        let k = match cell.k {
            KSetting::Baseline => "-".to_string(),
            KSetting::Hybrid(k) => k.to_string(),
        };
        let _ = write!(
            out,
            "{}\t{}\t{}\t{}\t",
            cell.metric,
            format_fraction(cell.fraction),
            cell.dimension,
            k
        );
        match &cell.outcome {
            CellOutcome::Evaluated(c) => {
                let (ln, ld) = c.legitimate_ratio();
                let (sn, sd) = c.spam_ratio();
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    format_ratio_plain(ln, ld),
                    format_ratio_plain(sn, sd),
                    c.fp,
                    c.fn_,
                    c.tp,
                    c.tn
                );
            }
            CellOutcome::Skipped(_) => out.push_str("n/a\tn/a\tn/a\tn/a\tn/a\tn/a\n"),
        }
    }
    out
}
