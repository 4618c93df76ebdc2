use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nbknn::corpus::{load_corpus, load_model, save_model, split_corpus};
use nbknn::features::DocumentFrequencies;
use nbknn::harness::{
    evaluate_cell, generate_synthetic_corpus, render_report, run_sweep, Cell, EvaluationReport,
    KSetting, ReportFormat, ReportMetadata, SweepGrid, VocabProfile,
};
use nbknn::{tokenize_email, Corpus, Error, HybridConfig, HybridModel, Label, Metric, Result};

#[derive(Parser)]
#[command(name = "nbknn", version, about = "Naive Bayes + kNN spam filter")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the tokens of one message, one per line.
    Tokenize { file: PathBuf },
    /// Rank features of a split's training side by information gain.
    Features {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0)]
        split_seed: u64,
        #[arg(long, default_value_t = 0.4)]
        fraction: f64,
        #[arg(long, default_value_t = 50)]
        top: usize,
    },
    /// Train a model and write it as JSON.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Train on this fraction of a stratified split; omit to use every message.
        #[arg(long)]
        fraction: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        features: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify one message with a saved model.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = OneMetric::Euclidean)]
        metric: OneMetric,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        file: PathBuf,
    },
    /// Evaluate a single grid cell.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.4)]
        fraction: f64,
        #[arg(long, default_value_t = 1000)]
        features: usize,
        /// A k value, or `-` for naive Bayes alone.
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long, value_enum, default_value_t = OneMetric::Euclidean)]
        metric: OneMetric,
    },
    /// Evaluate a full grid and print the accuracy tables.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.3, 0.4])]
        fraction: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [500, 1000, 1500, 2000])]
        features: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4, 5])]
        k: Vec<usize>,
        #[arg(long, value_enum, default_value_t = MetricChoice::Both)]
        metric: MetricChoice,
    },
    /// Write a seeded synthetic corpus as spam/ and ham/ directories.
    GenCorpus {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 300)]
        spam: usize,
        #[arg(long, default_value_t = 600)]
        ham: usize,
        /// Give the classes no words in common.
        #[arg(long)]
        disjoint: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, value_enum, default_value_t = FormatChoice::Table)]
    format: FormatChoice,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OneMetric {
    Euclidean,
    #[value(alias = "angle")]
    Cosine,
}

impl From<OneMetric> for Metric {
    fn from(m: OneMetric) -> Self {
        match m {
            OneMetric::Euclidean => Metric::Euclidean,
            OneMetric::Cosine => Metric::Cosine,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricChoice {
    Euclidean,
    #[value(alias = "angle")]
    Cosine,
    Both,
}

impl MetricChoice {
    fn metrics(self) -> Vec<Metric> {
        match self {
            MetricChoice::Euclidean => vec![Metric::Euclidean],
            MetricChoice::Cosine => vec![Metric::Cosine],
            MetricChoice::Both => Metric::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatChoice {
    Table,
    Tsv,
}

impl From<FormatChoice> for ReportFormat {
    fn from(f: FormatChoice) -> Self {
        match f {
            FormatChoice::Table => ReportFormat::Table,
            FormatChoice::Tsv => ReportFormat::Tsv,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nbknn: {e}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Ingest {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn metadata(corpus: &Corpus, seed: u64) -> ReportMetadata {
    ReportMetadata {
        seed,
        corpus_fingerprint: corpus.fingerprint(),
        documents: corpus.len(),
        spam: corpus.count(Label::Spam),
        legitimate: corpus.count(Label::Legitimate),
        generated_at: None,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Tokenize { file } => emit(&tokenize_email(&read(&file)?).to_string(), None),

        Command::Features {
            corpus,
            split_seed,
            fraction,
            top,
        } => {
            let corpus = load_corpus(&corpus)?;
            let split = split_corpus(&corpus, fraction, split_seed)?;
            let tokens: Vec<_> = split
                .train_ids
                .iter()
                .map(|&id| {
                    let e = &corpus.emails()[id];
                    (e.label, tokenize_email(&e.bytes))
                })
                .collect();
            let df = DocumentFrequencies::from_documents(tokens.iter().map(|(l, t)| (*l, t)));
            let mut text = String::new();
            for (token, gain) in df.ranked().into_iter().take(top) {
                text.push_str(&format!("{token}\t{gain}\n"));
            }
            emit(&text, None)
        }

        Command::Train {
            corpus,
            seed,
            fraction,
            features,
            out,
        } => {
            let corpus = load_corpus(&corpus)?;
            let ids: Vec<usize> = match fraction {
                Some(f) => split_corpus(&corpus, f, seed)?.train_ids,
                None => (0..corpus.len()).collect(),
            };
            let tokens: Vec<_> = ids
                .iter()
                .map(|&id| tokenize_email(&corpus.emails()[id].bytes))
                .collect();
            let model = HybridModel::train(
                ids.iter()
                    .zip(&tokens)
                    .map(|(&id, t)| (id, corpus.emails()[id].label, t)),
                features,
            )?;
            if model.features().is_clamped() {
                eprintln!(
                    "nbknn: only {} distinct tokens; using V = {}",
                    model.features().dimension(),
                    model.features().dimension()
                );
            }
            save_model(&model, &out)
        }

        Command::Classify {
            model,
            k,
            metric,
            alpha,
            beta,
            file,
        } => {
            let model = load_model(&model)?;
            let cfg = HybridConfig::default()
                .with_k(k)
                .with_metric(metric.into())
                .with_weights(alpha, beta);
            let d = model.classify_raw(&read(&file)?, &cfg)?;
            let s = &d.scores;
            let line = format!(
                "{}\tdelta_g={}\tdelta_s={}\tpr_nb_g={}\tpr_nb_s={}\tpr_knn_g={}\tpr_knn_s={}\n",
                d.label,
                s.delta_g,
                s.delta_s,
                s.pr_nb.legitimate,
                s.pr_nb.spam,
                s.pr_knn.legitimate,
                s.pr_knn.spam
            );
            emit(&line, None)
        }

        Command::Evaluate {
            common,
            fraction,
            features,
            k,
            metric,
        } => {
            let k = match k.as_str() {
                "-" | "baseline" => KSetting::Baseline,
                n => KSetting::Hybrid(n.parse().map_err(|_| {
                    Error::Argument(format!("k must be a positive integer or `-`, got `{n}`"))
                })?),
            };
            let corpus = load_corpus(&common.corpus)?;
            let split = split_corpus(&corpus, fraction, common.seed)?;
            let metric = Metric::from(metric);
            let outcome = evaluate_cell(
                &corpus,
                &split,
                features,
                k,
                metric,
                common.alpha,
                common.beta,
            )?;
            let report = EvaluationReport {
                grid: SweepGrid {
                    fractions: vec![fraction],
                    dims: vec![features],
                    ks: match k {
                        KSetting::Hybrid(k) => vec![k],
                        KSetting::Baseline => vec![],
                    },
                    metrics: vec![metric],
                    seed: common.seed,
                    alpha: common.alpha,
                    beta: common.beta,
                },
                cells: vec![Cell {
                    metric,
                    fraction,
                    dimension: features,
                    k,
                    outcome,
                }],
                metadata: metadata(&corpus, common.seed),
            };
            emit(
                &render_report(&report, common.format.into()),
                common.out.as_deref(),
            )
        }

        Command::Sweep {
            common,
            fraction,
            features,
            k,
            metric,
        } => {
            let corpus = load_corpus(&common.corpus)?;
            let grid = SweepGrid {
                fractions: fraction,
                dims: features,
                ks: k,
                metrics: metric.metrics(),
                seed: common.seed,
                alpha: common.alpha,
                beta: common.beta,
            };
            let report = run_sweep(&corpus, &grid)?;
            emit(
                &render_report(&report, common.format.into()),
                common.out.as_deref(),
            )
        }

        Command::GenCorpus {
            out,
            seed,
            spam,
            ham,
            disjoint,
        } => {
            let profile = if disjoint {
                VocabProfile::disjoint()
            } else {
                VocabProfile::default()
            };
            let corpus = generate_synthetic_corpus(&out, seed, spam, ham, &profile)?;
            eprintln!(
                "nbknn: wrote {} messages to {} (fingerprint {})",
                corpus.len(),
                out.display(),
                corpus.fingerprint()
            );
            Ok(())
        }
    }
}
