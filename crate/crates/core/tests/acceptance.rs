//! Acceptance checks, one line per criterion. Exits nonzero if any fails.
//!
//! Oracles here are written independently of the library: dense vectors and
//! full sorts for kNN, contingency tables for information gain, hand-derived
//! token files for the tokenizer.

use std::cmp::Ordering;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nbknn::classifiers::{combine_scores, knn_search, IndexedDoc};
use nbknn::corpus::{model_from_json, model_to_json, split_corpus};
use nbknn::features::{information_gain, select_features, vectorize, DocumentFrequencies};
use nbknn::harness::{render_report, run_sweep, synthesize, ReportFormat, SweepGrid, VocabProfile};
use nbknn::{
    tokenize_email, ClassProbs, HybridConfig, HybridModel, KnnIndex, Label, Metric,
    NaiveBayesModel, SparseVector, TokenSequence,
};

enum Verdict {
    Pass(String),
    Warn(String),
    Fail(String),
}

type Check = fn() -> Verdict;

fn timed(limit: Duration, start: Instant, ok: Result<String, String>) -> Verdict {
    let took = start.elapsed();
    match ok {
        Ok(detail) if took <= limit => Verdict::Pass(format!("{detail} in {took:.2?}")),
        Ok(detail) => Verdict::Fail(format!("{detail} but took {took:.2?} (limit {limit:?})")),
        Err(why) => Verdict::Fail(why),
    }
}

// 1. Blended scores always sum to one.
fn blend_sums_to_one() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let pr_nb = ClassProbs::from_legitimate(rng.gen::<f64>());
        let k = rng.gen_range(1..=25u32);
        let pr_knn = ClassProbs::from_legitimate(rng.gen_range(0..=k) as f64 / k as f64);
        let alpha = 10f64.powf(rng.gen_range(-3.0..3.0));
        let beta = 10f64.powf(rng.gen_range(-3.0..3.0));
        let s = match combine_scores(pr_nb, pr_knn, alpha, beta) {
            Ok(s) => s,
            Err(e) => return Verdict::Fail(format!("combine_scores rejected valid input: {e}")),
        };
        worst = worst.max((s.delta_g + s.delta_s - 1.0).abs());
    }
    let result = if worst <= 1e-12 {
        Ok(format!("10000 draws, max |dG + dS - 1| = {worst:e}"))
    } else {
        Err(format!("max |dG + dS - 1| = {worst:e} exceeds 1e-12"))
    };
    timed(Duration::from_secs(1), start, result)
}

/// Exact similarity rank key: squared distance for Euclidean (smaller is
/// nearer), squared cosine as a fraction for cosine (larger is nearer).
fn oracle_cmp(metric: Metric, q: &[u64], a: &[u64], b: &[u64]) -> Ordering {
    let dot = |x: &[u64], y: &[u64]| -> u128 { x.iter().zip(y).map(|(&p, &r)| (p * r) as u128).sum() };
    match metric {
        Metric::Euclidean => {
            let dist = |x: &[u64]| -> u128 {
                x.iter()
                    .zip(q)
                    .map(|(&p, &r)| (p.abs_diff(r) as u128).pow(2))
                    .sum()
            };
            dist(a).cmp(&dist(b))
        }
        Metric::Cosine => {
            let frac = |x: &[u64]| -> (u128, u128) {
                let (nx, nq) = (dot(x, x), dot(q, q));
                if nx == 0 || nq == 0 {
                    (0, 1)
                } else {
                    (dot(x, q).pow(2), nx * nq)
                }
            };
            let ((an, ad), (bn, bd)) = (frac(a), frac(b));
            (bn * ad).cmp(&(an * bd))
        }
    }
}

// 2. kNN search against a brute-force full sort.
fn knn_matches_brute_force() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for instance in 0..500 {
        let n = rng.gen_range(1..=50usize);
        let dim = rng.gen_range(1..=10usize);
        let max_count = rng.gen_range(1..=3u64);
        let density = rng.gen_range(0.2..0.9);
        let random_vec = |rng: &mut ChaCha8Rng| -> Vec<u64> {
            (0..dim)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(1..=max_count) } else { 0 })
                .collect()
        };
        let mut dense: Vec<Vec<u64>> = (0..n).map(|_| random_vec(&mut rng)).collect();
        // Force exact ties by copying some vectors.
        for _ in 0..n / 4 {
            let (from, to) = (rng.gen_range(0..n), rng.gen_range(0..n));
            dense[to] = dense[from].clone();
        }
        let mut ids: Vec<usize> = (0..n * 3).collect();
        ids.shuffle(&mut rng);
        ids.truncate(n);
        let labels: Vec<Label> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { Label::Spam } else { Label::Legitimate })
            .collect();
        let query = if rng.gen_bool(0.2) {
            dense[rng.gen_range(0..n)].clone()
        } else {
            random_vec(&mut rng)
        };
        let to_sparse = |v: &[u64]| {
            SparseVector::from_dense(&v.iter().map(|&c| c as u32).collect::<Vec<_>>())
        };
        let index = match KnnIndex::new(
            (0..n)
                .map(|i| IndexedDoc {
                    id: ids[i],
                    label: labels[i],
                    vector: to_sparse(&dense[i]),
                })
                .collect(),
        ) {
            Ok(ix) => ix,
            Err(e) => return Verdict::Fail(format!("instance {instance}: index rejected: {e}")),
        };
        let k = rng.gen_range(1..=n);
        for metric in Metric::ALL {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| {
                oracle_cmp(metric, &query, &dense[a], &dense[b]).then(ids[a].cmp(&ids[b]))
            });
            let expected: Vec<(usize, Label)> = order[..k].iter().map(|&i| (ids[i], labels[i])).collect();
            let got: Vec<(usize, Label)> = match knn_search(&index, &to_sparse(&query), k, metric) {
                Ok(ns) => ns.iter().map(|nb| (nb.id, nb.label)).collect(),
                Err(e) => return Verdict::Fail(format!("instance {instance}: search failed: {e}")),
            };
            if got != expected {
                return Verdict::Fail(format!(
                    "instance {instance} ({metric}, n={n}, k={k}): got {got:?}, expected {expected:?}"
                ));
            }
        }
    }
    timed(Duration::from_secs(5), start, Ok("500 instances x 2 metrics identical".into()))
}

fn seq(words: &[&str]) -> TokenSequence {
    words.iter().copied().collect()
}

// 3. Naive Bayes hand example and normalization.
fn naive_bayes_oracle() -> Verdict {
    let docs = [
        (Label::Spam, seq(&["win", "money"])),
        (Label::Legitimate, seq(&["meeting", "notes"])),
    ];
    let fs = match select_features(docs.iter().map(|(l, t)| (*l, t)), 4) {
        Ok(fs) => fs,
        Err(e) => return Verdict::Fail(format!("feature selection failed: {e}")),
    };
    let vectors: Vec<(Label, SparseVector)> =
        docs.iter().map(|(l, t)| (*l, vectorize(t, &fs))).collect();
    let nb = match NaiveBayesModel::train(vectors.iter().map(|(l, v)| (*l, v)), &fs) {
        Ok(m) => m,
        Err(e) => return Verdict::Fail(format!("training failed: {e}")),
    };
    let win = fs.index_of("win").map(|i| i as usize);
    let Some(win) = win else {
        return Verdict::Fail("`win` was not selected".into());
    };
    let checks = [
        ("p(win|S)", nb.likelihood(Label::Spam, win), 2.0 / 6.0),
        ("p(win|G)", nb.likelihood(Label::Legitimate, win), 1.0 / 6.0),
        ("prior S", nb.prior(Label::Spam), 0.5),
        ("Pr_nb[S|win]", nb.posterior(&vectorize(&seq(&["win"]), &fs)).spam, 2.0 / 3.0),
    ];
    for (what, got, want) in checks {
        if (got - want).abs() > 1e-12 {
            return Verdict::Fail(format!("{what} = {got}, expected {want}"));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let dim = rng.gen_range(1..=60usize);
        let spread = 10u64.pow(rng.gen_range(0..=5));
        let counts = [0, 1].map(|_| (0..dim).map(|_| rng.gen_range(0..=spread)).collect::<Vec<u64>>());
        let totals = [counts[0].iter().sum(), counts[1].iter().sum()];
        let p = rng.gen_range(0.001..0.999);
        let model = match NaiveBayesModel::from_parts([p, 1.0 - p], counts, totals, 1.0) {
            Ok(m) => m,
            Err(e) => return Verdict::Fail(format!("random model rejected: {e}")),
        };
        let doc: Vec<u32> = (0..dim)
            .map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..=200) } else { 0 })
            .collect();
        let post = model.posterior(&SparseVector::from_dense(&doc));
        if !(0.0..=1.0).contains(&post.legitimate) || !(0.0..=1.0).contains(&post.spam) {
            return Verdict::Fail(format!("posterior out of range: {post:?}"));
        }
        worst = worst.max((post.legitimate + post.spam - 1.0).abs());
    }
    if worst > 1e-12 {
        return Verdict::Fail(format!("posterior sums off by {worst:e}"));
    }
    Verdict::Pass(format!("Pr_nb[S|win] = 2/3; 1000 random posteriors, max sum error {worst:e}"))
}

fn oracle_entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

/// `H(C) - sum over presence of P(presence) H(C | presence)`, from a 2x2 table.
fn oracle_gain(docs: &[(Label, TokenSequence)], token: &str) -> f64 {
    let mut table = [[0usize; 2]; 2]; // [present][class]
    for (label, tokens) in docs {
        let present = tokens.tokens().iter().any(|t| t == token) as usize;
        let class = (*label == Label::Spam) as usize;
        table[present][class] += 1;
    }
    let n = docs.len() as f64;
    let class_totals = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
    let mut h = oracle_entropy(&class_totals);
    for row in table {
        let m: usize = row.iter().sum();
        if m > 0 {
            h -= m as f64 / n * oracle_entropy(&row);
        }
    }
    h
}

// 4. Information gain over every labeling of small corpora.
fn information_gain_oracle() -> Verdict {
    const ALPHABET: [&str; 5] = ["aa", "bb", "cc", "dd", "ee"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut corpora, mut worst) = (0usize, 0.0f64);
    for n in 1..=8usize {
        for vocab in 1..=ALPHABET.len() {
            // A few token layouts per size, each under every labeling.
            for _ in 0..3 {
                let layouts: Vec<TokenSequence> = (0..n)
                    .map(|_| {
                        let mut words = Vec::new();
                        for &w in &ALPHABET[..vocab] {
                            if rng.gen_bool(0.5) {
                                words.extend(std::iter::repeat_n(w, rng.gen_range(1..=3)));
                            }
                        }
                        words.shuffle(&mut rng);
                        seq(&words)
                    })
                    .collect();
                for mask in 0..(1u32 << n) {
                    let docs: Vec<(Label, TokenSequence)> = layouts
                        .iter()
                        .enumerate()
                        .map(|(i, t)| {
                            let label = if mask >> i & 1 == 1 { Label::Spam } else { Label::Legitimate };
                            (label, t.clone())
                        })
                        .collect();
                    let df = DocumentFrequencies::from_documents(docs.iter().map(|(l, t)| (*l, t)));
                    for &token in &ALPHABET {
                        let want = oracle_gain(&docs, token);
                        let scan = information_gain(docs.iter().map(|(l, t)| (*l, t)), token);
                        let table = df.gain(token);
                        let err = (scan - want).abs().max((table - want).abs());
                        if err > 1e-12 {
                            return Verdict::Fail(format!(
                                "n={n} mask={mask:b} token={token}: got {scan}/{table}, expected {want}"
                            ));
                        }
                        worst = worst.max(err);
                    }
                    corpora += 1;
                }
            }
        }
    }
    Verdict::Pass(format!("{corpora} labeled corpora x 5 tokens, max error {worst:e}"))
}

// 5. Tokenizer goldens.
fn tokenizer_goldens() -> Verdict {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/tokenizer");
    let mut entries: Vec<_> = match fs::read_dir(&dir) {
        Ok(rd) => rd.filter_map(|e| e.ok().map(|e| e.path())).collect(),
        Err(e) => return Verdict::Fail(format!("cannot read {}: {e}", dir.display())),
    };
    entries.retain(|p| p.extension().is_some_and(|x| x == "eml"));
    entries.sort();
    for eml in &entries {
        let expected = match fs::read_to_string(eml.with_extension("tokens")) {
            Ok(s) => s,
            Err(e) => return Verdict::Fail(format!("{}: no token file ({e})", eml.display())),
        };
        let raw = fs::read(eml).expect("listed fixture is readable");
        let got = tokenize_email(&raw).to_string();
        if got != expected {
            return Verdict::Fail(format!("{} differs from its golden tokens", eml.display()));
        }
    }
    if entries.len() < 10 {
        return Verdict::Fail(format!("only {} fixtures", entries.len()));
    }
    Verdict::Pass(format!("{} fixtures match exactly", entries.len()))
}

fn desk_grid() -> SweepGrid {
    SweepGrid {
        fractions: vec![0.25, 0.3, 0.4],
        dims: vec![100, 200],
        ks: (1..=5).collect(),
        metrics: Metric::ALL.to_vec(),
        seed: 7,
        alpha: 1.0,
        beta: 1.0,
    }
}

const CORPUS_SEED: u64 = 7;

// 6. Desk-scale trend on an overlapping synthetic corpus.
fn desk_scale_trend() -> Vec<(String, Verdict)> {
    let start = Instant::now();
    let result = synthesize(CORPUS_SEED, 300, 600, &VocabProfile::default())
        .and_then(|corpus| run_sweep(&corpus, &desk_grid()));
    let took = start.elapsed();
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            return vec![
                ("6a".into(), Verdict::Fail(format!("sweep failed: {e}"))),
                ("6b".into(), Verdict::Fail("no report".into())),
            ]
        }
    };

    let imp = report.improvement();
    let per_k: Vec<String> = imp.per_k_at_least.iter().map(|(k, n)| format!("k={k}:{n}")).collect();
    let detail = format!(
        "best-k hybrid >= baseline in {} of {} ({} strictly; per-k {}), sweep {took:.2?}",
        imp.at_least_baseline,
        imp.configurations,
        imp.strictly_better,
        per_k.join(" ")
    );
    let a = if imp.configurations == 12 && 2 * imp.at_least_baseline >= imp.configurations && took < Duration::from_secs(60) {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    };

    let checks = report.reduced_dimension_checks();
    let lines: Vec<String> = checks
        .iter()
        .map(|c| {
            format!(
                "{} f={}: {:.4} vs {:.4}",
                c.metric, c.fraction, c.hybrid_legitimate, c.baseline_legitimate
            )
        })
        .collect();
    let held = checks.iter().filter(|c| c.holds()).count();
    let detail = format!(
        "k=1 at V={} vs baseline at V={} on legitimate accuracy, {held} of {} hold [{}]",
        report.grid.dims.iter().min().unwrap(),
        report.grid.dims.iter().max().unwrap(),
        checks.len(),
        lines.join("; ")
    );
    let b = if !checks.is_empty() && held == checks.len() {
        Verdict::Pass(detail)
    } else {
        Verdict::Warn(detail)
    };
    vec![("6a".into(), a), ("6b".into(), b)]
}

// 7. Determinism and persistence.
fn determinism() -> Verdict {
    let render = || -> nbknn::Result<(String, String)> {
        let corpus = synthesize(CORPUS_SEED, 300, 600, &VocabProfile::default())?;
        let report = run_sweep(&corpus, &desk_grid())?;
        Ok((
            render_report(&report, ReportFormat::Table),
            render_report(&report, ReportFormat::Tsv),
        ))
    };
    let (first, second) = match (render(), render()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Verdict::Fail(format!("sweep failed: {e}")),
    };
    if first != second {
        return Verdict::Fail("two sweeps with one seed rendered different bytes".into());
    }

    let round_trip = || -> nbknn::Result<usize> {
        let corpus = synthesize(CORPUS_SEED, 300, 600, &VocabProfile::default())?;
        let split = split_corpus(&corpus, 0.3, 7)?;
        let tokens: Vec<TokenSequence> = corpus.emails().iter().map(|e| tokenize_email(&e.bytes)).collect();
        let model = HybridModel::train(
            split.train_ids.iter().map(|&id| (id, corpus.emails()[id].label, &tokens[id])),
            200,
        )?;
        let dir = tempfile::tempdir()?;
        let path = dir.path().join("model.json");
        nbknn::corpus::save_model(&model, &path)?;
        let loaded = nbknn::corpus::load_model(&path)?;
        // The in-memory encoding must agree with the file too.
        let again = model_from_json(&model_to_json(&model)?)?;
        let mut decisions = 0;
        for &id in &split.test_ids {
            for metric in Metric::ALL {
                for k in 1..=5 {
                    let cfg = HybridConfig::default().with_k(k).with_metric(metric);
                    let want = model.classify_tokens(&tokens[id], &cfg)?;
                    for other in [&loaded, &again] {
                        if other.classify_tokens(&tokens[id], &cfg)? != want {
                            return Err(nbknn::Error::Format(format!("doc {id} {metric} k={k} changed")));
                        }
                    }
                    decisions += 1;
                }
            }
            let v = model.vectorize(&tokens[id]);
            if loaded.nb_only(&loaded.vectorize(&tokens[id])) != model.nb_only(&v) {
                return Err(nbknn::Error::Format(format!("doc {id} baseline changed")));
            }
        }
        Ok(decisions)
    };
    match round_trip() {
        Ok(n) => Verdict::Pass(format!(
            "table ({} bytes) and TSV identical across runs; {n} decisions survive save/load",
            first.0.len()
        )),
        Err(e) => Verdict::Fail(format!("save/load: {e}")),
    }
}

// 8. Disjoint vocabularies separate perfectly.
fn separable_sanity() -> Verdict {
    let result = synthesize(CORPUS_SEED, 300, 600, &VocabProfile::disjoint())
        .and_then(|corpus| run_sweep(&corpus, &desk_grid()));
    let report = match result {
        Ok(r) => r,
        Err(e) => return Verdict::Fail(format!("sweep failed: {e}")),
    };
    let mut imperfect = Vec::new();
    for cell in &report.cells {
        match cell.outcome.confusion() {
            Some(c) if c.fp == 0 && c.fn_ == 0 => {}
            Some(c) => imperfect.push(format!(
                "{} f={} V={} k={} (fp {}, fn {})",
                cell.metric, cell.fraction, cell.dimension, cell.k, c.fp, c.fn_
            )),
            None => imperfect.push(format!("{} f={} V={} k={} skipped", cell.metric, cell.fraction, cell.dimension, cell.k)),
        }
    }
    if imperfect.is_empty() {
        Verdict::Pass(format!("all {} cells at accuracy 1.0 for both classes", report.cells.len()))
    } else {
        Verdict::Fail(format!("{} imperfect cells: {}", imperfect.len(), imperfect.join(", ")))
    }
}

fn main() -> ExitCode {
    let simple: [(&str, &str, Check); 5] = [
        ("1", "blended scores sum to one", blend_sums_to_one),
        ("2", "kNN search matches brute force", knn_matches_brute_force),
        ("3", "naive Bayes hand example and normalization", naive_bayes_oracle),
        ("4", "information gain matches contingency tables", information_gain_oracle),
        ("5", "tokenizer golden fixtures", tokenizer_goldens),
    ];
    let mut results: Vec<(String, String, Verdict)> = simple
        .into_iter()
        .map(|(id, name, check)| (id.to_string(), name.to_string(), check()))
        .collect();
    for (id, verdict) in desk_scale_trend() {
        let name = if id == "6a" {
            "hybrid matches or beats naive Bayes in most configurations"
        } else {
            "small-V hybrid vs large-V baseline on legitimate mail"
        };
        results.push((id, name.to_string(), verdict));
    }
    results.push(("7".into(), "deterministic sweeps and model round trip".into(), determinism()));
    results.push(("8".into(), "disjoint vocabularies classify perfectly".into(), separable_sanity()));

    let mut failed = 0;
    for (id, name, verdict) in &results {
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Warn(d) => ("WARN", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{id}] {name}: {detail}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
