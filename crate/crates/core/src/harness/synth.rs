//! Seeded synthetic email corpora for desk-scale experiments.
//!
//! Each class draws tokens from a mixture of four pools: words from the
//! document's topic (a spam campaign or a ham thread subject), general words
//! of its own class, words of the other class, and a shared background
//! vocabulary. Spam additionally embeds HTML markup at a configurable rate.
//! Every pool has Zipf-like word frequencies. Messages of one topic are
//! templated: they share a typical length, as campaign spam does.

use std::fs;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabProfile {
    /// Background words used by both classes.
    pub shared_words: usize,
    /// Words specific to each class.
    pub class_words: usize,
    /// Topics per class; each topic owns a slice of the class words.
    pub topics: usize,
    pub words_per_topic: usize,
    /// Per-token mixture weights: topic, own class, other class, shared.
    pub topic_weight: f64,
    pub class_weight: f64,
    pub cross_weight: f64,
    pub shared_weight: f64,
    pub min_tokens: usize,
    pub max_tokens: usize,
    /// Each topic has a typical body length drawn from the token range;
    /// messages vary by up to this fraction around it.
    pub length_jitter: f64,
    /// Fraction of spam (resp. ham) messages written as HTML.
    pub spam_html_rate: f64,
    pub ham_html_rate: f64,
}

impl Default for VocabProfile {
    /// Overlapping classes: roughly one token in five carries class signal.
    fn default() -> Self {
        VocabProfile {
            shared_words: 1500,
            class_words: 600,
            topics: 12,
            words_per_topic: 30,
            topic_weight: 0.07,
            class_weight: 0.10,
            cross_weight: 0.05,
            shared_weight: 0.78,
            min_tokens: 25,
            max_tokens: 120,
            length_jitter: 0.2,
            spam_html_rate: 0.5,
            ham_html_rate: 0.1,
        }
    }
}

impl VocabProfile {
    /// No word is shared between the classes, neither class uses markup, and
    /// each class vocabulary is small enough to survive feature selection at
    /// V = 100. A sanity profile: any working classifier separates it.
    pub fn disjoint() -> Self {
        VocabProfile {
            shared_words: 0,
            class_words: 40,
            topics: 4,
            words_per_topic: 10,
            topic_weight: 0.5,
            class_weight: 0.5,
            cross_weight: 0.0,
            shared_weight: 0.0,
            spam_html_rate: 0.0,
            ham_html_rate: 0.0,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let weights = [
            self.topic_weight,
            self.class_weight,
            self.cross_weight,
            self.shared_weight,
        ];
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || weights.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::argument("profile mixture weights must be non-negative and not all zero"));
        }
        if self.class_words == 0 || self.topics == 0 || self.words_per_topic == 0 {
            return Err(Error::argument("profile needs class words and at least one topic"));
        }
        if self.shared_weight > 0.0 && self.shared_words == 0 {
            return Err(Error::argument("shared weight set but no shared words"));
        }
        if self.min_tokens == 0 || self.min_tokens > self.max_tokens {
            return Err(Error::argument("token length range is empty"));
        }
        if !(0.0..=1.0).contains(&self.length_jitter) {
            return Err(Error::argument("length jitter must lie in [0, 1]"));
        }
        for rate in [self.spam_html_rate, self.ham_html_rate] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::argument("html rates must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

const CONSONANTS: &[u8] = b"bcdfghjklmnprstvz";
const VOWELS: &[u8] = b"aeiou";
const TAGS: &[(&str, &str)] = &[
    ("<b>", "</b>"),
    ("<font color=\"red\">", "</font>"),
    ("<a href=\"http://offer.example/click\">", "</a>"),
    ("<i>", "</i>"),
];

/// Three consonant-vowel syllables per word; injective for indices below 85³.
fn pseudo_word(mut index: usize) -> String {
    let mut out = String::with_capacity(6);
    for _ in 0..3 {
        let s = index % (CONSONANTS.len() * VOWELS.len());
        index /= CONSONANTS.len() * VOWELS.len();
        out.push(CONSONANTS[s / VOWELS.len()] as char);
        out.push(VOWELS[s % VOWELS.len()] as char);
    }
    out
}

struct Pool {
    words: Vec<String>,
    dist: WeightedIndex<f64>,
}

impl Pool {
    fn new(words: Vec<String>) -> Option<Self> {
        if words.is_empty() {
            return None;
        }
        let dist = WeightedIndex::new((0..words.len()).map(|r| 1.0 / (r as f64 + 1.0))).ok()?;
        Some(Pool { words, dist })
    }

    fn draw<'a>(&'a self, rng: &mut ChaCha8Rng) -> &'a str {
        &self.words[self.dist.sample(rng)]
    }
}

struct ClassPools {
    general: Pool,
    topics: Vec<(Pool, usize)>,
}

struct Generator<'p> {
    profile: &'p VocabProfile,
    shared: Option<Pool>,
    classes: [ClassPools; 2],
    mixture: WeightedIndex<f64>,
}

impl<'p> Generator<'p> {
    fn new(profile: &'p VocabProfile, rng: &mut ChaCha8Rng) -> Result<Self> {
        profile.validate()?;
        let shared = Pool::new((0..profile.shared_words).map(pseudo_word).collect());
        let words = [0, 1].map(|c| {
            let base = profile.shared_words + c * profile.class_words;
            (base..base + profile.class_words).map(pseudo_word).collect::<Vec<String>>()
        });
        let per = profile.words_per_topic;
        let classes = [0, 1].map(|c| {
            let own = &words[c];
            let topics: Vec<(Pool, usize)> = (0..profile.topics)
                .map(|t| {
                    let slice = (0..per).map(|j| own[(t * per + j) % own.len()].clone()).collect();
                    let typical = rng.gen_range(profile.min_tokens..=profile.max_tokens);
                    (Pool::new(slice).expect("non-empty topic"), typical)
                })
                .collect();
            ClassPools {
                general: Pool::new(words[c].clone()).expect("non-empty class pool"),
                topics,
            }
        });
        let mixture = WeightedIndex::new([
            profile.topic_weight,
            profile.class_weight,
            profile.cross_weight,
            profile.shared_weight,
        ])
        .map_err(|e| Error::argument(format!("bad mixture weights: {e}")))?;
        Ok(Generator {
            profile,
            shared,
            classes,
            mixture,
        })
    }

    fn message(&self, label: Label, rng: &mut ChaCha8Rng) -> String {
        let own = &self.classes[label.index()];
        let other = &self.classes[1 - label.index()];
        let (topic, typical) = &own.topics[rng.gen_range(0..own.topics.len())];
        let jitter = self.profile.length_jitter;
        let n_tokens = ((*typical as f64) * rng.gen_range(1.0 - jitter..=1.0 + jitter)).round() as usize;
        let n_tokens = n_tokens.clamp(self.profile.min_tokens, self.profile.max_tokens);
        let html_rate = match label {
            Label::Spam => self.profile.spam_html_rate,
            Label::Legitimate => self.profile.ham_html_rate,
        };
        let html = rng.gen_bool(html_rate);

        let draw = |rng: &mut ChaCha8Rng| -> String {
            match self.mixture.sample(rng) {
                0 => topic.draw(rng).to_string(),
                1 => own.general.draw(rng).to_string(),
                2 => other.general.draw(rng).to_string(),
                _ => match &self.shared {
                    Some(pool) => pool.draw(rng).to_string(),
                    None => own.general.draw(rng).to_string(),
                },
            }
        };

        let subject: Vec<String> = (0..rng.gen_range(2..=6)).map(|_| draw(rng)).collect();
        let mut text = format!(
            "From: {}@{}.example\nSubject: {}\n\n",
            draw(rng),
            draw(rng),
            subject.join(" ")
        );
        if html {
            text.push_str("<html><body>\n");
        }
        let mut line_len = 0;
        for _ in 0..n_tokens {
            let word = draw(rng);
            if html && rng.gen_bool(0.08) {
                let (open, close) = TAGS[rng.gen_range(0..TAGS.len())];
                text.push_str(open);
                text.push_str(&word);
                text.push_str(close);
            } else {
                text.push_str(&word);
            }
            line_len += 1;
            if line_len == 12 {
                text.push('\n');
                line_len = 0;
            } else {
                text.push(' ');
            }
        }
        if html {
            text.push_str("\n</body></html>");
        }
        text.push('\n');
        text
    }
}

/// Builds an in-memory corpus: `n_spam` spam messages (ids `0..n_spam`)
/// followed by `n_ham` legitimate ones, the same layout [`load_corpus`]
/// produces for the files [`generate_synthetic_corpus`] writes.
///
/// [`load_corpus`]: crate::corpus::load_corpus
pub fn synthesize(seed: u64, n_spam: usize, n_ham: usize, profile: &VocabProfile) -> Result<Corpus> {
    if n_spam == 0 || n_ham == 0 {
        return Err(Error::argument("synthetic corpus needs at least one message per class"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generator = Generator::new(profile, &mut rng)?;
    let messages: Vec<(Label, String)> = std::iter::repeat_n(Label::Spam, n_spam)
        .chain(std::iter::repeat_n(Label::Legitimate, n_ham))
        .map(|label| (label, generator.message(label, &mut rng)))
        .collect();
    Ok(Corpus::from_messages(messages))
}

/// Writes `out/spam/NNNNNN.eml` and `out/ham/NNNNNN.eml`.
pub fn generate_synthetic_corpus(
    out: impl AsRef<Path>,
    seed: u64,
    n_spam: usize,
    n_ham: usize,
    profile: &VocabProfile,
) -> Result<Corpus> {
    let corpus = synthesize(seed, n_spam, n_ham, profile)?;
    let out = out.as_ref();
    let (mut spam_no, mut ham_no) = (0usize, 0usize);
    for dir in ["spam", "ham"] {
        fs::create_dir_all(out.join(dir))?;
    }
    for email in corpus.emails() {
        let (dir, no) = match email.label {
            Label::Spam => ("spam", &mut spam_no),
            Label::Legitimate => ("ham", &mut ham_no),
        };
        fs::write(out.join(dir).join(format!("{:06}.eml", *no)), &email.bytes)?;
        *no += 1;
    }
    Ok(corpus)
}
