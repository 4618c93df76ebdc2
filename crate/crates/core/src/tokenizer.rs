//! Email tokenizer.
//!
//! Header and body are processed as one byte stream, line by line:
//!
//! 1. lines inside a uuencode block (`begin <mode> <name>` … `end`) are dropped;
//!    the framing lines themselves are kept;
//! 2. ASCII letters are lowercased;
//! 3. every `<...>` span (first `>` closes it) is deleted and counted as a tag;
//!    an unclosed `<` deletes the rest of the line without counting;
//! 4. maximal runs of `[a-z]{2,}` and `[0-9]{2,}` become tokens.
//!
//! After the last line the token `html` is appended three times per tag.
//! Any other byte, including every non-ASCII byte, separates tokens.

use std::fmt;

/// The marker appended for each stripped tag.
pub const HTML_MARKER: &str = "html";
/// How many markers each stripped tag contributes.
pub const MARKERS_PER_TAG: usize = 3;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenSequence {
    tokens: Vec<String>,
    tag_count: usize,
}

impl TokenSequence {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Number of `<...>` spans stripped while tokenizing.
    pub fn tag_count(&self) -> usize {
        self.tag_count
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &str> + ExactSizeIterator {
        self.tokens.iter().map(String::as_str)
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.tokens
    }
}

impl<S: Into<String>> FromIterator<S> for TokenSequence {
    /// Wraps already-tokenized text; no tags are recorded.
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenSequence {
            tokens: iter.into_iter().map(Into::into).collect(),
            tag_count: 0,
        }
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for token in &self.tokens {
            writeln!(f, "{token}")?;
        }
        Ok(())
    }
}

pub fn tokenize_email(raw: &[u8]) -> TokenSequence {
    let mut tokens = Vec::new();
    let mut tag_count = 0;
    let mut in_uuencode = false;
    let mut scratch = Vec::new();

    for line in raw.split(|&b| b == b'\n') {
        if in_uuencode {
            if is_uuencode_end(line) {
                in_uuencode = false;
            } else {
                continue;
            }
        } else if is_uuencode_begin(line) {
            in_uuencode = true;
        }
        tag_count += strip_tags(line, &mut scratch);
        extract_tokens(&scratch, &mut tokens);
    }

    tokens.extend(std::iter::repeat_n(
        HTML_MARKER.to_string(),
        MARKERS_PER_TAG * tag_count,
    ));
    TokenSequence { tokens, tag_count }
}

/// Lowercases `line` into `out` with every `<...>` span removed. Returns the
/// number of closed spans.
fn strip_tags(line: &[u8], out: &mut Vec<u8>) -> usize {
    out.clear();
    let mut tags = 0;
    let mut i = 0;
    while i < line.len() {
        if line[i] == b'<' {
            match line[i + 1..].iter().position(|&b| b == b'>') {
                Some(offset) => {
                    tags += 1;
                    i += offset + 2;
                }
                None => break,
            }
        } else {
            out.push(line[i].to_ascii_lowercase());
            i += 1;
        }
    }
    tags
}

fn extract_tokens(text: &[u8], tokens: &mut Vec<String>) {
    let mut i = 0;
    while i < text.len() {
        let class = char_class(text[i]);
        if class == CharClass::Other {
            i += 1;
            continue;
        }
        let start = i;
        while i < text.len() && char_class(text[i]) == class {
            i += 1;
        }
        if i - start >= 2 {
            // Runs are pure ASCII alphanumerics.
            tokens.push(String::from_utf8_lossy(&text[start..i]).into_owned());
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Letter,
    Digit,
    Other,
}

fn char_class(b: u8) -> CharClass {
    match b {
        b'a'..=b'z' => CharClass::Letter,
        b'0'..=b'9' => CharClass::Digit,
        _ => CharClass::Other,
    }
}

fn trim_line_end(line: &[u8]) -> &[u8] {
    let end = line
        .iter()
        .rposition(|b| !b.is_ascii_whitespace())
        .map_or(0, |p| p + 1);
    &line[..end]
}

/// `begin <octal mode> <name>`
fn is_uuencode_begin(line: &[u8]) -> bool {
    let Some(rest) = trim_line_end(line).strip_prefix(b"begin ") else {
        return false;
    };
    let mode_len = rest.iter().take_while(|b| (b'0'..=b'7').contains(b)).count();
    if mode_len == 0 {
        return false;
    }
    match rest[mode_len..].strip_prefix(b" ") {
        Some(name) => name.iter().any(|b| !b.is_ascii_whitespace()),
        None => false,
    }
}

fn is_uuencode_end(line: &[u8]) -> bool {
    trim_line_end(line) == b"end"
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize_email(s.as_bytes()).into_tokens()
    }

    #[test]
    fn tags_are_stripped_and_amplified() {
        assert_eq!(
            toks("<b>Hello WORLD 42</b>"),
            ["hello", "world", "42", "html", "html", "html", "html", "html", "html"]
        );
        assert_eq!(tokenize_email(b"<b>Hello WORLD 42</b>").tag_count(), 2);
    }

    #[test]
    fn single_characters_are_dropped() {
        assert!(toks("a I x").is_empty());
    }

    #[test]
    fn class_boundaries_split_runs() {
        assert_eq!(toks("abc123def"), ["abc", "123", "def"]);
        assert_eq!(toks("x1y22zz"), ["22", "zz"]);
    }

    #[test]
    fn uuencode_payload_is_skipped() {
        let payload = format!("M{}", "4%L;&\\@=V]R;&0A\"E1H:7,@:7,@82!T97-T(&9I;&4@9F]R('5U96YC;V1E".chars().take(60).collect::<String>());
        let email = format!("see attached\nbegin 644 f.bin\n{payload}\n`\nend\nthanks bob\n");
        assert_eq!(
            toks(&email),
            ["see", "attached", "begin", "644", "bin", "end", "thanks", "bob"]
        );
    }

    #[test]
    fn begin_without_octal_mode_is_ordinary_text() {
        assert_eq!(
            toks("begin now please\nok fine\n"),
            ["begin", "now", "please", "ok", "fine"]
        );
        assert_eq!(toks("begin 689 x\nstill here"), ["begin", "689", "still", "here"]);
    }

    #[test]
    fn unterminated_uuencode_block_swallows_the_rest() {
        assert_eq!(toks("begin 600 a.txt\nsecret words\nmore"), ["begin", "600", "txt"]);
    }

    #[test]
    fn unclosed_bracket_deletes_to_end_of_line_uncounted() {
        let seq = tokenize_email(b"keep this <not closed here\nnext line");
        assert_eq!(seq.tokens(), ["keep", "this", "next", "line"]);
        assert_eq!(seq.tag_count(), 0);
    }

    #[test]
    fn tags_do_not_span_lines() {
        let seq = tokenize_email(b"one <two\nthree> four");
        assert_eq!(seq.tokens(), ["one", "three", "four"]);
        assert_eq!(seq.tag_count(), 0);
    }

    #[test]
    fn first_close_ends_a_tag() {
        let seq = tokenize_email(b"aa<x<y>bb>cc");
        // `<x<y>` is one tag; the stray `>` is a separator.
        assert_eq!(seq.tokens(), ["aabb", "cc", "html", "html", "html"]);
    }

    #[test]
    fn non_ascii_bytes_separate_tokens() {
        assert_eq!(
            tokenize_email("caf\u{e9}s na\u{ef}ve".as_bytes()).tokens(),
            ["caf", "na", "ve"]
        );
        assert_eq!(tokenize_email(&[b'a', b'b', 0xff, b'c', b'd']).tokens(), ["ab", "cd"]);
    }

    #[test]
    fn empty_input() {
        assert!(tokenize_email(b"").is_empty());
    }

    fn closed_tag_count(s: &str) -> usize {
        s.lines()
            .map(|line| {
                let mut n = 0;
                let mut rest = line;
                while let Some(open) = rest.find('<') {
                    match rest[open..].find('>') {
                        Some(close) => {
                            n += 1;
                            rest = &rest[open + close + 1..];
                        }
                        None => break,
                    }
                }
                n
            })
            .sum()
    }

    proptest! {
        #[test]
        fn tokens_respect_shape(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
            let seq = tokenize_email(&bytes);
            for t in seq.iter() {
                prop_assert!(t.len() >= 2);
                let letters = t.bytes().all(|b| b.is_ascii_lowercase());
                let digits = t.bytes().all(|b| b.is_ascii_digit());
                prop_assert!(letters || digits, "bad token {t:?}");
            }
            prop_assert_eq!(&seq, &tokenize_email(&bytes));
        }

        #[test]
        fn case_does_not_matter_without_tags(s in "[A-Za-z0-9 ,.!\n]{0,200}") {
            prop_assert_eq!(
                tokenize_email(s.as_bytes()),
                tokenize_email(s.to_ascii_lowercase().as_bytes())
            );
        }

        #[test]
        fn markers_track_closed_tags(s in "[a-z <>/\n]{0,200}") {
            let seq = tokenize_email(s.as_bytes());
            let expected = closed_tag_count(&s);
            prop_assert_eq!(seq.tag_count(), expected);
            let trailing = seq.iter().rev().take_while(|&t| t == HTML_MARKER).count();
            prop_assert!(trailing >= MARKERS_PER_TAG * expected);
        }
    }
}
