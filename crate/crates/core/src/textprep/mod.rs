//! Text cleaning, law-token extraction, stemming, and vocabulary
//! construction.
//!
//! The preprocessing pipeline is: extract law tokens, clean the remaining
//! text (lowercase, drop digits and punctuation), tokenize on whitespace,
//! and Porter-stem each token. Law tokens such as `section1702a` bypass
//! cleaning and stemming so their digits survive.

pub mod porter;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// An ordered stream of lowercase tokens produced by [`TextPipeline::preprocess`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenStream {
    tokens: Vec<String>,
}

impl TokenStream {
    pub fn new(tokens: Vec<String>) -> Self {
        TokenStream { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Concatenates streams in order, as used for whole-document vectors.
    pub fn concat<'a>(streams: impl IntoIterator<Item = &'a TokenStream>) -> TokenStream {
        let mut tokens = Vec::new();
        for stream in streams {
            tokens.extend_from_slice(&stream.tokens);
        }
        TokenStream { tokens }
    }
}

impl std::ops::Deref for TokenStream {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.tokens
    }
}

/// Whether vectors and document frequencies are over unigrams only, or
/// over unigrams and adjacent-bigram tokens (joined with `_`) jointly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NgramOrder {
    Unigram,
    Bigram,
}

impl NgramOrder {
    pub fn order(self) -> u8 {
        match self {
            NgramOrder::Unigram => 1,
            NgramOrder::Bigram => 2,
        }
    }
}

/// Calls `f` with every term of the stream under the given order:
/// each unigram, then each adjacent bigram as `"a_b"`.
pub(crate) fn for_each_term(tokens: &[String], order: NgramOrder, mut f: impl FnMut(&str)) {
    for token in tokens {
        f(token);
    }
    if order == NgramOrder::Bigram {
        let mut scratch = String::new();
        for pair in tokens.windows(2) {
            scratch.clear();
            scratch.push_str(&pair[0]);
            scratch.push('_');
            scratch.push_str(&pair[1]);
            f(&scratch);
        }
    }
}

/// Lowercases, replaces whitespace runs with single spaces, and drops
/// digits and punctuation. Non-ASCII letters are kept as letters.
///
/// In the full pipeline this runs after law-token extraction, so digits
/// inside law tokens are not affected.
pub fn clean_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars().flat_map(char::to_lowercase) {
        if c.is_whitespace() {
            pending_space = true;
        } else if c.is_alphabetic() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        }
    }
    out
}

/// The configurable preprocessing pipeline: law-token words plus the
/// cleaning and stemming stages.
#[derive(Debug, Clone)]
pub struct TextPipeline {
    law_words: Vec<String>,
    law_regex: Regex,
    law_piece_regex: Regex,
    law_token_regex: Regex,
}

impl Default for TextPipeline {
    fn default() -> Self {
        TextPipeline::new(&["section"]).expect("default law words are valid")
    }
}

impl TextPipeline {
    /// Builds a pipeline recognizing the given statute words (for example
    /// `["section", "article"]`). Words must be non-empty and purely
    /// ASCII-alphabetic.
    pub fn new(law_words: &[impl AsRef<str>]) -> Result<Self> {
        let mut words = Vec::new();
        for word in law_words {
            let word = word.as_ref().trim().to_lowercase();
            if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
                return Err(Error::InvalidArgument(format!(
                    "law word {word:?} must be non-empty ASCII letters"
                )));
            }
            if !words.contains(&word) {
                words.push(word);
            }
        }
        if words.is_empty() {
            return Err(Error::InvalidArgument("no law words configured".into()));
        }
        let alternation = words.join("|");
        // One numbered reference: a number with an optional attached
        // alphanumeric qualifier and any parenthesized alphanumeric
        // qualifiers. The attached-qualifier tail also makes
        // already-collapsed tokens re-match.
        let piece = r"\d+[0-9a-z]*(?:\s*\(\s*[0-9a-z]+\s*\))*";
        // A statute reference: the law word (optionally pluralized)
        // followed by one reference or a comma/and/or list of them, as in
        // "sections 467 and 471".
        let connective = r"(?:\s*(?:,|&|\band\b|\bor\b))+\s*";
        let law_regex = Regex::new(&format!(
            r"(?i)\b(?P<head>(?:{alternation})s?)(?P<rest>\s*{piece}(?:{connective}{piece})*)"
        ))
        .expect("validated words produce a valid pattern");
        let law_piece_regex =
            Regex::new(&format!("(?i){piece}")).expect("piece pattern is valid");
        let law_token_regex = Regex::new(&format!(r"^(?:{alternation})\d[0-9a-z]*$"))
            .expect("validated words produce a valid pattern");
        Ok(TextPipeline {
            law_words: words,
            law_regex,
            law_piece_regex,
            law_token_regex,
        })
    }

    pub fn law_words(&self) -> &[String] {
        &self.law_words
    }

    /// True for collapsed law tokens like `section1702a`.
    pub fn is_law_token(&self, token: &str) -> bool {
        self.law_token_regex.is_match(token)
    }

    /// Replaces every statute reference with its collapsed token(s) and
    /// returns the rewritten text together with the tokens in occurrence
    /// order: `"Section 170 (2) (a)"` becomes `"section1702a"`, and a
    /// list like `"Sections 467 and 471"` becomes one token per number.
    pub fn extract_law_tokens(&self, raw: &str) -> (String, Vec<String>) {
        let mut rewritten = String::with_capacity(raw.len());
        let mut tokens = Vec::new();
        let mut last = 0;
        for captures in self.law_regex.captures_iter(raw) {
            let m = captures.get(0).expect("group 0 always present");
            rewritten.push_str(&raw[last..m.start()]);
            rewritten.push_str(&self.rewrite_law_span(&captures, &mut tokens));
            last = m.end();
        }
        rewritten.push_str(&raw[last..]);
        (rewritten, tokens)
    }

    /// Porter-stems a token; collapsed law tokens pass through unchanged.
    pub fn stem(&self, token: &str) -> String {
        if self.is_law_token(token) {
            token.to_string()
        } else {
            porter::stem(token)
        }
    }

    /// The full pipeline: law-token extraction, cleaning, whitespace
    /// tokenization, and per-token stemming. Law tokens keep their digits.
    pub fn preprocess(&self, raw: &str) -> TokenStream {
        let mut tokens = Vec::new();
        let mut last = 0;
        for captures in self.law_regex.captures_iter(raw) {
            let m = captures.get(0).expect("group 0 always present");
            self.clean_and_stem_into(&raw[last..m.start()], &mut tokens);
            let mut law_tokens = Vec::new();
            self.rewrite_law_span(&captures, &mut law_tokens);
            tokens.extend(law_tokens);
            last = m.end();
        }
        self.clean_and_stem_into(&raw[last..], &mut tokens);
        TokenStream { tokens }
    }

    fn clean_and_stem_into(&self, text: &str, out: &mut Vec<String>) {
        for word in clean_text(text).split_whitespace() {
            out.push(porter::stem(word));
        }
    }

    // Rewrites one matched reference span: each numbered piece becomes
    // `word` plus its alphanumerics, connectives between pieces stay in
    // place, and the tokens are appended to `tokens`.
    fn rewrite_law_span(&self, captures: &regex::Captures, tokens: &mut Vec<String>) -> String {
        let head = captures.name("head").expect("pattern has head group");
        let rest = captures.name("rest").expect("pattern has rest group");
        let word = self.singular_law_word(head.as_str());
        let mut span = String::new();
        let mut last = 0;
        let rest_str = rest.as_str();
        for piece in self.law_piece_regex.find_iter(rest_str) {
            let mut token = word.to_string();
            token.extend(
                piece
                    .as_str()
                    .chars()
                    .filter(char::is_ascii_alphanumeric)
                    .map(|c| c.to_ascii_lowercase()),
            );
            span.push_str(&rest_str[last..piece.start()]);
            span.push_str(&token);
            tokens.push(token);
            last = piece.end();
        }
        span.push_str(&rest_str[last..]);
        span.trim_start().to_string()
    }

    fn singular_law_word(&self, head: &str) -> &str {
        let lower = head.to_lowercase();
        for word in &self.law_words {
            if *word == lower {
                return word;
            }
        }
        let depluralized = lower.strip_suffix('s').unwrap_or(&lower);
        for word in &self.law_words {
            if word == depluralized {
                return word;
            }
        }
        unreachable!("the head group only matches configured law words")
    }
}

fn default_pipeline() -> &'static TextPipeline {
    static PIPELINE: OnceLock<TextPipeline> = OnceLock::new();
    PIPELINE.get_or_init(TextPipeline::default)
}

/// [`TextPipeline::extract_law_tokens`] with the default configuration.
pub fn extract_law_tokens(raw: &str) -> (String, Vec<String>) {
    default_pipeline().extract_law_tokens(raw)
}

/// [`TextPipeline::stem`] with the default configuration.
pub fn stem(token: &str) -> String {
    default_pipeline().stem(token)
}

/// [`TextPipeline::preprocess`] with the default configuration.
pub fn preprocess(raw: &str) -> TokenStream {
    default_pipeline().preprocess(raw)
}

/// Options for [`build_vocabulary`].
#[derive(Debug, Clone)]
pub struct VocabularyOptions {
    /// Tokens in fewer than `min_df_ratio * num_docs` documents are
    /// excluded (strict inequality).
    pub min_df_ratio: f64,
    /// Tokens in more than `max_df_ratio * num_docs` documents are
    /// excluded (strict inequality).
    pub max_df_ratio: f64,
    pub ngram_order: NgramOrder,
}

impl Default for VocabularyOptions {
    fn default() -> Self {
        VocabularyOptions {
            min_df_ratio: 0.0001,
            max_df_ratio: 0.9,
            ngram_order: NgramOrder::Unigram,
        }
    }
}

/// A frequency-filtered token-to-index map.
///
/// Indices are contiguous in `[0, len)` and assigned in lexicographic
/// token order, so index order and token order always agree.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<u32>,
    num_docs: usize,
    min_df_ratio: f64,
    max_df_ratio: f64,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn min_df_ratio(&self) -> f64 {
        self.min_df_ratio
    }

    pub fn max_df_ratio(&self) -> f64 {
        self.max_df_ratio
    }

    /// Tokens in index order (which is lexicographic order).
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn token(&self, index: usize) -> &str {
        &self.tokens[index]
    }

    pub fn doc_freq(&self, index: usize) -> u32 {
        self.doc_freq[index]
    }

    /// Smoothed inverse document frequency, `ln((1+N)/(1+df)) + 1`.
    pub fn idf(&self, index: usize) -> f64 {
        let n = self.num_docs as f64;
        let df = self.doc_freq[index] as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    }

    /// Serializes as a header line `#num_docs=N min_df=x max_df=y`
    /// followed by one `token<TAB>index<TAB>doc_freq` line per token.
    pub fn write_tsv(&self, mut writer: impl Write) -> std::io::Result<()> {
        writeln!(
            writer,
            "#num_docs={} min_df={} max_df={}",
            self.num_docs, self.min_df_ratio, self.max_df_ratio
        )?;
        for (index, token) in self.tokens.iter().enumerate() {
            writeln!(writer, "{token}\t{index}\t{}", self.doc_freq[index])?;
        }
        Ok(())
    }

    pub fn to_tsv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_tsv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("tsv is utf-8")
    }

    pub fn write_tsv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_tsv(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    pub fn read_tsv(reader: impl Read, label: &str) -> Result<Self> {
        let reader = BufReader::new(reader);
        let mut lines = reader.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::malformed(label, 1, "missing header line"))?;
        let header = header.map_err(|e| Error::malformed(label, 1, e.to_string()))?;
        let (num_docs, min_df_ratio, max_df_ratio) = parse_vocab_header(&header)
            .ok_or_else(|| Error::malformed(label, 1, "invalid vocabulary header"))?;

        let mut rows: Vec<(String, usize, u32)> = Vec::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::malformed(label, line_no, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(token), Some(index), Some(df), None) = (
                fields.next(),
                fields.next(),
                fields.next(),
                fields.next(),
            ) else {
                return Err(Error::malformed(label, line_no, "expected 3 tab-separated fields"));
            };
            let index: usize = index
                .parse()
                .map_err(|_| Error::malformed(label, line_no, "invalid index"))?;
            let df: u32 = df
                .parse()
                .map_err(|_| Error::malformed(label, line_no, "invalid doc_freq"))?;
            if df == 0 || df as usize > num_docs {
                return Err(Error::malformed(label, line_no, "doc_freq out of range"));
            }
            rows.push((token.to_string(), index, df));
        }
        rows.sort_by_key(|(_, index, _)| *index);
        let mut tokens = Vec::with_capacity(rows.len());
        let mut doc_freq = Vec::with_capacity(rows.len());
        for (pos, (token, index, df)) in rows.into_iter().enumerate() {
            if index != pos {
                return Err(Error::malformed(label, 0, "indices are not contiguous"));
            }
            if let Some(prev) = tokens.last() {
                if *prev >= token {
                    return Err(Error::malformed(
                        label,
                        0,
                        "tokens are not in lexicographic index order",
                    ));
                }
            }
            tokens.push(token);
            doc_freq.push(df);
        }
        if tokens.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        Ok(Vocabulary::from_parts(
            tokens,
            doc_freq,
            num_docs,
            min_df_ratio,
            max_df_ratio,
        ))
    }

    pub fn read_tsv_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Vocabulary::read_tsv(file, &path.display().to_string())
    }

    /// SHA-256 of the canonical TSV serialization, as lowercase hex.
    pub fn sha256_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_tsv_string().as_bytes()))
    }

    fn from_parts(
        tokens: Vec<String>,
        doc_freq: Vec<u32>,
        num_docs: usize,
        min_df_ratio: f64,
        max_df_ratio: f64,
    ) -> Self {
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary {
            tokens,
            index,
            doc_freq,
            num_docs,
            min_df_ratio,
            max_df_ratio,
        }
    }
}

fn parse_vocab_header(header: &str) -> Option<(usize, f64, f64)> {
    let rest = header.strip_prefix('#')?;
    let mut num_docs = None;
    let mut min_df = None;
    let mut max_df = None;
    for part in rest.split_whitespace() {
        let (key, value) = part.split_once('=')?;
        match key {
            "num_docs" => num_docs = value.parse().ok(),
            "min_df" => min_df = value.parse().ok(),
            "max_df" => max_df = value.parse().ok(),
            _ => return None,
        }
    }
    Some((num_docs?, min_df?, max_df?))
}

/// Builds the frequency-filtered vocabulary over a corpus.
///
/// Document frequency counts each token once per judgment containing it
/// (after preprocessing). Tokens whose count is above
/// `max_df_ratio * num_docs` or below `min_df_ratio * num_docs` are
/// excluded, both bounds strict.
pub fn build_vocabulary(
    corpus: &Corpus,
    pipeline: &TextPipeline,
    options: &VocabularyOptions,
) -> Result<Vocabulary> {
    let (min, max) = (options.min_df_ratio, options.max_df_ratio);
    if !(0.0..=1.0).contains(&min) || !(0.0..=1.0).contains(&max) || min >= max {
        return Err(Error::InvalidDfBounds { min, max });
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let mut doc_freq: BTreeMap<String, u32> = BTreeMap::new();
    for judgment in corpus.iter() {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for paragraph in judgment.paragraphs() {
            let stream = pipeline.preprocess(paragraph);
            for_each_term(&stream, options.ngram_order, |term| {
                if !seen.contains(term) {
                    seen.insert(term.to_string());
                }
            });
        }
        for token in seen {
            *doc_freq.entry(token).or_insert(0) += 1;
        }
    }

    let n = corpus.len() as f64;
    let mut tokens = Vec::new();
    let mut freqs = Vec::new();
    for (token, df) in doc_freq {
        let df_f = df as f64;
        if df_f > max * n || df_f < min * n {
            continue;
        }
        tokens.push(token);
        freqs.push(df);
    }
    if tokens.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Ok(Vocabulary::from_parts(tokens, freqs, corpus.len(), min, max))
}
