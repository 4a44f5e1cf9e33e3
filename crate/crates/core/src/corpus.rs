//! Corpus ingestion and statistics.
//!
//! A corpus is a set of judgments read from a UTF-8 line-delimited file.
//! Each line is a JSON object with an `"id"` field and exactly one of
//! `"text"` (split into paragraphs on blank lines) or `"paragraphs"`
//! (an array of pre-split paragraph strings).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::citegraph::CitationGraph;
use crate::error::{Error, Result};

/// A court decision held as an ordered, non-empty list of paragraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgment {
    id: String,
    paragraphs: Vec<String>,
}

impl Judgment {
    /// Builds a judgment, rejecting empty ids, empty paragraph lists, and
    /// paragraphs that are empty after trimming.
    pub fn new(id: impl Into<String>, paragraphs: Vec<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidJudgment {
                id,
                message: "id is empty".into(),
            });
        }
        if paragraphs.is_empty() {
            return Err(Error::InvalidJudgment {
                id,
                message: "judgment has no paragraphs".into(),
            });
        }
        if let Some(pos) = paragraphs.iter().position(|p| p.trim().is_empty()) {
            return Err(Error::InvalidJudgment {
                id,
                message: format!("paragraph {} is empty", pos + 1),
            });
        }
        Ok(Judgment { id, paragraphs })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn paragraphs(&self) -> &[String] {
        &self.paragraphs
    }

    pub fn paragraph_count(&self) -> usize {
        self.paragraphs.len()
    }
}

/// An id-indexed, immutable collection of judgments.
///
/// Iteration order is always ascending by id, so every traversal of a
/// corpus is deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    judgments: BTreeMap<String, Judgment>,
}

impl Corpus {
    /// Collects judgments into a corpus, rejecting duplicate ids.
    pub fn from_judgments(judgments: impl IntoIterator<Item = Judgment>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for judgment in judgments {
            let id = judgment.id().to_string();
            if map.insert(id.clone(), judgment).is_some() {
                return Err(Error::DuplicateId(id));
            }
        }
        Ok(Corpus { judgments: map })
    }

    pub fn get(&self, id: &str) -> Option<&Judgment> {
        self.judgments.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.judgments.contains_key(id)
    }

    /// Judgments in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = &Judgment> {
        self.judgments.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.judgments.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.judgments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }
}

/// Corpus-level statistics in the shape of a dataset summary table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub num_judgments: usize,
    /// Mean undirected citation degree, `2 * |edges| / |judgments|`.
    pub avg_citations: f64,
    pub avg_paragraphs: f64,
    /// Mean whitespace-token count over all paragraphs of all judgments.
    pub avg_words_per_paragraph: f64,
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    paragraphs: Option<Vec<String>>,
}

#[derive(Serialize)]
struct OutRecord<'a> {
    id: &'a str,
    paragraphs: &'a [String],
}

/// Reads a line-delimited document file into a corpus.
///
/// Blank lines are skipped. Errors name the offending line number
/// (malformed records) or the offending id (duplicates). An empty file is
/// an error.
pub fn ingest_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_corpus_reader(BufReader::new(file), &path.display().to_string())
}

/// Same as [`ingest_corpus`], over any buffered reader. `label` is used in
/// error messages in place of a file name.
pub fn ingest_corpus_reader(reader: impl BufRead, label: &str) -> Result<Corpus> {
    let mut judgments: BTreeMap<String, Judgment> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::malformed(label, line_no, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RawRecord = serde_json::from_str(&line)
            .map_err(|e| Error::malformed(label, line_no, format!("invalid record: {e}")))?;
        let paragraphs = match (record.text, record.paragraphs) {
            (Some(text), None) => split_paragraphs(&text),
            (None, Some(paragraphs)) => paragraphs,
            (Some(_), Some(_)) => {
                return Err(Error::malformed(
                    label,
                    line_no,
                    "record has both \"text\" and \"paragraphs\"",
                ))
            }
            (None, None) => {
                return Err(Error::malformed(
                    label,
                    line_no,
                    "record has neither \"text\" nor \"paragraphs\"",
                ))
            }
        };
        let judgment = Judgment::new(record.id, paragraphs)
            .map_err(|e| Error::malformed(label, line_no, e.to_string()))?;
        if judgments.contains_key(judgment.id()) {
            return Err(Error::DuplicateId(judgment.id().to_string()));
        }
        judgments.insert(judgment.id().to_string(), judgment);
    }
    if judgments.is_empty() {
        return Err(Error::malformed(label, 0, "file contains no records"));
    }
    Ok(Corpus { judgments })
}

/// Serializes a corpus back to the line-delimited record format, one
/// record per judgment in id order, always using the `"paragraphs"` form.
pub fn write_corpus(corpus: &Corpus, mut writer: impl Write) -> std::io::Result<()> {
    for judgment in corpus.iter() {
        let record = OutRecord {
            id: judgment.id(),
            paragraphs: judgment.paragraphs(),
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Splits raw text into paragraphs on runs of blank lines.
///
/// Each paragraph is trimmed; empty pieces are dropped, so the result may
/// be empty.
pub fn split_paragraphs(raw_text: &str) -> Vec<String> {
    let mut paragraphs = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        let trimmed = current.trim();
        if !trimmed.is_empty() {
            paragraphs.push(trimmed.to_string());
        }
        current.clear();
    };
    for line in raw_text.lines() {
        if line.trim().is_empty() {
            flush(&mut current);
        } else {
            if !current.is_empty() {
                current.push('\n');
            }
            current.push_str(line);
        }
    }
    flush(&mut current);
    paragraphs
}

/// Computes corpus statistics against a citation graph.
///
/// Nodes of the graph that do not appear in the corpus are tolerated here;
/// they are flagged later, at analysis time, when a sampled pair cannot be
/// scored.
pub fn corpus_stats(corpus: &Corpus, graph: &CitationGraph) -> Result<CorpusStats> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let num_judgments = corpus.len();
    let mut total_paragraphs = 0usize;
    let mut total_words = 0usize;
    for judgment in corpus.iter() {
        total_paragraphs += judgment.paragraph_count();
        for paragraph in judgment.paragraphs() {
            total_words += paragraph.split_whitespace().count();
        }
    }
    Ok(CorpusStats {
        num_judgments,
        avg_citations: 2.0 * graph.num_edges() as f64 / num_judgments as f64,
        avg_paragraphs: total_paragraphs as f64 / num_judgments as f64,
        avg_words_per_paragraph: total_words as f64 / total_paragraphs as f64,
    })
}
