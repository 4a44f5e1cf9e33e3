//! Shared command plumbing: error-to-exit-code mapping, index loading,
//! model assembly, and output helpers.

pub mod analyze;
pub mod eval;
pub mod ingest;
pub mod rank;
pub mod sweep;
pub mod vocab;

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use jursim::textprep::Vocabulary;
use jursim::{
    EmbeddingTable, IndexMetadata, Method, ModelKind, TextPipeline, VectorSpaceModel,
};

use crate::{MethodArg, MethodOpts, ModelOpts, VocabBuildOpts};

/// Command failures carrying their process exit code: 1 usage, 2 data or
/// format, 3 violated internal invariant.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError::Internal(message.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(message) => write!(f, "{message}"),
            CliError::Data(err) => write!(f, "{err:#}"),
            CliError::Internal(message) => write!(f, "internal invariant violated: {message}"),
        }
    }
}

impl From<jursim::Error> for CliError {
    fn from(err: jursim::Error) -> Self {
        CliError::Data(err.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.into())
    }
}

pub type CmdResult = Result<(), CliError>;

pub fn pipeline_from_flag(law_words: &str) -> Result<TextPipeline, CliError> {
    let words: Vec<&str> = law_words
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .collect();
    TextPipeline::new(&words)
        .map_err(|e| CliError::usage(format!("invalid --law-words: {e}")))
}

pub fn method_from_opts(opts: &MethodOpts) -> Result<Method, CliError> {
    match opts.method {
        MethodArg::PlF => Method::pl_f(opts.k.unwrap_or(3))
            .map_err(|_| CliError::usage("--k must be at least 1")),
        other => {
            if opts.k.is_some() {
                return Err(CliError::usage("--k only applies to --method pl-f"));
            }
            Ok(match other {
                MethodArg::Dl => Method::Dl,
                MethodArg::PlM => Method::PlM,
                MethodArg::PlF => unreachable!("handled above"),
            })
        }
    }
}

pub fn metadata_path(vocab_path: &Path) -> PathBuf {
    let mut name = vocab_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push_str(".meta.json");
    vocab_path.with_file_name(name)
}

/// A vocabulary loaded together with its checked metadata sidecar.
pub struct LoadedIndex {
    pub vocabulary: Vocabulary,
    pub metadata: IndexMetadata,
    pub pipeline: TextPipeline,
}

/// Loads a vocabulary and refuses mismatched artifacts: a changed
/// vocabulary file (hash), a different idf formula, or a model kind other
/// than the one the index was pinned to.
pub fn load_index(vocab_path: &Path, requested: ModelKind) -> Result<LoadedIndex, CliError> {
    let vocabulary = Vocabulary::read_tsv_file(vocab_path)?;
    let metadata = IndexMetadata::read_file(metadata_path(vocab_path))?;
    metadata.check(&vocabulary, requested)?;
    let pipeline = TextPipeline::new(&metadata.law_words)?;
    Ok(LoadedIndex {
        vocabulary,
        metadata,
        pipeline,
    })
}

/// Assembles the vector space model, loading embeddings when the kind
/// needs them.
pub fn build_model(
    kind: ModelKind,
    vocabulary: Vocabulary,
    pipeline: TextPipeline,
    ngram_order: jursim::NgramOrder,
    opts: &ModelOpts,
) -> Result<VectorSpaceModel, CliError> {
    let embeddings = if kind.uses_embeddings() {
        let path = opts.embeddings.as_ref().ok_or_else(|| {
            CliError::usage(format!("--embeddings is required for --model {kind}"))
        })?;
        Some(EmbeddingTable::load(path, &vocabulary)?)
    } else {
        if opts.embeddings.is_some() {
            eprintln!("warning: --embeddings is ignored for --model {kind}");
        }
        None
    };
    Ok(VectorSpaceModel::new(
        kind,
        vocabulary,
        embeddings,
        ngram_order,
        pipeline,
    )?)
}

pub fn ngram_order_of(build: &VocabBuildOpts) -> jursim::NgramOrder {
    if build.bigrams {
        jursim::NgramOrder::Bigram
    } else {
        jursim::NgramOrder::Unigram
    }
}

/// Output sink: a file when a path is given, stdout otherwise.
pub fn out_writer(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                CliError::Data(anyhow::anyhow!("cannot create {}: {e}", path.display()))
            })?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Data(anyhow::anyhow!("cannot build thread pool: {e}")))
}

/// Six-decimal cell, or an empty cell for an undefined value.
pub fn csv_cell(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.6}")).unwrap_or_default()
}

/// Metrics must land in [0, 1]; anything else is a bug, reported with
/// exit code 3.
pub fn check_unit_interval(name: &str, value: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(CliError::internal(format!(
            "metric {name} = {value} escaped [0, 1]"
        )))
    }
}
