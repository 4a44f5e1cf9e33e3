//! `jursim`: paragraph-level judgment similarity experiments end to end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "jursim",
    version,
    about = "Paragraph-level judgment similarity, citation-graph analysis, and retrieval evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a document file and report corpus statistics
    Ingest(IngestArgs),
    /// Build the frequency-filtered vocabulary and its index metadata
    Vocab(VocabArgs),
    /// Rank candidate judgments for every query judgment (TREC run output)
    Rank(RankArgs),
    /// Evaluate a run file against relevance judgments
    Eval(EvalArgs),
    /// Mean similarity per shortest-link-distance stratum
    AnalyzeSld(AnalyzeSldArgs),
    /// Overlap of score distributions at consecutive link distances
    Overlap(OverlapArgs),
    /// Retrieval metrics as a function of the PL-F cutoff k
    SweepK(SweepKArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Bow,
    Tfidf,
    W2v,
    W2vIdf,
}

impl From<ModelArg> for jursim::ModelKind {
    fn from(arg: ModelArg) -> Self {
        match arg {
            ModelArg::Bow => jursim::ModelKind::Bow,
            ModelArg::Tfidf => jursim::ModelKind::Tfidf,
            ModelArg::W2v => jursim::ModelKind::W2vSum,
            ModelArg::W2vIdf => jursim::ModelKind::W2vIdf,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Dl,
    PlM,
    PlF,
}

#[derive(Args)]
struct ModelOpts {
    /// Vector space model
    #[arg(long, value_enum, default_value_t = ModelArg::Tfidf)]
    model: ModelArg,
    /// Word-embedding file in word2vec text format (w2v models only)
    #[arg(long)]
    embeddings: Option<PathBuf>,
}

#[derive(Args)]
struct MethodOpts {
    /// Similarity method
    #[arg(long, value_enum, default_value_t = MethodArg::PlF)]
    method: MethodArg,
    /// Top similarity pairs averaged by pl-f (default 3; pl-f only)
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct VocabBuildOpts {
    /// Exclude tokens appearing in less than this fraction of documents
    #[arg(long, default_value_t = 0.0001)]
    min_df: f64,
    /// Exclude tokens appearing in more than this fraction of documents
    #[arg(long, default_value_t = 0.9)]
    max_df: f64,
    /// Count unigrams and bigrams jointly
    #[arg(long)]
    bigrams: bool,
    /// Comma-separated statute words recognized by law-token extraction
    #[arg(long, default_value = "section")]
    law_words: String,
}

#[derive(Args)]
struct ThreadOpts {
    /// Worker threads (0 = one per core); results do not depend on this
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct IngestArgs {
    /// Line-delimited document file
    #[arg(long)]
    corpus: PathBuf,
    /// Citation edge file (id1<TAB>id2 per line)
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Args)]
struct VocabArgs {
    /// Line-delimited document file
    #[arg(long)]
    corpus: PathBuf,
    /// Output vocabulary path; metadata goes to "<output>.meta.json"
    #[arg(long, short = 'o')]
    output: PathBuf,
    #[command(flatten)]
    build: VocabBuildOpts,
    /// Pin the index to one model kind
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
}

#[derive(Args)]
struct RankArgs {
    /// Query judgments (line-delimited document file)
    #[arg(long)]
    queries: PathBuf,
    /// Candidate judgments (line-delimited document file)
    #[arg(long)]
    candidates: PathBuf,
    /// Vocabulary built by the vocab command
    #[arg(long)]
    vocab: PathBuf,
    #[command(flatten)]
    model: ModelOpts,
    #[command(flatten)]
    method: MethodOpts,
    /// Run-file tag column
    #[arg(long, default_value = "jursim")]
    tag: String,
    /// Output run file (stdout when omitted)
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    threads: ThreadOpts,
}

#[derive(Args)]
struct EvalArgs {
    /// TREC run file
    #[arg(long)]
    run: PathBuf,
    /// TREC qrels file with binary relevance
    #[arg(long)]
    qrels: PathBuf,
    /// Comma-separated metrics: map, mrr, bpref, p@K, recall@K
    #[arg(long, default_value = "map,mrr,p@10,recall@100,bpref")]
    metrics: String,
    /// Output CSV (stdout when omitted)
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeSldArgs {
    /// Line-delimited document file
    #[arg(long)]
    corpus: PathBuf,
    /// Citation edge file
    #[arg(long)]
    edges: PathBuf,
    /// Use a prebuilt vocabulary instead of building in-process
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[command(flatten)]
    model: ModelOpts,
    #[command(flatten)]
    build: VocabBuildOpts,
    /// Top similarity pairs averaged by the pl-f column
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Largest link distance to sample
    #[arg(long, default_value_t = 10)]
    d_max: u32,
    /// Judgment pairs requested per distance
    #[arg(long, default_value_t = 1000)]
    pairs_per_d: usize,
    /// Sampling seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also dump the sampled pairs as CSV
    #[arg(long)]
    dump_pairs: Option<PathBuf>,
    /// Output CSV (stdout when omitted)
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    threads: ThreadOpts,
}

#[derive(Args)]
struct OverlapArgs {
    #[command(flatten)]
    base: AnalyzeSldArgs,
    /// Similarity method whose score distributions are compared (pl-f
    /// uses the shared --k)
    #[arg(long, value_enum, default_value_t = MethodArg::PlF)]
    method: MethodArg,
    /// Histogram bins for the overlap estimate
    #[arg(long, default_value_t = 50)]
    bins: usize,
}

#[derive(Args)]
struct SweepKArgs {
    /// Query judgments (line-delimited document file)
    #[arg(long)]
    queries: PathBuf,
    /// Candidate judgments (line-delimited document file)
    #[arg(long)]
    candidates: PathBuf,
    /// Vocabulary built by the vocab command
    #[arg(long)]
    vocab: PathBuf,
    /// TREC qrels file
    #[arg(long)]
    qrels: PathBuf,
    #[command(flatten)]
    model: ModelOpts,
    /// Comma-separated k values to sweep
    #[arg(long, default_value = "1,2,3,4,5")]
    k_values: String,
    /// Output CSV (stdout when omitted)
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    threads: ThreadOpts,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    let result = match cli.command {
        Command::Ingest(args) => commands::ingest::run(args),
        Command::Vocab(args) => commands::vocab::run(args),
        Command::Rank(args) => commands::rank::run(args),
        Command::Eval(args) => commands::eval::run(args),
        Command::AnalyzeSld(args) => commands::analyze::run_analyze(args),
        Command::Overlap(args) => commands::analyze::run_overlap(args),
        Command::SweepK(args) => commands::sweep::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
