//! `jursim ingest`: load a corpus (and optionally its citation edges) and
//! print the dataset summary statistics.

use jursim::{corpus_stats, ingest_corpus, load_graph, CitationGraph};

use super::{out_writer, CmdResult};
use crate::IngestArgs;

pub fn run(args: IngestArgs) -> CmdResult {
    let corpus = ingest_corpus(&args.corpus)?;
    let graph = match &args.edges {
        Some(path) => {
            let (graph, stats) = load_graph(path)?;
            if stats.self_loops_dropped > 0 {
                eprintln!("warning: dropped {} self-loop(s)", stats.self_loops_dropped);
            }
            if stats.duplicates_collapsed > 0 {
                eprintln!(
                    "warning: collapsed {} duplicate edge(s)",
                    stats.duplicates_collapsed
                );
            }
            graph
        }
        None => CitationGraph::new(),
    };
    let stats = corpus_stats(&corpus, &graph)?;
    let mut out = out_writer(None)?;
    writeln!(out, "metric,value")?;
    writeln!(out, "num_judgments,{}", stats.num_judgments)?;
    writeln!(out, "avg_citations,{:.6}", stats.avg_citations)?;
    writeln!(out, "avg_paragraphs,{:.6}", stats.avg_paragraphs)?;
    writeln!(
        out,
        "avg_words_per_paragraph,{:.6}",
        stats.avg_words_per_paragraph
    )?;
    eprintln!(
        "ingested {} judgments from {}",
        stats.num_judgments,
        args.corpus.display()
    );
    Ok(())
}
