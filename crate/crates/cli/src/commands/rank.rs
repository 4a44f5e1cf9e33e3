//! `jursim rank`: score every candidate for every query and write a TREC
//! run file, best first.

use jursim::evalanalysis::trec::write_run_lines;
use jursim::rank::{rank_all, vectorize_corpus};
use jursim::ingest_corpus;

use super::{
    build_model, load_index, method_from_opts, out_writer, thread_pool, CliError, CmdResult,
};
use crate::RankArgs;

pub fn run(args: RankArgs) -> CmdResult {
    let kind = args.model.model.into();
    let index = load_index(&args.vocab, kind)?;
    let model = build_model(
        kind,
        index.vocabulary,
        index.pipeline,
        index.metadata.ngram_order,
        &args.model,
    )?;
    let method = method_from_opts(&args.method)?;
    let queries = ingest_corpus(&args.queries)?;
    let candidates = ingest_corpus(&args.candidates)?;

    let pool = thread_pool(args.threads.threads)?;
    let rankings = pool.install(|| {
        let query_vectors = vectorize_corpus(&queries, &model);
        let candidate_vectors = vectorize_corpus(&candidates, &model);
        rank_all(&query_vectors, &candidate_vectors, method)
    });

    let mut out = out_writer(args.output.as_ref())?;
    for ranking in &rankings {
        if let Some((doc, score)) = ranking.scored.iter().find(|(_, s)| !s.is_finite()) {
            return Err(CliError::internal(format!(
                "non-finite score {score} for ({}, {doc})",
                ranking.query_id
            )));
        }
        write_run_lines(&mut out, &ranking.query_id, &ranking.scored, &args.tag)?;
    }
    out.flush()?;
    eprintln!(
        "ranked {} candidates for {} queries ({} {})",
        candidates.len(),
        queries.len(),
        kind,
        method
    );
    Ok(())
}
