//! `jursim sweep-k`: rank with PL-F at each requested k and tabulate the
//! retrieval metrics per k.

use jursim::evalanalysis::trec::parse_qrels;
use jursim::rank::{rank_all, vectorize_corpus};
use jursim::{aggregate, ingest_corpus, Method, RankedList};

use super::{
    build_model, csv_cell, load_index, out_writer, thread_pool, CliError, CmdResult,
};
use crate::commands::eval::MetricSpec;
use crate::SweepKArgs;

const SWEEP_METRICS: [MetricSpec; 4] = [
    MetricSpec::Map,
    MetricSpec::PrecisionAt(10),
    MetricSpec::RecallAt(100),
    MetricSpec::Mrr,
];

pub fn run(args: SweepKArgs) -> CmdResult {
    let k_values = parse_k_values(&args.k_values)?;
    let kind = args.model.model.into();
    let index = load_index(&args.vocab, kind)?;
    let model = build_model(
        kind,
        index.vocabulary,
        index.pipeline,
        index.metadata.ngram_order,
        &args.model,
    )?;
    let queries = ingest_corpus(&args.queries)?;
    let candidates = ingest_corpus(&args.candidates)?;
    let qrels = parse_qrels(&args.qrels)?;

    let pool = thread_pool(args.threads.threads)?;
    let (query_vectors, candidate_vectors) = pool.install(|| {
        (
            vectorize_corpus(&queries, &model),
            vectorize_corpus(&candidates, &model),
        )
    });

    let mut out = out_writer(args.output.as_ref())?;
    writeln!(out, "k,map,p@10,recall@100,mrr")?;
    for k in k_values {
        let method = Method::pl_f(k).expect("k values validated above");
        let rankings =
            pool.install(|| rank_all(&query_vectors, &candidate_vectors, method));
        let mut per_metric: Vec<Vec<f64>> = vec![Vec::new(); SWEEP_METRICS.len()];
        for ranking in &rankings {
            if !qrels.contains_query(&ranking.query_id) {
                continue;
            }
            let docs: Vec<String> = ranking.scored.iter().map(|(id, _)| id.clone()).collect();
            let list = RankedList::new(ranking.query_id.clone(), docs)?;
            for (spec, values) in SWEEP_METRICS.iter().zip(per_metric.iter_mut()) {
                if let Some(v) = spec.compute(&list, &qrels) {
                    values.push(v);
                }
            }
        }
        let mut cells = Vec::with_capacity(SWEEP_METRICS.len());
        for (spec, values) in SWEEP_METRICS.iter().zip(&per_metric) {
            let mean = aggregate(values).map_err(|_| {
                CliError::Data(anyhow::anyhow!(
                    "metric {} has no valid query to aggregate at k={k}",
                    spec.name()
                ))
            })?;
            cells.push(csv_cell(Some(mean)));
        }
        writeln!(out, "{k},{}", cells.join(","))?;
    }
    out.flush()?;
    Ok(())
}

fn parse_k_values(raw: &str) -> Result<Vec<usize>, CliError> {
    let mut values = Vec::new();
    for part in raw.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let k: usize = part
            .parse()
            .map_err(|_| CliError::usage(format!("invalid k value {part:?}")))?;
        if k == 0 {
            return Err(CliError::usage("k values must be at least 1"));
        }
        if !values.contains(&k) {
            values.push(k);
        }
    }
    if values.is_empty() {
        return Err(CliError::usage("no k values given"));
    }
    Ok(values)
}
