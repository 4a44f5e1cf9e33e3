//! `jursim analyze-sld` and `jursim overlap`: sample judgment pairs per
//! shortest-link distance and reduce their similarity scores.

use jursim::rank::{analyze_sld, overlap_by_sld, score_sld_strata, SldScores};
use jursim::textprep::{build_vocabulary, VocabularyOptions};
use jursim::vecspace::VectorSpaceModel;
use jursim::{ingest_corpus, load_graph, Corpus};

use super::{
    build_model, csv_cell, load_index, ngram_order_of, out_writer, pipeline_from_flag,
    thread_pool, CmdResult,
};
use crate::{AnalyzeSldArgs, OverlapArgs};

fn prepare(args: &AnalyzeSldArgs) -> Result<(Corpus, jursim::CitationGraph, VectorSpaceModel), super::CliError> {
    let corpus = ingest_corpus(&args.corpus)?;
    let (graph, edge_stats) = load_graph(&args.edges)?;
    if edge_stats.self_loops_dropped > 0 {
        eprintln!(
            "warning: dropped {} self-loop(s)",
            edge_stats.self_loops_dropped
        );
    }
    let kind = args.model.model.into();
    let model = match &args.vocab {
        Some(path) => {
            let index = load_index(path, kind)?;
            build_model(
                kind,
                index.vocabulary,
                index.pipeline,
                index.metadata.ngram_order,
                &args.model,
            )?
        }
        None => {
            let pipeline = pipeline_from_flag(&args.build.law_words)?;
            let options = VocabularyOptions {
                min_df_ratio: args.build.min_df,
                max_df_ratio: args.build.max_df,
                ngram_order: ngram_order_of(&args.build),
            };
            let vocabulary = build_vocabulary(&corpus, &pipeline, &options)?;
            build_model(kind, vocabulary, pipeline, options.ngram_order, &args.model)?
        }
    };
    Ok((corpus, graph, model))
}

fn compute_strata(args: &AnalyzeSldArgs, k: usize) -> Result<Vec<SldScores>, super::CliError> {
    let (corpus, graph, model) = prepare(args)?;
    let pool = thread_pool(args.threads.threads)?;
    let strata = pool.install(|| {
        score_sld_strata(
            &corpus,
            &graph,
            &model,
            k,
            args.d_max,
            args.pairs_per_d,
            args.seed,
        )
    })?;
    for stratum in &strata {
        if stratum.sample.shortage {
            eprintln!(
                "warning: only {} of {} pairs at d={}",
                stratum.sample.pairs.len(),
                args.pairs_per_d,
                stratum.d
            );
        }
    }
    if let Some(path) = &args.dump_pairs {
        let mut out = out_writer(Some(path))?;
        writeln!(out, "# seed={}", args.seed)?;
        writeln!(out, "d,id1,id2")?;
        for stratum in &strata {
            for (a, b) in &stratum.sample.pairs {
                writeln!(
                    out,
                    "{},{},{}",
                    stratum.d,
                    jursim::util::csv_field(a),
                    jursim::util::csv_field(b)
                )?;
            }
        }
        out.flush()?;
    }
    Ok(strata)
}

pub fn run_analyze(args: AnalyzeSldArgs) -> CmdResult {
    let strata = compute_strata(&args, args.k)?;
    let rows = analyze_sld(&strata);
    let mut out = out_writer(args.output.as_ref())?;
    writeln!(out, "d,pairs,ms_dl,ms_plm,ms_plf,ms_lb")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.d,
            row.pairs,
            csv_cell(row.ms_dl),
            csv_cell(row.ms_pl_m),
            csv_cell(row.ms_pl_f),
            csv_cell(row.ms_lb)
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn run_overlap(args: OverlapArgs) -> CmdResult {
    let method = match args.method {
        crate::MethodArg::Dl => jursim::Method::Dl,
        crate::MethodArg::PlM => jursim::Method::PlM,
        crate::MethodArg::PlF => jursim::Method::pl_f(args.base.k)
            .map_err(|_| super::CliError::usage("--k must be at least 1"))?,
    };
    let strata = compute_strata(&args.base, args.base.k)?;
    let rows = overlap_by_sld(&strata, method, args.bins)?;
    let mut out = out_writer(args.base.output.as_ref())?;
    writeln!(out, "pair,pairs_lo,pairs_hi,overlap")?;
    for row in rows {
        writeln!(
            out,
            "D{}-D{},{},{},{}",
            row.d_low,
            row.d_high,
            row.pairs_low,
            row.pairs_high,
            csv_cell(row.overlap)
        )?;
    }
    out.flush()?;
    Ok(())
}
