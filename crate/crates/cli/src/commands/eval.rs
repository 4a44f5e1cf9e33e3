//! `jursim eval`: per-query and aggregate retrieval metrics for a run
//! file, as CSV.

use std::collections::BTreeSet;

use jursim::evalanalysis::trec::{parse_qrels, parse_run};
use jursim::{
    aggregate, average_precision, bpref, precision_at_k, recall_at_k, reciprocal_rank, QRels,
    RankedList,
};

use super::{check_unit_interval, csv_cell, out_writer, CliError, CmdResult};
use crate::EvalArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSpec {
    Map,
    Mrr,
    PrecisionAt(usize),
    RecallAt(usize),
    Bpref,
}

impl MetricSpec {
    pub(crate) fn name(self) -> String {
        match self {
            MetricSpec::Map => "map".into(),
            MetricSpec::Mrr => "mrr".into(),
            MetricSpec::PrecisionAt(k) => format!("p@{k}"),
            MetricSpec::RecallAt(k) => format!("recall@{k}"),
            MetricSpec::Bpref => "bpref".into(),
        }
    }

    /// `None` marks a query skipped for this metric (no relevant docs).
    pub(crate) fn compute(self, run: &RankedList, qrels: &QRels) -> Option<f64> {
        static EMPTY: BTreeSet<String> = BTreeSet::new();
        match self {
            MetricSpec::Map => average_precision(run, qrels),
            MetricSpec::Mrr => Some(reciprocal_rank(run, qrels)),
            MetricSpec::PrecisionAt(k) => Some(precision_at_k(run, qrels, k)),
            MetricSpec::RecallAt(k) => recall_at_k(run, qrels, k),
            MetricSpec::Bpref => {
                let judged = qrels
                    .judged_nonrelevant(run.query_id())
                    .unwrap_or(&EMPTY);
                bpref(run, qrels, judged)
            }
        }
    }
}

pub fn parse_metric_list(raw: &str) -> Result<Vec<MetricSpec>, CliError> {
    let mut specs = Vec::new();
    for part in raw.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let lower = part.to_lowercase();
        let spec = match lower.as_str() {
            "map" => MetricSpec::Map,
            "mrr" => MetricSpec::Mrr,
            "bpref" => MetricSpec::Bpref,
            other => {
                let parse_k = |rest: &str| -> Result<usize, CliError> {
                    let k: usize = rest.parse().map_err(|_| {
                        CliError::usage(format!("invalid metric cutoff in {part:?}"))
                    })?;
                    if k == 0 {
                        return Err(CliError::usage(format!("cutoff must be >= 1 in {part:?}")));
                    }
                    Ok(k)
                };
                if let Some(rest) = other.strip_prefix("p@") {
                    MetricSpec::PrecisionAt(parse_k(rest)?)
                } else if let Some(rest) = other.strip_prefix("recall@") {
                    MetricSpec::RecallAt(parse_k(rest)?)
                } else {
                    return Err(CliError::usage(format!("unknown metric {part:?}")));
                }
            }
        };
        if !specs.contains(&spec) {
            specs.push(spec);
        }
    }
    if specs.is_empty() {
        return Err(CliError::usage("no metrics requested"));
    }
    Ok(specs)
}

pub fn run(args: EvalArgs) -> CmdResult {
    let specs = parse_metric_list(&args.metrics)?;
    let runs = parse_run(&args.run)?;
    let qrels = parse_qrels(&args.qrels)?;

    let mut out = out_writer(args.output.as_ref())?;
    let names: Vec<String> = specs.iter().map(|s| s.name()).collect();
    writeln!(out, "query,{}", names.join(","))?;

    let mut per_metric: Vec<Vec<f64>> = vec![Vec::new(); specs.len()];
    let mut evaluated = 0usize;
    for run in &runs {
        if !qrels.contains_query(run.query_id()) {
            eprintln!(
                "warning: query {:?} has no relevance judgments, skipped",
                run.query_id()
            );
            continue;
        }
        evaluated += 1;
        let mut cells = Vec::with_capacity(specs.len());
        for (spec, values) in specs.iter().zip(per_metric.iter_mut()) {
            let value = spec.compute(run, &qrels);
            if let Some(v) = value {
                values.push(check_unit_interval(&spec.name(), v)?);
            } else {
                eprintln!(
                    "warning: query {:?} has no relevant documents, {} skipped",
                    run.query_id(),
                    spec.name()
                );
            }
            cells.push(csv_cell(value));
        }
        writeln!(
            out,
            "{},{}",
            jursim::util::csv_field(run.query_id()),
            cells.join(",")
        )?;
    }

    let mut aggregate_cells = Vec::with_capacity(specs.len());
    for (spec, values) in specs.iter().zip(&per_metric) {
        let mean = aggregate(values).map_err(|_| {
            CliError::Data(anyhow::anyhow!(
                "metric {} has no valid query to aggregate",
                spec.name()
            ))
        })?;
        aggregate_cells.push(csv_cell(Some(mean)));
    }
    writeln!(out, "all,{}", aggregate_cells.join(","))?;
    out.flush()?;
    eprintln!("evaluated {} of {} queries", evaluated, runs.len());
    Ok(())
}
