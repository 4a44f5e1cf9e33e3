//! TREC run and qrels file formats.
//!
//! Run lines are `query_id Q0 doc_id rank score tag`; qrels lines are
//! `query_id 0 doc_id relevance` with binary relevance.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::evalanalysis::{QRels, RankedList};

/// Parses a run file into one ranked list per query, queries in ascending
/// id order. Entries are ordered by the rank column; the rank column is
/// authoritative, as written by the ranking command.
pub fn parse_run(path: impl AsRef<Path>) -> Result<Vec<RankedList>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_run_reader(file, &path.display().to_string())
}

pub fn parse_run_reader(reader: impl Read, label: &str) -> Result<Vec<RankedList>> {
    let reader = BufReader::new(reader);
    let mut per_query: BTreeMap<String, Vec<(u64, String)>> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::malformed(label, line_no, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [query_id, _q0, doc_id, rank, _score, _tag] = fields.as_slice() else {
            return Err(Error::malformed(
                label,
                line_no,
                format!("expected 6 fields, found {}", fields.len()),
            ));
        };
        let rank: u64 = rank
            .parse()
            .map_err(|_| Error::malformed(label, line_no, format!("invalid rank {rank:?}")))?;
        per_query
            .entry(query_id.to_string())
            .or_default()
            .push((rank, doc_id.to_string()));
    }
    let mut lists = Vec::with_capacity(per_query.len());
    for (query_id, mut entries) in per_query {
        entries.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let ranking: Vec<String> = entries.into_iter().map(|(_, doc)| doc).collect();
        lists.push(RankedList::new(query_id, ranking)?);
    }
    Ok(lists)
}

/// Writes one query's scored candidates, already sorted best-first, as
/// TREC run lines with ranks from 1 and scores at six decimal places.
pub fn write_run_lines(
    mut writer: impl Write,
    query_id: &str,
    scored: &[(String, f64)],
    tag: &str,
) -> std::io::Result<()> {
    for (position, (doc_id, score)) in scored.iter().enumerate() {
        writeln!(
            writer,
            "{query_id} Q0 {doc_id} {} {score:.6} {tag}",
            position + 1
        )?;
    }
    Ok(())
}

/// Parses a qrels file with relevance labels in `{0, 1}`.
pub fn parse_qrels(path: impl AsRef<Path>) -> Result<QRels> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_qrels_reader(file, &path.display().to_string())
}

pub fn parse_qrels_reader(reader: impl Read, label: &str) -> Result<QRels> {
    let reader = BufReader::new(reader);
    let mut qrels = QRels::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::malformed(label, line_no, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [query_id, _iter, doc_id, relevance] = fields.as_slice() else {
            return Err(Error::malformed(
                label,
                line_no,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        };
        let relevant = match *relevance {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::malformed(
                    label,
                    line_no,
                    format!("relevance must be 0 or 1, found {other:?}"),
                ))
            }
        };
        qrels.add(*query_id, *doc_id, relevant);
    }
    Ok(qrels)
}
