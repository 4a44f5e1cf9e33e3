//! The measurement layer: similarity-distribution statistics (mean
//! similarity and histogram overlap) and binary-relevance retrieval
//! metrics (P@k, MRR, MAP, Recall@k, BPREF).

pub mod trec;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Similarity scores observed at one SLD stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityDistribution {
    label: u32,
    samples: Vec<f64>,
}

impl SimilarityDistribution {
    /// Requires at least one sample; every sample must be finite.
    pub fn new(label: u32, samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample(format!(
                "similarity distribution for d={label} has no samples"
            )));
        }
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "similarity sample {bad} is not finite"
            )));
        }
        Ok(SimilarityDistribution { label, samples })
    }

    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Mean of all values in the distribution.
pub fn mean_similarity(dist: &SimilarityDistribution) -> f64 {
    dist.samples.iter().sum::<f64>() / dist.samples.len() as f64
}

/// Normalized area of the intersection of two sample distributions.
///
/// Densities are estimated with equal-width histograms over the shared
/// sample range and normalized to unit mass; the statistic is the
/// intersection mass divided by the product of the two total masses (the
/// denominator is exactly 1 for normalized histograms, and is kept so
/// the formula stays faithful for unnormalized inputs).
///
/// The histogram arithmetic stays in integers until the final division,
/// so identical inputs give exactly 1 and disjoint supports exactly 0.
pub fn overlap(
    d1: &SimilarityDistribution,
    d2: &SimilarityDistribution,
    bins: usize,
) -> Result<f64> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!(
            "overlap needs at least 2 bins, got {bins}"
        )));
    }
    let all = d1.samples.iter().chain(&d2.samples);
    let lo = all.clone().cloned().fold(f64::INFINITY, f64::min);
    let hi = all.cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        // Every sample in both distributions is the same single value.
        return Ok(1.0);
    }

    let histogram = |samples: &[f64]| -> Vec<u64> {
        let mut counts = vec![0u64; bins];
        for &x in samples {
            let position = (x - lo) / (hi - lo) * bins as f64;
            let bin = (position as usize).min(bins - 1);
            counts[bin] += 1;
        }
        counts
    };
    let h1 = histogram(&d1.samples);
    let h2 = histogram(&d2.samples);
    let n1 = d1.samples.len() as u64;
    let n2 = d2.samples.len() as u64;

    // min(c/n1, d/n2) = min(c*n2, d*n1) / (n1*n2), summed in integers.
    let intersection: u128 = h1
        .iter()
        .zip(&h2)
        .map(|(&c, &d)| u128::min(c as u128 * n2 as u128, d as u128 * n1 as u128))
        .sum();
    let numerator = intersection as f64 / (n1 as f64 * n2 as f64);
    let total1: u64 = h1.iter().sum();
    let total2: u64 = h2.iter().sum();
    let denominator = (total1 as f64 / n1 as f64) * (total2 as f64 / n2 as f64);
    Ok(numerator / denominator)
}

/// One query's retrieval output: candidate ids, best first, no
/// duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedList {
    query_id: String,
    ranking: Vec<String>,
}

impl RankedList {
    pub fn new(query_id: impl Into<String>, ranking: Vec<String>) -> Result<Self> {
        let query_id = query_id.into();
        let mut seen = BTreeSet::new();
        for doc in &ranking {
            if !seen.insert(doc.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "ranking for query {query_id:?} lists {doc:?} twice"
                )));
            }
        }
        Ok(RankedList { query_id, ranking })
    }

    pub fn query_id(&self) -> &str {
        &self.query_id
    }

    pub fn ranking(&self) -> &[String] {
        &self.ranking
    }
}

/// Per-query binary relevance judgments. Documents judged non-relevant
/// (explicit 0 labels) are kept separately for BPREF.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QRels {
    relevant: BTreeMap<String, BTreeSet<String>>,
    nonrelevant: BTreeMap<String, BTreeSet<String>>,
}

impl QRels {
    pub fn new() -> Self {
        QRels::default()
    }

    pub fn add(&mut self, query_id: impl Into<String>, doc_id: impl Into<String>, relevant: bool) {
        let map = if relevant {
            &mut self.relevant
        } else {
            &mut self.nonrelevant
        };
        map.entry(query_id.into()).or_default().insert(doc_id.into());
    }

    /// Queries that carry any judgment, in ascending id order.
    pub fn queries(&self) -> impl Iterator<Item = &str> {
        let mut ids: Vec<&str> = self
            .relevant
            .keys()
            .chain(self.nonrelevant.keys())
            .map(String::as_str)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter()
    }

    pub fn contains_query(&self, query_id: &str) -> bool {
        self.relevant.contains_key(query_id) || self.nonrelevant.contains_key(query_id)
    }

    pub fn relevant(&self, query_id: &str) -> Option<&BTreeSet<String>> {
        self.relevant.get(query_id)
    }

    pub fn judged_nonrelevant(&self, query_id: &str) -> Option<&BTreeSet<String>> {
        self.nonrelevant.get(query_id)
    }

    pub fn num_relevant(&self, query_id: &str) -> usize {
        self.relevant.get(query_id).map_or(0, BTreeSet::len)
    }
}

/// Fraction of the top `k` ranks holding relevant documents. The
/// denominator is `k` even when the ranking is shorter.
pub fn precision_at_k(run: &RankedList, qrels: &QRels, k: usize) -> f64 {
    debug_assert!(k >= 1);
    let Some(relevant) = qrels.relevant(run.query_id()) else {
        return 0.0;
    };
    let hits = run
        .ranking()
        .iter()
        .take(k)
        .filter(|doc| relevant.contains(*doc))
        .count();
    hits as f64 / k as f64
}

/// Inverse rank (1-based) of the first relevant document; 0 when none is
/// retrieved.
pub fn reciprocal_rank(run: &RankedList, qrels: &QRels) -> f64 {
    let Some(relevant) = qrels.relevant(run.query_id()) else {
        return 0.0;
    };
    run.ranking()
        .iter()
        .position(|doc| relevant.contains(doc))
        .map_or(0.0, |pos| 1.0 / (pos + 1) as f64)
}

/// Average precision with the total-relevant denominator; unretrieved
/// relevant documents contribute zero. `None` when the query has no
/// relevant documents (callers skip such queries at aggregation).
pub fn average_precision(run: &RankedList, qrels: &QRels) -> Option<f64> {
    let relevant = qrels.relevant(run.query_id())?;
    if relevant.is_empty() {
        return None;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (pos, doc) in run.ranking().iter().enumerate() {
        if relevant.contains(doc) {
            hits += 1;
            sum += hits as f64 / (pos + 1) as f64;
        }
    }
    Some(sum / relevant.len() as f64)
}

/// Fraction of the relevant documents found in the top `k`. `None` when
/// the query has no relevant documents.
pub fn recall_at_k(run: &RankedList, qrels: &QRels, k: usize) -> Option<f64> {
    let relevant = qrels.relevant(run.query_id())?;
    if relevant.is_empty() {
        return None;
    }
    let hits = run
        .ranking()
        .iter()
        .take(k)
        .filter(|doc| relevant.contains(*doc))
        .count();
    Some(hits as f64 / relevant.len() as f64)
}

/// Binary preference over judged documents:
/// `(1/R) * sum over retrieved relevant r of
///  (1 - min(|nonrelevant above r|, R) / min(N, R))`.
///
/// With no judged non-relevant documents the penalty term is zero and the
/// score is the fraction of relevant documents retrieved. `None` when the
/// query has no relevant documents.
pub fn bpref(
    run: &RankedList,
    qrels: &QRels,
    judged_nonrelevant: &BTreeSet<String>,
) -> Option<f64> {
    let relevant = qrels.relevant(run.query_id())?;
    if relevant.is_empty() {
        return None;
    }
    let r = relevant.len();
    let n = judged_nonrelevant.len();
    let mut nonrelevant_above = 0usize;
    let mut sum = 0.0;
    for doc in run.ranking() {
        if relevant.contains(doc) {
            let penalty = if n == 0 {
                0.0
            } else {
                nonrelevant_above.min(r) as f64 / n.min(r) as f64
            };
            sum += 1.0 - penalty;
        } else if judged_nonrelevant.contains(doc) {
            nonrelevant_above += 1;
        }
    }
    Some(sum / r as f64)
}

/// Unweighted mean over per-query metric values.
pub fn aggregate(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::NoValidQueries);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}
