//! Ranking and experiment orchestration over pre-vectorized judgments.
//!
//! Vectorization and pairwise scoring parallelize over rayon's current
//! thread pool; every aggregation runs over order-preserving collections,
//! so results are identical for any thread count.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::citegraph::{sample_pairs_at_sld, CitationGraph, SldPairSample};
use crate::corpus::{Corpus, Judgment};
use crate::error::{Error, Result};
use crate::evalanalysis::{overlap, SimilarityDistribution};
use crate::parasim::{msp, pl_f, pl_m, sim_matrix_from_vectors, Method};
use crate::vecspace::{cosine, Vector, VectorSpaceModel};

/// A judgment with its paragraph vectors and whole-document vector under
/// one model.
#[derive(Debug, Clone)]
pub struct VectorizedJudgment {
    id: String,
    paragraph_vectors: Vec<Vector>,
    document_vector: Vector,
}

impl VectorizedJudgment {
    pub fn new(judgment: &Judgment, model: &VectorSpaceModel) -> Self {
        VectorizedJudgment {
            id: judgment.id().to_string(),
            paragraph_vectors: judgment
                .paragraphs()
                .iter()
                .map(|p| model.paragraph_vector(p))
                .collect(),
            document_vector: model.document_vector(judgment),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn paragraph_vectors(&self) -> &[Vector] {
        &self.paragraph_vectors
    }

    pub fn document_vector(&self) -> &Vector {
        &self.document_vector
    }
}

/// Vectorizes every judgment of a corpus, in id order.
pub fn vectorize_corpus(corpus: &Corpus, model: &VectorSpaceModel) -> Vec<VectorizedJudgment> {
    let judgments: Vec<&Judgment> = corpus.iter().collect();
    judgments
        .par_iter()
        .map(|j| VectorizedJudgment::new(j, model))
        .collect()
}

/// Scores one pre-vectorized pair under the chosen method.
pub fn score_vectorized(a: &VectorizedJudgment, b: &VectorizedJudgment, method: Method) -> f64 {
    match method {
        Method::Dl => cosine(&a.document_vector, &b.document_vector)
            .expect("vectors come from a single model"),
        Method::PlM => pl_m(&msp(&sim_matrix_from_vectors(
            &a.paragraph_vectors,
            &b.paragraph_vectors,
        ))),
        Method::PlF { k } => pl_f(
            &msp(&sim_matrix_from_vectors(
                &a.paragraph_vectors,
                &b.paragraph_vectors,
            )),
            k.get(),
        )
        .expect("k is non-zero by construction"),
    }
}

/// One query's candidates scored and sorted: descending score, ties
/// broken by ascending candidate id.
#[derive(Debug, Clone)]
pub struct QueryRanking {
    pub query_id: String,
    pub scored: Vec<(String, f64)>,
}

/// Scores every query against every candidate. Rankings come back in
/// query id order with a fully deterministic sort, independent of the
/// rayon thread count.
pub fn rank_all(
    queries: &[VectorizedJudgment],
    candidates: &[VectorizedJudgment],
    method: Method,
) -> Vec<QueryRanking> {
    queries
        .par_iter()
        .map(|query| {
            let mut scored: Vec<(String, f64)> = candidates
                .par_iter()
                .map(|candidate| {
                    (
                        candidate.id.clone(),
                        score_vectorized(query, candidate, method),
                    )
                })
                .collect();
            scored.sort_by(|a, b| {
                b.1.partial_cmp(&a.1)
                    .expect("scores are finite")
                    .then_with(|| a.0.cmp(&b.0))
            });
            QueryRanking {
                query_id: query.id.clone(),
                scored,
            }
        })
        .collect()
}

/// Splitmix-style mixing of the user seed with the stratum depth, so each
/// SLD stratum draws from its own reproducible stream.
pub fn stratum_seed(seed: u64, d: u32) -> u64 {
    let mut z = seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(u64::from(d) + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mean similarity of each method over one SLD stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct SldAnalysisRow {
    pub d: u32,
    /// Pairs actually sampled; fewer than requested means shortage.
    pub pairs: usize,
    pub ms_dl: Option<f64>,
    pub ms_pl_m: Option<f64>,
    pub ms_pl_f: Option<f64>,
    pub ms_lb: Option<f64>,
}

/// Per-pair scores of every method over one SLD stratum.
#[derive(Debug, Clone)]
pub struct SldScores {
    pub d: u32,
    pub sample: SldPairSample,
    pub dl: Vec<f64>,
    pub pl_m: Vec<f64>,
    pub pl_f: Vec<f64>,
}

/// Samples pairs at each `d` in `1..=d_max` and scores them with DL,
/// PL-M, PL-F(k), and LB. Pairs referencing ids missing from the corpus
/// are an error here: the graph loader deliberately lets them through.
pub fn score_sld_strata(
    corpus: &Corpus,
    graph: &CitationGraph,
    model: &VectorSpaceModel,
    k: usize,
    d_max: u32,
    pairs_per_d: usize,
    seed: u64,
) -> Result<Vec<SldScores>> {
    if d_max == 0 {
        return Err(Error::InvalidArgument("d_max must be at least 1".into()));
    }
    let pl_f_method = Method::pl_f(k)?;
    let vectorized: BTreeMap<&str, VectorizedJudgment> = {
        let entries = vectorize_corpus(corpus, model);
        corpus.ids().zip(entries).collect()
    };
    let mut out = Vec::new();
    for d in 1..=d_max {
        let sample = sample_pairs_at_sld(graph, d, pairs_per_d, stratum_seed(seed, d))?;
        let looked_up: Result<Vec<(&VectorizedJudgment, &VectorizedJudgment)>> = sample
            .pairs
            .iter()
            .map(|(a, b)| {
                let va = vectorized
                    .get(a.as_str())
                    .ok_or_else(|| Error::UnknownNode(a.clone()))?;
                let vb = vectorized
                    .get(b.as_str())
                    .ok_or_else(|| Error::UnknownNode(b.clone()))?;
                Ok((va, vb))
            })
            .collect();
        let looked_up = looked_up?;
        let score_all = |method: Method| -> Vec<f64> {
            looked_up
                .par_iter()
                .map(|(a, b)| score_vectorized(a, b, method))
                .collect()
        };
        out.push(SldScores {
            d,
            dl: score_all(Method::Dl),
            pl_m: score_all(Method::PlM),
            pl_f: score_all(pl_f_method),
            sample,
        });
    }
    Ok(out)
}

/// Reduces stratum scores to the mean-similarity table (one row per `d`).
pub fn analyze_sld(strata: &[SldScores]) -> Vec<SldAnalysisRow> {
    strata
        .iter()
        .map(|s| {
            let mean = |values: &[f64]| {
                if values.is_empty() {
                    None
                } else {
                    Some(values.iter().sum::<f64>() / values.len() as f64)
                }
            };
            SldAnalysisRow {
                d: s.d,
                pairs: s.sample.pairs.len(),
                ms_dl: mean(&s.dl),
                ms_pl_m: mean(&s.pl_m),
                ms_pl_f: mean(&s.pl_f),
                ms_lb: if s.sample.pairs.is_empty() {
                    None
                } else {
                    Some(1.0 / f64::from(s.d))
                },
            }
        })
        .collect()
}

/// Overlap of the method's score distributions at consecutive SLDs.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapRow {
    pub d_low: u32,
    pub d_high: u32,
    pub pairs_low: usize,
    pub pairs_high: usize,
    /// `None` when either stratum is empty.
    pub overlap: Option<f64>,
}

pub fn overlap_by_sld(strata: &[SldScores], method: Method, bins: usize) -> Result<Vec<OverlapRow>> {
    let scores_of = |s: &SldScores| -> Vec<f64> {
        match method {
            Method::Dl => s.dl.clone(),
            Method::PlM => s.pl_m.clone(),
            Method::PlF { .. } => s.pl_f.clone(),
        }
    };
    let mut rows = Vec::new();
    for window in strata.windows(2) {
        let (lo, hi) = (&window[0], &window[1]);
        let lo_scores = scores_of(lo);
        let hi_scores = scores_of(hi);
        let value = if lo_scores.is_empty() || hi_scores.is_empty() {
            None
        } else {
            Some(overlap(
                &SimilarityDistribution::new(lo.d, lo_scores)?,
                &SimilarityDistribution::new(hi.d, hi_scores)?,
                bins,
            )?)
        };
        rows.push(OverlapRow {
            d_low: lo.d,
            d_high: hi.d,
            pairs_low: lo.sample.pairs.len(),
            pairs_high: hi.sample.pairs.len(),
            overlap: value,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Judgment;
    use crate::parasim::{para_sim_matrix, score_pair};
    use crate::textprep::{build_vocabulary, NgramOrder, TextPipeline, VocabularyOptions};
    use crate::vecspace::ModelKind;

    fn corpus_and_model() -> (Corpus, VectorSpaceModel) {
        let judgments = [
            ("A", vec!["kaba dama pava", "gava vada"]),
            ("B", vec!["kaba dama", "maga naba pada"]),
            ("C", vec!["qasa rada", "kaba dama pava"]),
            ("D", vec!["zava wapa", "xata yama"]),
        ];
        let corpus = Corpus::from_judgments(judgments.iter().map(|(id, ps)| {
            Judgment::new(*id, ps.iter().map(|p| p.to_string()).collect()).unwrap()
        }))
        .unwrap();
        let vocab = build_vocabulary(
            &corpus,
            &TextPipeline::default(),
            &VocabularyOptions {
                min_df_ratio: 0.0,
                max_df_ratio: 1.0,
                ngram_order: NgramOrder::Unigram,
            },
        )
        .unwrap();
        let model = VectorSpaceModel::new(
            ModelKind::Tfidf,
            vocab,
            None,
            NgramOrder::Unigram,
            TextPipeline::default(),
        )
        .unwrap();
        (corpus, model)
    }

    #[test]
    fn vectorized_scores_agree_with_direct_scoring() {
        let (corpus, model) = corpus_and_model();
        let vectorized = vectorize_corpus(&corpus, &model);
        let judgments: Vec<&Judgment> = corpus.iter().collect();
        let methods = [Method::Dl, Method::PlM, Method::pl_f(3).unwrap()];
        for i in 0..judgments.len() {
            for j in 0..judgments.len() {
                for method in methods {
                    let fast = score_vectorized(&vectorized[i], &vectorized[j], method);
                    let slow = score_pair(judgments[i], judgments[j], &model, method);
                    assert_eq!(fast, slow, "{} vs {} under {method}", judgments[i].id(), judgments[j].id());
                }
            }
        }
    }

    #[test]
    fn rank_all_sorts_descending_with_id_tiebreak() {
        let (corpus, model) = corpus_and_model();
        let vectorized = vectorize_corpus(&corpus, &model);
        let rankings = rank_all(&vectorized[..1], &vectorized, Method::Dl);
        assert_eq!(rankings.len(), 1);
        let ranking = &rankings[0];
        assert_eq!(ranking.query_id, "A");
        assert_eq!(ranking.scored[0].0, "A");
        assert!((ranking.scored[0].1 - 1.0).abs() < 1e-12);
        for pair in ranking.scored.windows(2) {
            assert!(
                pair[0].1 > pair[1].1 || (pair[0].1 == pair[1].1 && pair[0].0 < pair[1].0),
                "ordering violated: {pair:?}"
            );
        }
    }

    #[test]
    fn msp_count_is_the_smaller_paragraph_count() {
        let (corpus, model) = corpus_and_model();
        let a = corpus.get("A").unwrap();
        let b = corpus.get("B").unwrap();
        let matrix = para_sim_matrix(a, b, &model);
        assert_eq!(msp(&matrix).len(), 2);
    }

    #[test]
    fn stratum_seed_is_stable_and_spread() {
        assert_eq!(stratum_seed(42, 1), stratum_seed(42, 1));
        assert_ne!(stratum_seed(42, 1), stratum_seed(42, 2));
        assert_ne!(stratum_seed(42, 1), stratum_seed(43, 1));
    }

    #[test]
    fn sld_analysis_over_a_chain() {
        let (corpus, model) = corpus_and_model();
        let mut graph = CitationGraph::new();
        graph.add_edge("A", "B");
        graph.add_edge("B", "C");
        graph.add_edge("C", "D");
        let strata = score_sld_strata(&corpus, &graph, &model, 3, 3, 10, 7).unwrap();
        let rows = analyze_sld(&strata);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].d, 1);
        assert_eq!(rows[0].pairs, 3);
        assert_eq!(rows[0].ms_lb, Some(1.0));
        assert_eq!(rows[1].ms_lb, Some(0.5));
        // d=3 has exactly one pair (A, D)
        assert_eq!(rows[2].pairs, 1);
        let overlaps = overlap_by_sld(&strata, Method::PlM, 10).unwrap();
        assert_eq!(overlaps.len(), 2);
        for row in &overlaps {
            let v = row.overlap.unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn missing_corpus_ids_surface_at_analysis_time() {
        let (corpus, model) = corpus_and_model();
        let mut graph = CitationGraph::new();
        graph.add_edge("A", "GHOST");
        let err = score_sld_strata(&corpus, &graph, &model, 3, 1, 5, 7).unwrap_err();
        assert!(matches!(err, Error::UnknownNode(id) if id == "GHOST"));
    }
}
