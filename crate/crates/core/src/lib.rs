//! Paragraph-level judgment similarity for precedence retrieval.
//!
//! This crate implements a similarity framework for legal judgments: two
//! documents are compared paragraph by paragraph under a shared vector
//! space (BOW, TF-IDF, or word embeddings), each paragraph of the smaller
//! document keeps its best cosine match (the maximum-similarity pairs),
//! and the pairs are aggregated into a score, either the mean (PL-M) or
//! the mean of the top `k` (PL-F), alongside a whole-document baseline
//! (DL).
//! Around the scoring core sit corpus ingestion, text preprocessing with
//! statute-reference tokens, an undirected citation graph with
//! shortest-link-distance queries and stratified pair sampling, a
//! distribution-overlap statistic, and the usual binary-relevance
//! retrieval metrics.
//!
//! The `jursim` command-line tool in this workspace drives the full
//! pipeline; see the crate modules for the library surface.

pub mod citegraph;
pub mod corpus;
pub mod error;
pub mod evalanalysis;
pub mod parasim;
pub mod rank;
pub mod synth;
pub mod textprep;
pub mod util;
pub mod vecspace;

pub use citegraph::{lb_sim, load_graph, sample_pairs_at_sld, CitationGraph, SldPairSample};
pub use corpus::{
    corpus_stats, ingest_corpus, split_paragraphs, write_corpus, Corpus, CorpusStats, Judgment,
};
pub use error::{Error, Result};
pub use evalanalysis::{
    aggregate, average_precision, bpref, mean_similarity, overlap, precision_at_k, recall_at_k,
    reciprocal_rank, QRels, RankedList, SimilarityDistribution,
};
pub use parasim::{
    dl_sim, msp, para_sim_matrix, pl_f, pl_m, score_pair, sim_matrix_from_vectors, Method,
    MspValues, ParaSimMatrix,
};
pub use textprep::{
    build_vocabulary, clean_text, extract_law_tokens, preprocess, stem, NgramOrder, TextPipeline,
    TokenStream, Vocabulary, VocabularyOptions,
};
pub use vecspace::{
    bow_vector, cosine, embed_idf_sum, embed_sum, load_embeddings, tfidf_vector, DenseVector,
    EmbeddingTable, IndexMetadata, ModelKind, SparseVector, Vector, VectorSpaceModel,
    IDF_FORMULA_TAG,
};
