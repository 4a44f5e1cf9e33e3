//! Shared fixtures for the pipeline benchmarks.

use jursim::synth::{random_corpus, RandomCorpusOptions};
use jursim::textprep::{build_vocabulary, NgramOrder, TextPipeline, VocabularyOptions};
use jursim::{Corpus, ModelKind, VectorSpaceModel};

/// A mid-sized seeded corpus shared by the benchmarks.
pub fn bench_corpus() -> Corpus {
    random_corpus(
        7,
        &RandomCorpusOptions {
            num_docs: 120,
            vocab_size: 400,
            paragraphs_per_doc: 4..=12,
            words_per_paragraph: 20..=60,
        },
    )
}

/// A TF-IDF model over [`bench_corpus`].
pub fn bench_model(corpus: &Corpus) -> VectorSpaceModel {
    let pipeline = TextPipeline::default();
    let vocabulary = build_vocabulary(
        corpus,
        &pipeline,
        &VocabularyOptions {
            min_df_ratio: 0.0,
            max_df_ratio: 1.0,
            ngram_order: NgramOrder::Unigram,
        },
    )
    .expect("synthetic corpus yields a vocabulary");
    VectorSpaceModel::new(
        ModelKind::Tfidf,
        vocabulary,
        None,
        NgramOrder::Unigram,
        pipeline,
    )
    .expect("tfidf model needs no embeddings")
}
