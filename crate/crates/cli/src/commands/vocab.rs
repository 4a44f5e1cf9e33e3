//! `jursim vocab`: build the frequency-filtered vocabulary and write it
//! with its metadata sidecar.

use jursim::textprep::{build_vocabulary, VocabularyOptions};
use jursim::{ingest_corpus, IndexMetadata};

use super::{metadata_path, ngram_order_of, pipeline_from_flag, CmdResult};
use crate::VocabArgs;

pub fn run(args: VocabArgs) -> CmdResult {
    let pipeline = pipeline_from_flag(&args.build.law_words)?;
    let corpus = ingest_corpus(&args.corpus)?;
    let options = VocabularyOptions {
        min_df_ratio: args.build.min_df,
        max_df_ratio: args.build.max_df,
        ngram_order: ngram_order_of(&args.build),
    };
    let vocabulary = build_vocabulary(&corpus, &pipeline, &options)?;
    vocabulary.write_tsv_file(&args.output)?;
    let metadata = IndexMetadata::for_vocabulary(
        &vocabulary,
        &pipeline,
        options.ngram_order,
        args.model.map(Into::into),
    );
    metadata.write_file(metadata_path(&args.output))?;
    eprintln!(
        "vocabulary: {} tokens over {} documents -> {}",
        vocabulary.len(),
        vocabulary.num_docs(),
        args.output.display()
    );
    Ok(())
}
