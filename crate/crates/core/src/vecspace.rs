//! Vector space models: BOW and TF-IDF sparse vectors, embedding-sum and
//! IDF-weighted embedding dense vectors, and cosine similarity.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Judgment;
use crate::error::{Error, Result};
use crate::textprep::{for_each_term, NgramOrder, TextPipeline, TokenStream, Vocabulary};

/// Tag recorded in index metadata so a ranking run can verify it is
/// scoring with the same inverse-document-frequency definition.
pub const IDF_FORMULA_TAG: &str = "ln((1+N)/(1+df))+1";

/// A sparse vector over vocabulary indices.
///
/// Entries are sorted by strictly increasing index, hold no zero weights,
/// and every index is below the vocabulary size `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new(dim: usize, entries: Vec<(usize, f64)>) -> Result<Self> {
        let mut prev: Option<usize> = None;
        for &(index, weight) in &entries {
            if index >= dim {
                return Err(Error::InvalidArgument(format!(
                    "sparse index {index} out of range for dimension {dim}"
                )));
            }
            if prev.is_some_and(|p| p >= index) {
                return Err(Error::InvalidArgument(
                    "sparse indices must be strictly increasing".into(),
                ));
            }
            if weight == 0.0 || !weight.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "sparse weight {weight} at index {index} must be finite and non-zero"
                )));
            }
            prev = Some(index);
        }
        Ok(SparseVector { dim, entries })
    }

    fn from_weights(dim: usize, weights: BTreeMap<usize, f64>) -> Self {
        let entries = weights.into_iter().filter(|&(_, w)| w != 0.0).collect();
        SparseVector { dim, entries }
    }

    pub fn empty(dim: usize) -> Self {
        SparseVector {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, w)| w * w)
            .sum::<f64>()
            .sqrt()
    }
}

/// A dense vector of fixed dimension with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    components: Vec<f64>,
}

impl DenseVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if let Some(bad) = components.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dense component {bad} is not finite"
            )));
        }
        Ok(DenseVector { components })
    }

    pub fn zeros(dim: usize) -> Self {
        DenseVector {
            components: vec![0.0; dim],
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&c| c == 0.0)
    }
}

/// Either paragraph/document representation; both sides of a comparison
/// must hold the same variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Sparse(SparseVector),
    Dense(DenseVector),
}

/// Cosine similarity between two vectors of the same kind.
///
/// If either vector has zero norm, the similarity is 0 rather than an
/// error: paragraphs whose every token is out of vocabulary still take
/// part in ranking.
pub fn cosine(u: &Vector, v: &Vector) -> Result<f64> {
    match (u, v) {
        (Vector::Sparse(a), Vector::Sparse(b)) => cosine_sparse(a, b),
        (Vector::Dense(a), Vector::Dense(b)) => cosine_dense(a, b),
        _ => Err(Error::VectorKindMismatch),
    }
}

pub fn cosine_sparse(u: &SparseVector, v: &SparseVector) -> Result<f64> {
    if u.dim != v.dim {
        return Err(Error::DimensionMismatch {
            left: u.dim,
            right: v.dim,
        });
    }
    let mut dot = 0.0;
    let mut iter_u = u.entries.iter().peekable();
    let mut iter_v = v.entries.iter().peekable();
    while let (Some(&&(iu, wu)), Some(&&(iv, wv))) = (iter_u.peek(), iter_v.peek()) {
        match iu.cmp(&iv) {
            std::cmp::Ordering::Less => {
                iter_u.next();
            }
            std::cmp::Ordering::Greater => {
                iter_v.next();
            }
            std::cmp::Ordering::Equal => {
                dot += wu * wv;
                iter_u.next();
                iter_v.next();
            }
        }
    }
    Ok(normalized(dot, u.l2_norm(), v.l2_norm()))
}

pub fn cosine_dense(u: &DenseVector, v: &DenseVector) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let mut dot = 0.0;
    let mut norm_u = 0.0;
    let mut norm_v = 0.0;
    for (a, b) in u.components.iter().zip(&v.components) {
        dot += a * b;
        norm_u += a * a;
        norm_v += b * b;
    }
    Ok(normalized(dot, norm_u.sqrt(), norm_v.sqrt()))
}

fn normalized(dot: f64, norm_u: f64, norm_v: f64) -> f64 {
    if norm_u == 0.0 || norm_v == 0.0 {
        0.0
    } else {
        dot / (norm_u * norm_v)
    }
}

/// Word embeddings restricted to vocabulary tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.vectors.iter().map(|(t, v)| (t.as_str(), v.as_slice()))
    }

    /// Reads a word2vec-format text file (`COUNT DIM` header, then one
    /// `token v1 .. vDIM` line per word), keeping only vocabulary tokens.
    pub fn load(path: impl AsRef<Path>, vocabulary: &Vocabulary) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        EmbeddingTable::read(file, vocabulary, &path.display().to_string())
    }

    pub fn read(reader: impl Read, vocabulary: &Vocabulary, label: &str) -> Result<Self> {
        let reader = BufReader::new(reader);
        let mut lines = reader.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::malformed(label, 1, "missing header line"))?;
        let header = header.map_err(|e| Error::malformed(label, 1, e.to_string()))?;
        let mut parts = header.split_whitespace();
        let (Some(count), Some(dim), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::malformed(label, 1, "header must be \"COUNT DIM\""));
        };
        let count: usize = count
            .parse()
            .map_err(|_| Error::malformed(label, 1, "invalid word count in header"))?;
        let dimension: usize = dim
            .parse()
            .map_err(|_| Error::malformed(label, 1, "invalid dimension in header"))?;

        let mut vectors = BTreeMap::new();
        let mut rows = 0usize;
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::malformed(label, line_no, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            rows += 1;
            let mut fields = line.split_whitespace();
            let token = fields
                .next()
                .ok_or_else(|| Error::malformed(label, line_no, "missing token"))?;
            let mut components = Vec::with_capacity(dimension);
            for field in fields {
                let value: f64 = field.parse().map_err(|_| {
                    Error::malformed(label, line_no, format!("invalid component {field:?}"))
                })?;
                components.push(value);
            }
            if components.len() != dimension {
                return Err(Error::malformed(
                    label,
                    line_no,
                    format!("expected {dimension} components, found {}", components.len()),
                ));
            }
            if vocabulary.index_of(token).is_some() {
                vectors.insert(token.to_string(), components);
            }
        }
        if rows != count {
            return Err(Error::malformed(
                label,
                0,
                format!("header declared {count} words but file has {rows}"),
            ));
        }
        Ok(EmbeddingTable { dimension, vectors })
    }

    /// Writes the table back in word2vec text format, tokens in
    /// lexicographic order. Components round-trip exactly.
    pub fn write(&self, mut writer: impl Write) -> std::io::Result<()> {
        writeln!(writer, "{} {}", self.vectors.len(), self.dimension)?;
        for (token, components) in &self.vectors {
            write!(writer, "{token}")?;
            for component in components {
                write!(writer, " {component}")?;
            }
            writeln!(writer)?;
        }
        Ok(())
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    /// A deterministic pseudo-random table with unit-normal components
    /// covering every vocabulary token, for hermetic runs and tests.
    pub fn random(vocabulary: &Vocabulary, dimension: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vectors = BTreeMap::new();
        for token in vocabulary.tokens() {
            let components = (0..dimension).map(|_| standard_normal(&mut rng)).collect();
            vectors.insert(token.clone(), components);
        }
        EmbeddingTable { dimension, vectors }
    }
}

// Box-Muller over the raw uniform stream; kept local so generated tables
// never shift underneath us when dependency internals change.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let mut u1: f64 = rng.gen();
    while u1 <= 0.0 {
        u1 = rng.gen();
    }
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Loads embeddings restricted to a vocabulary; see [`EmbeddingTable::load`].
pub fn load_embeddings(path: impl AsRef<Path>, vocabulary: &Vocabulary) -> Result<EmbeddingTable> {
    EmbeddingTable::load(path, vocabulary)
}

/// The four vectorization schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Bow,
    Tfidf,
    W2vSum,
    W2vIdf,
}

impl ModelKind {
    pub fn uses_embeddings(self) -> bool {
        matches!(self, ModelKind::W2vSum | ModelKind::W2vIdf)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Bow => "bow",
            ModelKind::Tfidf => "tfidf",
            ModelKind::W2vSum => "w2v",
            ModelKind::W2vIdf => "w2v-idf",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bow" => Ok(ModelKind::Bow),
            "tfidf" => Ok(ModelKind::Tfidf),
            "w2v" => Ok(ModelKind::W2vSum),
            "w2v-idf" => Ok(ModelKind::W2vIdf),
            other => Err(Error::InvalidArgument(format!(
                "unknown model kind {other:?}"
            ))),
        }
    }
}

/// A fully configured vector space: kind, vocabulary, optional embedding
/// table, n-gram order, and the preprocessing pipeline the vocabulary was
/// built with.
///
/// Both granularities (paragraph and whole document) are produced by the
/// same model instance, so paragraph-level and document-level scores are
/// always comparable.
#[derive(Debug, Clone)]
pub struct VectorSpaceModel {
    kind: ModelKind,
    vocabulary: Vocabulary,
    embeddings: Option<EmbeddingTable>,
    ngram_order: NgramOrder,
    pipeline: TextPipeline,
}

impl VectorSpaceModel {
    pub fn new(
        kind: ModelKind,
        vocabulary: Vocabulary,
        embeddings: Option<EmbeddingTable>,
        ngram_order: NgramOrder,
        pipeline: TextPipeline,
    ) -> Result<Self> {
        if kind.uses_embeddings() != embeddings.is_some() {
            return Err(Error::InvalidArgument(format!(
                "model kind {kind} {} an embedding table",
                if kind.uses_embeddings() {
                    "requires"
                } else {
                    "does not take"
                }
            )));
        }
        if ngram_order == NgramOrder::Bigram && kind.uses_embeddings() {
            return Err(Error::InvalidArgument(
                "bigrams are only supported for bow and tfidf models".into(),
            ));
        }
        Ok(VectorSpaceModel {
            kind,
            vocabulary,
            embeddings,
            ngram_order,
            pipeline,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn embeddings(&self) -> Option<&EmbeddingTable> {
        self.embeddings.as_ref()
    }

    pub fn ngram_order(&self) -> NgramOrder {
        self.ngram_order
    }

    pub fn pipeline(&self) -> &TextPipeline {
        &self.pipeline
    }

    /// Vectorizes an already-preprocessed token stream under this model.
    pub fn vector_for_tokens(&self, tokens: &TokenStream) -> Vector {
        match self.kind {
            ModelKind::Bow => Vector::Sparse(bow_vector(tokens, self)),
            ModelKind::Tfidf => Vector::Sparse(tfidf_vector(tokens, self)),
            ModelKind::W2vSum => Vector::Dense(embed_sum(tokens, self)),
            ModelKind::W2vIdf => Vector::Dense(embed_idf_sum(tokens, self)),
        }
    }

    /// Preprocesses and vectorizes one paragraph.
    pub fn paragraph_vector(&self, text: &str) -> Vector {
        self.vector_for_tokens(&self.pipeline.preprocess(text))
    }

    /// A single vector for the whole judgment: the vectorization of the
    /// concatenated token streams of all paragraphs.
    pub fn document_vector(&self, judgment: &Judgment) -> Vector {
        let streams: Vec<TokenStream> = judgment
            .paragraphs()
            .iter()
            .map(|p| self.pipeline.preprocess(p))
            .collect();
        self.vector_for_tokens(&TokenStream::concat(&streams))
    }

    fn term_counts(&self, tokens: &TokenStream) -> BTreeMap<usize, f64> {
        let mut counts = BTreeMap::new();
        for_each_term(tokens, self.ngram_order, |term| {
            if let Some(index) = self.vocabulary.index_of(term) {
                *counts.entry(index).or_insert(0.0) += 1.0;
            }
        });
        counts
    }
}

/// Raw term counts restricted to the vocabulary; out-of-vocabulary
/// streams produce the empty vector.
pub fn bow_vector(tokens: &TokenStream, model: &VectorSpaceModel) -> SparseVector {
    assert_eq!(model.kind(), ModelKind::Bow, "model kind must be bow");
    SparseVector::from_weights(model.vocabulary.len(), model.term_counts(tokens))
}

/// Term count times smoothed inverse document frequency. No length
/// normalization is applied here; cosine normalizes downstream.
pub fn tfidf_vector(tokens: &TokenStream, model: &VectorSpaceModel) -> SparseVector {
    assert_eq!(model.kind(), ModelKind::Tfidf, "model kind must be tfidf");
    let mut weights = model.term_counts(tokens);
    for (index, weight) in weights.iter_mut() {
        *weight *= model.vocabulary.idf(*index);
    }
    SparseVector::from_weights(model.vocabulary.len(), weights)
}

/// Componentwise sum of the embeddings of in-table tokens, with
/// multiplicity. All tokens missing yields the zero vector.
pub fn embed_sum(tokens: &TokenStream, model: &VectorSpaceModel) -> DenseVector {
    assert_eq!(model.kind(), ModelKind::W2vSum, "model kind must be w2v");
    weighted_embedding_sum(tokens, model, |_| 1.0)
}

/// Componentwise sum of `idf(token) * embedding(token)`, with the same
/// inverse document frequency as the TF-IDF model.
pub fn embed_idf_sum(tokens: &TokenStream, model: &VectorSpaceModel) -> DenseVector {
    assert_eq!(model.kind(), ModelKind::W2vIdf, "model kind must be w2v-idf");
    weighted_embedding_sum(tokens, model, |index| model.vocabulary.idf(index))
}

fn weighted_embedding_sum(
    tokens: &TokenStream,
    model: &VectorSpaceModel,
    weight_of: impl Fn(usize) -> f64,
) -> DenseVector {
    let table = model
        .embeddings
        .as_ref()
        .expect("embedding models hold a table by construction");
    let mut sum = vec![0.0; table.dimension()];
    for token in tokens.iter() {
        let Some(index) = model.vocabulary.index_of(token) else {
            continue;
        };
        let Some(embedding) = table.get(token) else {
            continue;
        };
        let weight = weight_of(index);
        for (acc, component) in sum.iter_mut().zip(embedding) {
            *acc += weight * component;
        }
    }
    DenseVector { components: sum }
}

/// Sidecar metadata for a built vocabulary, letting a ranking run refuse
/// mismatched artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexMetadata {
    /// Model kind the index was built for, when pinned at build time.
    pub model: Option<ModelKind>,
    pub idf_formula: String,
    pub ngram_order: NgramOrder,
    pub law_words: Vec<String>,
    pub vocab_sha256: String,
    pub num_docs: usize,
    pub min_df: f64,
    pub max_df: f64,
}

impl IndexMetadata {
    pub fn for_vocabulary(
        vocabulary: &Vocabulary,
        pipeline: &TextPipeline,
        ngram_order: NgramOrder,
        model: Option<ModelKind>,
    ) -> Self {
        IndexMetadata {
            model,
            idf_formula: IDF_FORMULA_TAG.to_string(),
            ngram_order,
            law_words: pipeline.law_words().to_vec(),
            vocab_sha256: vocabulary.sha256_hex(),
            num_docs: vocabulary.num_docs(),
            min_df: vocabulary.min_df_ratio(),
            max_df: vocabulary.max_df_ratio(),
        }
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer_pretty(file, self)
            .map_err(|e| Error::MetadataMismatch(format!("cannot write metadata: {e}")))
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_reader(file).map_err(|e| {
            Error::malformed(&path.display().to_string(), 0, format!("invalid metadata: {e}"))
        })
    }

    /// Verifies that a loaded vocabulary and a requested model kind match
    /// this metadata.
    pub fn check(&self, vocabulary: &Vocabulary, requested: ModelKind) -> Result<()> {
        let hash = vocabulary.sha256_hex();
        if hash != self.vocab_sha256 {
            return Err(Error::MetadataMismatch(format!(
                "vocabulary hash {hash} does not match recorded {}",
                self.vocab_sha256
            )));
        }
        if self.idf_formula != IDF_FORMULA_TAG {
            return Err(Error::MetadataMismatch(format!(
                "idf formula {:?} is not supported (expected {IDF_FORMULA_TAG:?})",
                self.idf_formula
            )));
        }
        if let Some(pinned) = self.model {
            if pinned != requested {
                return Err(Error::MetadataMismatch(format!(
                    "index was built for model {pinned}, requested {requested}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::textprep::{build_vocabulary, VocabularyOptions};
    use approx::assert_abs_diff_eq;

    fn doc(id: &str, text: &str) -> Judgment {
        Judgment::new(id, vec![text.to_string()]).unwrap()
    }

    fn vocab_for(docs: &[(&str, &str)], ngram_order: NgramOrder) -> Vocabulary {
        let corpus =
            Corpus::from_judgments(docs.iter().map(|(id, text)| doc(id, text))).unwrap();
        build_vocabulary(
            &corpus,
            &TextPipeline::default(),
            &VocabularyOptions {
                min_df_ratio: 0.0,
                max_df_ratio: 1.0,
                ngram_order,
            },
        )
        .unwrap()
    }

    fn bow_model(docs: &[(&str, &str)]) -> VectorSpaceModel {
        VectorSpaceModel::new(
            ModelKind::Bow,
            vocab_for(docs, NgramOrder::Unigram),
            None,
            NgramOrder::Unigram,
            TextPipeline::default(),
        )
        .unwrap()
    }

    fn stream(words: &[&str]) -> TokenStream {
        TokenStream::new(words.iter().map(|w| w.to_string()).collect())
    }

    #[test]
    fn bow_counts_tokens() {
        let model = bow_model(&[("A", "kaba dama")]);
        let a = model.vocabulary().index_of("dama").unwrap();
        let b = model.vocabulary().index_of("kaba").unwrap();
        let v = bow_vector(&stream(&["dama", "kaba", "dama"]), &model);
        let mut expected = vec![(a, 2.0), (b, 1.0)];
        expected.sort_by_key(|&(i, _)| i);
        assert_eq!(v.entries(), expected.as_slice());
    }

    #[test]
    fn bow_all_oov_is_empty() {
        let model = bow_model(&[("A", "kaba")]);
        let v = bow_vector(&stream(&["zzqq", "wwff"]), &model);
        assert!(v.is_zero());
        assert_eq!(v.dim(), model.vocabulary().len());
    }

    #[test]
    fn bow_matches_brute_force_counter() {
        // 50-token fixture against an independent hash-map count.
        let words = ["kaba", "dama", "pava", "gava", "mame"];
        let tokens: Vec<&str> = (0..50).map(|i| words[(i * 7 + 3) % words.len()]).collect();
        let model = bow_model(&[("A", &words.join(" "))]);
        let v = bow_vector(&stream(&tokens), &model);
        let mut expected: std::collections::HashMap<&str, f64> = Default::default();
        for t in &tokens {
            *expected.entry(t).or_insert(0.0) += 1.0;
        }
        for (index, weight) in v.entries() {
            assert_eq!(expected[model.vocabulary().token(*index)], *weight);
        }
        assert_eq!(v.entries().len(), expected.len());
    }

    #[test]
    fn bow_with_bigrams_counts_pairs() {
        let vocab = vocab_for(&[("A", "kaba dama pava")], NgramOrder::Bigram);
        let model = VectorSpaceModel::new(
            ModelKind::Bow,
            vocab,
            None,
            NgramOrder::Bigram,
            TextPipeline::default(),
        )
        .unwrap();
        let v = bow_vector(&stream(&["kaba", "dama", "pava"]), &model);
        let bigram = model.vocabulary().index_of("kaba_dama").unwrap();
        assert!(v.entries().iter().any(|&(i, w)| i == bigram && w == 1.0));
        // 3 unigrams + 2 bigrams
        assert_eq!(v.entries().len(), 5);
    }

    #[test]
    fn tfidf_weight_is_count_when_token_is_everywhere() {
        let model = VectorSpaceModel::new(
            ModelKind::Tfidf,
            vocab_for(&[("A", "kaba"), ("B", "kaba")], NgramOrder::Unigram),
            None,
            NgramOrder::Unigram,
            TextPipeline::default(),
        )
        .unwrap();
        let v = tfidf_vector(&stream(&["kaba"]), &model);
        assert_eq!(v.entries(), &[(0, 1.0)]);
    }

    #[test]
    fn tfidf_matches_hand_computed_table() {
        // Three documents; df(dama)=2, df(kaba)=2, df(pava)=1, N=3.
        let docs = [("D1", "dama kaba dama"), ("D2", "dama pava"), ("D3", "kaba")];
        let model = VectorSpaceModel::new(
            ModelKind::Tfidf,
            vocab_for(&docs, NgramOrder::Unigram),
            None,
            NgramOrder::Unigram,
            TextPipeline::default(),
        )
        .unwrap();
        let idf2 = (4.0_f64 / 3.0).ln() + 1.0;
        let idf1 = (4.0_f64 / 2.0).ln() + 1.0;
        let dama = model.vocabulary().index_of("dama").unwrap();
        let kaba = model.vocabulary().index_of("kaba").unwrap();
        let pava = model.vocabulary().index_of("pava").unwrap();

        let v1 = tfidf_vector(&stream(&["dama", "kaba", "dama"]), &model);
        let lookup = |v: &SparseVector, i: usize| {
            v.entries()
                .iter()
                .find(|&&(idx, _)| idx == i)
                .map(|&(_, w)| w)
        };
        assert_abs_diff_eq!(lookup(&v1, dama).unwrap(), 2.0 * idf2, epsilon = 1e-15);
        assert_abs_diff_eq!(lookup(&v1, kaba).unwrap(), idf2, epsilon = 1e-15);

        let v2 = tfidf_vector(&stream(&["dama", "pava"]), &model);
        assert_abs_diff_eq!(lookup(&v2, pava).unwrap(), idf1, epsilon = 1e-15);
        assert!(lookup(&v2, kaba).is_none());
    }

    fn table(entries: &[(&str, &[f64])]) -> EmbeddingTable {
        EmbeddingTable {
            dimension: entries[0].1.len(),
            vectors: entries
                .iter()
                .map(|(t, v)| (t.to_string(), v.to_vec()))
                .collect(),
        }
    }

    fn w2v_model(kind: ModelKind, docs: &[(&str, &str)], table: EmbeddingTable) -> VectorSpaceModel {
        VectorSpaceModel::new(
            kind,
            vocab_for(docs, NgramOrder::Unigram),
            Some(table),
            NgramOrder::Unigram,
            TextPipeline::default(),
        )
        .unwrap()
    }

    #[test]
    fn embed_sum_singleton_and_multiplicity() {
        let docs = [("A", "kaba dama")];
        let t = table(&[("kaba", &[1.0, -2.0]), ("dama", &[0.5, 0.5])]);
        let model = w2v_model(ModelKind::W2vSum, &docs, t);
        assert_eq!(
            embed_sum(&stream(&["kaba"]), &model).components(),
            &[1.0, -2.0]
        );
        assert_eq!(
            embed_sum(&stream(&["kaba", "kaba"]), &model).components(),
            &[2.0, -4.0]
        );
    }

    #[test]
    fn embed_sum_matches_accumulation_oracle() {
        let docs = [("A", "kaba dama pava gava")];
        let t = table(&[
            ("kaba", &[0.1, 0.2, 0.3]),
            ("dama", &[-1.0, 0.5, 0.0]),
            ("pava", &[2.0, -0.25, 1.5]),
        ]);
        let model = w2v_model(ModelKind::W2vSum, &docs, t.clone());
        let tokens = ["kaba", "pava", "dama", "kaba", "gava", "zzzz", "pava"];
        let got = embed_sum(&stream(&tokens), &model);
        let mut expected = vec![0.0; 3];
        for tok in tokens {
            if let Some(e) = t.get(tok) {
                for (acc, c) in expected.iter_mut().zip(e) {
                    *acc += c;
                }
            }
        }
        assert_eq!(got.components(), expected.as_slice());
    }

    #[test]
    fn embed_all_oov_is_zero_vector() {
        let docs = [("A", "kaba dama")];
        let t = table(&[("kaba", &[1.0, 1.0])]);
        let model = w2v_model(ModelKind::W2vSum, &docs, t);
        let v = embed_sum(&stream(&["dama"]), &model);
        assert_eq!(v.components(), &[0.0, 0.0]);
    }

    #[test]
    fn embed_idf_sum_weights_by_idf() {
        // dama appears in 1 of 2 docs: idf = ln(3/2) + 1.
        let docs = [("A", "kaba dama"), ("B", "kaba")];
        let t = table(&[("kaba", &[1.0, 0.0]), ("dama", &[0.0, 2.0])]);
        let model = w2v_model(ModelKind::W2vIdf, &docs, t);
        let v = embed_idf_sum(&stream(&["dama"]), &model);
        let idf = (3.0_f64 / 2.0).ln() + 1.0;
        assert_eq!(v.components(), &[0.0, 2.0 * idf]);
    }

    #[test]
    fn unit_idf_embedding_equals_plain_sum_bitwise() {
        // Every token in every doc makes all idf values exactly 1.
        let docs = [("A", "kaba dama pava"), ("B", "dama kaba pava")];
        let t = table(&[
            ("kaba", &[0.25, -0.125, 3.0]),
            ("dama", &[1e-3, 7.75, -0.5]),
            ("pava", &[std::f64::consts::PI, 1.0, 2.0]),
        ]);
        let sum_model = w2v_model(ModelKind::W2vSum, &docs, t.clone());
        let idf_model = w2v_model(ModelKind::W2vIdf, &docs, t);
        let tokens = stream(&["kaba", "dama", "pava", "dama"]);
        let plain = embed_sum(&tokens, &sum_model);
        let weighted = embed_idf_sum(&tokens, &idf_model);
        assert_eq!(plain, weighted);
    }

    #[test]
    fn cosine_identity_orthogonal_and_zero() {
        let x = Vector::Sparse(SparseVector::new(4, vec![(0, 1.0), (2, 2.0)]).unwrap());
        assert_abs_diff_eq!(cosine(&x, &x).unwrap(), 1.0, epsilon = 1e-12);
        let e0 = Vector::Sparse(SparseVector::new(2, vec![(0, 1.0)]).unwrap());
        let e1 = Vector::Sparse(SparseVector::new(2, vec![(1, 1.0)]).unwrap());
        assert_eq!(cosine(&e0, &e1).unwrap(), 0.0);
        let zero = Vector::Sparse(SparseVector::empty(2));
        assert_eq!(cosine(&e0, &zero).unwrap(), 0.0);
    }

    #[test]
    fn cosine_matches_independent_computation() {
        // Two fixed 20-dimensional vectors against a direct dot/norm loop.
        let a: Vec<f64> = (0..20).map(|i| ((i * 37 + 11) % 17) as f64 - 8.0).collect();
        let b: Vec<f64> = (0..20).map(|i| ((i * 53 + 5) % 23) as f64 - 11.0).collect();
        let got = cosine_dense(
            &DenseVector::new(a.clone()).unwrap(),
            &DenseVector::new(b.clone()).unwrap(),
        )
        .unwrap();
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert_abs_diff_eq!(got, dot / (na * nb), epsilon = 1e-12);
    }

    #[test]
    fn cosine_rejects_mismatches() {
        let sparse = Vector::Sparse(SparseVector::empty(2));
        let dense = Vector::Dense(DenseVector::zeros(2));
        assert!(matches!(
            cosine(&sparse, &dense),
            Err(Error::VectorKindMismatch)
        ));
        let a = SparseVector::empty(2);
        let b = SparseVector::empty(3);
        assert!(matches!(
            cosine_sparse(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        let d2 = DenseVector::zeros(2);
        let d3 = DenseVector::zeros(3);
        assert!(matches!(
            cosine_dense(&d2, &d3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bow_and_tfidf_weights_are_non_negative_with_valid_indices() {
        let docs = [("A", "kaba dama pava"), ("B", "dama gava"), ("C", "pava")];
        let bow = bow_model(&docs);
        let tfidf = VectorSpaceModel::new(
            ModelKind::Tfidf,
            vocab_for(&docs, NgramOrder::Unigram),
            None,
            NgramOrder::Unigram,
            TextPipeline::default(),
        )
        .unwrap();
        let streams = [
            stream(&["kaba", "dama", "kaba", "zzzz"]),
            stream(&["pava"]),
            stream(&["gava", "gava", "dama", "pava", "kaba"]),
        ];
        for s in &streams {
            for v in [bow_vector(s, &bow), tfidf_vector(s, &tfidf)] {
                for &(index, weight) in v.entries() {
                    assert!(index < v.dim());
                    assert!(weight > 0.0, "stored weight must be positive, got {weight}");
                }
            }
        }
    }

    #[test]
    fn sparse_vector_validation() {
        assert!(SparseVector::new(2, vec![(0, 1.0), (1, 2.0)]).is_ok());
        assert!(SparseVector::new(2, vec![(1, 1.0), (0, 2.0)]).is_err());
        assert!(SparseVector::new(2, vec![(0, 1.0), (0, 2.0)]).is_err());
        assert!(SparseVector::new(2, vec![(2, 1.0)]).is_err());
        assert!(SparseVector::new(2, vec![(0, 0.0)]).is_err());
        assert!(SparseVector::new(2, vec![(0, f64::NAN)]).is_err());
    }

    #[test]
    fn embeddings_load_restricts_to_vocabulary() {
        let vocab = vocab_for(&[("A", "kaba dama")], NgramOrder::Unigram);
        let file = "3 2\nkaba 1.0 2.0\nzzzz 3.0 4.0\ndama 5.0 6.0\n";
        let t = EmbeddingTable::read(file.as_bytes(), &vocab, "mem").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get("kaba"), Some([1.0, 2.0].as_slice()));
        assert!(t.get("zzzz").is_none());
    }

    #[test]
    fn embeddings_empty_intersection_is_valid() {
        let vocab = vocab_for(&[("A", "kaba")], NgramOrder::Unigram);
        let file = "1 2\nzzzz 3.0 4.0\n";
        let t = EmbeddingTable::read(file.as_bytes(), &vocab, "mem").unwrap();
        assert!(t.is_empty());
        assert_eq!(t.dimension(), 2);
    }

    #[test]
    fn embeddings_report_malformed_lines() {
        let vocab = vocab_for(&[("A", "kaba")], NgramOrder::Unigram);
        let bad_header = "x y\nkaba 1 2\n";
        assert!(matches!(
            EmbeddingTable::read(bad_header.as_bytes(), &vocab, "mem"),
            Err(Error::Malformed { line: 1, .. })
        ));
        let bad_row = "1 2\nkaba 1.0\n";
        assert!(matches!(
            EmbeddingTable::read(bad_row.as_bytes(), &vocab, "mem"),
            Err(Error::Malformed { line: 2, .. })
        ));
        let bad_count = "2 2\nkaba 1.0 2.0\n";
        assert!(EmbeddingTable::read(bad_count.as_bytes(), &vocab, "mem").is_err());
    }

    #[test]
    fn random_embeddings_roundtrip_through_file() {
        let vocab = vocab_for(&[("A", "kaba dama pava")], NgramOrder::Unigram);
        let generated = EmbeddingTable::random(&vocab, 8, 1234);
        assert_eq!(generated.len(), vocab.len());
        let mut buf = Vec::new();
        generated.write(&mut buf).unwrap();
        let reloaded =
            EmbeddingTable::read(buf.as_slice(), &vocab, "mem").unwrap();
        assert_eq!(generated, reloaded);
    }

    #[test]
    fn random_embeddings_are_seed_deterministic() {
        let vocab = vocab_for(&[("A", "kaba dama")], NgramOrder::Unigram);
        assert_eq!(
            EmbeddingTable::random(&vocab, 4, 7),
            EmbeddingTable::random(&vocab, 4, 7)
        );
        assert_ne!(
            EmbeddingTable::random(&vocab, 4, 7),
            EmbeddingTable::random(&vocab, 4, 8)
        );
    }

    #[test]
    fn model_invariants_are_enforced() {
        let vocab = vocab_for(&[("A", "kaba")], NgramOrder::Unigram);
        let t = EmbeddingTable::random(&vocab, 2, 1);
        assert!(VectorSpaceModel::new(
            ModelKind::Bow,
            vocab.clone(),
            Some(t.clone()),
            NgramOrder::Unigram,
            TextPipeline::default(),
        )
        .is_err());
        assert!(VectorSpaceModel::new(
            ModelKind::W2vSum,
            vocab.clone(),
            None,
            NgramOrder::Unigram,
            TextPipeline::default(),
        )
        .is_err());
        assert!(VectorSpaceModel::new(
            ModelKind::W2vSum,
            vocab.clone(),
            Some(t),
            NgramOrder::Bigram,
            TextPipeline::default(),
        )
        .is_err());
    }

    #[test]
    fn metadata_checks_hash_and_model() {
        let vocab = vocab_for(&[("A", "kaba dama")], NgramOrder::Unigram);
        let pipeline = TextPipeline::default();
        let meta = IndexMetadata::for_vocabulary(
            &vocab,
            &pipeline,
            NgramOrder::Unigram,
            Some(ModelKind::Tfidf),
        );
        assert!(meta.check(&vocab, ModelKind::Tfidf).is_ok());
        assert!(matches!(
            meta.check(&vocab, ModelKind::Bow),
            Err(Error::MetadataMismatch(_))
        ));
        let other = vocab_for(&[("A", "kaba")], NgramOrder::Unigram);
        assert!(matches!(
            meta.check(&other, ModelKind::Tfidf),
            Err(Error::MetadataMismatch(_))
        ));
    }
}
