//! Paragraph-level judgment similarity: the pairwise cosine matrix,
//! maximum-similarity pairs (MSP), and the PL-M / PL-F / DL scores.
//!
//! For judgments with `m` and `n` paragraphs (`m <= n`, sides swapped if
//! needed), the matrix holds all `m x n` paragraph cosines. Each row's
//! maximum is one MSP value; PL-M averages all of them and PL-F averages
//! the top `k`. DL is the cosine of single whole-document vectors.

use std::num::NonZeroUsize;

use crate::corpus::Judgment;
use crate::error::{Error, Result};
use crate::vecspace::{cosine, Vector, VectorSpaceModel};

/// The pairwise paragraph similarity matrix, oriented so that the
/// smaller judgment is on the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ParaSimMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    swapped: bool,
}

impl ParaSimMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// True when the arguments were swapped to keep `rows <= cols`.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }
}

/// Builds the similarity matrix from per-paragraph vectors that were
/// produced by one model. Swaps sides so the shorter list is on rows;
/// on ties the first argument stays on rows.
pub fn sim_matrix_from_vectors(a: &[Vector], b: &[Vector]) -> ParaSimMatrix {
    let swapped = a.len() > b.len();
    let (row_side, col_side) = if swapped { (b, a) } else { (a, b) };
    let rows = row_side.len();
    let cols = col_side.len();
    let mut values = Vec::with_capacity(rows * cols);
    for u in row_side {
        for v in col_side {
            values.push(cosine(u, v).expect("vectors come from a single model"));
        }
    }
    ParaSimMatrix {
        rows,
        cols,
        values,
        swapped,
    }
}

/// Vectorizes both judgments' paragraphs under `model` and builds their
/// similarity matrix.
pub fn para_sim_matrix(j1: &Judgment, j2: &Judgment, model: &VectorSpaceModel) -> ParaSimMatrix {
    let a: Vec<Vector> = j1
        .paragraphs()
        .iter()
        .map(|p| model.paragraph_vector(p))
        .collect();
    let b: Vec<Vector> = j2
        .paragraphs()
        .iter()
        .map(|p| model.paragraph_vector(p))
        .collect();
    sim_matrix_from_vectors(&a, &b)
}

/// The maximum-similarity pairs of a matrix: one value per row.
#[derive(Debug, Clone, PartialEq)]
pub struct MspValues {
    values: Vec<f64>,
    pairs: Vec<(usize, usize)>,
}

impl MspValues {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(row, argmax column)` per row; ties take the lowest column.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        let pairs = values.iter().enumerate().map(|(i, _)| (i, 0)).collect();
        MspValues { values, pairs }
    }
}

/// Selects, for each row, the column with the maximum similarity. There
/// are always exactly `rows` MSP values.
pub fn msp(matrix: &ParaSimMatrix) -> MspValues {
    let mut values = Vec::with_capacity(matrix.rows());
    let mut pairs = Vec::with_capacity(matrix.rows());
    for row in 0..matrix.rows() {
        let mut best_col = 0;
        let mut best = matrix.value(row, 0);
        for col in 1..matrix.cols() {
            let v = matrix.value(row, col);
            if v > best {
                best = v;
                best_col = col;
            }
        }
        values.push(best);
        pairs.push((row, best_col));
    }
    MspValues { values, pairs }
}

// Both aggregations sort descending first, so pl_f(k = m) and pl_m sum in
// the identical order and agree bitwise.
fn mean_of_top(values: &[f64], k: usize) -> f64 {
    debug_assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("similarities are finite"));
    let take = k.min(sorted.len());
    sorted[..take].iter().sum::<f64>() / take as f64
}

/// Mean paragraph-level score: the mean of all MSP values.
pub fn pl_m(msp: &MspValues) -> f64 {
    mean_of_top(msp.values(), msp.len())
}

/// Fixed paragraph-level score: the mean of the top `k` MSP values. With
/// fewer than `k` values, all of them are averaged, so a two-paragraph
/// judgment is still scorable at the default `k = 3`.
pub fn pl_f(msp: &MspValues, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(mean_of_top(msp.values(), k))
}

/// Document-level baseline: cosine of whole-document vectors.
pub fn dl_sim(j1: &Judgment, j2: &Judgment, model: &VectorSpaceModel) -> f64 {
    cosine(&model.document_vector(j1), &model.document_vector(j2))
        .expect("vectors come from a single model")
}

/// A similarity method selection for ranking and analysis runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Document-level cosine.
    Dl,
    /// Mean of all MSP values.
    PlM,
    /// Mean of the top-k MSP values.
    PlF { k: NonZeroUsize },
}

impl Method {
    pub fn pl_f(k: usize) -> Result<Method> {
        NonZeroUsize::new(k)
            .map(|k| Method::PlF { k })
            .ok_or_else(|| Error::InvalidArgument("k must be at least 1".into()))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Dl => "dl",
            Method::PlM => "pl-m",
            Method::PlF { .. } => "pl-f",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scores one judgment pair under the chosen method.
pub fn score_pair(
    j1: &Judgment,
    j2: &Judgment,
    model: &VectorSpaceModel,
    method: Method,
) -> f64 {
    match method {
        Method::Dl => dl_sim(j1, j2, model),
        Method::PlM => pl_m(&msp(&para_sim_matrix(j1, j2, model))),
        Method::PlF { k } => {
            pl_f(&msp(&para_sim_matrix(j1, j2, model)), k.get())
                .expect("k is non-zero by construction")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::textprep::{build_vocabulary, NgramOrder, TextPipeline, VocabularyOptions};
    use crate::vecspace::{ModelKind, SparseVector};
    use approx::assert_abs_diff_eq;

    fn judgment(id: &str, paragraphs: &[&str]) -> Judgment {
        Judgment::new(id, paragraphs.iter().map(|p| p.to_string()).collect()).unwrap()
    }

    fn model_over(judgments: &[Judgment], kind: ModelKind) -> VectorSpaceModel {
        let corpus = Corpus::from_judgments(judgments.to_vec()).unwrap();
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
        VectorSpaceModel::new(kind, vocab, None, NgramOrder::Unigram, TextPipeline::default())
            .unwrap()
    }

    #[test]
    fn self_similarity_has_unit_diagonal() {
        let j = judgment("A", &["kaba dama", "pava gava", "mana vada"]);
        let model = model_over(std::slice::from_ref(&j), ModelKind::Tfidf);
        let matrix = para_sim_matrix(&j, &j, &model);
        assert_eq!(matrix.rows(), 3);
        assert_eq!(matrix.cols(), 3);
        for i in 0..3 {
            assert_abs_diff_eq!(matrix.value(i, i), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn disjoint_vocabulary_gives_zero_matrix() {
        let j1 = judgment("A", &["kaba dama", "kaba"]);
        let j2 = judgment("B", &["pava gava", "gava"]);
        let model = model_over(&[j1.clone(), j2.clone()], ModelKind::Bow);
        let matrix = para_sim_matrix(&j1, &j2, &model);
        for r in 0..matrix.rows() {
            for c in 0..matrix.cols() {
                assert_eq!(matrix.value(r, c), 0.0);
            }
        }
    }

    #[test]
    fn matrix_matches_hand_built_one_hot_fixture() {
        // One-hot sparse paragraph vectors; expected cosines are 0/1.
        let e = |i: usize| Vector::Sparse(SparseVector::new(4, vec![(i, 2.0)]).unwrap());
        let a = [e(0), e(1), e(2)];
        let b = [e(2), e(1), e(3), e(0)];
        let matrix = sim_matrix_from_vectors(&a, &b);
        assert_eq!(matrix.rows(), 3);
        assert_eq!(matrix.cols(), 4);
        let expected = [
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ];
        for (r, row) in expected.iter().enumerate() {
            for (c, want) in row.iter().enumerate() {
                assert_eq!(matrix.value(r, c), *want, "({r},{c})");
            }
        }
    }

    #[test]
    fn orientation_puts_smaller_side_on_rows() {
        let e = |i: usize| Vector::Sparse(SparseVector::new(4, vec![(i, 1.0)]).unwrap());
        let two = [e(0), e(1)];
        let three = [e(0), e(1), e(2)];
        let m = sim_matrix_from_vectors(&three, &two);
        assert!(m.swapped());
        assert_eq!((m.rows(), m.cols()), (2, 3));
        let m = sim_matrix_from_vectors(&two, &three);
        assert!(!m.swapped());
        assert_eq!((m.rows(), m.cols()), (2, 3));
    }

    #[test]
    fn msp_of_a_three_row_matrix_has_three_values() {
        let j = judgment("A", &["kaba", "dama", "pava"]);
        let model = model_over(std::slice::from_ref(&j), ModelKind::Bow);
        let values = msp(&para_sim_matrix(&j, &j, &model));
        assert_eq!(values.len(), 3);
    }

    #[test]
    fn msp_single_cell() {
        let matrix = ParaSimMatrix {
            rows: 1,
            cols: 1,
            values: vec![0.7],
            swapped: false,
        };
        let m = msp(&matrix);
        assert_eq!(m.values(), &[0.7]);
        assert_eq!(m.pairs(), &[(0, 0)]);
    }

    #[test]
    fn msp_matches_brute_force_row_scan() {
        // Deterministic pseudo-random 5x8 matrix.
        let mut values = Vec::new();
        let mut state = 9_u64;
        for _ in 0..40 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            values.push((state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0);
        }
        let matrix = ParaSimMatrix {
            rows: 5,
            cols: 8,
            values,
            swapped: false,
        };
        let got = msp(&matrix);
        for row in 0..5 {
            let slice = matrix.row(row);
            let best = slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let best_col = slice.iter().position(|&v| v == best).unwrap();
            assert_eq!(got.values()[row], best);
            assert_eq!(got.pairs()[row], (row, best_col));
        }
    }

    #[test]
    fn msp_breaks_ties_toward_the_lowest_column() {
        let matrix = ParaSimMatrix {
            rows: 1,
            cols: 3,
            values: vec![0.5, 0.9, 0.9],
            swapped: false,
        };
        assert_eq!(msp(&matrix).pairs(), &[(0, 1)]);
    }

    #[test]
    fn pl_m_examples() {
        assert_eq!(pl_m(&MspValues::from_values(vec![1.0, 1.0, 1.0])), 1.0);
        assert_abs_diff_eq!(
            pl_m(&MspValues::from_values(vec![0.2, 0.4])),
            0.3,
            epsilon = 1e-15
        );
        let values: Vec<f64> = vec![0.11, 0.93, 0.4, 0.27, 0.66, 0.05, 0.81];
        let expected = values.iter().sum::<f64>() / 7.0;
        assert_abs_diff_eq!(
            pl_m(&MspValues::from_values(values)),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn pl_f_examples() {
        let m = MspValues::from_values(vec![0.9, 0.5, 0.1]);
        assert_abs_diff_eq!(pl_f(&m, 3).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(pl_f(&m, 1).unwrap(), 0.9);
        let m = MspValues::from_values(vec![0.9, 0.5, 0.1, 0.3]);
        assert_abs_diff_eq!(
            pl_f(&m, 3).unwrap(),
            (0.9 + 0.5 + 0.3) / 3.0,
            epsilon = 1e-15
        );
        assert!(pl_f(&m, 0).is_err());
    }

    #[test]
    fn pl_f_equals_pl_m_at_full_k_bitwise() {
        let values = vec![0.31, 0.7754, 0.12, 0.9991, 0.5, 0.5, 0.0001];
        let m = MspValues::from_values(values);
        assert_eq!(pl_f(&m, m.len()).unwrap(), pl_m(&m));
        // k beyond m averages everything as well
        assert_eq!(pl_f(&m, 100).unwrap(), pl_m(&m));
    }

    #[test]
    fn pl_f_is_non_increasing_in_k() {
        let m = MspValues::from_values(vec![0.9, 0.8, 0.3, 0.2, 0.1]);
        let mut prev = f64::INFINITY;
        for k in 1..=6 {
            let v = pl_f(&m, k).unwrap();
            assert!(v <= prev + 1e-15, "pl_f({k}) = {v} > {prev}");
            prev = v;
        }
    }

    #[test]
    fn scores_are_symmetric_in_argument_order() {
        let j1 = judgment("A", &["kaba dama pava", "dama dama"]);
        let j2 = judgment("B", &["kaba kaba", "pava dama", "dama kaba pava"]);
        let model = model_over(&[j1.clone(), j2.clone()], ModelKind::Tfidf);
        let m12 = msp(&para_sim_matrix(&j1, &j2, &model));
        let m21 = msp(&para_sim_matrix(&j2, &j1, &model));
        assert_eq!(pl_m(&m12), pl_m(&m21));
        for k in 1..=4 {
            assert_eq!(pl_f(&m12, k).unwrap(), pl_f(&m21, k).unwrap());
        }
        assert_eq!(dl_sim(&j1, &j2, &model), dl_sim(&j2, &j1, &model));
        // non-negative weights keep every MSP value (and both pl scores)
        // inside [0, 1]
        for value in m12.values() {
            assert!((-1e-12..=1.0 + 1e-12).contains(value));
        }
        assert!(pl_f(&m12, 1).unwrap() >= pl_m(&m12));
        assert!(pl_m(&m12) >= 0.0);
    }

    #[test]
    fn dl_sim_examples() {
        let j1 = judgment("A", &["kaba dama", "pava"]);
        let j2 = judgment("B", &["gava", "vada maga"]);
        let model = model_over(&[j1.clone(), j2.clone()], ModelKind::Bow);
        assert_abs_diff_eq!(dl_sim(&j1, &j1, &model), 1.0, epsilon = 1e-12);
        assert_eq!(dl_sim(&j1, &j2, &model), 0.0);
    }

    #[test]
    fn dl_sim_matches_hand_computed_tfidf_cosine() {
        // Two docs, one paragraph each: d1 = "kaba dama", d2 = "kaba".
        // N=2, df(kaba)=2 -> idf 1.0; df(dama)=1 -> idf ln(3/2)+1.
        let j1 = judgment("D1", &["kaba dama"]);
        let j2 = judgment("D2", &["kaba"]);
        let model = model_over(&[j1.clone(), j2.clone()], ModelKind::Tfidf);
        let idf_dama = (3.0_f64 / 2.0).ln() + 1.0;
        let expected = 1.0 / (1.0 + idf_dama * idf_dama).sqrt();
        assert_abs_diff_eq!(dl_sim(&j1, &j2, &model), expected, epsilon = 1e-12);
    }

    #[test]
    fn zero_vector_paragraphs_score_zero_but_rank() {
        // Second paragraph of j1 is out of vocabulary entirely.
        let j1 = judgment("A", &["kaba dama", "zzzz qqqq"]);
        let j2 = judgment("B", &["kaba dama"]);
        let corpus_docs = [judgment("A", &["kaba dama"]), j2.clone()];
        let model = model_over(&corpus_docs, ModelKind::Bow);
        let matrix = para_sim_matrix(&j1, &j2, &model);
        let values = msp(&matrix);
        // swapped: j2 has fewer paragraphs -> 1 row over 2 columns
        assert_eq!(values.len(), 1);
        assert_abs_diff_eq!(values.values()[0], 1.0, epsilon = 1e-12);
        let m = msp(&sim_matrix_from_vectors(
            &j1.paragraphs()
                .iter()
                .map(|p| model.paragraph_vector(p))
                .collect::<Vec<_>>(),
            &[model.paragraph_vector("kaba dama"), model.paragraph_vector("kaba dama")],
        ));
        assert_eq!(m.len(), 2);
        assert_eq!(m.values()[1], 0.0);
        assert!(pl_m(&m) < pl_f(&m, 1).unwrap());
    }

    #[test]
    fn planted_shared_paragraphs_raise_top1_monotonically() {
        // More shared paragraphs can only help the best pair.
        let shared = ["kaba dama pava", "gava vada maga", "bana cada fama"];
        let noise_a = ["qoku rotu sotu", "lopu mopu nopu", "xopu yopu zopu"];
        let noise_b = ["qaki raki saki", "laki maki naki", "xaki yaki zaki"];
        let mut prev = -1.0;
        for s in 0..=3 {
            let a: Vec<&str> = shared[..s].iter().chain(noise_a[s..].iter()).cloned().collect();
            let b: Vec<&str> = shared[..s].iter().chain(noise_b[s..].iter()).cloned().collect();
            let j1 = judgment("A", &a);
            let j2 = judgment("B", &b);
            let model = model_over(&[j1.clone(), j2.clone()], ModelKind::Tfidf);
            let top1 = pl_f(&msp(&para_sim_matrix(&j1, &j2, &model)), 1).unwrap();
            assert!(
                top1 >= prev - 1e-12,
                "top-1 decreased from {prev} to {top1} at {s} shared paragraphs"
            );
            prev = top1;
        }
        assert_abs_diff_eq!(prev, 1.0, epsilon = 1e-12);
    }
}
