//! Bag-of-words and TF-IDF featurization over token documents.
//!
//! The vocabulary is a sorted term list with parallel document frequencies;
//! term index = position in the sorted list, so serialized artifacts are
//! stable and lookup is a binary search. IDF uses the smoothed form
//! `ln((1 + N) / (1 + df)) + 1`, which never goes negative or divides by
//! zero even for terms present in every document.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::TokenDoc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    Bow,
    Tfidf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub mode: FeatureMode,
    /// Terms must appear in at least this many documents to enter the
    /// vocabulary.
    pub min_df: u32,
    /// Replace raw term frequency with `1 + ln(tf)` before the IDF weight.
    pub sublinear_tf: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            mode: FeatureMode::Bow,
            min_df: 1,
            sublinear_tf: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    /// Sorted, deduplicated. A term's feature index is its position here.
    pub terms: Vec<String>,
    /// Parallel to `terms`: number of fitting documents containing the term.
    pub doc_freq: Vec<u32>,
    pub n_docs: usize,
    pub min_df: u32,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    pub fn doc_freq_of(&self, term: &str) -> Option<u32> {
        self.index_of(term).map(|i| self.doc_freq[i])
    }

    /// Smoothed inverse document frequency per term, parallel to `terms`.
    pub fn idf(&self) -> Vec<f64> {
        let n = self.n_docs as f64;
        self.doc_freq
            .iter()
            .map(|&df| ((1.0 + n) / (1.0 + df as f64)).ln() + 1.0)
            .collect()
    }

    /// Structural checks for deserialized vocabularies: sorted unique terms,
    /// parallel arrays, df within [min_df, n_docs].
    pub fn validate(&self) -> Result<()> {
        if self.terms.len() != self.doc_freq.len() {
            return Err(Error::Data(format!(
                "vocabulary arrays disagree: {} terms vs {} doc_freq entries",
                self.terms.len(),
                self.doc_freq.len()
            )));
        }
        for w in self.terms.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Data(format!(
                    "vocabulary terms not strictly sorted near {:?}",
                    w[1]
                )));
            }
        }
        for (term, &df) in self.terms.iter().zip(&self.doc_freq) {
            if df < self.min_df || df as usize > self.n_docs {
                return Err(Error::Data(format!(
                    "doc_freq {df} for {term:?} outside [{}, {}]",
                    self.min_df, self.n_docs
                )));
            }
        }
        Ok(())
    }
}

/// Builds the vocabulary from the fitting corpus only. Document frequency
/// counts distinct documents, so repeats inside one document count once.
pub fn fit_vocabulary(docs: &[TokenDoc], cfg: &FeatureConfig) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::Data(
            "cannot fit a vocabulary on an empty corpus".to_string(),
        ));
    }
    if cfg.min_df == 0 {
        return Err(Error::Parameter("min_df must be at least 1".to_string()));
    }
    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for doc in docs {
        let distinct: BTreeSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for term in distinct {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let mut terms = Vec::new();
    let mut doc_freq = Vec::new();
    for (term, count) in df {
        if count >= cfg.min_df {
            terms.push(term.to_string());
            doc_freq.push(count);
        }
    }
    Ok(Vocabulary {
        terms,
        doc_freq,
        n_docs: docs.len(),
        min_df: cfg.min_df,
    })
}

/// Sparse feature vector: strictly ascending indices, nonzero weights only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
    dimension: usize,
}

impl SparseVector {
    pub fn new(entries: Vec<(u32, f64)>, dimension: usize) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Data(format!(
                    "sparse indices not strictly ascending at {}",
                    w[1].0
                )));
            }
        }
        for &(i, v) in &entries {
            if i as usize >= dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: i as usize + 1,
                });
            }
            if v == 0.0 || !v.is_finite() {
                return Err(Error::Data(format!(
                    "sparse entry at index {i} must be finite and nonzero, got {v}"
                )));
            }
        }
        Ok(SparseVector { entries, dimension })
    }

    pub fn empty(dimension: usize) -> Self {
        SparseVector {
            entries: Vec::new(),
            dimension,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|&(i, v)| (i as usize, v))
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&(index as u32), |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, v)| v * dense[i as usize])
            .sum()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        let mut acc = 0.0;
        while let (Some(&&(ia, va)), Some(&&(ib, vb))) = (a.peek(), b.peek()) {
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    acc += va * vb;
                    a.next();
                    b.next();
                }
            }
        }
        acc
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: f64) -> SparseVector {
        if factor == 0.0 {
            return SparseVector::empty(self.dimension);
        }
        SparseVector {
            entries: self.entries.iter().map(|&(i, v)| (i, v * factor)).collect(),
            dimension: self.dimension,
        }
    }

    /// Entrywise sum; entries cancelling to exactly zero are dropped.
    pub fn add(&self, other: &SparseVector) -> Result<SparseVector> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ia, va)), Some(&&(ib, vb))) => match ia.cmp(&ib) {
                    std::cmp::Ordering::Less => {
                        entries.push((ia, va));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        entries.push((ib, vb));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        let sum = va + vb;
                        if sum != 0.0 {
                            entries.push((ia, sum));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(&&(ia, va)), None) => {
                    entries.push((ia, va));
                    a.next();
                }
                (None, Some(&&(ib, vb))) => {
                    entries.push((ib, vb));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Ok(SparseVector {
            entries,
            dimension: self.dimension,
        })
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dimension];
        for &(i, v) in &self.entries {
            dense[i as usize] = v;
        }
        dense
    }
}

fn term_counts(doc: &TokenDoc, vocab: &Vocabulary) -> BTreeMap<u32, u32> {
    let mut counts = BTreeMap::new();
    for token in &doc.tokens {
        if let Some(idx) = vocab.index_of(token) {
            *counts.entry(idx as u32).or_insert(0) += 1;
        }
    }
    counts
}

/// Raw term counts over the vocabulary; out-of-vocabulary tokens are ignored.
pub fn vectorize_bow(doc: &TokenDoc, vocab: &Vocabulary) -> SparseVector {
    let entries = term_counts(doc, vocab)
        .into_iter()
        .map(|(i, c)| (i, c as f64))
        .collect();
    SparseVector {
        entries,
        dimension: vocab.len(),
    }
}

/// TF-IDF with the smoothed IDF, L2-normalized. Documents with no
/// in-vocabulary tokens come back as the zero vector.
pub fn vectorize_tfidf(doc: &TokenDoc, vocab: &Vocabulary, cfg: &FeatureConfig) -> SparseVector {
    let idf = vocab.idf();
    let mut entries: Vec<(u32, f64)> = term_counts(doc, vocab)
        .into_iter()
        .map(|(i, c)| {
            let tf = if cfg.sublinear_tf {
                1.0 + (c as f64).ln()
            } else {
                c as f64
            };
            (i, tf * idf[i as usize])
        })
        .collect();
    let norm = entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for entry in &mut entries {
            entry.1 /= norm;
        }
    }
    SparseVector {
        entries,
        dimension: vocab.len(),
    }
}

/// Dispatch on the configured mode.
pub fn vectorize(doc: &TokenDoc, vocab: &Vocabulary, cfg: &FeatureConfig) -> SparseVector {
    match cfg.mode {
        FeatureMode::Bow => vectorize_bow(doc, vocab),
        FeatureMode::Tfidf => vectorize_tfidf(doc, vocab, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, tokens: &[&str]) -> TokenDoc {
        TokenDoc {
            comment_id: id.to_string(),
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
        }
    }

    fn two_doc_vocab() -> Vocabulary {
        // doc1: [a, b], doc2: [b, c] -> df(a)=1, df(b)=2, df(c)=1
        fit_vocabulary(
            &[doc("d1", &["a", "b"]), doc("d2", &["b", "c"])],
            &FeatureConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn vocabulary_is_sorted_with_correct_df() {
        let v = two_doc_vocab();
        assert_eq!(v.terms, vec!["a", "b", "c"]);
        assert_eq!(v.doc_freq, vec![1, 2, 1]);
        assert_eq!(v.n_docs, 2);
        assert_eq!(v.index_of("b"), Some(1));
        assert_eq!(v.index_of("zz"), None);
        v.validate().unwrap();
    }

    #[test]
    fn repeats_within_a_document_count_once_for_df() {
        let v = fit_vocabulary(
            &[doc("d1", &["x", "x", "x"]), doc("d2", &["x", "y"])],
            &FeatureConfig::default(),
        )
        .unwrap();
        assert_eq!(v.doc_freq_of("x"), Some(2));
        assert_eq!(v.doc_freq_of("y"), Some(1));
    }

    #[test]
    fn min_df_prunes_rare_terms() {
        let cfg = FeatureConfig {
            min_df: 2,
            ..FeatureConfig::default()
        };
        let v = fit_vocabulary(&[doc("d1", &["a", "b"]), doc("d2", &["b", "c"])], &cfg).unwrap();
        assert_eq!(v.terms, vec!["b"]);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(fit_vocabulary(&[], &FeatureConfig::default()).is_err());
    }

    #[test]
    fn smoothed_idf_matches_hand_value() {
        // N=2, df=1: ln(3/2) + 1 = 1.4054651081081644
        let v = two_doc_vocab();
        let idf = v.idf();
        assert!((idf[0] - 1.4054651081081644).abs() < 1e-15);
        // df = n_docs stays positive: ln(3/3) + 1 = 1
        assert!((idf[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bow_counts_raw_frequencies() {
        let v = two_doc_vocab();
        let x = vectorize_bow(&doc("q", &["b", "b", "c", "nope"]), &v);
        assert_eq!(x.get(0), 0.0);
        assert_eq!(x.get(1), 2.0);
        assert_eq!(x.get(2), 1.0);
        assert_eq!(x.nnz(), 2);
        assert_eq!(x.dimension(), 3);
    }

    #[test]
    fn tfidf_weights_match_hand_computation_and_unit_norm() {
        let v = two_doc_vocab();
        let cfg = FeatureConfig {
            mode: FeatureMode::Tfidf,
            ..FeatureConfig::default()
        };
        let x = vectorize_tfidf(&doc("q", &["b", "b", "c"]), &v, &cfg);
        // pre-norm: b -> 2 * 1.0 = 2.0, c -> 1 * (ln(1.5) + 1)
        let wb = 2.0;
        let wc = 1.5f64.ln() + 1.0;
        let norm = (wb * wb + wc * wc).sqrt();
        assert!((x.get(1) - wb / norm).abs() < 1e-12);
        assert!((x.get(2) - wc / norm).abs() < 1e-12);
        assert!((x.l2_norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn out_of_vocabulary_document_becomes_zero_vector() {
        let v = two_doc_vocab();
        let cfg = FeatureConfig {
            mode: FeatureMode::Tfidf,
            ..FeatureConfig::default()
        };
        let x = vectorize_tfidf(&doc("q", &["nope", "nada"]), &v, &cfg);
        assert_eq!(x.nnz(), 0);
        assert_eq!(x.l2_norm(), 0.0);
        let b = vectorize_bow(&doc("q", &["nope"]), &v);
        assert_eq!(b.nnz(), 0);
    }

    #[test]
    fn sparse_vector_rejects_malformed_input() {
        assert!(SparseVector::new(vec![(0, 1.0), (0, 2.0)], 3).is_err());
        assert!(SparseVector::new(vec![(2, 1.0), (1, 2.0)], 3).is_err());
        assert!(SparseVector::new(vec![(5, 1.0)], 3).is_err());
        assert!(SparseVector::new(vec![(0, 0.0)], 3).is_err());
        assert!(SparseVector::new(vec![(0, f64::NAN)], 3).is_err());
        assert!(SparseVector::new(vec![(0, 1.0), (2, -1.5)], 3).is_ok());
    }

    #[test]
    fn sparse_dot_agrees_with_dense_dot() {
        let a = SparseVector::new(vec![(0, 1.0), (2, 2.0), (5, -1.0)], 6).unwrap();
        let b = SparseVector::new(vec![(2, 3.0), (4, 7.0), (5, 2.0)], 6).unwrap();
        let dense_dot: f64 = a
            .to_dense()
            .iter()
            .zip(b.to_dense())
            .map(|(x, y)| x * y)
            .sum();
        assert!((a.dot(&b) - dense_dot).abs() < 1e-12);
        assert!((a.dot_dense(&b.to_dense()) - dense_dot).abs() < 1e-12);
    }

    #[test]
    fn sparse_add_merges_and_drops_cancelled_entries() {
        let a = SparseVector::new(vec![(0, 1.0), (2, 2.0)], 4).unwrap();
        let b = SparseVector::new(vec![(1, 5.0), (2, -2.0)], 4).unwrap();
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.get(0), 1.0);
        assert_eq!(sum.get(1), 5.0);
        assert_eq!(sum.get(2), 0.0);
        assert_eq!(sum.nnz(), 2);
        assert!(a.add(&SparseVector::empty(9)).is_err());
    }
}
