//! Feature extraction.
//!
//! A [`FeatureSpace`] is fitted once on training documents and then frozen.
//! Columns are laid out in blocks:
//!
//! | block            | width               | value                               |
//! |------------------|---------------------|-------------------------------------|
//! | TF-IDF           | vocabulary size     | `count * ln(N / df)`                |
//! | initial n-grams  | distinct names seen | `1.0` when the document starts so   |
//! | length           | 1 (optional)        | token count                         |
//! | lexicon          | 3 (optional)        | positive, negative, positive − neg. |
//!
//! Only the TF-IDF block is mandatory; the others follow [`FeatureConfig`].

mod lexicon;
mod space;
mod vocabulary;

pub use lexicon::{lexicon_counts, LexiconCounts, Polarity, SentimentLexicon};
pub use space::{fit_feature_space, vectorize, FeatureSpace, SPACE_FORMAT_VERSION};
pub use vocabulary::{
    build_vocabulary, tfidf_value, VocabEntry, Vocabulary, DEFAULT_VOCABULARY_SIZE,
};

use crate::error::{Error, Result};
use crate::textprep::TokenSequence;

pub const MAX_INITIAL_NGRAM: usize = 3;

/// Per-topic feature switches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureConfig {
    pub use_initial_ngrams: bool,
    /// Longest initial n-gram, 1..=3.
    pub max_n: usize,
    pub use_length: bool,
    pub use_lexicon: bool,
    pub vocabulary_size: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            use_initial_ngrams: false,
            max_n: MAX_INITIAL_NGRAM,
            use_length: false,
            use_lexicon: false,
            vocabulary_size: DEFAULT_VOCABULARY_SIZE,
        }
    }
}

impl FeatureConfig {
    pub fn all_enabled() -> Self {
        FeatureConfig {
            use_initial_ngrams: true,
            use_length: true,
            use_lexicon: true,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_INITIAL_NGRAM).contains(&self.max_n) {
            return Err(Error::InvalidArgument(format!(
                "initial n-gram length must be in 1..={MAX_INITIAL_NGRAM}, got {}",
                self.max_n
            )));
        }
        if self.vocabulary_size == 0 {
            return Err(Error::InvalidArgument(
                "vocabulary_size must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Active initial n-gram length, if that block is enabled.
    pub fn initial_ngram_len(&self) -> Option<usize> {
        self.use_initial_ngrams.then_some(self.max_n)
    }
}

/// Sparse vector: sorted, unique indices below `dimension`, no stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    dimension: usize,
    entries: Vec<(usize, f64)>,
}

impl FeatureVector {
    /// Builds a vector from `(index, value)` pairs. Zeros are dropped; a
    /// repeated or out-of-range index is an error.
    pub fn new(dimension: usize, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut entries: Vec<(usize, f64)> =
            entries.into_iter().filter(|&(_, v)| v != 0.0).collect();
        entries.sort_by_key(|&(i, _)| i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!(
                    "repeated feature index {}",
                    w[0].0
                )));
            }
        }
        if let Some(&(i, _)) = entries.last() {
            if i >= dimension {
                return Err(Error::InvalidArgument(format!(
                    "feature index {i} out of range for dimension {dimension}"
                )));
            }
        }
        if let Some(&(i, v)) = entries.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite value {v} at index {i}"
            )));
        }
        Ok(FeatureVector { dimension, entries })
    }

    pub fn from_dense(values: &[f64]) -> Self {
        FeatureVector {
            dimension: values.len(),
            entries: values
                .iter()
                .copied()
                .enumerate()
                .filter(|&(_, v)| v != 0.0)
                .collect(),
        }
    }

    pub fn zeros(dimension: usize) -> Self {
        FeatureVector {
            dimension,
            entries: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|p| self.entries[p].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dimension];
        for &(i, v) in &self.entries {
            dense[i] = v;
        }
        dense
    }

    /// Dot product with a dense slice of at least `dimension` weights.
    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| weights[i] * v).sum()
    }
}

/// Names of the initial n-gram indicators for `tokens`, shortest first.
pub fn initial_ngrams(tokens: &TokenSequence, max_n: usize) -> Vec<String> {
    let words = tokens.tokens();
    (1..=max_n.min(words.len()))
        .map(|n| format!("INIT{n}={}", words[..n].join("_")))
        .collect()
}

pub fn comment_length(tokens: &TokenSequence) -> usize {
    tokens.len()
}
