use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::textprep::TokenSequence;

pub const DEFAULT_VOCABULARY_SIZE: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabEntry {
    pub term: String,
    pub df: usize,
}

/// The `k` most frequent training terms with their document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    num_docs: usize,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Rebuilds a vocabulary from stored entries, validating `1 <= df <= num_docs`
    /// and term uniqueness.
    pub fn from_entries(entries: Vec<VocabEntry>, num_docs: usize) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if e.term.is_empty() {
                return Err(Error::InvalidArgument("empty vocabulary term".into()));
            }
            if e.df == 0 || e.df > num_docs {
                return Err(Error::InvalidArgument(format!(
                    "term {:?} has df {} outside 1..={num_docs}",
                    e.term, e.df
                )));
            }
            if index.insert(e.term.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate vocabulary term {:?}",
                    e.term
                )));
            }
        }
        Ok(Vocabulary {
            entries,
            num_docs,
            index,
        })
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.term.as_str())
    }
}

/// Keeps the `k` terms with the highest total frequency over `docs`, ties
/// broken by ascending term. `N` is the number of documents given.
pub fn build_vocabulary(docs: &[TokenSequence], k: usize) -> Result<Vocabulary> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "vocabulary size must be at least 1".into(),
        ));
    }
    let mut freq: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for doc in docs {
        let mut seen = HashSet::new();
        for t in doc.iter() {
            let entry = freq.entry(t).or_default();
            entry.0 += 1;
            if seen.insert(t) {
                entry.1 += 1;
            }
        }
    }
    if freq.is_empty() {
        return Err(Error::EmptyVocabulary);
    }

    let mut ranked: Vec<(&str, usize, usize)> =
        freq.into_iter().map(|(t, (tf, df))| (t, tf, df)).collect();
    // BTreeMap iteration is already term-ascending; a stable sort keeps that for ties.
    ranked.sort_by_key(|&(_, tf, _)| std::cmp::Reverse(tf));
    ranked.truncate(k);

    let entries = ranked
        .into_iter()
        .map(|(term, _, df)| VocabEntry {
            term: term.to_string(),
            df,
        })
        .collect();
    Vocabulary::from_entries(entries, docs.len())
}

/// `count * ln(num_docs / df)`.
pub fn tfidf_value(term_count: usize, df: usize, num_docs: usize) -> Result<f64> {
    if df == 0 || df > num_docs {
        return Err(Error::InvalidArgument(format!(
            "document frequency {df} outside 1..={num_docs}"
        )));
    }
    Ok(term_count as f64 * (num_docs as f64 / df as f64).ln())
}
