use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::lexicon::{lexicon_counts, Polarity, SentimentLexicon};
use super::vocabulary::{build_vocabulary, tfidf_value, VocabEntry, Vocabulary};
use super::{comment_length, initial_ngrams, FeatureConfig, FeatureVector};
use crate::error::{Error, Result};
use crate::textprep::{StemmerKind, TokenSequence};

pub const SPACE_FORMAT_VERSION: &str = "stance-feature-space 1";

pub const LENGTH_FEATURE: &str = "LENGTH";
pub const LEXICON_FEATURES: [&str; 3] = ["LEX_POS", "LEX_NEG", "LEX_DIFF"];
const TERM_PREFIX: &str = "W=";

/// Frozen feature layout fitted on training documents.
///
/// The space also carries what is needed to reproduce preprocessing and
/// vectorization at prediction time: the stemmer, the feature switches and,
/// when the lexicon block is on, the lexicon itself.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    config: FeatureConfig,
    stemmer: StemmerKind,
    vocabulary: Vocabulary,
    initial_names: Vec<String>,
    initial_index: HashMap<String, usize>,
    lexicon: SentimentLexicon,
}

impl FeatureSpace {
    fn assemble(
        config: FeatureConfig,
        stemmer: StemmerKind,
        vocabulary: Vocabulary,
        initial_names: Vec<String>,
        lexicon: SentimentLexicon,
    ) -> Result<Self> {
        let offset = vocabulary.len();
        let mut initial_index = HashMap::with_capacity(initial_names.len());
        for (i, name) in initial_names.iter().enumerate() {
            if initial_index.insert(name.clone(), offset + i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate feature name {name:?}"
                )));
            }
        }
        Ok(FeatureSpace {
            config,
            stemmer,
            vocabulary,
            initial_names,
            initial_index,
            lexicon,
        })
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn stemmer(&self) -> StemmerKind {
        self.stemmer
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn initial_ngram_names(&self) -> &[String] {
        &self.initial_names
    }

    pub fn lexicon(&self) -> &SentimentLexicon {
        &self.lexicon
    }

    fn initial_offset(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn length_index(&self) -> Option<usize> {
        self.config
            .use_length
            .then_some(self.initial_offset() + self.initial_names.len())
    }

    /// Indices of the positive, negative and difference lexicon slots.
    pub fn lexicon_indices(&self) -> Option<[usize; 3]> {
        self.config.use_lexicon.then(|| {
            let base = self.initial_offset()
                + self.initial_names.len()
                + usize::from(self.config.use_length);
            [base, base + 1, base + 2]
        })
    }

    pub fn dimension(&self) -> usize {
        self.vocabulary.len()
            + self.initial_names.len()
            + usize::from(self.config.use_length)
            + if self.config.use_lexicon { 3 } else { 0 }
    }

    /// Column of a named feature, e.g. `W=zeman`, `INIT2=zeman_je`, `LENGTH`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        if let Some(term) = name.strip_prefix(TERM_PREFIX) {
            return self.vocabulary.position(term);
        }
        if name == LENGTH_FEATURE {
            return self.length_index();
        }
        if let Some(p) = LEXICON_FEATURES.iter().position(|&n| n == name) {
            return self.lexicon_indices().map(|ix| ix[p]);
        }
        self.initial_index.get(name).copied()
    }

    /// All feature names in column order.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .vocabulary
            .terms()
            .map(|t| format!("{TERM_PREFIX}{t}"))
            .collect();
        names.extend(self.initial_names.iter().cloned());
        if self.config.use_length {
            names.push(LENGTH_FEATURE.to_string());
        }
        if self.config.use_lexicon {
            names.extend(LEXICON_FEATURES.iter().map(|s| s.to_string()));
        }
        names
    }

    pub fn vectorize(&self, tokens: &TokenSequence) -> FeatureVector {
        let mut entries: Vec<(usize, f64)> = Vec::new();

        let mut counts: HashMap<usize, usize> = HashMap::new();
        for t in tokens.iter() {
            if let Some(p) = self.vocabulary.position(t) {
                *counts.entry(p).or_default() += 1;
            }
        }
        let n = self.vocabulary.num_docs();
        for (p, count) in counts {
            let df = self.vocabulary.entries()[p].df;
            let value = tfidf_value(count, df, n).expect("vocabulary df validated at construction");
            entries.push((p, value));
        }

        if let Some(max_n) = self.config.initial_ngram_len() {
            entries.extend(
                initial_ngrams(tokens, max_n)
                    .iter()
                    .filter_map(|name| self.initial_index.get(name))
                    .map(|&i| (i, 1.0)),
            );
        }
        if let Some(i) = self.length_index() {
            entries.push((i, comment_length(tokens) as f64));
        }
        if let Some([pos, neg, diff]) = self.lexicon_indices() {
            let c = lexicon_counts(tokens, &self.lexicon);
            entries.push((pos, c.positive as f64));
            entries.push((neg, c.negative as f64));
            entries.push((diff, c.diff() as f64));
        }

        FeatureVector::new(self.dimension(), entries).expect("indices come from the frozen layout")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&content)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        // Writing to a String cannot fail.
        let _ = writeln!(out, "{SPACE_FORMAT_VERSION}");
        let _ = writeln!(out, "dimension\t{}", self.dimension());
        let _ = writeln!(out, "stemmer\t{}", self.stemmer);
        let _ = writeln!(out, "vocabulary_size\t{}", c.vocabulary_size);
        let _ = writeln!(
            out,
            "initial_ngrams\t{}",
            c.initial_ngram_len().unwrap_or(0)
        );
        let _ = writeln!(out, "length\t{}", c.use_length);
        let _ = writeln!(out, "lexicon\t{}", c.use_lexicon);
        let _ = writeln!(out, "documents\t{}", self.vocabulary.num_docs());
        let _ = writeln!(out, "terms\t{}", self.vocabulary.len());
        for e in self.vocabulary.entries() {
            let _ = writeln!(out, "{}\t{}", e.term, e.df);
        }
        let _ = writeln!(out, "initial\t{}", self.initial_names.len());
        for name in &self.initial_names {
            let _ = writeln!(out, "{name}");
        }
        let _ = writeln!(out, "lexicon_terms\t{}", self.lexicon.len());
        for (term, polarity) in self.lexicon.iter() {
            let _ = writeln!(out, "{term}\t{polarity}");
        }
        out
    }

    pub fn from_text(content: &str) -> Result<Self> {
        let mut lines = Lines::new(content);
        let version = lines.next_line()?;
        if version != SPACE_FORMAT_VERSION {
            return Err(Error::Version {
                expected: SPACE_FORMAT_VERSION.into(),
                found: version.into(),
            });
        }
        let dimension: usize = lines.field("dimension")?;
        let stemmer: StemmerKind = lines.field("stemmer")?;
        let vocabulary_size: usize = lines.field("vocabulary_size")?;
        let initial: usize = lines.field("initial_ngrams")?;
        let use_length: bool = lines.field("length")?;
        let use_lexicon: bool = lines.field("lexicon")?;
        let num_docs: usize = lines.field("documents")?;

        let config = FeatureConfig {
            use_initial_ngrams: initial > 0,
            max_n: if initial > 0 {
                initial
            } else {
                super::MAX_INITIAL_NGRAM
            },
            use_length,
            use_lexicon,
            vocabulary_size,
        };
        config.validate().map_err(|e| lines.error(e.to_string()))?;

        let n_terms: usize = lines.field("terms")?;
        let mut entries = Vec::with_capacity(n_terms);
        for _ in 0..n_terms {
            let (term, df) = lines.pair()?;
            let df = df
                .parse()
                .map_err(|_| lines.error(format!("bad df {df:?}")))?;
            entries.push(VocabEntry {
                term: term.to_string(),
                df,
            });
        }
        let vocabulary =
            Vocabulary::from_entries(entries, num_docs).map_err(|e| lines.error(e.to_string()))?;

        let n_initial: usize = lines.field("initial")?;
        let mut initial_names = Vec::with_capacity(n_initial);
        for _ in 0..n_initial {
            initial_names.push(lines.next_line()?.to_string());
        }

        let n_lex: usize = lines.field("lexicon_terms")?;
        let mut lexicon = SentimentLexicon::new();
        for _ in 0..n_lex {
            let (term, polarity) = lines.pair()?;
            let polarity: Polarity = polarity
                .parse()
                .map_err(|e: Error| lines.error(e.to_string()))?;
            lexicon
                .insert(term, polarity)
                .map_err(|e| lines.error(e.to_string()))?;
        }
        lines.expect_end()?;

        let space = FeatureSpace::assemble(config, stemmer, vocabulary, initial_names, lexicon)?;
        if space.dimension() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                actual: space.dimension(),
            });
        }
        Ok(space)
    }
}

/// Line cursor for the space file format.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Split<'a, char>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn new(content: &'a str) -> Self {
        Lines {
            inner: content.split('\n').enumerate(),
            line: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::format(self.line, message)
    }

    fn next_line(&mut self) -> Result<&'a str> {
        match self.inner.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l.trim_end_matches('\r'))
            }
            None => Err(self.error("unexpected end of file")),
        }
    }

    fn pair(&mut self) -> Result<(&'a str, &'a str)> {
        let line = self.next_line()?;
        line.split_once('\t')
            .ok_or_else(|| self.error(format!("expected two tab-separated fields, found {line:?}")))
    }

    fn field<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (k, v) = self.pair()?;
        if k != key {
            return Err(self.error(format!("expected key {key:?}, found {k:?}")));
        }
        v.parse()
            .map_err(|_| self.error(format!("bad value {v:?} for {key:?}")))
    }

    fn expect_end(&mut self) -> Result<()> {
        for (i, l) in self.inner.by_ref() {
            if !l.trim().is_empty() {
                return Err(Error::format(i + 1, "trailing content"));
            }
        }
        Ok(())
    }
}

/// Fits the layout on training documents: vocabulary, every initial n-gram
/// name seen in training, then the optional length and lexicon slots.
///
/// `stemmer` is the stemmer that produced `training_docs`; it is recorded so
/// the same preprocessing can be replayed at prediction time.
pub fn fit_feature_space(
    training_docs: &[TokenSequence],
    config: &FeatureConfig,
    lexicon: &SentimentLexicon,
    stemmer: StemmerKind,
) -> Result<FeatureSpace> {
    config.validate()?;
    let vocabulary = build_vocabulary(training_docs, config.vocabulary_size)?;
    let initial_names = match config.initial_ngram_len() {
        Some(max_n) => training_docs
            .iter()
            .flat_map(|d| initial_ngrams(d, max_n))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
        None => Vec::new(),
    };
    let lexicon = if config.use_lexicon {
        lexicon.clone()
    } else {
        SentimentLexicon::new()
    };
    FeatureSpace::assemble(config.clone(), stemmer, vocabulary, initial_names, lexicon)
}

pub fn vectorize(tokens: &TokenSequence, space: &FeatureSpace) -> FeatureVector {
    space.vectorize(tokens)
}
