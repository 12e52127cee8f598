//! Entity-centred sentiment dictionaries.
//!
//! Lexicon files are two-column TSV, `term<TAB>polarity`, polarity being
//! `positive` or `negative`. Terms must already be in the form the
//! preprocessing pipeline produces; [`SentimentLexicon::preprocessed`] maps a
//! raw lexicon through a [`Preprocessor`].

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::textprep::{Preprocessor, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            other => Err(Error::InvalidArgument(format!(
                "unknown polarity {other:?} (expected positive or negative)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentimentLexicon {
    terms: BTreeMap<String, Polarity>,
}

impl SentimentLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a term; a term may only be present once.
    pub fn insert(&mut self, term: impl Into<String>, polarity: Polarity) -> Result<()> {
        let term = term.into();
        if term.is_empty() {
            return Err(Error::InvalidArgument("empty lexicon term".into()));
        }
        if self.terms.contains_key(&term) {
            return Err(Error::InvalidArgument(format!(
                "duplicate lexicon term {term:?}"
            )));
        }
        self.terms.insert(term, polarity);
        Ok(())
    }

    pub fn get(&self, term: &str) -> Option<Polarity> {
        self.terms.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Entries in ascending term order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, Polarity)> {
        self.terms.iter().map(|(t, p)| (t.as_str(), *p))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&content)
    }

    pub fn parse(content: &str) -> Result<Self> {
        let mut lex = SentimentLexicon::new();
        for (i, raw) in content.split('\n').enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                return Err(Error::format(
                    i + 1,
                    format!("expected 2 columns, found {}", fields.len()),
                ));
            }
            let polarity = fields[1]
                .parse()
                .map_err(|e: Error| Error::format(i + 1, e.to_string()))?;
            lex.insert(fields[0], polarity)
                .map_err(|e| Error::format(i + 1, e.to_string()))?;
        }
        Ok(lex)
    }

    /// Runs every term through `pre`, keeping single-token results. Terms that
    /// collapse onto an existing entry with the same polarity are merged;
    /// conflicting polarities are an error.
    pub fn preprocessed(&self, pre: &Preprocessor) -> Result<Self> {
        let mut out = SentimentLexicon::new();
        for (term, polarity) in self.iter() {
            let tokens = pre.process(term);
            let [token] = tokens.tokens() else {
                continue;
            };
            match out.get(token) {
                Some(p) if p == polarity => {}
                Some(_) => {
                    return Err(Error::InvalidArgument(format!(
                        "lexicon terms with opposite polarity share the form {token:?}"
                    )))
                }
                None => out.insert(token.clone(), polarity)?,
            }
        }
        Ok(out)
    }
}

/// Positive hits, negative hits and their difference.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LexiconCounts {
    pub positive: usize,
    pub negative: usize,
}

impl LexiconCounts {
    pub fn diff(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

pub fn lexicon_counts(tokens: &TokenSequence, lex: &SentimentLexicon) -> LexiconCounts {
    let mut counts = LexiconCounts::default();
    for t in tokens.iter() {
        match lex.get(t) {
            Some(Polarity::Positive) => counts.positive += 1,
            Some(Polarity::Negative) => counts.negative += 1,
            None => {}
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::StemmerKind;

    fn fixture() -> SentimentLexicon {
        SentimentLexicon::parse("dobrý\tpositive\nskvělý\tpositive\nlhář\tnegative\n").unwrap()
    }

    #[test]
    fn counts_with_multiplicity() {
        let tokens: TokenSequence = ["dobrý", "lhář", "a", "dobrý"].into_iter().collect();
        let c = lexicon_counts(&tokens, &fixture());
        assert_eq!((c.positive, c.negative, c.diff()), (2, 1, 1));
    }

    #[test]
    fn empty_cases() {
        let tokens: TokenSequence = ["dobrý"].into_iter().collect();
        assert_eq!(
            lexicon_counts(&tokens, &SentimentLexicon::new()),
            LexiconCounts::default()
        );
        assert_eq!(
            lexicon_counts(&TokenSequence::default(), &fixture()),
            LexiconCounts::default()
        );
    }

    #[test]
    fn parse_errors() {
        assert!(SentimentLexicon::parse("a\tpositive\na\tnegative\n").is_err());
        assert!(SentimentLexicon::parse("a\tgood\n").is_err());
        let err = SentimentLexicon::parse("a\tpositive\nb\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }));
    }

    #[test]
    fn preprocessing_maps_terms() {
        let raw = SentimentLexicon::parse("Zemana\tnegative\nnice day\tpositive\n").unwrap();
        let lex = raw
            .preprocessed(&Preprocessor::new(StemmerKind::SuffixCz))
            .unwrap();
        assert_eq!(lex.get("zeman"), Some(Polarity::Negative));
        assert_eq!(lex.len(), 1);
    }
}
