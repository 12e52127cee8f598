//! Text normalization, tokenization and stemming.
//!
//! The order is fixed: [`normalize`] → [`tokenize`] → [`apply_stemmer`].
//! Feature extraction only ever sees the resulting [`TokenSequence`].

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;

use crate::error::{Error, Result};

pub const URL_SENTINEL: &str = "URL";
pub const IMAGE_URL_SENTINEL: &str = "IMGURL";

const IMAGE_EXTENSIONS: [&str; 5] = [".jpg", ".jpeg", ".png", ".gif", ".bmp"];

fn url_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| Regex::new(r"(?i)(?:https?://|www\.)\S*").expect("valid URL pattern"))
}

pub fn is_sentinel(token: &str) -> bool {
    token == URL_SENTINEL || token == IMAGE_URL_SENTINEL
}

fn is_image_url(url: &str) -> bool {
    let path = url.split(['?', '#']).next().unwrap_or(url);
    let path = path.trim_end_matches(|c: char| !c.is_alphanumeric());
    let lower = path.to_lowercase();
    IMAGE_EXTENSIONS.iter().any(|ext| lower.ends_with(ext))
}

fn letter_runs() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| Regex::new(r"\p{L}+").expect("valid letter pattern"))
}

/// True for characters in the Unicode letter category.
pub fn is_letter(c: char) -> bool {
    let mut buf = [0u8; 4];
    letter_runs().is_match(c.encode_utf8(&mut buf))
}

/// Pushes the words of a non-URL span: each maximal run of letters becomes
/// one word, lowercased, unless the run is exactly a sentinel.
fn push_words(span: &str, words: &mut Vec<String>) {
    for run in letter_runs().find_iter(span) {
        let run = run.as_str();
        if is_sentinel(run) {
            words.push(run.to_string());
            continue;
        }
        // Lowercasing can emit non-letters (e.g. combining marks); those split words too.
        let lower: String = run.chars().flat_map(char::to_lowercase).collect();
        words.extend(
            letter_runs()
                .find_iter(&lower)
                .map(|m| m.as_str().to_string()),
        );
    }
}

/// Normalizes raw comment text.
///
/// Image links become `IMGURL`, other links `URL`; everything else is
/// lowercased and reduced to Unicode letters, words separated by one space.
pub fn normalize(text: &str) -> String {
    let mut words = Vec::new();
    let mut last = 0;
    for m in url_pattern().find_iter(text) {
        push_words(&text[last..m.start()], &mut words);
        words.push(if is_image_url(m.as_str()) {
            IMAGE_URL_SENTINEL.to_string()
        } else {
            URL_SENTINEL.to_string()
        });
        last = m.end();
    }
    push_words(&text[last..], &mut words);
    words.join(" ")
}

/// Ordered tokens of one comment after preprocessing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    pub fn new(tokens: Vec<String>) -> Self {
        debug_assert!(tokens.iter().all(|t| !t.is_empty()));
        TokenSequence(tokens)
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }
}

impl<S: Into<String>> FromIterator<S> for TokenSequence {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenSequence(
            iter.into_iter()
                .map(Into::into)
                .filter(|t: &String| !t.is_empty())
                .collect(),
        )
    }
}

pub fn tokenize(normalized: &str) -> TokenSequence {
    normalized.split(' ').filter(|t| !t.is_empty()).collect()
}

pub trait Stemmer {
    /// Maps a non-empty token to a non-empty stem. Must be idempotent.
    fn stem(&self, token: &str) -> String;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityStemmer;

impl Stemmer for IdentityStemmer {
    fn stem(&self, token: &str) -> String {
        token.to_string()
    }
}

/// Strip `suffix` when the token is longer than `min_len` characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuffixRule {
    pub suffix: &'static str,
    pub min_len: usize,
}

/// Rough Czech inflection endings, longest first.
pub const CZECH_SUFFIX_RULES: &[SuffixRule] = &[
    SuffixRule {
        suffix: "ového",
        min_len: 8,
    },
    SuffixRule {
        suffix: "ovými",
        min_len: 8,
    },
    SuffixRule {
        suffix: "ími",
        min_len: 6,
    },
    SuffixRule {
        suffix: "ými",
        min_len: 6,
    },
    SuffixRule {
        suffix: "ách",
        min_len: 6,
    },
    SuffixRule {
        suffix: "ech",
        min_len: 6,
    },
    SuffixRule {
        suffix: "ové",
        min_len: 6,
    },
    SuffixRule {
        suffix: "ovi",
        min_len: 6,
    },
    SuffixRule {
        suffix: "ou",
        min_len: 5,
    },
    SuffixRule {
        suffix: "em",
        min_len: 5,
    },
    SuffixRule {
        suffix: "ám",
        min_len: 5,
    },
    SuffixRule {
        suffix: "a",
        min_len: 4,
    },
    SuffixRule {
        suffix: "e",
        min_len: 4,
    },
    SuffixRule {
        suffix: "u",
        min_len: 4,
    },
    SuffixRule {
        suffix: "y",
        min_len: 4,
    },
    SuffixRule {
        suffix: "á",
        min_len: 4,
    },
    SuffixRule {
        suffix: "é",
        min_len: 4,
    },
    SuffixRule {
        suffix: "í",
        min_len: 4,
    },
    SuffixRule {
        suffix: "ý",
        min_len: 4,
    },
];

/// Rule-table suffix stripper. Rules are applied until none matches, so the
/// result is a fixed point and stemming is idempotent.
#[derive(Debug, Clone)]
pub struct SuffixStemmer {
    rules: Vec<SuffixRule>,
}

impl SuffixStemmer {
    pub fn new(rules: Vec<SuffixRule>) -> Self {
        SuffixStemmer { rules }
    }

    pub fn czech() -> Self {
        Self::new(CZECH_SUFFIX_RULES.to_vec())
    }

    fn strip_once<'a>(&self, token: &'a str) -> Option<&'a str> {
        let len = token.chars().count();
        self.rules.iter().find_map(|r| {
            let rest = token.strip_suffix(r.suffix)?;
            (len > r.min_len && !rest.is_empty()).then_some(rest)
        })
    }
}

impl Default for SuffixStemmer {
    fn default() -> Self {
        Self::czech()
    }
}

impl Stemmer for SuffixStemmer {
    fn stem(&self, token: &str) -> String {
        let mut current = token;
        while let Some(shorter) = self.strip_once(current) {
            current = shorter;
        }
        current.to_string()
    }
}

pub fn apply_stemmer(tokens: &TokenSequence, stemmer: &dyn Stemmer) -> TokenSequence {
    tokens
        .iter()
        .map(|t| {
            if is_sentinel(t) {
                t.to_string()
            } else {
                stemmer.stem(t)
            }
        })
        .collect()
}

/// Stemmers selectable by name in pipeline configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum StemmerKind {
    Identity,
    #[default]
    SuffixCz,
}

impl StemmerKind {
    pub fn name(self) -> &'static str {
        match self {
            StemmerKind::Identity => "identity",
            StemmerKind::SuffixCz => "suffix-cz",
        }
    }

    pub fn build(self) -> Box<dyn Stemmer + Send + Sync> {
        match self {
            StemmerKind::Identity => Box::new(IdentityStemmer),
            StemmerKind::SuffixCz => Box::new(SuffixStemmer::czech()),
        }
    }
}

impl fmt::Display for StemmerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StemmerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(StemmerKind::Identity),
            "suffix-cz" => Ok(StemmerKind::SuffixCz),
            other => Err(Error::InvalidArgument(format!(
                "unknown stemmer {other:?} (expected identity or suffix-cz)"
            ))),
        }
    }
}

/// The whole preprocessing chain with a chosen stemmer.
pub struct Preprocessor {
    kind: StemmerKind,
    stemmer: Box<dyn Stemmer + Send + Sync>,
}

impl Preprocessor {
    pub fn new(kind: StemmerKind) -> Self {
        Preprocessor {
            kind,
            stemmer: kind.build(),
        }
    }

    pub fn kind(&self) -> StemmerKind {
        self.kind
    }

    pub fn process(&self, text: &str) -> TokenSequence {
        apply_stemmer(&tokenize(&normalize(text)), self.stemmer.as_ref())
    }
}

impl fmt::Debug for Preprocessor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Preprocessor")
            .field("stemmer", &self.kind)
            .finish()
    }
}
