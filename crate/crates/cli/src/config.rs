//! Per-topic pipeline configuration.
//!
//! Flat `key = value` lines; `#` starts a comment. Unknown and repeated keys
//! are rejected; absent optional keys take their defaults.
//!
//! ```text
//! topic = Smoking ban in restaurants
//! stemmer = suffix-cz
//! lexicon = ecsd.tsv
//! use_initial_ngrams = true
//! initial_ngram_max = 3
//! use_length = true
//! use_lexicon = true
//! vocabulary_size = 1000
//! l2_lambda = 0.1
//! max_iterations = 500
//! gradient_tolerance = 1e-6
//! cv_folds = 10
//! cv_seed = 0
//! ```

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use stance_core::eval::CvSettings;
use stance_core::features::SentimentLexicon;
use stance_core::{FeatureConfig, Preprocessor, StemmerKind, TrainConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub topic: String,
    pub stemmer: StemmerKind,
    /// Resolved against the config file's directory when relative.
    pub lexicon: Option<PathBuf>,
    pub features: FeatureConfig,
    pub training: TrainConfig,
    pub cv_folds: usize,
    pub cv_seed: u64,
}

impl PipelineConfig {
    pub fn with_topic(topic: impl Into<String>) -> Self {
        PipelineConfig {
            topic: topic.into(),
            stemmer: StemmerKind::default(),
            lexicon: None,
            features: FeatureConfig::default(),
            training: TrainConfig::default(),
            cv_folds: 10,
            cv_seed: 0,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut config =
            Self::parse(&content).with_context(|| format!("invalid config {}", path.display()))?;
        if let Some(lex) = &config.lexicon {
            if lex.is_relative() {
                let base = path.parent().unwrap_or(Path::new(""));
                config.lexicon = Some(base.join(lex));
            }
        }
        Ok(config)
    }

    pub fn parse(content: &str) -> Result<Self> {
        let mut config = PipelineConfig::with_topic("");
        let mut topic_seen = false;
        let mut seen = HashSet::new();

        for (i, raw) in content.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| anyhow!("line {line_no}: expected `key = value`"))?;
            if !seen.insert(key.to_string()) {
                bail!("line {line_no}: duplicate key {key:?}");
            }
            let at = |e: anyhow::Error| e.context(format!("line {line_no}: bad value for {key:?}"));
            match key {
                "topic" => {
                    config.topic = value.to_string();
                    topic_seen = true;
                }
                "stemmer" => config.stemmer = value.parse().map_err(|e| at(anyhow!("{e}")))?,
                "lexicon" => config.lexicon = Some(PathBuf::from(value)),
                "use_initial_ngrams" => {
                    config.features.use_initial_ngrams = parse(value).map_err(at)?
                }
                "initial_ngram_max" => config.features.max_n = parse(value).map_err(at)?,
                "use_length" => config.features.use_length = parse(value).map_err(at)?,
                "use_lexicon" => config.features.use_lexicon = parse(value).map_err(at)?,
                "vocabulary_size" => config.features.vocabulary_size = parse(value).map_err(at)?,
                "l2_lambda" => config.training.l2_lambda = parse(value).map_err(at)?,
                "max_iterations" => config.training.max_iterations = parse(value).map_err(at)?,
                "gradient_tolerance" => {
                    config.training.gradient_tolerance = parse(value).map_err(at)?
                }
                "cv_folds" => config.cv_folds = parse(value).map_err(at)?,
                "cv_seed" => config.cv_seed = parse(value).map_err(at)?,
                other => bail!("line {line_no}: unknown key {other:?}"),
            }
        }

        if !topic_seen || config.topic.is_empty() {
            bail!("missing required key \"topic\"");
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.features.validate()?;
        self.training.validate()?;
        if self.features.use_lexicon && self.lexicon.is_none() {
            bail!("use_lexicon is set but no lexicon path is given");
        }
        if self.cv_folds < 2 {
            bail!("cv_folds must be at least 2, got {}", self.cv_folds);
        }
        Ok(())
    }

    /// Loads the lexicon, if the lexicon block is enabled, in preprocessed form.
    pub fn load_lexicon(&self) -> Result<SentimentLexicon> {
        match (&self.lexicon, self.features.use_lexicon) {
            (Some(path), true) => {
                let raw = SentimentLexicon::load(path)
                    .with_context(|| format!("cannot load lexicon {}", path.display()))?;
                Ok(raw.preprocessed(&Preprocessor::new(self.stemmer))?)
            }
            _ => Ok(SentimentLexicon::new()),
        }
    }

    pub fn cv_settings(&self) -> Result<CvSettings> {
        Ok(CvSettings {
            folds: self.cv_folds,
            seed: self.cv_seed,
            features: self.features.clone(),
            training: self.training,
            stemmer: self.stemmer,
            lexicon: self.load_lexicon()?,
        })
    }
}

fn parse<T>(value: &str) -> Result<T>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| anyhow!("{value:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_applied() {
        let c = PipelineConfig::parse("topic = Miloš Zeman\n").unwrap();
        assert_eq!(c.topic, "Miloš Zeman");
        assert_eq!(c.features, FeatureConfig::default());
        assert_eq!(c.training, TrainConfig::default());
        assert_eq!(c.stemmer, StemmerKind::SuffixCz);
        assert_eq!((c.cv_folds, c.cv_seed), (10, 0));
    }

    #[test]
    fn all_keys() {
        let text = "\
# Smoking ban
topic = Smoking ban in restaurants
stemmer = identity
lexicon = lex.tsv   # relative to this file
use_initial_ngrams = true
initial_ngram_max = 2
use_length = true
use_lexicon = true
vocabulary_size = 50
l2_lambda = 1.5
max_iterations = 20
gradient_tolerance = 1e-4
cv_folds = 5
cv_seed = 42
";
        let c = PipelineConfig::parse(text).unwrap();
        assert_eq!(c.stemmer, StemmerKind::Identity);
        assert_eq!(c.lexicon, Some(PathBuf::from("lex.tsv")));
        assert_eq!(c.features.initial_ngram_len(), Some(2));
        assert!(c.features.use_length && c.features.use_lexicon);
        assert_eq!(c.features.vocabulary_size, 50);
        assert_eq!(c.training.l2_lambda, 1.5);
        assert_eq!(c.training.max_iterations, 20);
        assert_eq!(c.training.gradient_tolerance, 1e-4);
        assert_eq!((c.cv_folds, c.cv_seed), (5, 42));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "stemmer = identity\n",
            "topic = a\ncolour = red\n",
            "topic = a\ntopic = b\n",
            "topic = a\nuse_length = yes\n",
            "topic = a\ninitial_ngram_max = 4\n",
            "topic = a\nuse_lexicon = true\n",
            "topic = a\nstemmer = hps\n",
            "topic = a\nl2_lambda = -1\n",
            "topic = a\ncv_folds = 1\n",
            "topic a\n",
        ] {
            assert!(PipelineConfig::parse(bad).is_err(), "{bad:?} accepted");
        }
    }
}
