//! Stance detection toward a named target.
//!
//! The pipeline classifies comments as FAVOR, AGAINST or NONE with respect to
//! one topic:
//!
//! 1. [`textprep`] normalizes raw text (URL sentinels, letters only,
//!    lowercase), tokenizes it and applies a pluggable [`textprep::Stemmer`].
//! 2. [`features`] fits a frozen [`features::FeatureSpace`] on training
//!    documents (TF-IDF over the most frequent terms, optional initial
//!    n-grams, comment length and sentiment lexicon counts) and vectorizes
//!    token sequences into it.
//! 3. [`maxent`] trains an L2-regularized maximum entropy classifier by
//!    full-batch gradient descent with backtracking line search.
//! 4. [`eval`] scores predictions (per-label F1, the two-label FAVOR/AGAINST
//!    average and the three-label macro average) and runs stratified k-fold
//!    cross-validation.
//!
//! One model is trained per topic; [`corpus::Dataset`] enforces that every
//! comment in a dataset shares the same target.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod maxent;
pub mod textprep;

pub use corpus::{Comment, Dataset, StanceCounts, StanceLabel};
pub use error::{Error, Result};
pub use eval::{ConfusionMatrix, EvalReport};
pub use features::{FeatureConfig, FeatureSpace, FeatureVector, SentimentLexicon, Vocabulary};
pub use maxent::{MaxEntModel, TrainConfig};
pub use textprep::{Preprocessor, Stemmer, StemmerKind, TokenSequence};
