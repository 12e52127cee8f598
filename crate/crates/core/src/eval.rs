//! Scoring and k-fold cross-validation.
//!
//! The headline metric is the mean of the FAVOR and AGAINST F1 scores
//! ([`EvalReport::semeval_f1`]); [`EvalReport::macro_f1_three`] also averages
//! in NONE. Precision, recall and F1 are 0 whenever their denominator is 0.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{Dataset, StanceLabel};
use crate::error::{Error, Result};
use crate::features::{fit_feature_space, FeatureConfig, FeatureSpace, SentimentLexicon};
use crate::maxent::{train, TrainConfig};
use crate::textprep::{Preprocessor, StemmerKind, TokenSequence};

const N: usize = StanceLabel::COUNT;

/// Rows are gold labels, columns predicted labels, both in canonical order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    counts: [[u64; N]; N],
}

impl ConfusionMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, gold: StanceLabel, pred: StanceLabel) {
        self.counts[gold.index()][pred.index()] += 1;
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for g in 0..N {
            for p in 0..N {
                self.counts[g][p] += other.counts[g][p];
            }
        }
    }

    pub fn get(&self, gold: StanceLabel, pred: StanceLabel) -> u64 {
        self.counts[gold.index()][pred.index()]
    }

    pub fn counts(&self) -> &[[u64; N]; N] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn true_positives(&self, label: StanceLabel) -> u64 {
        self.get(label, label)
    }

    pub fn false_positives(&self, label: StanceLabel) -> u64 {
        let k = label.index();
        (0..N).filter(|&g| g != k).map(|g| self.counts[g][k]).sum()
    }

    pub fn false_negatives(&self, label: StanceLabel) -> u64 {
        let k = label.index();
        (0..N).filter(|&p| p != k).map(|p| self.counts[k][p]).sum()
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabelScores {
    pub label: StanceLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub confusion: ConfusionMatrix,
    /// One entry per label in canonical order.
    pub per_label: [LabelScores; N],
    pub semeval_f1: f64,
    pub macro_f1_three: f64,
    pub n_scored: u64,
}

impl EvalReport {
    pub fn from_confusion(confusion: ConfusionMatrix) -> Self {
        let per_label = StanceLabel::ALL.map(|label| {
            let tp = confusion.true_positives(label);
            let fp = confusion.false_positives(label);
            let fn_ = confusion.false_negatives(label);
            let precision = ratio(tp, tp + fp);
            let recall = ratio(tp, tp + fn_);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            LabelScores {
                label,
                precision,
                recall,
                f1,
                support: tp + fn_,
            }
        });
        let f1 = |l: StanceLabel| per_label[l.index()].f1;
        EvalReport {
            confusion,
            semeval_f1: (f1(StanceLabel::Favor) + f1(StanceLabel::Against)) / 2.0,
            macro_f1_three: per_label.iter().map(|s| s.f1).sum::<f64>() / N as f64,
            per_label,
            n_scored: confusion.total(),
        }
    }

    pub fn label(&self, label: StanceLabel) -> &LabelScores {
        &self.per_label[label.index()]
    }

    /// Two-column summary row plus per-label scores and the confusion matrix.
    pub fn to_table(&self, topic: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "TOPIC\tF1 (FAVOR/AGAINST)\tF1 (FAVOR/AGAINST/NONE)");
        let _ = writeln!(
            out,
            "{topic}\t{:.4}\t{:.4}",
            self.semeval_f1, self.macro_f1_three
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "LABEL\tPRECISION\tRECALL\tF1\tSUPPORT");
        for s in &self.per_label {
            let _ = writeln!(
                out,
                "{}\t{:.4}\t{:.4}\t{:.4}\t{}",
                s.label, s.precision, s.recall, s.f1, s.support
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "GOLD\\PRED\tFAVOR\tAGAINST\tNONE");
        for gold in StanceLabel::ALL {
            let row = self.confusion.counts()[gold.index()];
            let _ = writeln!(out, "{gold}\t{}\t{}\t{}", row[0], row[1], row[2]);
        }
        let _ = writeln!(out, "scored\t{}", self.n_scored);
        out
    }
}

pub fn score(gold: &[StanceLabel], pred: &[StanceLabel]) -> Result<EvalReport> {
    if gold.len() != pred.len() {
        return Err(Error::InvalidArgument(format!(
            "gold has {} labels but predictions have {}",
            gold.len(),
            pred.len()
        )));
    }
    if gold.is_empty() {
        return Err(Error::InvalidArgument("nothing to score".into()));
    }
    let mut confusion = ConfusionMatrix::new();
    for (&g, &p) in gold.iter().zip(pred) {
        confusion.add(g, p);
    }
    Ok(EvalReport::from_confusion(confusion))
}

/// Splits `0..labels.len()` into `k` disjoint folds. Each label's indices are
/// shuffled with `seed` and dealt round-robin, continuing from the fold where
/// the previous label stopped, so both per-label and total fold sizes differ
/// by at most one.
pub fn stratified_folds_for_labels(
    labels: &[StanceLabel],
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    if k > labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{k} folds requested for {} comments",
            labels.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for label in StanceLabel::ALL {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == label).collect();
        idx.shuffle(&mut rng);
        for i in idx {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

pub fn stratified_folds(d: &Dataset, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    stratified_folds_for_labels(&d.gold_labels()?, k, seed)
}

/// Everything needed to run cross-validation on one topic.
#[derive(Debug, Clone)]
pub struct CvSettings {
    pub folds: usize,
    pub seed: u64,
    pub features: FeatureConfig,
    pub training: TrainConfig,
    pub stemmer: StemmerKind,
    /// Used only when `features.use_lexicon` is set; terms already preprocessed.
    pub lexicon: SentimentLexicon,
}

impl Default for CvSettings {
    fn default() -> Self {
        CvSettings {
            folds: 10,
            seed: 0,
            features: FeatureConfig::default(),
            training: TrainConfig::default(),
            stemmer: StemmerKind::default(),
            lexicon: SentimentLexicon::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub test_indices: Vec<usize>,
    pub space: FeatureSpace,
    pub confusion: ConfusionMatrix,
}

#[derive(Debug, Clone)]
pub struct CvOutcome {
    pub report: EvalReport,
    pub folds: Vec<FoldOutcome>,
}

/// k-fold cross-validation with pooled scoring. For each fold the feature
/// space is fitted and the model trained on the other folds only.
pub fn cross_validate_detailed(d: &Dataset, settings: &CvSettings) -> Result<CvOutcome> {
    let gold = d.gold_labels()?;
    let folds = stratified_folds_for_labels(&gold, settings.folds, settings.seed)?;
    let pre = Preprocessor::new(settings.stemmer);
    let docs: Vec<TokenSequence> = d.comments().iter().map(|c| pre.process(&c.text)).collect();

    let mut pooled = ConfusionMatrix::new();
    let mut outcomes = Vec::with_capacity(folds.len());
    for (f, test) in folds.iter().enumerate() {
        let train_idx: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, idx)| idx.iter().copied())
            .collect();
        let train_docs: Vec<TokenSequence> = train_idx.iter().map(|&i| docs[i].clone()).collect();
        let space = fit_feature_space(
            &train_docs,
            &settings.features,
            &settings.lexicon,
            settings.stemmer,
        )?;
        let examples: Vec<_> = train_idx
            .iter()
            .zip(&train_docs)
            .map(|(&i, doc)| (space.vectorize(doc), gold[i]))
            .collect();
        let model = train(&examples, &settings.training)?;

        let mut confusion = ConfusionMatrix::new();
        for &i in test {
            let pred = model.predict(&space.vectorize(&docs[i]))?;
            confusion.add(gold[i], pred);
        }
        pooled.merge(&confusion);
        outcomes.push(FoldOutcome {
            test_indices: test.clone(),
            space,
            confusion,
        });
    }
    Ok(CvOutcome {
        report: EvalReport::from_confusion(pooled),
        folds: outcomes,
    })
}

pub fn cross_validate(d: &Dataset, settings: &CvSettings) -> Result<EvalReport> {
    cross_validate_detailed(d, settings).map(|o| o.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Comment;
    use approx::assert_abs_diff_eq;
    use StanceLabel::{Against as A, Favor as F, None as N_};

    #[test]
    fn hand_built_confusion() {
        let r = score(&[F, F, A, N_], &[F, A, A, N_]).unwrap();
        assert_abs_diff_eq!(r.label(F).f1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.label(A).f1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.semeval_f1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.label(N_).f1, 1.0);
        assert_eq!(r.label(F).precision, 1.0);
        assert_eq!(r.label(F).recall, 0.5);
        assert_eq!(r.n_scored, 4);
    }

    #[test]
    fn perfect_prediction() {
        let g = [F, A, N_, A];
        let r = score(&g, &g).unwrap();
        assert!(r.per_label.iter().all(|s| s.f1 == 1.0));
        assert_eq!(r.semeval_f1, 1.0);
    }

    #[test]
    fn all_none_degenerate() {
        let r = score(&[N_; 5], &[N_; 5]).unwrap();
        assert_eq!(r.semeval_f1, 0.0);
        assert_abs_diff_eq!(r.macro_f1_three, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn score_errors() {
        assert!(score(&[F], &[F, A]).is_err());
        assert!(score(&[], &[]).is_err());
    }

    #[test]
    fn even_folds() {
        let labels: Vec<_> = (0..20).map(|i| StanceLabel::ALL[i % 3]).collect();
        let folds = stratified_folds_for_labels(&labels, 10, 7).unwrap();
        assert!(folds.iter().all(|f| f.len() == 2));
    }

    #[test]
    fn one_of_each_label_per_fold() {
        let labels: Vec<_> = (0..30).map(|i| StanceLabel::ALL[i / 10]).collect();
        let folds = stratified_folds_for_labels(&labels, 10, 3).unwrap();
        for f in &folds {
            let mut got: Vec<_> = f.iter().map(|&i| labels[i]).collect();
            got.sort();
            assert_eq!(got, [F, A, N_]);
        }
    }

    #[test]
    fn folds_deterministic_and_seeded() {
        let labels: Vec<_> = (0..50).map(|i| StanceLabel::ALL[(i * 7) % 3]).collect();
        let a = stratified_folds_for_labels(&labels, 5, 11).unwrap();
        assert_eq!(a, stratified_folds_for_labels(&labels, 5, 11).unwrap());
        assert_ne!(a, stratified_folds_for_labels(&labels, 5, 12).unwrap());
    }

    #[test]
    fn fold_errors() {
        assert!(stratified_folds_for_labels(&[F, A], 1, 0).is_err());
        assert!(stratified_folds_for_labels(&[F, A], 3, 0).is_err());
        let d = Dataset::new(
            "t",
            vec![
                Comment::new("1", "t", "a", Some(F)),
                Comment::new("2", "t", "b", None),
            ],
        )
        .unwrap();
        assert!(matches!(
            stratified_folds(&d, 2, 0),
            Err(Error::Unlabeled(_))
        ));
    }

    #[test]
    fn single_label_dataset() {
        let comments = (0..6)
            .map(|i| Comment::new(i.to_string(), "t", format!("slovo číslo{i}"), Some(N_)))
            .collect();
        let d = Dataset::new("t", comments).unwrap();
        let settings = CvSettings {
            folds: 2,
            ..CvSettings::default()
        };
        let r = cross_validate(&d, &settings).unwrap();
        assert_eq!(r.semeval_f1, 0.0);
        assert_abs_diff_eq!(r.macro_f1_three, 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(r.n_scored, 6);
    }

    #[test]
    fn table_shape() {
        let r = score(&[F, A, N_], &[F, A, A]).unwrap();
        let t = r.to_table("Zeman");
        let mut lines = t.lines();
        assert_eq!(
            lines.next(),
            Some("TOPIC\tF1 (FAVOR/AGAINST)\tF1 (FAVOR/AGAINST/NONE)")
        );
        assert_eq!(lines.next(), Some("Zeman\t0.8333\t0.5556"));
        assert!(t.contains("NONE\t0\t1\t0\n"));
    }
}
