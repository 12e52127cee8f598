use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use stance_core::corpus::{load_dataset, Dataset};
use stance_core::eval::cross_validate;
use stance_core::features::fit_feature_space;
use stance_core::maxent::{train_with_report, StopReason};
use stance_core::{FeatureSpace, MaxEntModel, Preprocessor, StanceLabel};

use crate::config::PipelineConfig;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    /// Tab-separated table.
    #[default]
    Text,
    /// JSON document.
    Json,
}

fn load_for_config(corpus: &Path, config: &PipelineConfig) -> Result<Dataset> {
    let dataset = load_dataset(corpus, false)
        .with_context(|| format!("cannot load corpus {}", corpus.display()))?;
    if dataset.topic() != config.topic {
        bail!(
            "corpus topic {:?} does not match config topic {:?}",
            dataset.topic(),
            config.topic
        );
    }
    Ok(dataset)
}

/// Summary of a `train` run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSummary {
    pub comments: usize,
    pub dimension: usize,
    pub iterations: usize,
    pub final_objective: f64,
    pub stop: StopReason,
}

pub fn cmd_train(
    corpus: &Path,
    config: &PipelineConfig,
    model_out: &Path,
    space_out: &Path,
    out: &mut dyn Write,
) -> Result<TrainSummary> {
    let dataset = load_for_config(corpus, config)?;
    let gold = dataset.gold_labels()?;
    let lexicon = config.load_lexicon()?;

    let pre = Preprocessor::new(config.stemmer);
    let docs: Vec<_> = dataset
        .comments()
        .iter()
        .map(|c| pre.process(&c.text))
        .collect();
    let space = fit_feature_space(&docs, &config.features, &lexicon, config.stemmer)?;
    let examples: Vec<_> = docs.iter().map(|d| space.vectorize(d)).zip(gold).collect();
    let (model, report) = train_with_report(&examples, &config.training)?;

    model
        .save(model_out)
        .with_context(|| format!("cannot write model {}", model_out.display()))?;
    space
        .save(space_out)
        .with_context(|| format!("cannot write feature space {}", space_out.display()))?;

    let summary = TrainSummary {
        comments: dataset.len(),
        dimension: space.dimension(),
        iterations: report.iterations,
        final_objective: report.final_objective(),
        stop: report.stop,
    };
    writeln!(out, "topic\t{}", dataset.topic())?;
    writeln!(out, "comments\t{}", summary.comments)?;
    writeln!(out, "dimension\t{}", summary.dimension)?;
    writeln!(out, "iterations\t{}", summary.iterations)?;
    writeln!(out, "stop\t{:?}", summary.stop)?;
    writeln!(out, "final_objective\t{:.6}", summary.final_objective)?;
    Ok(summary)
}

pub fn cmd_predict(model: &Path, space: &Path, corpus: &Path, out: &mut dyn Write) -> Result<()> {
    let model = MaxEntModel::load(model)
        .with_context(|| format!("cannot load model {}", model.display()))?;
    let space = FeatureSpace::load(space)
        .with_context(|| format!("cannot load feature space {}", space.display()))?;
    if model.dimension() != space.dimension() {
        bail!(
            "model dimension {} does not match feature space dimension {}",
            model.dimension(),
            space.dimension()
        );
    }
    let dataset = load_dataset(corpus, true)
        .with_context(|| format!("cannot load corpus {}", corpus.display()))?;

    let pre = Preprocessor::new(space.stemmer());
    writeln!(out, "ID\tPredicted\tP_FAVOR\tP_AGAINST\tP_NONE")?;
    for c in dataset.comments() {
        let x = space.vectorize(&pre.process(&c.text));
        let p = model.predict_proba(&x)?;
        let label = model.predict(&x)?;
        writeln!(out, "{}\t{label}\t{}\t{}\t{}", c.id, p[0], p[1], p[2])?;
    }
    Ok(())
}

pub fn cmd_crossval(
    corpus: &Path,
    config: &PipelineConfig,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<()> {
    let dataset = load_for_config(corpus, config)?;
    let report = cross_validate(&dataset, &config.cv_settings()?)?;
    match format {
        OutputFormat::Text => {
            writeln!(out, "folds\t{}\tseed\t{}", config.cv_folds, config.cv_seed)?;
            write!(out, "{}", report.to_table(dataset.topic()))?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                topic: &'a str,
                folds: usize,
                seed: u64,
                #[serde(flatten)]
                report: &'a stance_core::EvalReport,
            }
            let doc = Doc {
                topic: dataset.topic(),
                folds: config.cv_folds,
                seed: config.cv_seed,
                report: &report,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn cmd_stats(corpus: &Path, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    let dataset = load_dataset(corpus, true)
        .with_context(|| format!("cannot load corpus {}", corpus.display()))?;
    let s = dataset.stats();
    match format {
        OutputFormat::Text => {
            writeln!(out, "TOPIC\tFAVOR\tAGAINST\tNONE\tUNLABELED\tTOTAL")?;
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                dataset.topic(),
                s.favor,
                s.against,
                s.none,
                s.unlabeled,
                s.total
            )?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Record {
                label: &'static str,
                count: usize,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                topic: &'a str,
                records: Vec<Record>,
                total: usize,
            }
            let mut records: Vec<Record> = StanceLabel::ALL
                .iter()
                .map(|&l| Record {
                    label: l.as_str(),
                    count: s.get(l),
                })
                .collect();
            records.push(Record {
                label: "UNLABELED",
                count: s.unlabeled,
            });
            let doc = Doc {
                topic: dataset.topic(),
                records,
                total: s.total,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
