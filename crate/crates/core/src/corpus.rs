//! Stance-annotated comment datasets.
//!
//! Corpus files are UTF-8, tab-separated, with the header line
//! `ID<TAB>Target<TAB>Text<TAB>Stance`. The stance column holds `FAVOR`, `AGAINST`,
//! `NONE`, or `?` for an unlabeled comment. A file holds exactly one target.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub const HEADER: [&str; 4] = ["ID", "Target", "Text", "Stance"];

/// Stance of a comment toward the dataset's target.
///
/// The declaration order is the canonical order used for weight rows,
/// confusion matrix axes and tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StanceLabel {
    Favor,
    Against,
    None,
}

impl StanceLabel {
    pub const ALL: [StanceLabel; 3] = [StanceLabel::Favor, StanceLabel::Against, StanceLabel::None];
    pub const COUNT: usize = 3;

    pub fn index(self) -> usize {
        match self {
            StanceLabel::Favor => 0,
            StanceLabel::Against => 1,
            StanceLabel::None => 2,
        }
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StanceLabel::Favor => "FAVOR",
            StanceLabel::Against => "AGAINST",
            StanceLabel::None => "NONE",
        }
    }
}

impl fmt::Display for StanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StanceLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "FAVOR" => Ok(StanceLabel::Favor),
            "AGAINST" => Ok(StanceLabel::Against),
            "NONE" => Ok(StanceLabel::None),
            other => Err(Error::UnknownStance(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    pub id: String,
    pub topic: String,
    pub text: String,
    pub gold: Option<StanceLabel>,
}

impl Comment {
    pub fn new(
        id: impl Into<String>,
        topic: impl Into<String>,
        text: impl Into<String>,
        gold: Option<StanceLabel>,
    ) -> Self {
        Comment {
            id: id.into(),
            topic: topic.into(),
            text: text.into(),
            gold,
        }
    }
}

/// Comments on a single topic, in load order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    topic: String,
    comments: Vec<Comment>,
}

impl Dataset {
    /// Builds a dataset, checking that every comment carries `topic` and that
    /// ids are non-empty and unique.
    pub fn new(topic: impl Into<String>, comments: Vec<Comment>) -> Result<Self> {
        let topic = topic.into();
        let mut seen = HashSet::with_capacity(comments.len());
        for c in &comments {
            if c.id.is_empty() {
                return Err(Error::EmptyId);
            }
            if c.topic != topic {
                return Err(Error::MixedTopics {
                    first: topic,
                    other: c.topic.clone(),
                });
            }
            if !seen.insert(c.id.as_str()) {
                return Err(Error::DuplicateId(c.id.clone()));
            }
        }
        Ok(Dataset { topic, comments })
    }

    pub fn topic(&self) -> &str {
        &self.topic
    }

    pub fn comments(&self) -> &[Comment] {
        &self.comments
    }

    pub fn len(&self) -> usize {
        self.comments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comments.is_empty()
    }

    /// Gold labels in order, or an error naming the first unlabeled comment.
    pub fn gold_labels(&self) -> Result<Vec<StanceLabel>> {
        self.comments
            .iter()
            .map(|c| c.gold.ok_or_else(|| Error::Unlabeled(c.id.clone())))
            .collect()
    }

    pub fn stats(&self) -> StanceCounts {
        dataset_stats(self)
    }
}

/// Reads a corpus file. Empty comment texts are rejected unless `allow_empty`.
pub fn load_dataset(path: impl AsRef<Path>, allow_empty: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(&content, allow_empty)
}

pub fn parse_dataset(content: &str, allow_empty: bool) -> Result<Dataset> {
    let mut lines = content.split('\n').enumerate();

    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim_end_matches('\r').is_empty() => continue,
            Some((i, l)) => break (i + 1, l.trim_end_matches('\r')),
            None => return Err(Error::format(1, "missing header line")),
        }
    };
    let columns: Vec<&str> = header.1.split('\t').collect();
    if columns != HEADER {
        return Err(Error::format(
            header.0,
            format!(
                "expected header {:?}, found {:?}",
                HEADER.join("\t"),
                header.1
            ),
        ));
    }

    let mut topic: Option<String> = None;
    let mut comments = Vec::new();
    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != HEADER.len() {
            return Err(Error::format(
                line_no,
                format!("expected {} columns, found {}", HEADER.len(), fields.len()),
            ));
        }
        let (id, target, text, stance) = (fields[0], fields[1], fields[2], fields[3]);
        if id.is_empty() {
            return Err(Error::format(line_no, "empty comment id"));
        }
        if text.is_empty() && !allow_empty {
            return Err(Error::EmptyText(id.to_string()));
        }
        let gold = match stance {
            "?" => None,
            s => Some(s.parse::<StanceLabel>()?),
        };
        match &topic {
            None => topic = Some(target.to_string()),
            Some(t) if t != target => {
                return Err(Error::MixedTopics {
                    first: t.clone(),
                    other: target.to_string(),
                })
            }
            Some(_) => {}
        }
        comments.push(Comment::new(id, target, text, gold));
    }

    let topic = topic.ok_or(Error::EmptyDataset)?;
    Dataset::new(topic, comments)
}

/// Per-label comment counts of a dataset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StanceCounts {
    pub favor: usize,
    pub against: usize,
    pub none: usize,
    pub unlabeled: usize,
    pub total: usize,
}

impl StanceCounts {
    pub fn get(&self, label: StanceLabel) -> usize {
        match label {
            StanceLabel::Favor => self.favor,
            StanceLabel::Against => self.against,
            StanceLabel::None => self.none,
        }
    }
}

pub fn dataset_stats(d: &Dataset) -> StanceCounts {
    let mut counts = StanceCounts::default();
    for c in d.comments() {
        match c.gold {
            Some(StanceLabel::Favor) => counts.favor += 1,
            Some(StanceLabel::Against) => counts.against += 1,
            Some(StanceLabel::None) => counts.none += 1,
            None => counts.unlabeled += 1,
        }
    }
    counts.total = d.len();
    counts
}

/// Observed agreement, fixed chance agreement and kappa for one annotator pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agreement {
    pub observed: f64,
    pub chance: f64,
    pub kappa: f64,
}

/// Cohen's kappa with chance agreement fixed at `1 / num_categories`.
pub fn agreement_fixed_chance(
    agree_count: u64,
    total_count: u64,
    num_categories: u32,
) -> Result<Agreement> {
    if total_count == 0 {
        return Err(Error::InvalidArgument(
            "total_count must be positive".into(),
        ));
    }
    if agree_count > total_count {
        return Err(Error::InvalidArgument(format!(
            "agree_count {agree_count} exceeds total_count {total_count}"
        )));
    }
    if num_categories < 2 {
        return Err(Error::InvalidArgument(format!(
            "num_categories must be at least 2, got {num_categories}"
        )));
    }
    let observed = agree_count as f64 / total_count as f64;
    let chance = 1.0 / f64::from(num_categories);
    Ok(Agreement {
        observed,
        chance,
        kappa: (observed - chance) / (1.0 - chance),
    })
}

pub fn cohen_kappa_fixed_chance(
    agree_count: u64,
    total_count: u64,
    num_categories: u32,
) -> Result<f64> {
    agreement_fixed_chance(agree_count, total_count, num_categories).map(|a| a.kappa)
}
