#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stance_core::StanceLabel;

pub const HEADER: &str = "ID\tTarget\tText\tStance\n";
pub const TOPIC: &str = "Smoking ban in restaurants";

const FILLER: &[&str] = &[
    "restaurace",
    "kouření",
    "zákon",
    "hospoda",
    "vláda",
    "lidé",
    "host",
    "cigareta",
    "večer",
    "pivo",
    "majitel",
    "stůl",
    "město",
    "kuchyně",
    "dnes",
    "včera",
    "číšník",
    "kouř",
    "venku",
    "uvnitř",
    "prostě",
    "taky",
    "jenom",
    "každý",
    "nikdo",
    "většina",
    "pravidlo",
    "poslanec",
    "debata",
    "názor",
];

/// Planted keywords per label; every comment of a label carries one of them.
pub fn keywords(label: StanceLabel) -> [&'static str; 2] {
    match label {
        StanceLabel::Favor => ["výborně", "souhlasím"],
        StanceLabel::Against => ["nesmysl", "nesouhlasím"],
        StanceLabel::None => ["počasí", "fotbal"],
    }
}

/// Comments whose stance is determined by a planted keyword among shared
/// filler words, shuffled into a single file body.
pub fn separable_rows(per_label: usize, seed: u64) -> Vec<(String, String, StanceLabel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for label in StanceLabel::ALL {
        for i in 0..per_label {
            let n = rng.gen_range(5..12);
            let mut words: Vec<&str> = (0..n).map(|_| *FILLER.choose(&mut rng).unwrap()).collect();
            let kw = keywords(label)[rng.gen_range(0..2)];
            let at = rng.gen_range(0..=words.len());
            words.insert(at, kw);
            let mut text = words.join(" ");
            if rng.gen_bool(0.2) {
                text.push_str(" http://www.idnes.cz/clanek");
            }
            text.push_str(if rng.gen_bool(0.5) { "!" } else { "." });
            rows.push((
                format!("{}-{i}", label.as_str().to_lowercase()),
                text,
                label,
            ));
        }
    }
    rows.shuffle(&mut rng);
    rows
}

pub fn tsv(rows: &[(String, String, Option<StanceLabel>)]) -> String {
    let mut out = String::from(HEADER);
    for (id, text, label) in rows {
        let stance = label.map(|l| l.as_str()).unwrap_or("?");
        out.push_str(&format!("{id}\t{TOPIC}\t{text}\t{stance}\n"));
    }
    out
}

pub fn separable_tsv(per_label: usize, seed: u64) -> String {
    let rows: Vec<_> = separable_rows(per_label, seed)
        .into_iter()
        .map(|(id, text, l)| (id, text, Some(l)))
        .collect();
    tsv(&rows)
}

/// A corpus with exactly the given FAVOR / AGAINST / NONE counts.
pub fn counts_tsv(favor: usize, against: usize, none: usize) -> String {
    let mut rows = Vec::new();
    for (label, n) in StanceLabel::ALL.into_iter().zip([favor, against, none]) {
        for i in 0..n {
            rows.push((
                format!("{}{i}", label.as_str()),
                format!("komentář {i}"),
                Some(label),
            ));
        }
    }
    tsv(&rows)
}

pub fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

pub fn default_config(dir: &Path) -> PathBuf {
    write(dir, "pipeline.conf", &format!("topic = {TOPIC}\n"))
}

pub fn stance_bin() -> &'static str {
    env!("CARGO_BIN_EXE_stance")
}
