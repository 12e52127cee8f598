use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use stance_cli::{cmd_crossval, cmd_predict, cmd_stats, cmd_train, OutputFormat, PipelineConfig};

#[derive(Parser)]
#[command(
    name = "stance",
    version,
    about = "Stance detection toward a named target"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the feature space and classifier on a labeled corpus.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Model output file.
        #[arg(long)]
        model: PathBuf,
        /// Feature space output file [default: <model>.space]
        #[arg(long)]
        space: Option<PathBuf>,
        /// Write the training summary here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label every comment of a corpus with a trained model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Feature space file [default: <model>.space]
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratified k-fold cross-validation on a labeled corpus.
    Crossval {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Overrides cv_folds from the config.
        #[arg(long)]
        folds: Option<usize>,
        /// Overrides cv_seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-label comment counts.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn sidecar(model: &Path) -> PathBuf {
    let mut p = model.as_os_str().to_owned();
    p.push(".space");
    PathBuf::from(p)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train {
            corpus,
            config,
            model,
            space,
            out,
        } => {
            let config = PipelineConfig::load(&config)?;
            let space = space.unwrap_or_else(|| sidecar(&model));
            let mut out = output(out.as_deref())?;
            cmd_train(&corpus, &config, &model, &space, &mut out)?;
            out.flush()?;
        }
        Command::Predict {
            model,
            space,
            corpus,
            out,
        } => {
            let space = space.unwrap_or_else(|| sidecar(&model));
            let mut out = output(out.as_deref())?;
            cmd_predict(&model, &space, &corpus, &mut out)?;
            out.flush()?;
        }
        Command::Crossval {
            corpus,
            config,
            folds,
            seed,
            format,
            out,
        } => {
            let mut config = PipelineConfig::load(&config)?;
            if let Some(k) = folds {
                config.cv_folds = k;
            }
            if let Some(s) = seed {
                config.cv_seed = s;
            }
            config.validate()?;
            let mut out = output(out.as_deref())?;
            cmd_crossval(&corpus, &config, format, &mut out)?;
            out.flush()?;
        }
        Command::Stats {
            corpus,
            format,
            out,
        } => {
            let mut out = output(out.as_deref())?;
            cmd_stats(&corpus, format, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
