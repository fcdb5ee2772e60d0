use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand, ValueEnum};

use stimmung::commands::{
    cmd_augment, cmd_evaluate, cmd_field, cmd_prepare, cmd_stats, cmd_train, AugmentKind,
};
use stimmung::config::RunConfig;
use stimmung::linmodels::{TaskKind, TrainAlgo};

/// Corpus toolkit for German YouTube comments: cleaning, hate speech and
/// sentiment models, evaluation, augmentation and field-scale reports.
#[derive(Parser)]
#[command(name = "stimmung", version)]
struct Cli {
    /// Run configuration (JSON)
    #[arg(long, global = true, default_value = "stimmung.json")]
    config: PathBuf,
    /// Override the run seed from the config
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the hate decision threshold from the config
    #[arg(long, global = true)]
    threshold: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Hate,
    Sentiment,
}

impl From<TaskArg> for TaskKind {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Hate => TaskKind::Hate,
            TaskArg::Sentiment => TaskKind::Sentiment,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Lr,
    Svm,
}

impl From<AlgoArg> for TrainAlgo {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Lr => TrainAlgo::Lr,
            AlgoArg::Svm => TrainAlgo::Svm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AugmentArg {
    Backtranslate,
    Generate,
}

impl From<AugmentArg> for AugmentKind {
    fn from(k: AugmentArg) -> Self {
        match k {
            AugmentArg::Backtranslate => AugmentKind::Backtranslate,
            AugmentArg::Generate => AugmentKind::Generate,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Clean the raw comment dump and log every dropped row
    Prepare,
    /// Summarize label distributions over the cleaned, labeled corpus
    Stats,
    /// Fit a model on the stratified training split
    Train {
        /// Which label to model
        task: TaskArg,
        /// Optimizer family
        #[arg(long, value_enum, default_value_t = AlgoArg::Lr)]
        algo: AlgoArg,
        /// Sweep the svm cost parameter by cross-validation first
        #[arg(long)]
        tune: bool,
    },
    /// Score the holdout split and cross-validate the training portion
    Evaluate {
        /// Which label the artifact models
        task: TaskArg,
        /// Model artifact written by train
        model: PathBuf,
    },
    /// Score an unlabeled comment dump and aggregate by source and week
    Field {
        /// Hate model artifact
        hate_model: PathBuf,
        /// Sentiment model artifact
        sentiment_model: PathBuf,
    },
    /// Expand the corpus through back-translation or generation
    Augment {
        /// Which augmentation to run
        kind: AugmentArg,
    },
}

fn run(cli: Cli) -> stimmung::Result<()> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.override_seed(seed);
    }
    if let Some(threshold) = cli.threshold {
        cfg.override_threshold(threshold)?;
    }
    match cli.command {
        Command::Prepare => cmd_prepare(&cfg),
        Command::Stats => cmd_stats(&cfg),
        Command::Train { task, algo, tune } => cmd_train(&cfg, task.into(), algo.into(), tune),
        Command::Evaluate { task, model } => cmd_evaluate(&cfg, task.into(), &model),
        Command::Field {
            hate_model,
            sentiment_model,
        } => cmd_field(&cfg, &hate_model, &sentiment_model),
        Command::Augment { kind } => cmd_augment(&cfg, kind.into()),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        exit(err.exit_code());
    }
}
