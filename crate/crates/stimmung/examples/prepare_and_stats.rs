//! Cleans the demo corpus and prints the label distribution.
//!
//! The cleaning pass is the gate everything downstream sits behind:
//! duplicates, comments that normalize to nothing, and comments the
//! language filter rejects never reach labeling or training.
//!
//! ```text
//! cargo run -p stimmung --example prepare_and_stats
//! ```

use std::path::Path;

use stimmung::config::RunConfig;
use stimmung::corpus::{format_for_path, load_comments, load_labels, LabelSummary};
use stimmung::textprep::{clean_corpus, DropReason};

fn main() -> stimmung::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let cfg = RunConfig::load(&root.join("data/demo/config.json"))?;
    let pipeline = cfg.pipeline_config()?;

    let raw = load_comments(&cfg.paths.comments, format_for_path(&cfg.paths.comments))?;
    let (kept, drops) = clean_corpus(&raw, &pipeline);

    println!("loaded {} raw comments, kept {}", raw.len(), kept.len());
    for reason in [
        DropReason::Duplicate,
        DropReason::EmptyAfterCleaning,
        DropReason::Language,
    ] {
        println!("  dropped as {reason}: {}", drops.count(reason));
    }

    // Labels join against the cleaned corpus; rows for dropped ids are
    // rejected rather than silently ignored.
    let labeled = load_labels(&cfg.paths.labels, &kept)?;
    let summary = LabelSummary::compute(&labeled);

    let (hate, no_hate) = summary.hate_pct();
    let (neutral, israel, palestine) = summary.sentiment_pct();
    println!("labeled comments: {}", labeled.len());
    println!(
        "hate: {} ({hate:.2}%), no_hate: {} ({no_hate:.2}%)",
        summary.hate, summary.no_hate
    );
    println!(
        "sentiment: neutral {} ({neutral:.2}%), israel {} ({israel:.2}%), palestine {} ({palestine:.2}%)",
        summary.neutral, summary.pro_israel, summary.pro_palestine
    );
    Ok(())
}
