//! Replays recorded translation and generation responses to build
//! augmentation data without touching the network.
//!
//! Requests are canonicalized and hashed; the store maps each hash to the
//! recorded response. A request with no recorded response is an error
//! naming the missing hash, never a silent fallback to a live call.
//!
//! ```text
//! cargo run -p stimmung --example augment_replay
//! ```

use std::path::Path;

use stimmung::augment::{
    back_translate_corpus, generate_labeled, LangPair, ReplayGenerationClient, ReplayStore,
    ReplayTranslationClient,
};
use stimmung::config::RunConfig;
use stimmung::corpus::HateLabel;

fn main() -> stimmung::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let cfg = RunConfig::load(&root.join("data/demo/config.json"))?;
    let pipeline = cfg.pipeline_config()?;

    let store_path = cfg
        .paths
        .replay_store
        .as_ref()
        .expect("demo config sets replay_store");
    let store = ReplayStore::load(store_path)?;
    println!("replay store: {} recorded responses", store.len());

    // Back-translate the English hate suite into German training rows.
    let suite_path = cfg
        .paths
        .hate_suite
        .as_ref()
        .expect("demo config sets hate_suite");
    let suite = load_suite(suite_path)?;
    let pivot = LangPair {
        source: cfg.augment.source_lang.clone(),
        target: cfg.augment.target_lang.clone(),
    };
    let client = ReplayTranslationClient::new(&store);
    let translated = back_translate_corpus(&suite, &pivot, cfg.augment.round_trip, &client)?;
    println!("back-translated {} suite items", translated.len());
    for item in translated.iter().take(3) {
        println!(
            "  [{}] {}",
            item.hate.unwrap().name(),
            item.comment.raw_text
        );
    }

    // Generate stance-labeled comments from the configured templates.
    let gen_client = ReplayGenerationClient::new(&store);
    let mut generated = Vec::new();
    for spec in &cfg.augment.generate {
        let batch = generate_labeled(spec, &gen_client, &pipeline, generated.len())?;
        generated.extend(batch);
    }
    println!("generated {} labeled comments", generated.len());
    for item in generated.iter().take(3) {
        println!(
            "  [{}] {}",
            item.sentiment.unwrap().name(),
            item.comment.raw_text
        );
    }
    Ok(())
}

// Minimal CSV reader for the two-column suite file; the CLI uses the same
// column contract (text,hate by header).
fn load_suite(path: &Path) -> stimmung::Result<Vec<(String, HateLabel)>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| stimmung::Error::Data(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| stimmung::Error::Data(format!("{}: {e}", path.display())))?;
        let text = row.get(0).unwrap_or("").to_string();
        let label = match row.get(1) {
            Some("1") => HateLabel::Hate,
            _ => HateLabel::NoHate,
        };
        out.push((text, label));
    }
    Ok(out)
}
