//! Trains the binary hate classifier with logistic regression and saves a
//! model artifact.
//!
//! The artifact carries the vocabulary, both fingerprints, and the full
//! train config, so a later `evaluate` or `field` run can refuse stale
//! models instead of silently scoring with the wrong feature space.
//!
//! ```text
//! cargo run -p stimmung --example train_hate_lr
//! ```

use std::path::Path;

use stimmung::config::RunConfig;
use stimmung::corpus::{
    format_for_path, load_comments, load_labels, stratified_split_with_policy, StrataKey,
};
use stimmung::features::{fit_vocabulary, vectorize};
use stimmung::linmodels::{
    pipeline_fingerprint, predict_binary, save_artifact, train_fingerprint, train_hate,
    ModelArtifact, TrainAlgo,
};
use stimmung::textprep::{clean_corpus, TokenDoc};

fn main() -> stimmung::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let cfg = RunConfig::load(&root.join("data/demo/config.json"))?;
    let pipeline = cfg.pipeline_config()?;
    let seed = cfg.eval.seed;

    let raw = load_comments(&cfg.paths.comments, format_for_path(&cfg.paths.comments))?;
    let (kept, _) = clean_corpus(&raw, &pipeline);
    let labeled = load_labels(&cfg.paths.labels, &kept)?;

    // Only rows with a hate label take part in this task.
    let task_items: Vec<_> = labeled
        .iter()
        .filter(|l| l.hate.is_some())
        .cloned()
        .collect();
    let plan = stratified_split_with_policy(
        &task_items,
        cfg.eval.split_ratio,
        StrataKey::Hate,
        seed,
        cfg.eval.augmented_in_test,
    )?;
    println!(
        "split: {} train / {} test",
        plan.train_ids.len(),
        plan.test_ids.len()
    );

    let train_items: Vec<_> = task_items
        .iter()
        .filter(|l| plan.train_ids.contains(&l.comment.id))
        .cloned()
        .collect();
    let docs: Vec<TokenDoc> = train_items
        .iter()
        .map(|l| TokenDoc::from_comment(&l.comment, &pipeline))
        .collect();

    // Vocabulary comes from the training split alone; the holdout must not
    // contribute terms.
    let vocabulary = fit_vocabulary(&docs, &cfg.features)?;
    println!("vocabulary: {} terms", vocabulary.len());

    let x: Vec<_> = docs
        .iter()
        .map(|d| vectorize(d, &vocabulary, &cfg.features))
        .collect();
    let y: Vec<_> = train_items.iter().map(|l| l.hate.unwrap()).collect();

    let tc = cfg.train_config(TrainAlgo::Lr);
    let model = train_hate(&x, &y, &tc)?;
    let correct = x
        .iter()
        .zip(&y)
        .filter(|(xi, &yi)| {
            predict_binary(&model, xi, cfg.field.threshold).unwrap()
                == (yi == stimmung::corpus::HateLabel::Hate)
        })
        .count();
    println!(
        "converged: {}, training accuracy {:.4}",
        model.converged,
        correct as f64 / x.len() as f64
    );

    let artifact = ModelArtifact::from_hate_model(
        &model,
        vocabulary,
        &tc,
        seed,
        pipeline_fingerprint(&pipeline, &cfg.features),
        train_fingerprint(&plan.train_ids, seed, &tc),
    );
    let out = cfg.paths.out_dir.join("example_model_hate_lr.json");
    std::fs::create_dir_all(&cfg.paths.out_dir).expect("create out dir");
    save_artifact(&artifact, &out)?;
    println!("saved {}", out.display());
    Ok(())
}
