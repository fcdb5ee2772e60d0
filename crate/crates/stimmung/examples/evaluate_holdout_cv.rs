//! Holdout evaluation plus k-fold cross-validation for the hate task.
//!
//! The holdout vectors are built with the training vocabulary; CV refits
//! vocabulary and model per fold so no fold ever sees held-out terms.
//!
//! ```text
//! cargo run -p stimmung --example evaluate_holdout_cv
//! ```

use std::path::Path;

use stimmung::config::RunConfig;
use stimmung::corpus::{
    format_for_path, load_comments, load_labels, make_folds, stratified_split_with_policy,
    LabeledComment, StrataKey,
};
use stimmung::eval::{cross_validate, evaluate_hate, CvSpec, TaskLabels};
use stimmung::features::{fit_vocabulary, vectorize};
use stimmung::linmodels::{train_hate, TrainAlgo};
use stimmung::textprep::{clean_corpus, TokenDoc};

fn docs_of(
    items: &[LabeledComment],
    pipeline: &stimmung::textprep::PipelineConfig,
) -> Vec<TokenDoc> {
    items
        .iter()
        .map(|l| TokenDoc::from_comment(&l.comment, pipeline))
        .collect()
}

fn main() -> stimmung::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let cfg = RunConfig::load(&root.join("data/demo/config.json"))?;
    let pipeline = cfg.pipeline_config()?;
    let seed = cfg.eval.seed;

    let raw = load_comments(&cfg.paths.comments, format_for_path(&cfg.paths.comments))?;
    let (kept, _) = clean_corpus(&raw, &pipeline);
    let labeled = load_labels(&cfg.paths.labels, &kept)?;
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

    let train_items: Vec<_> = task_items
        .iter()
        .filter(|l| plan.train_ids.contains(&l.comment.id))
        .cloned()
        .collect();
    let test_items: Vec<_> = task_items
        .iter()
        .filter(|l| plan.test_ids.contains(&l.comment.id))
        .cloned()
        .collect();

    let train_docs = docs_of(&train_items, &pipeline);
    let vocabulary = fit_vocabulary(&train_docs, &cfg.features)?;
    let x_train: Vec<_> = train_docs
        .iter()
        .map(|d| vectorize(d, &vocabulary, &cfg.features))
        .collect();
    let y_train: Vec<_> = train_items.iter().map(|l| l.hate.unwrap()).collect();

    let tc = cfg.train_config(TrainAlgo::Lr);
    let model = train_hate(&x_train, &y_train, &tc)?;

    // Holdout: same vocabulary, unseen comments.
    let test_docs = docs_of(&test_items, &pipeline);
    let x_test: Vec<_> = test_docs
        .iter()
        .map(|d| vectorize(d, &vocabulary, &cfg.features))
        .collect();
    let y_test: Vec<_> = test_items.iter().map(|l| l.hate.unwrap()).collect();
    let report = evaluate_hate(&model, &x_test, &y_test, cfg.field.threshold)?;
    println!(
        "holdout: accuracy {:.4}, macro-F1 {:.4}, weighted-F1 {:.4}",
        report.accuracy, report.macro_f1, report.weighted_f1
    );
    for (class, auroc) in &report.auroc {
        println!("  auroc[{class}] = {auroc:.4}");
    }

    // CV on the training portion only; the holdout stays untouched.
    let folds = make_folds(&train_items, cfg.eval.k, StrataKey::Hate, seed)?;
    let cv = cross_validate(
        &train_docs,
        &TaskLabels::Hate(y_train),
        &folds,
        &CvSpec {
            features: cfg.features.clone(),
            train: tc,
            threshold: cfg.field.threshold,
        },
    )?;
    println!(
        "cv ({} folds): accuracy {:.4} +/- {:.4}, macro-F1 {:.4} +/- {:.4}",
        cv.k, cv.mean["accuracy"], cv.std["accuracy"], cv.mean["macro_f1"], cv.std["macro_f1"]
    );
    Ok(())
}
