//! Trains the ternary sentiment model (one-vs-rest) and prints per-class
//! AUROC on the holdout.
//!
//! Three binary classifiers share one vocabulary; prediction is the argmax
//! of their decision scores in fixed class order.
//!
//! ```text
//! cargo run -p stimmung --example sentiment_ovr
//! ```

use std::path::Path;

use stimmung::config::RunConfig;
use stimmung::corpus::{
    format_for_path, load_comments, load_labels, stratified_split_with_policy, StrataKey,
};
use stimmung::eval::evaluate_sentiment;
use stimmung::features::{fit_vocabulary, vectorize};
use stimmung::linmodels::{predict_ovr, train_sentiment, TrainAlgo};
use stimmung::textprep::{clean_corpus, TokenDoc};

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
        .filter(|l| l.sentiment.is_some())
        .cloned()
        .collect();
    let plan = stratified_split_with_policy(
        &task_items,
        cfg.eval.split_ratio,
        StrataKey::Sentiment,
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

    let train_docs: Vec<TokenDoc> = train_items
        .iter()
        .map(|l| TokenDoc::from_comment(&l.comment, &pipeline))
        .collect();
    let vocabulary = fit_vocabulary(&train_docs, &cfg.features)?;
    let x_train: Vec<_> = train_docs
        .iter()
        .map(|d| vectorize(d, &vocabulary, &cfg.features))
        .collect();
    let y_train: Vec<_> = train_items.iter().map(|l| l.sentiment.unwrap()).collect();

    let model = train_sentiment(&x_train, &y_train, &cfg.train_config(TrainAlgo::Lr))?;
    println!("all components converged: {}", model.converged());

    let x_test: Vec<_> = test_items
        .iter()
        .map(|l| {
            let d = TokenDoc::from_comment(&l.comment, &pipeline);
            vectorize(&d, &vocabulary, &cfg.features)
        })
        .collect();
    let y_test: Vec<_> = test_items.iter().map(|l| l.sentiment.unwrap()).collect();
    let report = evaluate_sentiment(&model, &x_test, &y_test)?;

    println!(
        "holdout: accuracy {:.4}, macro-F1 {:.4}",
        report.accuracy, report.macro_f1
    );
    // Per-class AUROC treats each class as positive against the rest.
    for (class, auroc) in &report.auroc {
        println!("  auroc[{class}] = {auroc:.4}");
    }

    // Spot check one holdout comment end to end.
    if let Some(item) = test_items.first() {
        let predicted = predict_ovr(&model, &x_test[0])?;
        println!(
            "example: {:?} -> predicted {}, labeled {}",
            item.comment.raw_text,
            predicted.name(),
            item.sentiment.unwrap().name()
        );
    }
    Ok(())
}
