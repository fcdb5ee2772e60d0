//! Sweeps the SVM cost parameter on the hate task and reports the grid.
//!
//! Each grid point is scored by stratified k-fold macro-F1 on the training
//! split; ties on the mean go to the smaller c (stronger regularization).
//!
//! ```text
//! cargo run -p stimmung --example tune_svm_c
//! ```

use std::path::Path;

use stimmung::config::RunConfig;
use stimmung::corpus::{
    format_for_path, load_comments, load_labels, stratified_split_with_policy, StrataKey,
};
use stimmung::features::{fit_vocabulary, vectorize};
use stimmung::linmodels::{default_c_grid, train_hate, tune_svm_c, TrainAlgo};
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
    let docs: Vec<TokenDoc> = train_items
        .iter()
        .map(|l| TokenDoc::from_comment(&l.comment, &pipeline))
        .collect();
    let vocabulary = fit_vocabulary(&docs, &cfg.features)?;
    let x: Vec<_> = docs
        .iter()
        .map(|d| vectorize(d, &vocabulary, &cfg.features))
        .collect();
    let y: Vec<_> = train_items.iter().map(|l| l.hate.unwrap()).collect();

    let report = tune_svm_c(&x, &y, &default_c_grid(), cfg.eval.k, seed, &cfg.svm)?;
    println!("c sweep ({}-fold, seed {seed}):", report.k);
    for entry in &report.entries {
        println!(
            "  c = {:<6} macro-F1 {:.4} +/- {:.4}",
            entry.c, entry.mean_macro_f1, entry.std_macro_f1
        );
    }
    println!("best c = {}", report.best_c);

    // Refit on the whole training split at the winning c.
    let mut tc = cfg.train_config(TrainAlgo::Svm);
    tc.svm.c = report.best_c;
    let model = train_hate(&x, &y, &tc)?;
    println!("refit at best c: converged = {}", model.converged);
    Ok(())
}
