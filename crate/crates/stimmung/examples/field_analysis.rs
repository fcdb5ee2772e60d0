//! Scores an unlabeled field corpus with freshly trained models and
//! aggregates by source channel, calendar week, and term frequency.
//!
//! Models are trained in-process here so the example is self-contained;
//! the `field` subcommand does the same against saved artifacts and
//! refuses any artifact whose pipeline fingerprint disagrees with the
//! current config.
//!
//! ```text
//! cargo run -p stimmung --example field_analysis
//! ```

use std::path::Path;

use stimmung::config::RunConfig;
use stimmung::corpus::{format_for_path, load_comments, load_labels, LabeledComment};
use stimmung::features::{fit_vocabulary, vectorize};
use stimmung::fieldscan::{
    aggregate_by_source, aggregate_weekly, apply_models, term_frequencies, weekly_to_csv,
};
use stimmung::linmodels::{
    pipeline_fingerprint, train_fingerprint, train_hate, train_sentiment, ModelArtifact, TrainAlgo,
};
use stimmung::textprep::{clean_corpus, TokenDoc};

fn main() -> stimmung::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let cfg = RunConfig::load(&root.join("data/demo/config.json"))?;
    let pipeline = cfg.pipeline_config()?;
    let seed = cfg.eval.seed;

    // Train both models on the full labeled demo corpus.
    let raw = load_comments(&cfg.paths.comments, format_for_path(&cfg.paths.comments))?;
    let (kept, _) = clean_corpus(&raw, &pipeline);
    let labeled = load_labels(&cfg.paths.labels, &kept)?;
    let tc = cfg.train_config(TrainAlgo::Lr);
    let fp = pipeline_fingerprint(&pipeline, &cfg.features);

    let build = |items: &[LabeledComment]| {
        let docs: Vec<TokenDoc> = items
            .iter()
            .map(|l| TokenDoc::from_comment(&l.comment, &pipeline))
            .collect();
        let vocab = fit_vocabulary(&docs, &cfg.features)?;
        let x: Vec<_> = docs
            .iter()
            .map(|d| vectorize(d, &vocab, &cfg.features))
            .collect();
        Ok::<_, stimmung::Error>((vocab, x))
    };

    let hate_items: Vec<_> = labeled
        .iter()
        .filter(|l| l.hate.is_some())
        .cloned()
        .collect();
    let (hate_vocab, xh) = build(&hate_items)?;
    let yh: Vec<_> = hate_items.iter().map(|l| l.hate.unwrap()).collect();
    let hate_ids: Vec<_> = hate_items.iter().map(|l| l.comment.id.clone()).collect();
    let hate_model = train_hate(&xh, &yh, &tc)?;
    let hate_art = ModelArtifact::from_hate_model(
        &hate_model,
        hate_vocab,
        &tc,
        seed,
        fp.clone(),
        train_fingerprint(&hate_ids, seed, &tc),
    );

    let sent_items: Vec<_> = labeled
        .iter()
        .filter(|l| l.sentiment.is_some())
        .cloned()
        .collect();
    let (sent_vocab, xs) = build(&sent_items)?;
    let ys: Vec<_> = sent_items.iter().map(|l| l.sentiment.unwrap()).collect();
    let sent_ids: Vec<_> = sent_items.iter().map(|l| l.comment.id.clone()).collect();
    let sent_model = train_sentiment(&xs, &ys, &tc)?;
    let sent_art = ModelArtifact::from_sentiment_model(
        &sent_model,
        sent_vocab,
        &tc,
        seed,
        fp,
        train_fingerprint(&sent_ids, seed, &tc),
    );

    // Score the field corpus. Comments without source or date are data
    // errors out here; the demo corpus has both on every row.
    let field_path = cfg
        .paths
        .field_comments
        .as_ref()
        .expect("demo config sets field_comments");
    let field = load_comments(field_path, format_for_path(field_path))?;
    let (predictions, drops) = apply_models(
        &field,
        &hate_art,
        &sent_art,
        &pipeline,
        &cfg.features,
        cfg.field.threshold,
    )?;
    println!(
        "scored {} of {} field comments ({} dropped in cleaning)",
        predictions.len(),
        field.len(),
        drops.records.len()
    );

    let by_source = aggregate_by_source(&predictions, seed);
    for (source, stats) in &by_source.per_source {
        println!(
            "{source}: n = {}, hate rate {:.4}",
            stats.n, stats.hate_rate
        );
    }

    let start = cfg.field.range_start.expect("demo config sets range_start");
    let end = cfg.field.range_end.expect("demo config sets range_end");
    let weekly = aggregate_weekly(&predictions, start, end, seed)?;
    println!(
        "weekly series: {} buckets, {} predictions outside {start}..{end}",
        weekly.buckets.len(),
        weekly.out_of_range_count
    );
    print!("{}", weekly_to_csv(&weekly));

    let terms = term_frequencies(&field, &pipeline, cfg.field.top_n, seed)?;
    println!("top terms by document fraction:");
    for t in terms.entries.iter().take(5) {
        println!("  {:<12} {:.4}", t.term, t.doc_fraction);
    }
    Ok(())
}
