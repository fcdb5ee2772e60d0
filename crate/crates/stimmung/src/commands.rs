//! Subcommand implementations. Each one reads what it needs through the
//! run config, writes its artifacts under `paths.out_dir`, prints a short
//! human summary to stdout and leaves warnings on stderr. All outputs are
//! byte-deterministic for a fixed config and seed.

use std::fs;
use std::path::Path;

use crate::augment::{
    back_translate_corpus, generate_labeled, GenerationClient, LangPair, LiveGenerationClient,
    LiveTranslationClient, ReplayGenerationClient, ReplayStore, ReplayTranslationClient,
    TranslationClient,
};
use crate::config::RunConfig;
use crate::corpus::{
    comments_to_jsonl, format_for_path, labeled_to_jsonl, load_comments, load_labeled_jsonl,
    load_labels, make_folds, stratified_split_with_policy, Comment, HateLabel, LabelSummary,
    LabeledComment, SentimentLabel, StrataKey, FORMAT_VERSION,
};
use crate::error::{Error, Result};
use crate::eval::{
    cross_validate, cv_to_csv, evaluate_hate, evaluate_sentiment, CvSpec, EvalReport, TaskLabels,
};
use crate::features::{fit_vocabulary, vectorize, SparseVector, Vocabulary};
use crate::fieldscan::{
    aggregate_by_source, aggregate_weekly, apply_models, emit_reports, term_frequencies,
};
use crate::linmodels::{
    default_c_grid, load_artifact, pipeline_fingerprint, predict_binary, predict_ovr,
    save_artifact, train_fingerprint, train_hate, train_sentiment, tune_svm_c, tune_svm_c_ovr,
    LinearModel, ModelArtifact, OvrModel, TaskKind, TrainAlgo,
};
use crate::textprep::{clean_corpus, PipelineConfig, TokenDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentKind {
    Backtranslate,
    Generate,
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.paths.out_dir).map_err(|e| Error::io(&cfg.paths.out_dir, e))
}

fn write_string(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn write_json_pretty<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut json = serde_json::to_string_pretty(value).expect("report serializes");
    json.push('\n');
    write_string(path, &json)
}

fn meta_line(seed: u64) -> String {
    format!("# format_version={FORMAT_VERSION} seed={seed}\n")
}

fn load_raw_corpus(cfg: &RunConfig) -> Result<Vec<Comment>> {
    RunConfig::require_file(&cfg.paths.comments, "comment dump")?;
    load_comments(&cfg.paths.comments, format_for_path(&cfg.paths.comments))
}

/// Cleans the dump, joins the label file against the survivors and merges
/// any augmented JSONL files. Labels pointing at dropped or unknown
/// comments are an error, as are ids colliding across files.
fn load_labeled(cfg: &RunConfig, pipeline: &PipelineConfig) -> Result<Vec<LabeledComment>> {
    let comments = load_raw_corpus(cfg)?;
    let (kept, _) = clean_corpus(&comments, pipeline);
    RunConfig::require_file(&cfg.paths.labels, "label file")?;
    let mut labeled = load_labels(&cfg.paths.labels, &kept)?;
    let mut seen: std::collections::HashSet<String> =
        labeled.iter().map(|l| l.comment.id.clone()).collect();
    for path in &cfg.paths.augmented {
        RunConfig::require_file(path, "augmented corpus")?;
        for item in load_labeled_jsonl(path)? {
            if !seen.insert(item.comment.id.clone()) {
                return Err(Error::Data(format!(
                    "augmented id {:?} from {} collides with an existing id",
                    item.comment.id,
                    path.display()
                )));
            }
            labeled.push(item);
        }
    }
    Ok(labeled)
}

pub fn cmd_prepare(cfg: &RunConfig) -> Result<()> {
    let pipeline = cfg.pipeline_config()?;
    let comments = load_raw_corpus(cfg)?;
    let (kept, drops) = clean_corpus(&comments, &pipeline);
    ensure_out_dir(cfg)?;
    let cleaned_path = cfg.paths.out_dir.join("cleaned.jsonl");
    write_string(
        &cleaned_path,
        &(meta_line(cfg.eval.seed) + &comments_to_jsonl(&kept)),
    )?;
    let drops_path = cfg.paths.out_dir.join("drops.csv");
    write_string(&drops_path, &(meta_line(cfg.eval.seed) + &drops.to_csv()))?;
    println!(
        "kept {} of {} comments ({} duplicate, {} empty after cleaning, {} non-german)",
        kept.len(),
        comments.len(),
        drops.count(crate::textprep::DropReason::Duplicate),
        drops.count(crate::textprep::DropReason::EmptyAfterCleaning),
        drops.count(crate::textprep::DropReason::Language),
    );
    println!(
        "wrote {} and {}",
        cleaned_path.display(),
        drops_path.display()
    );
    Ok(())
}

#[derive(serde::Serialize)]
struct StatsDoc<'a> {
    format_version: u32,
    seed: u64,
    #[serde(flatten)]
    summary: &'a LabelSummary,
}

pub fn cmd_stats(cfg: &RunConfig) -> Result<()> {
    let pipeline = cfg.pipeline_config()?;
    let labeled = load_labeled(cfg, &pipeline)?;
    let summary = LabelSummary::compute(&labeled);
    ensure_out_dir(cfg)?;
    let path = cfg.paths.out_dir.join("stats.json");
    write_json_pretty(
        &path,
        &StatsDoc {
            format_version: FORMAT_VERSION,
            seed: cfg.eval.seed,
            summary: &summary,
        },
    )?;
    let (hate_pct, no_hate_pct) = summary.hate_pct();
    let (neu, isr, pal) = summary.sentiment_pct();
    println!("labeled comments: {}", summary.total);
    println!(
        "hate task: {} labeled, {} hate ({hate_pct}%), {} no_hate ({no_hate_pct}%)",
        summary.hate_labeled, summary.hate, summary.no_hate
    );
    println!(
        "sentiment task: {} labeled, {} neutral ({neu}%), {} israel ({isr}%), {} palestine ({pal}%)",
        summary.sentiment_labeled, summary.neutral, summary.pro_israel, summary.pro_palestine
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn filter_task(labeled: &[LabeledComment], task: TaskKind) -> Vec<LabeledComment> {
    labeled
        .iter()
        .filter(|l| match task {
            TaskKind::Hate => l.hate.is_some(),
            TaskKind::Sentiment => l.sentiment.is_some(),
        })
        .cloned()
        .collect()
}

fn strata_key(task: TaskKind) -> StrataKey {
    match task {
        TaskKind::Hate => StrataKey::Hate,
        TaskKind::Sentiment => StrataKey::Sentiment,
    }
}

fn docs_for<'a>(
    items: impl Iterator<Item = &'a LabeledComment>,
    pipeline: &PipelineConfig,
) -> Vec<TokenDoc> {
    items
        .map(|l| TokenDoc::from_comment(&l.comment, pipeline))
        .collect()
}

fn select<'a>(items: &'a [LabeledComment], ids: &[String]) -> Result<Vec<&'a LabeledComment>> {
    let by_id: std::collections::HashMap<&str, &LabeledComment> =
        items.iter().map(|l| (l.comment.id.as_str(), l)).collect();
    ids.iter()
        .map(|id| {
            by_id
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::Data(format!("split id {id:?} not in the labeled corpus")))
        })
        .collect()
}

fn binary_accuracy(
    model: &LinearModel,
    x: &[SparseVector],
    y: &[HateLabel],
    threshold: f64,
) -> Result<f64> {
    let mut correct = 0usize;
    for (xi, yi) in x.iter().zip(y) {
        let hate = predict_binary(model, xi, threshold)?;
        if hate == (*yi == HateLabel::Hate) {
            correct += 1;
        }
    }
    Ok(correct as f64 / x.len() as f64)
}

fn ovr_accuracy(model: &OvrModel, x: &[SparseVector], y: &[SentimentLabel]) -> Result<f64> {
    let mut correct = 0usize;
    for (xi, yi) in x.iter().zip(y) {
        if predict_ovr(model, xi)? == *yi {
            correct += 1;
        }
    }
    Ok(correct as f64 / x.len() as f64)
}

pub fn cmd_train(cfg: &RunConfig, task: TaskKind, algo: TrainAlgo, tune: bool) -> Result<()> {
    if tune && algo != TrainAlgo::Svm {
        return Err(Error::Config(
            "--tune sweeps the svm cost parameter; it has no effect for lr".to_string(),
        ));
    }
    let pipeline = cfg.pipeline_config()?;
    let labeled = load_labeled(cfg, &pipeline)?;
    let items = filter_task(&labeled, task);
    if items.is_empty() {
        return Err(Error::Data(format!(
            "no comments carry a {} label",
            task.name()
        )));
    }
    let seed = cfg.eval.seed;
    let plan = stratified_split_with_policy(
        &items,
        cfg.eval.split_ratio,
        strata_key(task),
        seed,
        cfg.eval.augmented_in_test,
    )?;
    ensure_out_dir(cfg)?;
    let plan_path = cfg
        .paths
        .out_dir
        .join(format!("split_{}.json", task.name()));
    write_json_pretty(&plan_path, &plan)?;

    let train_items = select(&items, &plan.train_ids)?;
    let train_docs = docs_for(train_items.iter().copied(), &pipeline);
    let vocabulary = fit_vocabulary(&train_docs, &cfg.features)?;
    let x_train: Vec<SparseVector> = train_docs
        .iter()
        .map(|d| vectorize(d, &vocabulary, &cfg.features))
        .collect();

    let mut tc = cfg.train_config(algo);
    if tune {
        let grid = default_c_grid();
        let report = match task {
            TaskKind::Hate => {
                let y: Vec<HateLabel> = train_items.iter().map(|l| l.hate.unwrap()).collect();
                tune_svm_c(&x_train, &y, &grid, cfg.eval.k, seed, &tc.svm)?
            }
            TaskKind::Sentiment => {
                let y: Vec<SentimentLabel> =
                    train_items.iter().map(|l| l.sentiment.unwrap()).collect();
                tune_svm_c_ovr(&x_train, &y, &grid, cfg.eval.k, seed, &tc.svm)?
            }
        };
        let sweep_path = cfg
            .paths
            .out_dir
            .join(format!("c_sweep_{}.json", task.name()));
        write_json_pretty(&sweep_path, &report)?;
        println!(
            "c sweep over {:?}: best c = {} (mean macro-F1 {:.4})",
            grid,
            report.best_c,
            report
                .entries
                .iter()
                .find(|e| e.c == report.best_c)
                .map(|e| e.mean_macro_f1)
                .unwrap_or(f64::NAN)
        );
        tc.svm.c = report.best_c;
    }

    let pipeline_fp = pipeline_fingerprint(&pipeline, &cfg.features);
    let train_fp = train_fingerprint(&plan.train_ids, seed, &tc);
    let (artifact, training_accuracy) = match task {
        TaskKind::Hate => {
            let y: Vec<HateLabel> = train_items.iter().map(|l| l.hate.unwrap()).collect();
            let model = train_hate(&x_train, &y, &tc)?;
            let acc = binary_accuracy(&model, &x_train, &y, cfg.field.threshold)?;
            (
                ModelArtifact::from_hate_model(
                    &model,
                    vocabulary,
                    &tc,
                    seed,
                    pipeline_fp,
                    train_fp,
                ),
                acc,
            )
        }
        TaskKind::Sentiment => {
            let y: Vec<SentimentLabel> = train_items.iter().map(|l| l.sentiment.unwrap()).collect();
            let model = train_sentiment(&x_train, &y, &tc)?;
            let acc = ovr_accuracy(&model, &x_train, &y)?;
            (
                ModelArtifact::from_sentiment_model(
                    &model,
                    vocabulary,
                    &tc,
                    seed,
                    pipeline_fp,
                    train_fp,
                ),
                acc,
            )
        }
    };
    let model_path = cfg
        .paths
        .out_dir
        .join(format!("model_{}_{}.json", task.name(), algo.name()));
    save_artifact(&artifact, &model_path)?;
    if !artifact.converged {
        eprintln!("warning: optimizer hit its iteration cap before reaching tolerance");
    }
    println!(
        "trained {} {} on {} comments, vocabulary {} terms",
        task.name(),
        algo.name(),
        plan.train_ids.len(),
        artifact.vocabulary.len()
    );
    println!("converged: {}", artifact.converged);
    println!("training accuracy: {training_accuracy:.4}");
    println!("wrote {} and {}", model_path.display(), plan_path.display());
    Ok(())
}

fn vectorize_items(
    items: &[&LabeledComment],
    pipeline: &PipelineConfig,
    vocabulary: &Vocabulary,
    features: &crate::features::FeatureConfig,
) -> Vec<SparseVector> {
    items
        .iter()
        .map(|l| {
            let doc = TokenDoc::from_comment(&l.comment, pipeline);
            vectorize(&doc, vocabulary, features)
        })
        .collect()
}

pub fn cmd_evaluate(cfg: &RunConfig, task: TaskKind, model_path: &Path) -> Result<()> {
    RunConfig::require_file(model_path, "model artifact")?;
    let artifact = load_artifact(model_path)?;
    if artifact.task != task {
        return Err(Error::Data(format!(
            "artifact at {} is a {} model, asked to evaluate {}",
            model_path.display(),
            artifact.task.name(),
            task.name()
        )));
    }
    let pipeline = cfg.pipeline_config()?;
    let features = artifact.train_config.features.clone();
    let expected_fp = pipeline_fingerprint(&pipeline, &features);
    if artifact.pipeline_fingerprint != expected_fp {
        // deliberate downgrade from the configuration exit code: an
        // artifact that no longer matches the corpus setup is stale data
        return Err(Error::Data(format!(
            "pipeline fingerprint mismatch: model was trained under {} but this config yields {expected_fp}",
            artifact.pipeline_fingerprint
        )));
    }

    let labeled = load_labeled(cfg, &pipeline)?;
    let items = filter_task(&labeled, task);
    let seed = cfg.eval.seed;
    let plan = stratified_split_with_policy(
        &items,
        cfg.eval.split_ratio,
        strata_key(task),
        seed,
        cfg.eval.augmented_in_test,
    )?;
    let expected_train_fp = train_fingerprint(&plan.train_ids, seed, &artifact.train_config);
    if artifact.train_fingerprint != expected_train_fp {
        return Err(Error::Data(
            "train fingerprint mismatch: corpus, seed or train config changed since this model was fit"
                .to_string(),
        ));
    }

    let train_items = select(&items, &plan.train_ids)?;
    let test_items = select(&items, &plan.test_ids)?;
    let x_train = vectorize_items(&train_items, &pipeline, &artifact.vocabulary, &features);
    let x_test = vectorize_items(&test_items, &pipeline, &artifact.vocabulary, &features);

    let mut report: EvalReport = match task {
        TaskKind::Hate => {
            let model = artifact.hate_model()?;
            let y_test: Vec<HateLabel> = test_items.iter().map(|l| l.hate.unwrap()).collect();
            let y_train: Vec<HateLabel> = train_items.iter().map(|l| l.hate.unwrap()).collect();
            let mut r = evaluate_hate(&model, &x_test, &y_test, cfg.field.threshold)?;
            r.training_accuracy = Some(binary_accuracy(
                &model,
                &x_train,
                &y_train,
                cfg.field.threshold,
            )?);
            r
        }
        TaskKind::Sentiment => {
            let model = artifact.sentiment_model()?;
            let y_test: Vec<SentimentLabel> =
                test_items.iter().map(|l| l.sentiment.unwrap()).collect();
            let y_train: Vec<SentimentLabel> =
                train_items.iter().map(|l| l.sentiment.unwrap()).collect();
            let mut r = evaluate_sentiment(&model, &x_test, &y_test)?;
            r.training_accuracy = Some(ovr_accuracy(&model, &x_train, &y_train)?);
            r
        }
    };
    report.seed = seed;

    // k-fold CV runs on the training portion only; the holdout stays out
    let train_owned: Vec<LabeledComment> = train_items.iter().map(|&l| l.clone()).collect();
    let fold_plan = make_folds(&train_owned, cfg.eval.k, strata_key(task), seed)?;
    let cv_docs = docs_for(train_owned.iter(), &pipeline);
    let cv_labels = match task {
        TaskKind::Hate => TaskLabels::Hate(train_owned.iter().map(|l| l.hate.unwrap()).collect()),
        TaskKind::Sentiment => {
            TaskLabels::Sentiment(train_owned.iter().map(|l| l.sentiment.unwrap()).collect())
        }
    };
    let cv_spec = CvSpec {
        features: features.clone(),
        train: artifact.train_config.clone(),
        threshold: cfg.field.threshold,
    };
    let cv = cross_validate(&cv_docs, &cv_labels, &fold_plan, &cv_spec)?;

    ensure_out_dir(cfg)?;
    let eval_path = cfg.paths.out_dir.join("eval.json");
    write_json_pretty(&eval_path, &report)?;
    let cv_path = cfg.paths.out_dir.join("cv.csv");
    write_string(&cv_path, &cv_to_csv(&cv))?;

    println!(
        "holdout: accuracy {:.4}, macro-F1 {:.4}, weighted-F1 {:.4} over {} comments",
        report.accuracy,
        report.macro_f1,
        report.weighted_f1,
        plan.test_ids.len()
    );
    for (class, auc) in &report.auroc {
        println!("auroc[{class}] = {auc:.4}");
    }
    println!(
        "cv ({} folds): accuracy {:.4} +/- {:.4}, macro-F1 {:.4} +/- {:.4}",
        cv.k, cv.mean["accuracy"], cv.std["accuracy"], cv.mean["macro_f1"], cv.std["macro_f1"]
    );
    if let Some(acc) = report.training_accuracy {
        println!("training accuracy: {acc:.4}");
    }
    if !report.converged {
        eprintln!("warning: model had not converged when it was saved");
    }
    println!("wrote {} and {}", eval_path.display(), cv_path.display());
    Ok(())
}

pub fn cmd_field(cfg: &RunConfig, hate_model: &Path, sentiment_model: &Path) -> Result<()> {
    let pipeline = cfg.pipeline_config()?;
    let field_path = cfg
        .paths
        .field_comments
        .as_ref()
        .ok_or(Error::Config("paths.field_comments is not set".to_string()))?;
    RunConfig::require_file(field_path, "field comment dump")?;
    RunConfig::require_file(hate_model, "hate model artifact")?;
    RunConfig::require_file(sentiment_model, "sentiment model artifact")?;
    let hate_art = load_artifact(hate_model)?;
    let sent_art = load_artifact(sentiment_model)?;
    let comments = load_comments(field_path, format_for_path(field_path))?;

    let (range_start, range_end) = match (cfg.field.range_start, cfg.field.range_end) {
        (Some(s), Some(e)) => (s, e),
        _ => {
            return Err(Error::Config(
                "field.range_start and field.range_end must be set".to_string(),
            ))
        }
    };

    let (predictions, drops) = apply_models(
        &comments,
        &hate_art,
        &sent_art,
        &pipeline,
        &cfg.features,
        cfg.field.threshold,
    )?;
    let seed = cfg.eval.seed;
    let breakdown = aggregate_by_source(&predictions, seed);
    let weekly = aggregate_weekly(&predictions, range_start, range_end, seed)?;
    let terms = term_frequencies(&comments, &pipeline, cfg.field.top_n, seed)?;

    ensure_out_dir(cfg)?;
    let paths = emit_reports(&cfg.paths.out_dir, &breakdown, &weekly, &terms)?;
    let drops_path = cfg.paths.out_dir.join("field_drops.csv");
    write_string(&drops_path, &(meta_line(seed) + &drops.to_csv()))?;

    if weekly.out_of_range_count > 0 {
        eprintln!(
            "out of range: {} prediction(s) dated outside {range_start}..{range_end}",
            weekly.out_of_range_count
        );
    }
    println!(
        "scored {} comments ({} dropped in cleaning)",
        predictions.len(),
        drops.records.len()
    );
    for (source, stats) in &breakdown.per_source {
        println!(
            "{source}: n = {}, hate rate {:.4}, shares neutral {:.4} / israel {:.4} / palestine {:.4}",
            stats.n,
            stats.hate_rate,
            stats.sentiment_shares["neutral"],
            stats.sentiment_shares["israel"],
            stats.sentiment_shares["palestine"]
        );
    }
    for p in paths {
        println!("wrote {}", p.display());
    }
    println!("wrote {}", drops_path.display());
    Ok(())
}

fn load_hate_suite(path: &Path) -> Result<Vec<(String, HateLabel)>> {
    let mut reader = csv::ReaderBuilder::new()
        .from_path(path)
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let text_idx = headers
        .iter()
        .position(|h| h == "text")
        .ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "suite csv needs a text column".to_string(),
        })?;
    let hate_idx = headers
        .iter()
        .position(|h| h == "hate")
        .ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "suite csv needs a hate column".to_string(),
        })?;
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
        let text = record.get(text_idx).unwrap_or("").to_string();
        let label = match record.get(hate_idx).unwrap_or("") {
            "1" => HateLabel::Hate,
            "0" => HateLabel::NoHate,
            other => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("hate column must be 0 or 1, got {other:?}"),
                })
            }
        };
        if text.is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "empty text".to_string(),
            });
        }
        out.push((text, label));
    }
    Ok(out)
}

pub fn cmd_augment(cfg: &RunConfig, kind: AugmentKind) -> Result<()> {
    let pipeline = cfg.pipeline_config()?;
    // replay when a store is configured and present, otherwise live (which
    // needs credentials in the environment)
    let store: Option<ReplayStore> = match &cfg.paths.replay_store {
        Some(p) if p.exists() => Some(ReplayStore::load(p)?),
        _ => None,
    };
    ensure_out_dir(cfg)?;
    match kind {
        AugmentKind::Backtranslate => {
            let suite_path = cfg
                .paths
                .hate_suite
                .as_ref()
                .ok_or(Error::Config("paths.hate_suite is not set".to_string()))?;
            RunConfig::require_file(suite_path, "hate suite csv")?;
            let items = load_hate_suite(suite_path)?;
            let live;
            let replay;
            let client: &dyn TranslationClient = match &store {
                Some(s) => {
                    replay = ReplayTranslationClient::new(s);
                    &replay
                }
                None => {
                    live = LiveTranslationClient::from_env()?;
                    &live
                }
            };
            let pivot = LangPair {
                source: cfg.augment.source_lang.clone(),
                target: cfg.augment.target_lang.clone(),
            };
            let out = back_translate_corpus(&items, &pivot, cfg.augment.round_trip, client)?;
            let out_path = cfg.paths.out_dir.join("augmented_backtranslate.jsonl");
            write_string(
                &out_path,
                &(meta_line(cfg.eval.seed) + &labeled_to_jsonl(&out)),
            )?;
            println!(
                "back-translated {} suite items ({} -> {})",
                out.len(),
                pivot.source,
                pivot.target
            );
            println!("wrote {}", out_path.display());
        }
        AugmentKind::Generate => {
            if cfg.augment.generate.is_empty() {
                return Err(Error::Config(
                    "augment.generate lists no generation specs".to_string(),
                ));
            }
            let live;
            let replay;
            let client: &dyn GenerationClient = match &store {
                Some(s) => {
                    replay = ReplayGenerationClient::new(s);
                    &replay
                }
                None => {
                    live = LiveGenerationClient::from_env()?;
                    &live
                }
            };
            let mut all = Vec::new();
            for spec in &cfg.augment.generate {
                let batch = generate_labeled(spec, client, &pipeline, all.len())?;
                all.extend(batch);
            }
            let out_path = cfg.paths.out_dir.join("augmented_generate.jsonl");
            write_string(
                &out_path,
                &(meta_line(cfg.eval.seed) + &labeled_to_jsonl(&all)),
            )?;
            println!("generated {} labeled comments", all.len());
            println!("wrote {}", out_path.display());
        }
    }
    Ok(())
}
