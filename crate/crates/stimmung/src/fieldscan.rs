//! Field-scale analysis: runs the trained hate and stance models over an
//! unlabeled comment dump and aggregates predictions by channel type, by
//! week and by term document-frequency. Aggregations are exact ratios and
//! every emitted file is byte-deterministic for a given input and seed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::corpus::{Comment, HateLabel, SentimentLabel, Source, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::features::{vectorize, FeatureConfig};
use crate::linmodels::{
    decision_score, ovr_scores, pipeline_fingerprint, predict_binary, predict_ovr, ModelArtifact,
    TaskKind, TrainAlgo,
};
use crate::textprep::{clean_corpus, DropReport, PipelineConfig, TokenDoc};

/// Model output for one surviving comment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub comment_id: String,
    pub source: Source,
    pub published_at: NaiveDate,
    pub hate_score: f64,
    /// Calibrated probability; absent for SVM models.
    pub hate_prob: Option<f64>,
    pub hate_label: HateLabel,
    /// Per-class decision scores in fixed class order.
    pub sentiment_scores: Vec<f64>,
    pub sentiment_label: SentimentLabel,
}

fn check_artifact(
    artifact: &ModelArtifact,
    expected_task: TaskKind,
    expected_fp: &str,
) -> Result<()> {
    artifact.validate()?;
    if artifact.task != expected_task {
        return Err(Error::Data(format!(
            "expected a {} model, artifact holds {}",
            expected_task.name(),
            artifact.task.name()
        )));
    }
    if artifact.pipeline_fingerprint != expected_fp {
        return Err(Error::PipelineMismatch {
            expected: expected_fp.to_string(),
            found: artifact.pipeline_fingerprint.clone(),
        });
    }
    Ok(())
}

/// Cleans the dump and scores every survivor with both models. The models
/// must have been trained under the exact pipeline and feature config in
/// force here; a fingerprint mismatch is a configuration error.
pub fn apply_models(
    comments: &[Comment],
    hate: &ModelArtifact,
    sentiment: &ModelArtifact,
    pipeline: &PipelineConfig,
    features: &FeatureConfig,
    threshold: f64,
) -> Result<(Vec<Prediction>, DropReport)> {
    let expected_fp = pipeline_fingerprint(pipeline, features);
    check_artifact(hate, TaskKind::Hate, &expected_fp)?;
    check_artifact(sentiment, TaskKind::Sentiment, &expected_fp)?;
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::Parameter(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    let hate_model = hate.hate_model()?;
    let sent_model = sentiment.sentiment_model()?;

    let (kept, drops) = clean_corpus(comments, pipeline);
    let mut predictions = Vec::with_capacity(kept.len());
    for comment in &kept {
        let source = comment.source.ok_or_else(|| {
            Error::Data(format!("comment {:?} has no source channel", comment.id))
        })?;
        let published_at = comment.published_at.ok_or_else(|| {
            Error::Data(format!("comment {:?} has no publication date", comment.id))
        })?;
        let doc = TokenDoc::from_comment(comment, pipeline);

        let xh = vectorize(&doc, &hate.vocabulary, features);
        let hate_score = decision_score(&hate_model, &xh)?;
        let hate_prob = match hate_model.algo {
            TrainAlgo::Lr => Some(crate::linmodels::sigmoid(hate_score)),
            TrainAlgo::Svm => None,
        };
        let hate_label = if predict_binary(&hate_model, &xh, threshold)? {
            HateLabel::Hate
        } else {
            HateLabel::NoHate
        };

        let xs = vectorize(&doc, &sentiment.vocabulary, features);
        let sentiment_scores = ovr_scores(&sent_model, &xs)?;
        let sentiment_label = predict_ovr(&sent_model, &xs)?;

        predictions.push(Prediction {
            comment_id: comment.id.clone(),
            source,
            published_at,
            hate_score,
            hate_prob,
            hate_label,
            sentiment_scores,
            sentiment_label,
        });
    }
    Ok((predictions, drops))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceStats {
    pub n: u64,
    pub hate_rate: f64,
    /// Defined as 1 - hate_rate, so the pair always sums to exactly 1.
    pub no_hate_rate: f64,
    pub sentiment_shares: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceBreakdown {
    pub format_version: u32,
    pub seed: u64,
    pub per_source: BTreeMap<String, SourceStats>,
    /// Channel types with zero surviving predictions, noted rather than
    /// reported as 0/0.
    pub omitted_sources: Vec<String>,
}

/// Exact per-channel-type hate and stance ratios.
pub fn aggregate_by_source(predictions: &[Prediction], seed: u64) -> SourceBreakdown {
    let mut per_source = BTreeMap::new();
    let mut omitted = Vec::new();
    for source in Source::ALL {
        let subset: Vec<&Prediction> = predictions.iter().filter(|p| p.source == source).collect();
        if subset.is_empty() {
            omitted.push(source.name().to_string());
            continue;
        }
        let n = subset.len() as u64;
        let hate = subset
            .iter()
            .filter(|p| p.hate_label == HateLabel::Hate)
            .count() as f64;
        let hate_rate = hate / n as f64;
        let mut shares = BTreeMap::new();
        for class in SentimentLabel::ALL {
            let count = subset.iter().filter(|p| p.sentiment_label == class).count() as f64;
            shares.insert(class.name().to_string(), count / n as f64);
        }
        per_source.insert(
            source.name().to_string(),
            SourceStats {
                n,
                hate_rate,
                no_hate_rate: 1.0 - hate_rate,
                sentiment_shares: shares,
            },
        );
    }
    SourceBreakdown {
        format_version: FORMAT_VERSION,
        seed,
        per_source,
        omitted_sources: omitted,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub n: u64,
    pub hate_rate: f64,
    pub neutral_share: f64,
    pub israel_share: f64,
    pub palestine_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekBucket {
    pub index: usize,
    pub start: NaiveDate,
    /// Inclusive; the final bucket absorbs the remainder days up to the
    /// range end.
    pub end: NaiveDate,
    /// Only channel types with at least one prediction appear; empty cells
    /// are absent, not zero.
    pub cells: BTreeMap<String, CellStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeeklySeries {
    pub format_version: u32,
    pub seed: u64,
    pub range_start: NaiveDate,
    pub range_end: NaiveDate,
    pub bucket_days: u32,
    pub buckets: Vec<WeekBucket>,
    pub out_of_range_count: u64,
    pub out_of_range_ids: Vec<String>,
}

/// Seven-day buckets anchored at `range_start` (not calendar weeks); the
/// remainder after the last full week is merged into the final bucket.
/// Out-of-range predictions are excluded and reported.
pub fn aggregate_weekly(
    predictions: &[Prediction],
    range_start: NaiveDate,
    range_end: NaiveDate,
    seed: u64,
) -> Result<WeeklySeries> {
    if range_start > range_end {
        return Err(Error::Parameter(format!(
            "range start {range_start} is after range end {range_end}"
        )));
    }
    let total_days = (range_end - range_start).num_days() + 1;
    let n_buckets = ((total_days / 7).max(1)) as usize;

    let mut in_bucket: Vec<Vec<&Prediction>> = vec![Vec::new(); n_buckets];
    let mut out_ids = Vec::new();
    for p in predictions {
        if p.published_at < range_start || p.published_at > range_end {
            out_ids.push(p.comment_id.clone());
            continue;
        }
        let offset = (p.published_at - range_start).num_days() as usize;
        let idx = (offset / 7).min(n_buckets - 1);
        in_bucket[idx].push(p);
    }
    out_ids.sort();

    let mut buckets = Vec::with_capacity(n_buckets);
    for (index, members) in in_bucket.iter().enumerate() {
        let start = range_start + chrono::Days::new(7 * index as u64);
        let end = if index + 1 == n_buckets {
            range_end
        } else {
            start + chrono::Days::new(6)
        };
        let mut cells = BTreeMap::new();
        for source in Source::ALL {
            let subset: Vec<&&Prediction> = members.iter().filter(|p| p.source == source).collect();
            if subset.is_empty() {
                continue;
            }
            let n = subset.len() as u64;
            let nf = n as f64;
            let hate = subset
                .iter()
                .filter(|p| p.hate_label == HateLabel::Hate)
                .count() as f64;
            let share = |class: SentimentLabel| {
                subset.iter().filter(|p| p.sentiment_label == class).count() as f64 / nf
            };
            cells.insert(
                source.name().to_string(),
                CellStats {
                    n,
                    hate_rate: hate / nf,
                    neutral_share: share(SentimentLabel::Neutral),
                    israel_share: share(SentimentLabel::ProIsrael),
                    palestine_share: share(SentimentLabel::ProPalestine),
                },
            );
        }
        buckets.push(WeekBucket {
            index,
            start,
            end,
            cells,
        });
    }
    Ok(WeeklySeries {
        format_version: FORMAT_VERSION,
        seed,
        range_start,
        range_end,
        bucket_days: 7,
        buckets,
        out_of_range_count: out_ids.len() as u64,
        out_of_range_ids: out_ids,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermFreq {
    pub term: String,
    /// Fraction of cleaned comments whose token set contains the term.
    pub doc_fraction: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermFreqTable {
    pub format_version: u32,
    pub seed: u64,
    pub n_docs: u64,
    pub entries: Vec<TermFreq>,
}

/// Document-frequency table over the cleaned corpus, descending by
/// fraction with lexicographic tie-break. A term repeated inside one
/// comment still counts that comment once.
pub fn term_frequencies(
    comments: &[Comment],
    pipeline: &PipelineConfig,
    top_n: usize,
    seed: u64,
) -> Result<TermFreqTable> {
    if top_n == 0 {
        return Err(Error::Parameter("top_n must be at least 1".to_string()));
    }
    let (kept, _) = clean_corpus(comments, pipeline);
    if kept.is_empty() {
        return Err(Error::Data(
            "no comments survive cleaning; term table is undefined".to_string(),
        ));
    }
    let mut df: BTreeMap<String, u64> = BTreeMap::new();
    for comment in &kept {
        let doc = TokenDoc::from_comment(comment, pipeline);
        let distinct: std::collections::BTreeSet<&String> = doc.tokens.iter().collect();
        for term in distinct {
            *df.entry(term.clone()).or_insert(0) += 1;
        }
    }
    let n_docs = kept.len() as u64;
    let mut ranked: Vec<(String, u64)> = df.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(top_n);
    let entries = ranked
        .into_iter()
        .enumerate()
        .map(|(i, (term, count))| TermFreq {
            term,
            doc_fraction: count as f64 / n_docs as f64,
            rank: i + 1,
        })
        .collect();
    Ok(TermFreqTable {
        format_version: FORMAT_VERSION,
        seed,
        n_docs,
        entries,
    })
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

/// Renders the weekly series as CSV. Every bucket gets one row per channel
/// type that appears anywhere in the series; cells without data keep n = 0
/// and empty rate fields.
pub fn weekly_to_csv(series: &WeeklySeries) -> String {
    let mut out = format!(
        "# format_version={} seed={}\n",
        series.format_version, series.seed
    );
    out.push_str(
        "week_start,week_end,source,n,hate_rate,neutral_share,israel_share,palestine_share\n",
    );
    let mut sources_present: Vec<String> = Vec::new();
    for source in Source::ALL {
        if series
            .buckets
            .iter()
            .any(|b| b.cells.contains_key(source.name()))
        {
            sources_present.push(source.name().to_string());
        }
    }
    for bucket in &series.buckets {
        for source in &sources_present {
            match bucket.cells.get(source) {
                Some(cell) => out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    bucket.start,
                    bucket.end,
                    source,
                    cell.n,
                    cell.hate_rate,
                    cell.neutral_share,
                    cell.israel_share,
                    cell.palestine_share
                )),
                None => out.push_str(&format!(
                    "{},{},{},0,,,,\n",
                    bucket.start, bucket.end, source
                )),
            }
        }
    }
    out
}

pub fn term_freq_to_csv(table: &TermFreqTable) -> String {
    let mut out = format!(
        "# format_version={} seed={}\n",
        table.format_version, table.seed
    );
    out.push_str("term,doc_fraction,rank\n");
    for e in &table.entries {
        out.push_str(&format!("{},{},{}\n", e.term, e.doc_fraction, e.rank));
    }
    out
}

/// Writes source_breakdown.json, weekly_series.csv and term_freq.csv into
/// `out_dir`; reruns over identical inputs produce byte-identical files.
/// Returns the three paths in that order.
pub fn emit_reports(
    out_dir: &Path,
    breakdown: &SourceBreakdown,
    weekly: &WeeklySeries,
    terms: &TermFreqTable,
) -> Result<[PathBuf; 3]> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let breakdown_path = out_dir.join("source_breakdown.json");
    let mut json = serde_json::to_string_pretty(breakdown).expect("breakdown serializes");
    json.push('\n');
    write_file(&breakdown_path, &json)?;
    let weekly_path = out_dir.join("weekly_series.csv");
    write_file(&weekly_path, &weekly_to_csv(weekly))?;
    let terms_path = out_dir.join("term_freq.csv");
    write_file(&terms_path, &term_freq_to_csv(terms))?;
    Ok([breakdown_path, weekly_path, terms_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    // the default config ships no stopword list, which would make the
    // language gate drop every longer comment; disarm it for fixtures
    fn lenient_pipeline() -> PipelineConfig {
        let mut cfg = PipelineConfig::default();
        cfg.language_filter.stopword_hit_threshold = 0.0;
        cfg
    }

    fn pred(
        id: &str,
        source: Source,
        date: &str,
        hate: HateLabel,
        sentiment: SentimentLabel,
    ) -> Prediction {
        Prediction {
            comment_id: id.to_string(),
            source,
            published_at: d(date),
            hate_score: if hate == HateLabel::Hate { 1.0 } else { -1.0 },
            hate_prob: None,
            hate_label: hate,
            sentiment_scores: vec![0.0; 3],
            sentiment_label: sentiment,
        }
    }

    #[test]
    fn source_rates_are_exact_ratios() {
        let mut preds = Vec::new();
        for i in 0..10 {
            preds.push(pred(
                &format!("p{i}"),
                Source::Public,
                "2023-10-05",
                if i < 4 {
                    HateLabel::Hate
                } else {
                    HateLabel::NoHate
                },
                SentimentLabel::Neutral,
            ));
        }
        let breakdown = aggregate_by_source(&preds, 7);
        let public = &breakdown.per_source["public"];
        assert_eq!(public.n, 10);
        assert_eq!(public.hate_rate, 0.4);
        assert_eq!(public.hate_rate + public.no_hate_rate, 1.0);
        assert_eq!(breakdown.omitted_sources, vec!["private".to_string()]);
    }

    #[test]
    fn sentiment_shares_sum_to_one() {
        // 342 neutral / 93 israel / 65 palestine over 500 private comments
        let mut preds = Vec::new();
        for i in 0..500 {
            let sentiment = if i < 342 {
                SentimentLabel::Neutral
            } else if i < 435 {
                SentimentLabel::ProIsrael
            } else {
                SentimentLabel::ProPalestine
            };
            preds.push(pred(
                &format!("p{i}"),
                Source::Private,
                "2023-10-05",
                HateLabel::NoHate,
                sentiment,
            ));
        }
        let breakdown = aggregate_by_source(&preds, 0);
        let private = &breakdown.per_source["private"];
        assert_eq!(private.sentiment_shares["neutral"], 0.684);
        assert_eq!(private.sentiment_shares["israel"], 0.186);
        assert_eq!(private.sentiment_shares["palestine"], 0.13);
        let sum: f64 = private.sentiment_shares.values().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weekly_buckets_anchor_at_range_start_and_absorb_the_remainder() {
        let preds = vec![
            pred(
                "a",
                Source::Public,
                "2023-10-08",
                HateLabel::Hate,
                SentimentLabel::Neutral,
            ),
            pred(
                "b",
                Source::Public,
                "2023-11-20",
                HateLabel::NoHate,
                SentimentLabel::Neutral,
            ),
            pred(
                "c",
                Source::Public,
                "2023-12-01",
                HateLabel::NoHate,
                SentimentLabel::Neutral,
            ),
        ];
        let series = aggregate_weekly(&preds, d("2023-10-02"), d("2023-11-20"), 0).unwrap();
        assert_eq!(series.buckets.len(), 7);
        let last = &series.buckets[6];
        assert_eq!(last.start, d("2023-11-13"));
        assert_eq!(last.end, d("2023-11-20"));
        // 2023-10-08 is the inclusive end of the first bucket
        assert_eq!(series.buckets[0].cells["public"].n, 1);
        assert_eq!(series.buckets[0].end, d("2023-10-08"));
        // 2023-11-20 falls into the extended final bucket
        assert_eq!(last.cells["public"].n, 1);
        // 2023-12-01 is excluded and reported
        assert_eq!(series.out_of_range_count, 1);
        assert_eq!(series.out_of_range_ids, vec!["c".to_string()]);
        // buckets tile the range without gaps or overlaps
        for w in series.buckets.windows(2) {
            assert_eq!(w[0].end + chrono::Days::new(1), w[1].start);
        }
        assert_eq!(series.buckets[0].start, d("2023-10-02"));
    }

    #[test]
    fn short_ranges_collapse_to_a_single_bucket() {
        let preds = vec![pred(
            "a",
            Source::Private,
            "2023-10-03",
            HateLabel::NoHate,
            SentimentLabel::Neutral,
        )];
        let series = aggregate_weekly(&preds, d("2023-10-02"), d("2023-10-04"), 0).unwrap();
        assert_eq!(series.buckets.len(), 1);
        assert_eq!(series.buckets[0].start, d("2023-10-02"));
        assert_eq!(series.buckets[0].end, d("2023-10-04"));
        assert!(aggregate_weekly(&preds, d("2023-10-05"), d("2023-10-04"), 0).is_err());
    }

    #[test]
    fn empty_cells_are_absent_in_the_series_but_materialized_in_csv() {
        let preds = vec![
            pred(
                "a",
                Source::Public,
                "2023-10-02",
                HateLabel::Hate,
                SentimentLabel::Neutral,
            ),
            pred(
                "b",
                Source::Private,
                "2023-10-12",
                HateLabel::NoHate,
                SentimentLabel::Neutral,
            ),
        ];
        let series = aggregate_weekly(&preds, d("2023-10-02"), d("2023-10-15"), 3).unwrap();
        assert_eq!(series.buckets.len(), 2);
        assert!(!series.buckets[0].cells.contains_key("private"));
        assert!(!series.buckets[1].cells.contains_key("public"));
        let csv = weekly_to_csv(&series);
        assert!(csv.starts_with("# format_version=1 seed=3\n"));
        // 2 buckets x 2 sources present, plus meta and header
        assert_eq!(csv.lines().count(), 2 + 4);
        assert!(csv.contains("2023-10-09,2023-10-15,public,0,,,,"));
    }

    #[test]
    fn term_table_counts_each_document_once() {
        let cfg = lenient_pipeline();
        let mk = |id: &str, text: &str| Comment {
            id: id.to_string(),
            video_id: None,
            source: None,
            published_at: None,
            raw_text: text.to_string(),
        };
        let comments = vec![
            mk("a", "krieg krieg krieg frieden"),
            mk("b", "frieden jetzt sofort"),
            mk("c", "alles andere thema heute"),
            mk("d", "krieg beenden bitte jetzt"),
        ];
        let table = term_frequencies(&comments, &cfg, 3, 0).unwrap();
        assert_eq!(table.n_docs, 4);
        // "krieg" appears in 2 docs despite repeating thrice in one, so it
        // ties with "frieden" and "jetzt" at 0.5; ties break lexicographically
        for e in &table.entries {
            assert_eq!(e.doc_fraction, 0.5);
        }
        assert_eq!(table.entries[0].term, "frieden");
        assert_eq!(table.entries[1].term, "jetzt");
        assert_eq!(table.entries[2].term, "krieg");
        assert_eq!(table.entries[2].rank, 3);
        assert!(term_frequencies(&comments, &cfg, 0, 0).is_err());
    }

    fn hand_built_artifacts(
        pipeline: &PipelineConfig,
        features: &FeatureConfig,
    ) -> (ModelArtifact, ModelArtifact) {
        use crate::features::{FeatureMode, Vocabulary};
        use crate::linmodels::{ModelComponent, TrainConfig, ARTIFACT_FORMAT_VERSION};
        let vocab = Vocabulary {
            terms: vec![
                "frieden".to_string(),
                "hass".to_string(),
                "krieg".to_string(),
            ],
            doc_freq: vec![2, 2, 2],
            n_docs: 4,
            min_df: 1,
        };
        let fp = pipeline_fingerprint(pipeline, features);
        let tc = TrainConfig::default();
        let hate = ModelArtifact {
            format_version: ARTIFACT_FORMAT_VERSION,
            task: TaskKind::Hate,
            algo: TrainAlgo::Lr,
            feature_mode: FeatureMode::Bow,
            seed: 0,
            converged: true,
            pipeline_fingerprint: fp.clone(),
            train_fingerprint: "t".to_string(),
            config_fingerprint: "c".to_string(),
            train_config: tc.clone(),
            vocabulary: vocab.clone(),
            components: vec![ModelComponent {
                positive_class: "hate".to_string(),
                weights: vec![-1.5, 2.0, 0.5],
                bias: -0.25,
                converged: true,
            }],
        };
        let comp = |class: &str, weights: Vec<f64>, bias: f64| ModelComponent {
            positive_class: class.to_string(),
            weights,
            bias,
            converged: true,
        };
        let sentiment = ModelArtifact {
            task: TaskKind::Sentiment,
            components: vec![
                comp("neutral", vec![1.0, 0.0, 0.0], 0.1),
                comp("israel", vec![0.0, 1.0, 0.0], 0.0),
                comp("palestine", vec![0.0, 0.0, 1.0], -0.1),
            ],
            ..hate.clone()
        };
        (hate, sentiment)
    }

    #[test]
    fn apply_models_matches_hand_computed_scores() {
        let pipeline = lenient_pipeline();
        let features = FeatureConfig::default();
        let (hate_art, sent_art) = hand_built_artifacts(&pipeline, &features);
        let mk = |id: &str, text: &str| Comment {
            id: id.to_string(),
            video_id: None,
            source: Some(Source::Public),
            published_at: Some(d("2023-10-05")),
            raw_text: text.to_string(),
        };
        let comments = vec![
            mk("a", "hass hass krieg"),
            mk("b", "frieden gut"),
            mk("c", "frieden gut"), // exact duplicate, dropped
        ];
        let (preds, drops) =
            apply_models(&comments, &hate_art, &sent_art, &pipeline, &features, 0.5).unwrap();
        assert_eq!(preds.len(), 2);
        assert_eq!(drops.records.len(), 1);

        // bow counts for "hass hass krieg": hass=2 krieg=1
        // hate score = 2*2.0 + 1*0.5 - 0.25 = 4.25
        let p = &preds[0];
        assert!((p.hate_score - 4.25).abs() < 1e-9);
        let hand_prob = 1.0 / (1.0 + (-4.25f64).exp());
        assert!((p.hate_prob.unwrap() - hand_prob).abs() < 1e-9);
        assert_eq!(p.hate_label, HateLabel::Hate);
        // sentiment scores: neutral 0.1, israel 2.0, palestine 1.0-0.1
        assert!((p.sentiment_scores[0] - 0.1).abs() < 1e-9);
        assert!((p.sentiment_scores[1] - 2.0).abs() < 1e-9);
        assert!((p.sentiment_scores[2] - 0.9).abs() < 1e-9);
        assert_eq!(p.sentiment_label, SentimentLabel::ProIsrael);

        // "frieden gut": gut is out of vocabulary
        let q = &preds[1];
        assert!((q.hate_score - (-1.75)).abs() < 1e-9);
        assert_eq!(q.hate_label, HateLabel::NoHate);
        assert_eq!(q.sentiment_label, SentimentLabel::Neutral);
    }

    #[test]
    fn apply_models_refuses_mismatched_fingerprints() {
        let pipeline = lenient_pipeline();
        let features = FeatureConfig::default();
        let (mut hate_art, sent_art) = hand_built_artifacts(&pipeline, &features);
        hate_art.pipeline_fingerprint = "something-else".to_string();
        let comments = vec![Comment {
            id: "a".to_string(),
            video_id: None,
            source: Some(Source::Public),
            published_at: Some(d("2023-10-05")),
            raw_text: "hass krieg".to_string(),
        }];
        let err =
            apply_models(&comments, &hate_art, &sent_art, &pipeline, &features, 0.5).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(matches!(err, Error::PipelineMismatch { .. }));
    }

    #[test]
    fn apply_models_requires_source_and_date() {
        let pipeline = lenient_pipeline();
        let features = FeatureConfig::default();
        let (hate_art, sent_art) = hand_built_artifacts(&pipeline, &features);
        let comments = vec![Comment {
            id: "a".to_string(),
            video_id: None,
            source: Some(Source::Public),
            published_at: None,
            raw_text: "hass krieg".to_string(),
        }];
        let err =
            apply_models(&comments, &hate_art, &sent_art, &pipeline, &features, 0.5).unwrap_err();
        assert!(err.to_string().contains("publication date"));
    }

    #[test]
    fn reports_rerun_byte_identically() {
        let preds = vec![
            pred(
                "a",
                Source::Public,
                "2023-10-02",
                HateLabel::Hate,
                SentimentLabel::ProIsrael,
            ),
            pred(
                "b",
                Source::Private,
                "2023-10-05",
                HateLabel::NoHate,
                SentimentLabel::Neutral,
            ),
        ];
        let breakdown = aggregate_by_source(&preds, 42);
        let weekly = aggregate_weekly(&preds, d("2023-10-02"), d("2023-10-08"), 42).unwrap();
        let cfg = lenient_pipeline();
        let comments = vec![Comment {
            id: "a".to_string(),
            video_id: None,
            source: None,
            published_at: None,
            raw_text: "krieg und frieden heute".to_string(),
        }];
        let terms = term_frequencies(&comments, &cfg, 5, 42).unwrap();
        let dir = std::env::temp_dir().join("stimmung-fieldscan-emit");
        std::fs::create_dir_all(&dir).unwrap();
        let paths = emit_reports(&dir, &breakdown, &weekly, &terms).unwrap();
        let first: Vec<String> = paths
            .iter()
            .map(|p| std::fs::read_to_string(p).unwrap())
            .collect();
        let paths2 = emit_reports(&dir, &breakdown, &weekly, &terms).unwrap();
        let second: Vec<String> = paths2
            .iter()
            .map(|p| std::fs::read_to_string(p).unwrap())
            .collect();
        assert_eq!(first, second);
        assert!(first[0].contains("\"format_version\": 1"));
        assert!(first[0].contains("\"seed\": 42"));
        assert!(first[2].starts_with("# format_version=1 seed=42\n"));
    }
}
