//! Comment corpus loading, label joins, and stratified partitioning.
//!
//! Loaders are strict: every malformed line is an error naming the path,
//! line and offending value. Splits and folds are driven by seeded
//! substreams so a (seed, config) pair always reproduces the same plan.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::substream_rng;

pub const FORMAT_VERSION: u32 = 1;

/// Channel type of the uploading account.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Private,
    Public,
}

impl Source {
    pub const ALL: [Source; 2] = [Source::Private, Source::Public];

    pub fn name(self) -> &'static str {
        match self {
            Source::Private => "private",
            Source::Public => "public",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HateLabel {
    NoHate,
    Hate,
}

impl HateLabel {
    pub fn name(self) -> &'static str {
        match self {
            HateLabel::NoHate => "no_hate",
            HateLabel::Hate => "hate",
        }
    }

    /// Signed target for the linear trainers: hate is the positive class.
    pub fn signed(self) -> f64 {
        match self {
            HateLabel::NoHate => -1.0,
            HateLabel::Hate => 1.0,
        }
    }
}

impl fmt::Display for HateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Stance toward the conflict. Variant order doubles as the tie-break and
/// reporting order, so keep it: neutral, israel, palestine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SentimentLabel {
    #[serde(rename = "neutral")]
    Neutral,
    #[serde(rename = "israel")]
    ProIsrael,
    #[serde(rename = "palestine")]
    ProPalestine,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 3] = [
        SentimentLabel::Neutral,
        SentimentLabel::ProIsrael,
        SentimentLabel::ProPalestine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SentimentLabel::Neutral => "neutral",
            SentimentLabel::ProIsrael => "israel",
            SentimentLabel::ProPalestine => "palestine",
        }
    }

    pub fn index(self) -> usize {
        match self {
            SentimentLabel::Neutral => 0,
            SentimentLabel::ProIsrael => 1,
            SentimentLabel::ProPalestine => 2,
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "neutral" => Some(SentimentLabel::Neutral),
            "israel" => Some(SentimentLabel::ProIsrael),
            "palestine" => Some(SentimentLabel::ProPalestine),
            _ => None,
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a training item came from. Scraped rows carry full metadata;
/// augmented rows usually have none beyond id and text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Scraped,
    BackTranslated,
    Generated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comment {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub video_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_at: Option<NaiveDate>,
    pub raw_text: String,
}

/// A comment joined with its annotations. At least one of the two labels is
/// present by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledComment {
    #[serde(flatten)]
    pub comment: Comment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hate: Option<HateLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<SentimentLabel>,
    pub origin: Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommentFormat {
    Jsonl,
    Csv,
}

// Raw shape shared by the JSONL and CSV loaders; validation happens once.
#[derive(Deserialize)]
struct RawComment {
    id: String,
    video_id: String,
    source: String,
    published_at: String,
    raw_text: String,
}

fn validate_comment(raw: RawComment, path: &Path, line: usize) -> Result<Comment> {
    let source = match raw.source.as_str() {
        "public" => Source::Public,
        "private" => Source::Private,
        other => {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("source must be \"public\" or \"private\", got {other:?}"),
            })
        }
    };
    let published_at =
        NaiveDate::parse_from_str(&raw.published_at, "%Y-%m-%d").map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!(
                "published_at must be YYYY-MM-DD, got {:?}",
                raw.published_at
            ),
        })?;
    if raw.id.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line,
            message: "id must be non-empty".to_string(),
        });
    }
    Ok(Comment {
        id: raw.id,
        video_id: Some(raw.video_id),
        source: Some(source),
        published_at: Some(published_at),
        raw_text: raw.raw_text,
    })
}

/// Loads a scraped corpus. Requires every record to carry all five fields;
/// duplicate ids are an error, input order is preserved.
pub fn load_comments(path: &Path, format: CommentFormat) -> Result<Vec<Comment>> {
    let mut comments = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    match format {
        CommentFormat::Jsonl => {
            let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            for (idx, line) in raw.lines().enumerate() {
                let lineno = idx + 1;
                let trimmed = line.trim();
                // '#' lines carry run metadata in emitted files
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                let rec: RawComment = serde_json::from_str(line).map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno,
                    message: e.to_string(),
                })?;
                let comment = validate_comment(rec, path, lineno)?;
                if seen.insert(comment.id.clone(), lineno).is_some() {
                    return Err(Error::DuplicateId {
                        id: comment.id,
                        path: path.to_path_buf(),
                        line: lineno,
                    });
                }
                comments.push(comment);
            }
        }
        CommentFormat::Csv => {
            let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: e.to_string(),
            })?;
            for record in reader.deserialize::<RawComment>() {
                let rec = record.map_err(|e| {
                    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                    Error::Parse {
                        path: path.to_path_buf(),
                        line,
                        message: e.to_string(),
                    }
                })?;
                let lineno = comments.len() + 2; // header occupies line 1
                let comment = validate_comment(rec, path, lineno)?;
                if seen.insert(comment.id.clone(), lineno).is_some() {
                    return Err(Error::DuplicateId {
                        id: comment.id,
                        path: path.to_path_buf(),
                        line: lineno,
                    });
                }
                comments.push(comment);
            }
        }
    }
    Ok(comments)
}

/// Infers the comment file format from the extension; defaults to JSONL.
pub fn format_for_path(path: &Path) -> CommentFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => CommentFormat::Csv,
        _ => CommentFormat::Jsonl,
    }
}

/// Joins a label CSV (`id,hate,sentiment`) against the corpus. Empty cells
/// mean "not annotated for that task"; a row with both cells empty is an
/// error, as is a row whose id is not in the corpus.
pub fn load_labels(path: &Path, corpus: &[Comment]) -> Result<Vec<LabeledComment>> {
    let by_id: HashMap<&str, &Comment> = corpus.iter().map(|c| (c.id.as_str(), c)).collect();
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        message: e.to_string(),
    })?;
    let mut labeled = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut orphans = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let lineno = idx + 2;
        let record = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: lineno,
            message: e.to_string(),
        })?;
        if record.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message: format!(
                    "expected 3 columns (id,hate,sentiment), got {}",
                    record.len()
                ),
            });
        }
        let id = record[0].to_string();
        let hate_cell = record[1].trim();
        let sent_cell = record[2].trim();
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId {
                id,
                path: path.to_path_buf(),
                line: lineno,
            });
        }
        let hate = match hate_cell {
            "" => None,
            "0" => Some(HateLabel::NoHate),
            "1" => Some(HateLabel::Hate),
            other => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno,
                    message: format!("hate must be 0, 1 or empty, got {other:?}"),
                })
            }
        };
        let sentiment = match sent_cell {
            "" => None,
            name => Some(SentimentLabel::from_name(name).ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message: format!(
                    "sentiment must be neutral, israel, palestine or empty, got {name:?}"
                ),
            })?),
        };
        if hate.is_none() && sentiment.is_none() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message: format!("row for id {id:?} has neither a hate nor a sentiment label"),
            });
        }
        match by_id.get(id.as_str()) {
            Some(comment) => labeled.push(LabeledComment {
                comment: (*comment).clone(),
                hate,
                sentiment,
                origin: Origin::Scraped,
            }),
            None => orphans.push(id),
        }
    }
    if !orphans.is_empty() {
        orphans.sort();
        return Err(Error::OrphanLabels { ids: orphans });
    }
    Ok(labeled)
}

/// Loads labeled comments from JSONL (the augmentation output format).
pub fn load_labeled_jsonl(path: &Path) -> Result<Vec<LabeledComment>> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in raw.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let rec: LabeledComment = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: lineno,
            message: e.to_string(),
        })?;
        if rec.hate.is_none() && rec.sentiment.is_none() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message: format!("record {:?} has neither label", rec.comment.id),
            });
        }
        if !seen.insert(rec.comment.id.clone()) {
            return Err(Error::DuplicateId {
                id: rec.comment.id,
                path: path.to_path_buf(),
                line: lineno,
            });
        }
        out.push(rec);
    }
    Ok(out)
}

/// One JSON object per line. Loaders skip `#` lines, so callers may
/// prepend a meta comment before writing.
pub fn labeled_to_jsonl(items: &[LabeledComment]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("labeled comments serialize"));
        out.push('\n');
    }
    out
}

pub fn comments_to_jsonl(items: &[Comment]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("comments serialize"));
        out.push('\n');
    }
    out
}

pub fn write_labeled_jsonl(path: &Path, items: &[LabeledComment]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(labeled_to_jsonl(items).as_bytes())
        .map_err(|e| Error::io(path, e))
}

pub fn write_comments_jsonl(path: &Path, items: &[Comment]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(comments_to_jsonl(items).as_bytes())
        .map_err(|e| Error::io(path, e))
}

/// Annotation counts in the shape the reports use. Percentages are exact
/// ratios over the respective labeled subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSummary {
    pub total: usize,
    pub hate_labeled: usize,
    pub hate: usize,
    pub no_hate: usize,
    pub sentiment_labeled: usize,
    pub neutral: usize,
    pub pro_israel: usize,
    pub pro_palestine: usize,
    pub by_source: BTreeMap<String, usize>,
    pub by_origin: BTreeMap<String, usize>,
}

impl LabelSummary {
    pub fn compute(labeled: &[LabeledComment]) -> Self {
        let mut s = LabelSummary {
            total: labeled.len(),
            hate_labeled: 0,
            hate: 0,
            no_hate: 0,
            sentiment_labeled: 0,
            neutral: 0,
            pro_israel: 0,
            pro_palestine: 0,
            by_source: BTreeMap::new(),
            by_origin: BTreeMap::new(),
        };
        for item in labeled {
            match item.hate {
                Some(HateLabel::Hate) => {
                    s.hate_labeled += 1;
                    s.hate += 1;
                }
                Some(HateLabel::NoHate) => {
                    s.hate_labeled += 1;
                    s.no_hate += 1;
                }
                None => {}
            }
            if let Some(label) = item.sentiment {
                s.sentiment_labeled += 1;
                match label {
                    SentimentLabel::Neutral => s.neutral += 1,
                    SentimentLabel::ProIsrael => s.pro_israel += 1,
                    SentimentLabel::ProPalestine => s.pro_palestine += 1,
                }
            }
            if let Some(source) = item.comment.source {
                *s.by_source.entry(source.name().to_string()).or_insert(0) += 1;
            }
            let origin = match item.origin {
                Origin::Scraped => "scraped",
                Origin::BackTranslated => "back_translated",
                Origin::Generated => "generated",
            };
            *s.by_origin.entry(origin.to_string()).or_insert(0) += 1;
        }
        s
    }

    /// Percentage of the hate-labeled subset, rounded to two decimals.
    pub fn hate_pct(&self) -> (f64, f64) {
        if self.hate_labeled == 0 {
            return (0.0, 0.0);
        }
        let n = self.hate_labeled as f64;
        (
            round2(100.0 * self.hate as f64 / n),
            round2(100.0 * self.no_hate as f64 / n),
        )
    }

    /// Percentages of the sentiment-labeled subset in class order.
    pub fn sentiment_pct(&self) -> (f64, f64, f64) {
        if self.sentiment_labeled == 0 {
            return (0.0, 0.0, 0.0);
        }
        let n = self.sentiment_labeled as f64;
        (
            round2(100.0 * self.neutral as f64 / n),
            round2(100.0 * self.pro_israel as f64 / n),
            round2(100.0 * self.pro_palestine as f64 / n),
        )
    }
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Which label a split or fold plan stratifies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrataKey {
    Hate,
    Sentiment,
}

fn stratum_of(item: &LabeledComment, key: StrataKey) -> Result<String> {
    match key {
        StrataKey::Hate => item.hate.map(|h| h.name().to_string()).ok_or_else(|| {
            Error::Stratification(format!("id {:?} has no hate label", item.comment.id))
        }),
        StrataKey::Sentiment => item.sentiment.map(|s| s.name().to_string()).ok_or_else(|| {
            Error::Stratification(format!("id {:?} has no sentiment label", item.comment.id))
        }),
    }
}

/// A reproducible train/test partition. Id lists are sorted; membership,
/// not order, is the contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub format_version: u32,
    pub strata_key: StrataKey,
    pub ratio: f64,
    pub seed: u64,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
}

/// Stratified shuffle split. Per-class train counts come from largest
/// remainder apportionment of `round(n * ratio)`, so every class lands
/// within one sample of its global proportion on both sides.
pub fn stratified_split(
    labeled: &[LabeledComment],
    ratio: f64,
    key: StrataKey,
    seed: u64,
) -> Result<SplitPlan> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Parameter(format!(
            "split ratio must be strictly between 0 and 1, got {ratio}"
        )));
    }
    if labeled.len() < 2 {
        return Err(Error::Stratification(format!(
            "need at least 2 items to split, got {}",
            labeled.len()
        )));
    }
    let mut strata: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for item in labeled {
        strata
            .entry(stratum_of(item, key)?)
            .or_default()
            .push(item.comment.id.clone());
    }
    for (name, ids) in &strata {
        if ids.len() < 2 {
            return Err(Error::Stratification(format!(
                "class {name:?} has {} member(s); every class needs at least 2",
                ids.len()
            )));
        }
    }
    let n = labeled.len();
    let target = ((n as f64 * ratio).round() as usize).clamp(1, n - 1);

    // Largest remainder: floors first, then one extra to the classes with
    // the biggest fractional parts (ties resolved by class name order).
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut remainders: Vec<(f64, &str)> = Vec::new();
    let mut assigned = 0usize;
    for (name, ids) in &strata {
        let exact = ids.len() as f64 * ratio;
        let floor = exact.floor() as usize;
        counts.insert(name.as_str(), floor);
        assigned += floor;
        remainders.push((exact - floor as f64, name.as_str()));
    }
    remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(b.1)));
    let mut extras = target.saturating_sub(assigned);
    for (_, name) in remainders.iter().cycle() {
        if extras == 0 {
            break;
        }
        let c = counts.get_mut(name).unwrap();
        if *c < strata[*name].len() {
            *c += 1;
            extras -= 1;
        }
    }

    let mut train_ids = Vec::new();
    let mut test_ids = Vec::new();
    for (name, ids) in &strata {
        let mut ids = ids.clone();
        let mut rng = substream_rng(seed, &format!("split/{name}"));
        ids.shuffle(&mut rng);
        let take = counts[name.as_str()];
        train_ids.extend(ids[..take].iter().cloned());
        test_ids.extend(ids[take..].iter().cloned());
    }
    train_ids.sort();
    test_ids.sort();
    if train_ids.is_empty() || test_ids.is_empty() {
        return Err(Error::Stratification(
            "split left one side empty; adjust ratio or corpus size".to_string(),
        ));
    }
    Ok(SplitPlan {
        format_version: FORMAT_VERSION,
        strata_key: key,
        ratio,
        seed,
        train_ids,
        test_ids,
    })
}

/// Split policy for mixed corpora: augmented items train, they never test.
/// Set `augmented_in_test` to lift that and stratify over everything.
pub fn stratified_split_with_policy(
    labeled: &[LabeledComment],
    ratio: f64,
    key: StrataKey,
    seed: u64,
    augmented_in_test: bool,
) -> Result<SplitPlan> {
    if augmented_in_test {
        return stratified_split(labeled, ratio, key, seed);
    }
    let scraped: Vec<LabeledComment> = labeled
        .iter()
        .filter(|l| l.origin == Origin::Scraped)
        .cloned()
        .collect();
    if scraped.is_empty() {
        return Err(Error::Stratification(
            "no scraped items to build a test set from".to_string(),
        ));
    }
    let mut plan = stratified_split(&scraped, ratio, key, seed)?;
    for item in labeled {
        if item.origin != Origin::Scraped {
            plan.train_ids.push(item.comment.id.clone());
        }
    }
    plan.train_ids.sort();
    Ok(plan)
}

/// A reproducible k-fold assignment over a set of ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub format_version: u32,
    pub k: usize,
    pub strata_key: StrataKey,
    pub seed: u64,
    pub fold_assignments: BTreeMap<String, usize>,
}

impl FoldPlan {
    pub fn fold_ids(&self, fold: usize) -> Vec<&str> {
        self.fold_assignments
            .iter()
            .filter(|(_, f)| **f == fold)
            .map(|(id, _)| id.as_str())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.fold_assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fold_assignments.is_empty()
    }
}

/// Deals shuffled class members round-robin across folds. The starting fold
/// rotates with a global offset carried from class to class, which keeps
/// overall fold sizes within one of each other, not just per-class counts.
pub(crate) fn assign_folds_by_class(
    strata: &BTreeMap<String, Vec<usize>>,
    k: usize,
    seed: u64,
) -> Vec<usize> {
    let n: usize = strata.values().map(|v| v.len()).sum();
    let mut fold_of = vec![0usize; n];
    let mut offset = 0usize;
    for (name, members) in strata {
        let mut members = members.clone();
        let mut rng = substream_rng(seed, &format!("folds/{name}"));
        members.shuffle(&mut rng);
        for (j, &idx) in members.iter().enumerate() {
            fold_of[idx] = (offset + j) % k;
        }
        offset = (offset + members.len()) % k;
    }
    fold_of
}

/// Stratified k-fold assignment. Every fold's per-class count is within one
/// of every other fold's, and so are total fold sizes.
pub fn make_folds(
    labeled: &[LabeledComment],
    k: usize,
    key: StrataKey,
    seed: u64,
) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Parameter(format!("k must be at least 2, got {k}")));
    }
    if labeled.len() < k {
        return Err(Error::Stratification(format!(
            "cannot spread {} item(s) over {k} folds",
            labeled.len()
        )));
    }
    let mut strata: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (idx, item) in labeled.iter().enumerate() {
        strata.entry(stratum_of(item, key)?).or_default().push(idx);
    }
    let fold_of = assign_folds_by_class(&strata, k, seed);
    let mut fold_assignments = BTreeMap::new();
    for (idx, item) in labeled.iter().enumerate() {
        if fold_assignments
            .insert(item.comment.id.clone(), fold_of[idx])
            .is_some()
        {
            return Err(Error::Data(format!(
                "duplicate id {:?} in fold input",
                item.comment.id
            )));
        }
    }
    Ok(FoldPlan {
        format_version: FORMAT_VERSION,
        k,
        strata_key: key,
        seed,
        fold_assignments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(
        id: &str,
        hate: Option<HateLabel>,
        sentiment: Option<SentimentLabel>,
    ) -> LabeledComment {
        LabeledComment {
            comment: Comment {
                id: id.to_string(),
                video_id: Some("v".to_string()),
                source: Some(Source::Public),
                published_at: NaiveDate::from_ymd_opt(2023, 10, 2),
                raw_text: format!("text {id}"),
            },
            hate,
            sentiment,
            origin: Origin::Scraped,
        }
    }

    fn binary_fixture(pos: usize, neg: usize) -> Vec<LabeledComment> {
        let mut v = Vec::new();
        for i in 0..pos {
            v.push(item(&format!("p{i}"), Some(HateLabel::Hate), None));
        }
        for i in 0..neg {
            v.push(item(&format!("n{i}"), Some(HateLabel::NoHate), None));
        }
        v
    }

    #[test]
    fn split_is_a_partition_with_stratified_counts() {
        // 6 hate, 4 no-hate at 0.8: largest remainder gives 5 + 3 in train.
        let data = binary_fixture(6, 4);
        let plan = stratified_split(&data, 0.8, StrataKey::Hate, 7).unwrap();
        assert_eq!(plan.train_ids.len(), 8);
        assert_eq!(plan.test_ids.len(), 2);
        let train_pos = plan
            .train_ids
            .iter()
            .filter(|id| id.starts_with('p'))
            .count();
        assert_eq!(train_pos, 5);
        let mut all: Vec<&String> = plan.train_ids.iter().chain(&plan.test_ids).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 10);
    }

    #[test]
    fn split_is_deterministic_per_seed() {
        let data = binary_fixture(20, 12);
        let a = stratified_split(&data, 0.8, StrataKey::Hate, 7).unwrap();
        let b = stratified_split(&data, 0.8, StrataKey::Hate, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = stratified_split(&data, 0.8, StrataKey::Hate, 8).unwrap();
        assert_ne!(a.train_ids, c.train_ids);
    }

    #[test]
    fn split_rejects_degenerate_inputs() {
        let data = binary_fixture(6, 4);
        assert!(matches!(
            stratified_split(&data, 1.0, StrataKey::Hate, 7),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            stratified_split(&data, 0.0, StrataKey::Hate, 7),
            Err(Error::Parameter(_))
        ));
        let tiny = binary_fixture(5, 1);
        assert!(matches!(
            stratified_split(&tiny, 0.8, StrataKey::Hate, 7),
            Err(Error::Stratification(_))
        ));
        let unlabeled = vec![
            item("x", None, Some(SentimentLabel::Neutral)),
            item("y", None, Some(SentimentLabel::Neutral)),
        ];
        assert!(matches!(
            stratified_split(&unlabeled, 0.8, StrataKey::Hate, 7),
            Err(Error::Stratification(_))
        ));
    }

    #[test]
    fn augmented_items_stay_out_of_test_by_default() {
        let mut data = binary_fixture(6, 4);
        for i in 0..5 {
            let mut it = item(&format!("bt{i}"), Some(HateLabel::Hate), None);
            it.origin = Origin::BackTranslated;
            data.push(it);
        }
        let plan = stratified_split_with_policy(&data, 0.8, StrataKey::Hate, 7, false).unwrap();
        assert!(plan.test_ids.iter().all(|id| !id.starts_with("bt")));
        assert_eq!(plan.train_ids.len() + plan.test_ids.len(), 15);
        let plan2 = stratified_split_with_policy(&data, 0.8, StrataKey::Hate, 7, true).unwrap();
        assert_eq!(plan2.train_ids.len() + plan2.test_ids.len(), 15);
        // with the policy lifted the augmented ids may land in test
        assert_eq!(plan2.train_ids.len(), 12);
    }

    #[test]
    fn folds_balance_classes_exactly_when_divisible() {
        // 6 of class A, 3 of class B over 3 folds: every fold gets 2 + 1.
        let mut data = Vec::new();
        for i in 0..6 {
            data.push(item(&format!("a{i}"), Some(HateLabel::Hate), None));
        }
        for i in 0..3 {
            data.push(item(&format!("b{i}"), Some(HateLabel::NoHate), None));
        }
        let plan = make_folds(&data, 3, StrataKey::Hate, 11).unwrap();
        for fold in 0..3 {
            let ids = plan.fold_ids(fold);
            assert_eq!(ids.len(), 3);
            assert_eq!(ids.iter().filter(|id| id.starts_with('a')).count(), 2);
            assert_eq!(ids.iter().filter(|id| id.starts_with('b')).count(), 1);
        }
    }

    #[test]
    fn fold_sizes_stay_within_one_even_with_remainders() {
        let mut data = binary_fixture(7, 6); // 13 items over 5 folds
        data.extend((0..4).map(|i| {
            let mut it = item(&format!("s{i}"), Some(HateLabel::Hate), None);
            it.hate = Some(HateLabel::Hate);
            it
        }));
        let plan = make_folds(&data, 5, StrataKey::Hate, 3).unwrap();
        let sizes: Vec<usize> = (0..5).map(|f| plan.fold_ids(f).len()).collect();
        let min = *sizes.iter().min().unwrap();
        let max = *sizes.iter().max().unwrap();
        assert!(max - min <= 1, "fold sizes {sizes:?} drift by more than 1");
        assert_eq!(sizes.iter().sum::<usize>(), 17);
    }

    #[test]
    fn folds_are_deterministic_and_serializable() {
        let data = binary_fixture(9, 6);
        let a = make_folds(&data, 3, StrataKey::Hate, 5).unwrap();
        let b = make_folds(&data, 3, StrataKey::Hate, 5).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let parsed: FoldPlan = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(parsed, a);
    }

    #[test]
    fn label_summary_reports_exact_percentages() {
        // Mirror of the annotation table: 609 hate vs 335 no-hate comes out
        // at 64.51% / 35.49% exactly; the sentiment side at 46.40 / 20.44 /
        // 33.16 for 438 / 193 / 313.
        let mut data = Vec::new();
        for i in 0..609 {
            data.push(item(&format!("h{i}"), Some(HateLabel::Hate), None));
        }
        for i in 0..335 {
            data.push(item(&format!("n{i}"), Some(HateLabel::NoHate), None));
        }
        let s = LabelSummary::compute(&data);
        assert_eq!(s.hate_labeled, 944);
        assert_eq!(s.hate_pct(), (64.51, 35.49));

        let mut sdata = Vec::new();
        for i in 0..438 {
            sdata.push(item(&format!("a{i}"), None, Some(SentimentLabel::Neutral)));
        }
        for i in 0..193 {
            sdata.push(item(
                &format!("b{i}"),
                None,
                Some(SentimentLabel::ProIsrael),
            ));
        }
        for i in 0..313 {
            sdata.push(item(
                &format!("c{i}"),
                None,
                Some(SentimentLabel::ProPalestine),
            ));
        }
        let s = LabelSummary::compute(&sdata);
        assert_eq!(s.sentiment_labeled, 944);
        assert_eq!(s.sentiment_pct(), (46.40, 20.44, 33.16));
    }

    #[test]
    fn sentiment_order_is_neutral_israel_palestine() {
        assert!(SentimentLabel::Neutral < SentimentLabel::ProIsrael);
        assert!(SentimentLabel::ProIsrael < SentimentLabel::ProPalestine);
        assert_eq!(SentimentLabel::ALL[0].index(), 0);
        assert_eq!(SentimentLabel::ALL[2].name(), "palestine");
    }
}
