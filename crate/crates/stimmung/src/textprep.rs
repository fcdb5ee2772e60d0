//! German text normalization and corpus cleaning.
//!
//! The pipeline is deliberately lossy: lowercase, fold umlauts to ASCII
//! digraphs, strip everything outside the kept charset, filter stopwords
//! (negations survive via a whitelist), then apply dictionary lemmas.
//! `normalize_text` is idempotent, which is what makes retraining on
//! already-cleaned exports safe.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Comment;
use crate::error::{Error, Result};

/// Heuristic language gate. A comment passes when its stopword hit rate
/// reaches `stopword_hit_threshold`, or when it is too short to judge
/// (fewer than `min_tokens` tokens).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageFilter {
    pub stopword_hit_threshold: f64,
    pub min_tokens: usize,
}

impl Default for LanguageFilter {
    fn default() -> Self {
        LanguageFilter {
            stopword_hit_threshold: 0.05,
            min_tokens: 3,
        }
    }
}

/// Everything the text pipeline needs. Term maps and sets are kept in
/// BTree collections so serialization (and hence the pipeline fingerprint)
/// is stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Folding map applied after lowercasing, before the charset strip.
    /// Keys are single characters; values are their ASCII replacements.
    pub umlaut_map: BTreeMap<String, String>,
    /// Characters kept by normalization besides the space separator.
    pub keep_charset: BTreeSet<char>,
    pub stopwords: BTreeSet<String>,
    /// Stopwords that survive filtering anyway; negations flip meaning and
    /// the classifiers need them.
    pub negation_whitelist: BTreeSet<String>,
    /// Inflected form to lemma, both sides already normalized.
    pub lemma_dict: BTreeMap<String, String>,
    pub language_filter: LanguageFilter,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let mut umlaut_map = BTreeMap::new();
        umlaut_map.insert("ä".to_string(), "ae".to_string());
        umlaut_map.insert("ö".to_string(), "oe".to_string());
        umlaut_map.insert("ü".to_string(), "ue".to_string());
        umlaut_map.insert("ß".to_string(), "ss".to_string());
        PipelineConfig {
            umlaut_map,
            keep_charset: ('a'..='z').collect(),
            stopwords: BTreeSet::new(),
            negation_whitelist: BTreeSet::new(),
            lemma_dict: BTreeMap::new(),
            language_filter: LanguageFilter::default(),
        }
    }
}

impl PipelineConfig {
    /// Builds a config from the three standard resource files. Entries are
    /// normalized on load so lookups match pipeline output whatever form
    /// the files use (umlauts or digraphs).
    pub fn from_files(stopwords: &Path, negations: &Path, lemmas: &Path) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        for term in load_term_file(stopwords)? {
            let t = normalize_text(&term, &cfg);
            if !t.is_empty() {
                cfg.stopwords.insert(t);
            }
        }
        for term in load_term_file(negations)? {
            let t = normalize_text(&term, &cfg);
            if !t.is_empty() {
                cfg.negation_whitelist.insert(t);
            }
        }
        for (inflected, lemma) in load_lemma_file(lemmas)? {
            let k = normalize_text(&inflected, &cfg);
            let v = normalize_text(&lemma, &cfg);
            if !k.is_empty() && !v.is_empty() {
                cfg.lemma_dict.insert(k, v);
            }
        }
        Ok(cfg)
    }
}

/// One term per line, `#` starts a comment, blank lines ignored.
pub fn load_term_file(path: &Path) -> Result<Vec<String>> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut terms = Vec::new();
    for line in raw.lines() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        if !line.is_empty() {
            terms.push(line.to_string());
        }
    }
    Ok(terms)
}

/// Tab-separated `inflected<TAB>lemma`, `#` comments and blank lines ignored.
pub fn load_lemma_file(path: &Path) -> Result<Vec<(String, String)>> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, '\t');
        let inflected = parts.next().unwrap_or("").trim();
        let lemma = parts.next().unwrap_or("").trim();
        if inflected.is_empty() || lemma.is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: "expected inflected<TAB>lemma".to_string(),
            });
        }
        pairs.push((inflected.to_string(), lemma.to_string()));
    }
    Ok(pairs)
}

/// Lowercase, fold umlauts, squash whitespace runs, strip everything outside
/// the kept charset, collapse blanks. Output is ASCII in the kept charset
/// plus single interior spaces; applying it twice changes nothing.
pub fn normalize_text(raw: &str, cfg: &PipelineConfig) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    let push = |c: char, out: &mut String, pending_space: &mut bool| {
        if c.is_whitespace() {
            if !out.is_empty() {
                *pending_space = true;
            }
        } else if cfg.keep_charset.contains(&c) {
            if *pending_space {
                out.push(' ');
                *pending_space = false;
            }
            out.push(c);
        }
    };
    let mut buf = [0u8; 4];
    for c in raw.chars().flat_map(char::to_lowercase) {
        let key: &str = c.encode_utf8(&mut buf);
        match cfg.umlaut_map.get(key) {
            Some(rep) => {
                for rc in rep.chars() {
                    push(rc, &mut out, &mut pending_space);
                }
            }
            None => push(c, &mut out, &mut pending_space),
        }
    }
    out
}

/// Splits normalized text on spaces. Order preserved, no empty tokens.
pub fn tokenize(normalized: &str) -> Vec<String> {
    normalized
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Drops stopwords unless whitelisted. The whitelist wins even when a term
/// sits in both sets.
pub fn filter_stopwords(tokens: &[String], cfg: &PipelineConfig) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| cfg.negation_whitelist.contains(*t) || !cfg.stopwords.contains(*t))
        .cloned()
        .collect()
}

/// Dictionary lookup; unknown tokens pass through unchanged.
pub fn lemmatize(tokens: &[String], cfg: &PipelineConfig) -> Vec<String> {
    tokens
        .iter()
        .map(|t| cfg.lemma_dict.get(t).cloned().unwrap_or_else(|| t.clone()))
        .collect()
}

/// Full chain: normalize, tokenize, stopword-filter, lemmatize.
pub fn preprocess(raw: &str, cfg: &PipelineConfig) -> Vec<String> {
    let tokens = tokenize(&normalize_text(raw, cfg));
    lemmatize(&filter_stopwords(&tokens, cfg), cfg)
}

/// A preprocessed comment, ready for featurization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenDoc {
    pub comment_id: String,
    pub tokens: Vec<String>,
}

impl TokenDoc {
    pub fn from_comment(comment: &Comment, cfg: &PipelineConfig) -> Self {
        TokenDoc {
            comment_id: comment.id.clone(),
            tokens: preprocess(&comment.raw_text, cfg),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    Duplicate,
    EmptyAfterCleaning,
    Language,
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DropReason::Duplicate => "duplicate",
            DropReason::EmptyAfterCleaning => "empty_after_cleaning",
            DropReason::Language => "language",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropRecord {
    pub comment_id: String,
    pub reason: DropReason,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DropReport {
    pub records: Vec<DropRecord>,
}

impl DropReport {
    pub fn count(&self, reason: DropReason) -> usize {
        self.records.iter().filter(|r| r.reason == reason).count()
    }

    /// CSV body with an `id,reason` header; callers prepend their meta line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,reason\n");
        for r in &self.records {
            out.push_str(&format!("{},{}\n", r.comment_id, r.reason));
        }
        out
    }
}

/// Removes exact duplicates (first occurrence kept), comments that clean to
/// nothing, and comments the language gate rejects, in that order. Survivors
/// keep their input order.
pub fn clean_corpus(corpus: &[Comment], cfg: &PipelineConfig) -> (Vec<Comment>, DropReport) {
    let mut kept = Vec::new();
    let mut report = DropReport::default();
    let mut seen_texts: HashSet<&str> = HashSet::new();
    for comment in corpus {
        if !seen_texts.insert(comment.raw_text.as_str()) {
            report.records.push(DropRecord {
                comment_id: comment.id.clone(),
                reason: DropReason::Duplicate,
            });
            continue;
        }
        let tokens = tokenize(&normalize_text(&comment.raw_text, cfg));
        if preprocess(&comment.raw_text, cfg).is_empty() {
            report.records.push(DropRecord {
                comment_id: comment.id.clone(),
                reason: DropReason::EmptyAfterCleaning,
            });
            continue;
        }
        if !passes_language_gate(&tokens, cfg) {
            report.records.push(DropRecord {
                comment_id: comment.id.clone(),
                reason: DropReason::Language,
            });
            continue;
        }
        kept.push(comment.clone());
    }
    (kept, report)
}

/// Hit rate is measured against the raw stopword set, before the whitelist
/// is applied: negations are still German evidence.
fn passes_language_gate(tokens: &[String], cfg: &PipelineConfig) -> bool {
    if tokens.len() < cfg.language_filter.min_tokens {
        return true;
    }
    let hits = tokens.iter().filter(|t| cfg.stopwords.contains(*t)).count();
    let rate = hits as f64 / tokens.len() as f64;
    rate >= cfg.language_filter.stopword_hit_threshold
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_cfg() -> PipelineConfig {
        let mut cfg = PipelineConfig::default();
        for w in ["das", "ist", "nicht", "die", "und", "ein"] {
            cfg.stopwords.insert(w.to_string());
        }
        cfg.negation_whitelist.insert("nicht".to_string());
        cfg
    }

    #[test]
    fn normalize_folds_umlauts_and_strips_noise() {
        let cfg = PipelineConfig::default();
        assert_eq!(
            normalize_text("Über 100 Soldaten!!! 😀", &cfg),
            "ueber soldaten"
        );
        assert_eq!(normalize_text("Straße", &cfg), "strasse");
        assert_eq!(normalize_text("ÄÖÜ", &cfg), "aeoeue");
    }

    #[test]
    fn normalize_handles_whitespace_runs_and_edges() {
        let cfg = PipelineConfig::default();
        assert_eq!(normalize_text("  viel\t\nRauch  ", &cfg), "viel rauch");
        assert_eq!(normalize_text("", &cfg), "");
        assert_eq!(normalize_text("!!! 123 ???", &cfg), "");
    }

    #[test]
    fn normalize_is_idempotent_on_examples() {
        let cfg = PipelineConfig::default();
        for raw in [
            "Über 100 Soldaten!!! 😀",
            "Straße",
            "  a  b  ",
            "ÄÖÜß und mehr…",
        ] {
            let once = normalize_text(raw, &cfg);
            let twice = normalize_text(&once, &cfg);
            assert_eq!(once, twice, "normalize must be idempotent for {raw:?}");
        }
    }

    #[test]
    fn tokenize_drops_empties_and_preserves_order() {
        assert_eq!(tokenize("ein zwei drei"), vec!["ein", "zwei", "drei"]);
        assert_eq!(tokenize(""), Vec::<String>::new());
    }

    #[test]
    fn whitelist_wins_over_stopword_set() {
        let cfg = fixture_cfg();
        let tokens = tokenize(&normalize_text("Das ist NICHT über!!", &cfg));
        assert_eq!(tokens, vec!["das", "ist", "nicht", "ueber"]);
        let filtered = filter_stopwords(&tokens, &cfg);
        assert_eq!(filtered, vec!["nicht", "ueber"]);
    }

    #[test]
    fn preprocess_runs_the_full_chain() {
        let mut cfg = fixture_cfg();
        cfg.lemma_dict
            .insert("soldaten".to_string(), "soldat".to_string());
        assert_eq!(
            preprocess("Das ist NICHT über!!", &cfg),
            vec!["nicht", "ueber"]
        );
        assert_eq!(
            preprocess("Die Soldaten und ein Kind", &cfg),
            vec!["soldat", "kind"]
        );
    }

    #[test]
    fn lemmatize_passes_unknown_tokens_through() {
        let mut cfg = PipelineConfig::default();
        cfg.lemma_dict
            .insert("kinder".to_string(), "kind".to_string());
        let toks: Vec<String> = vec!["kinder".into(), "zelt".into()];
        assert_eq!(lemmatize(&toks, &cfg), vec!["kind", "zelt"]);
    }

    #[test]
    fn term_file_loader_skips_comments_and_blanks() {
        let dir = std::env::temp_dir().join("stimmung-termfile-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("stopwords.txt");
        std::fs::write(&path, "# header\n der\n\ndie # trailing\nDAS\n").unwrap();
        let terms = load_term_file(&path).unwrap();
        assert_eq!(terms, vec!["der", "die", "DAS"]);
    }

    #[test]
    fn config_from_files_normalizes_entries() {
        let dir = std::env::temp_dir().join("stimmung-cfgload-test");
        std::fs::create_dir_all(&dir).unwrap();
        let sw = dir.join("stop.txt");
        let neg = dir.join("neg.txt");
        let lem = dir.join("lem.tsv");
        std::fs::write(&sw, "FÜR\nüber\n").unwrap();
        std::fs::write(&neg, "NICHT\n").unwrap();
        std::fs::write(&lem, "Häuser\thaus\nSOLDATEN\tSoldat\n").unwrap();
        let cfg = PipelineConfig::from_files(&sw, &neg, &lem).unwrap();
        assert!(cfg.stopwords.contains("fuer"));
        assert!(cfg.stopwords.contains("ueber"));
        assert!(cfg.negation_whitelist.contains("nicht"));
        assert_eq!(cfg.lemma_dict.get("haeuser").unwrap(), "haus");
        assert_eq!(cfg.lemma_dict.get("soldaten").unwrap(), "soldat");
    }

    #[test]
    fn malformed_lemma_line_reports_position() {
        let dir = std::env::temp_dir().join("stimmung-lemma-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.tsv");
        std::fs::write(&path, "gut\tgut\nkaputt\n").unwrap();
        let err = load_lemma_file(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.tsv"), "{msg}");
        assert!(msg.contains(":2:"), "{msg}");
    }

    fn comment(id: &str, text: &str) -> Comment {
        Comment {
            id: id.to_string(),
            video_id: Some("v1".to_string()),
            source: Some(crate::corpus::Source::Public),
            published_at: Some(chrono::NaiveDate::from_ymd_opt(2023, 10, 2).unwrap()),
            raw_text: text.to_string(),
        }
    }

    #[test]
    fn clean_corpus_drops_each_reason_once() {
        let cfg = fixture_cfg();
        let corpus = vec![
            comment("a", "Das ist ein schönes Video und mehr dazu"),
            comment("b", "Das ist ein schönes Video und mehr dazu"), // exact duplicate
            comment("c", "!!! 😀 ???"),                              // empty after cleaning
            comment("d", "the quick brown fox jumps over fences"),   // fails language gate
            comment("e", "kurz gut"),                                // short, skips the gate
        ];
        let (kept, report) = clean_corpus(&corpus, &cfg);
        let kept_ids: Vec<&str> = kept.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(kept_ids, vec!["a", "e"]);
        assert_eq!(report.count(DropReason::Duplicate), 1);
        assert_eq!(report.count(DropReason::EmptyAfterCleaning), 1);
        assert_eq!(report.count(DropReason::Language), 1);
        assert_eq!(report.records[0].comment_id, "b");
    }

    #[test]
    fn all_stopword_comment_counts_as_empty_not_foreign() {
        let cfg = fixture_cfg();
        let corpus = vec![comment("a", "das ist die und das ist")];
        let (kept, report) = clean_corpus(&corpus, &cfg);
        assert!(kept.is_empty());
        assert_eq!(report.count(DropReason::EmptyAfterCleaning), 1);
    }

    #[test]
    fn drop_report_csv_lists_ids_and_reasons() {
        let report = DropReport {
            records: vec![
                DropRecord {
                    comment_id: "x".into(),
                    reason: DropReason::Duplicate,
                },
                DropRecord {
                    comment_id: "y".into(),
                    reason: DropReason::Language,
                },
            ],
        };
        assert_eq!(report.to_csv(), "id,reason\nx,duplicate\ny,language\n");
    }
}
