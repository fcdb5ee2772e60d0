//! Corpus augmentation through external services: translating an English
//! hate-speech test suite into German and generating labeled stance
//! comments. Both run behind client traits with a replay mode, so tests
//! and CI never need credentials: a JSONL store maps canonical request
//! hashes to recorded responses, and a missing entry is a hard error
//! naming the hash.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::corpus::{Comment, HateLabel, LabeledComment, Origin, SentimentLabel};
use crate::error::{Error, Result};
use crate::textprep::{normalize_text, PipelineConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClientMode {
    Live,
    Replay,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LangPair {
    pub source: String,
    pub target: String,
}

pub trait TranslationClient {
    fn translate(
        &self,
        texts: &[String],
        source_lang: &str,
        target_lang: &str,
    ) -> Result<Vec<String>>;
    fn mode(&self) -> ClientMode;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSpec {
    pub template: String,
    pub label: SentimentLabel,
    pub count: usize,
}

pub trait GenerationClient {
    /// Returns exactly `spec.count` items carrying the requested label.
    fn generate(&self, spec: &GenerationSpec) -> Result<Vec<LabeledComment>>;
    fn mode(&self) -> ClientMode;
}

/// Collapses whitespace runs and trims, so cosmetic edits to fixture
/// requests do not change their hash.
pub fn canonical_text(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Canonical request hash: operation name plus the JSON payload with
/// sorted keys. Payload text fields must already be canonicalized.
pub fn request_hash(operation: &str, payload: &Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(operation.as_bytes());
    hasher.update([0u8]);
    hasher.update(payload.to_string().as_bytes());
    hex::encode(hasher.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayRecord {
    pub hash: String,
    pub operation: String,
    pub request: Value,
    pub response: Value,
}

/// On-disk JSONL of recorded request/response pairs, keyed by request
/// hash. Read-only during a replay run; `insert` exists for recording
/// fixtures.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReplayStore {
    records: BTreeMap<String, ReplayRecord>,
}

impl ReplayStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut records = BTreeMap::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let record: ReplayRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
            if records.insert(record.hash.clone(), record).is_some() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    message: "duplicate request hash".to_string(),
                });
            }
        }
        Ok(ReplayStore { records })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        for record in self.records.values() {
            let line = serde_json::to_string(record).expect("replay record serializes");
            writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }

    pub fn lookup(&self, hash: &str) -> Option<&Value> {
        self.records.get(hash).map(|r| &r.response)
    }

    pub fn insert(&mut self, operation: &str, request: Value, response: Value) -> String {
        let hash = request_hash(operation, &request);
        self.records.insert(
            hash.clone(),
            ReplayRecord {
                hash: hash.clone(),
                operation: operation.to_string(),
                request,
                response,
            },
        );
        hash
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Canonical request payload for one translation call. Recorders must build
/// payloads through this so their hashes match replay lookups.
pub fn translate_payload(text: &str, source_lang: &str, target_lang: &str) -> Value {
    json!({
        "source_lang": source_lang,
        "target_lang": target_lang,
        "text": canonical_text(text),
    })
}

/// Canonical request payload for one generation call, see [`translate_payload`].
pub fn generate_payload(spec: &GenerationSpec) -> Value {
    json!({
        "count": spec.count,
        "label": spec.label.name(),
        "template": canonical_text(&spec.template),
    })
}

pub struct ReplayTranslationClient<'a> {
    store: &'a ReplayStore,
}

impl<'a> ReplayTranslationClient<'a> {
    pub fn new(store: &'a ReplayStore) -> Self {
        ReplayTranslationClient { store }
    }
}

impl TranslationClient for ReplayTranslationClient<'_> {
    fn translate(
        &self,
        texts: &[String],
        source_lang: &str,
        target_lang: &str,
    ) -> Result<Vec<String>> {
        let mut out = Vec::with_capacity(texts.len());
        for text in texts {
            let payload = translate_payload(text, source_lang, target_lang);
            let hash = request_hash("translate", &payload);
            let response = self
                .store
                .lookup(&hash)
                .ok_or_else(|| Error::ReplayMiss(hash.clone()))?;
            let translated = response
                .get("text")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Data(format!("replay response {hash} has no text field")))?;
            out.push(translated.to_string());
        }
        Ok(out)
    }

    fn mode(&self) -> ClientMode {
        ClientMode::Replay
    }
}

pub struct ReplayGenerationClient<'a> {
    store: &'a ReplayStore,
}

impl<'a> ReplayGenerationClient<'a> {
    pub fn new(store: &'a ReplayStore) -> Self {
        ReplayGenerationClient { store }
    }
}

impl GenerationClient for ReplayGenerationClient<'_> {
    fn generate(&self, spec: &GenerationSpec) -> Result<Vec<LabeledComment>> {
        let payload = generate_payload(spec);
        let hash = request_hash("generate", &payload);
        let response = self
            .store
            .lookup(&hash)
            .ok_or_else(|| Error::ReplayMiss(hash.clone()))?;
        let texts = response
            .get("texts")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Data(format!("replay response {hash} has no texts array")))?;
        if texts.len() != spec.count {
            return Err(Error::Data(format!(
                "replay response {hash} holds {} texts, spec asked for {}",
                texts.len(),
                spec.count
            )));
        }
        let mut out = Vec::with_capacity(spec.count);
        for (i, t) in texts.iter().enumerate() {
            let raw = t.as_str().ok_or_else(|| {
                Error::Data(format!("replay response {hash} text {i} is not a string"))
            })?;
            out.push(LabeledComment {
                comment: Comment {
                    id: format!("gen-{i:06}"),
                    video_id: None,
                    source: None,
                    published_at: None,
                    raw_text: raw.to_string(),
                },
                hate: None,
                sentiment: Some(spec.label),
                origin: Origin::Generated,
            });
        }
        Ok(out)
    }

    fn mode(&self) -> ClientMode {
        ClientMode::Replay
    }
}

pub const TRANSLATE_KEY_VAR: &str = "STIMMUNG_TRANSLATE_API_KEY";
pub const GENERATE_KEY_VAR: &str = "STIMMUNG_GENERATE_API_KEY";

/// Credential-validated stub for the hosted translation service. The
/// actual transport is deliberately not wired up here; runs that reach it
/// are told to record a replay store instead.
pub struct LiveTranslationClient {
    _api_key: String,
}

impl LiveTranslationClient {
    pub fn from_env() -> Result<Self> {
        match std::env::var(TRANSLATE_KEY_VAR) {
            Ok(key) if !key.is_empty() => Ok(LiveTranslationClient { _api_key: key }),
            _ => Err(Error::Config(format!(
                "translation credentials missing: set {TRANSLATE_KEY_VAR} or configure a replay store"
            ))),
        }
    }
}

impl TranslationClient for LiveTranslationClient {
    fn translate(&self, _: &[String], _: &str, _: &str) -> Result<Vec<String>> {
        Err(Error::Unsupported(
            "live translation transport is not bundled; record a replay store and rerun in replay mode"
                .to_string(),
        ))
    }

    fn mode(&self) -> ClientMode {
        ClientMode::Live
    }
}

pub struct LiveGenerationClient {
    _api_key: String,
}

impl LiveGenerationClient {
    pub fn from_env() -> Result<Self> {
        match std::env::var(GENERATE_KEY_VAR) {
            Ok(key) if !key.is_empty() => Ok(LiveGenerationClient { _api_key: key }),
            _ => Err(Error::Config(format!(
                "generation credentials missing: set {GENERATE_KEY_VAR} or configure a replay store"
            ))),
        }
    }
}

impl GenerationClient for LiveGenerationClient {
    fn generate(&self, _: &GenerationSpec) -> Result<Vec<LabeledComment>> {
        Err(Error::Unsupported(
            "live generation transport is not bundled; record a replay store and rerun in replay mode"
                .to_string(),
        ))
    }

    fn mode(&self) -> ClientMode {
        ClientMode::Live
    }
}

/// Translates an annotated suite into the target language, one directed
/// pass. Despite the usual meaning of back-translation, the adaptation is
/// source→target once; set `round_trip` to bounce through the target
/// language and back. Every output inherits its source item's hate label.
pub fn back_translate_corpus(
    items: &[(String, HateLabel)],
    pivot: &LangPair,
    round_trip: bool,
    client: &dyn TranslationClient,
) -> Result<Vec<LabeledComment>> {
    let texts: Vec<String> = items.iter().map(|(t, _)| t.clone()).collect();
    let mut translated = client.translate(&texts, &pivot.source, &pivot.target)?;
    if translated.len() != texts.len() {
        return Err(Error::Data(format!(
            "translation returned {} texts for {} inputs",
            translated.len(),
            texts.len()
        )));
    }
    if round_trip {
        translated = client.translate(&translated, &pivot.target, &pivot.source)?;
        if translated.len() != texts.len() {
            return Err(Error::Data(format!(
                "round-trip translation returned {} texts for {} inputs",
                translated.len(),
                texts.len()
            )));
        }
    }
    Ok(translated
        .into_iter()
        .zip(items)
        .enumerate()
        .map(|(i, (text, (_, label)))| LabeledComment {
            comment: Comment {
                id: format!("bt-{i:06}"),
                video_id: None,
                source: None,
                published_at: None,
                raw_text: text,
            },
            hate: Some(*label),
            sentiment: None,
            origin: Origin::BackTranslated,
        })
        .collect())
}

/// Generates `spec.count` labeled comments and normalizes their text
/// through the cleaning pipeline before they are stored. `id_base` keeps
/// ids disjoint across multiple generation calls in one run.
pub fn generate_labeled(
    spec: &GenerationSpec,
    client: &dyn GenerationClient,
    pipeline: &PipelineConfig,
    id_base: usize,
) -> Result<Vec<LabeledComment>> {
    if spec.count == 0 {
        return Err(Error::Parameter(
            "generation count must be at least 1".to_string(),
        ));
    }
    let items = client.generate(spec)?;
    if items.len() != spec.count {
        return Err(Error::Data(format!(
            "generation returned {} items, spec asked for {}",
            items.len(),
            spec.count
        )));
    }
    Ok(items
        .into_iter()
        .enumerate()
        .map(|(i, mut item)| {
            item.comment.id = format!("gen-{:06}", id_base + i);
            item.comment.raw_text = normalize_text(&item.comment.raw_text, pipeline);
            item.sentiment = Some(spec.label);
            item.hate = None;
            item.origin = Origin::Generated;
            item
        })
        .collect())
}
