//! Run configuration: one JSON file naming every input file and knob. All
//! relative paths resolve against the config file's own directory, so a
//! checked-in config works from any working directory. Unknown keys and
//! contradictory settings are configuration errors (exit code 2), not
//! data errors.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::Deserialize;

use crate::augment::GenerationSpec;
use crate::error::{Error, Result};
use crate::features::FeatureConfig;
use crate::linmodels::{LbfgsConfig, LrConfig, RegParam, SvmConfig, TrainAlgo, TrainConfig};
use crate::textprep::{LanguageFilter, PipelineConfig};

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsSection {
    pub comments: PathBuf,
    pub labels: PathBuf,
    pub stopwords: PathBuf,
    pub negations: PathBuf,
    pub lemmas: PathBuf,
    pub replay_store: Option<PathBuf>,
    pub hate_suite: Option<PathBuf>,
    pub field_comments: Option<PathBuf>,
    /// Extra labeled JSONL files (augmentation output) merged into training.
    pub augmented: Vec<PathBuf>,
    pub out_dir: PathBuf,
}

impl Default for PathsSection {
    fn default() -> Self {
        PathsSection {
            comments: PathBuf::new(),
            labels: PathBuf::new(),
            stopwords: PathBuf::new(),
            negations: PathBuf::new(),
            lemmas: PathBuf::new(),
            replay_store: None,
            hate_suite: None,
            field_comments: None,
            augmented: Vec::new(),
            out_dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineSection {
    pub stopword_hit_threshold: f64,
    pub min_tokens: usize,
}

impl Default for PipelineSection {
    fn default() -> Self {
        let f = LanguageFilter::default();
        PipelineSection {
            stopword_hit_threshold: f.stopword_hit_threshold,
            min_tokens: f.min_tokens,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub split_ratio: f64,
    pub k: usize,
    pub seed: u64,
    /// When true, augmented items may land in the test split. Off by
    /// default: the holdout should be scraped comments only.
    pub augmented_in_test: bool,
}

impl Default for EvalSection {
    fn default() -> Self {
        EvalSection {
            split_ratio: 0.8,
            k: 10,
            seed: 0,
            augmented_in_test: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldSection {
    pub range_start: Option<NaiveDate>,
    pub range_end: Option<NaiveDate>,
    pub threshold: f64,
    pub top_n: usize,
}

impl Default for FieldSection {
    fn default() -> Self {
        FieldSection {
            range_start: None,
            range_end: None,
            threshold: 0.5,
            top_n: 25,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AugmentSection {
    pub source_lang: String,
    pub target_lang: String,
    pub round_trip: bool,
    pub generate: Vec<GenerationSpec>,
}

impl Default for AugmentSection {
    fn default() -> Self {
        AugmentSection {
            source_lang: "en".to_string(),
            target_lang: "de".to_string(),
            round_trip: false,
            generate: Vec::new(),
        }
    }
}

// The LR penalty can be given either as sklearn-style c_inverse_reg or as
// the raw penalty weight lambda = 1/c. Exactly one of the two.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct LrSection {
    c_inverse_reg: Option<f64>,
    penalty_lambda: Option<f64>,
    tol: f64,
    max_iter: usize,
    fit_bias: bool,
}

impl Default for LrSection {
    fn default() -> Self {
        let d = LrConfig::default();
        LrSection {
            c_inverse_reg: None,
            penalty_lambda: None,
            tol: d.tol,
            max_iter: d.max_iter,
            fit_bias: d.fit_bias,
        }
    }
}

impl LrSection {
    fn into_config(self, seed: u64) -> Result<LrConfig> {
        let (c_inverse_reg, reg_given_as) = match (self.c_inverse_reg, self.penalty_lambda) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "lr section sets both c_inverse_reg and penalty_lambda; pick one".to_string(),
                ))
            }
            (Some(c), None) => (c, RegParam::CInverse),
            (None, Some(l)) => {
                if !(l > 0.0) {
                    return Err(Error::Config(format!(
                        "penalty_lambda must be positive, got {l}"
                    )));
                }
                (1.0 / l, RegParam::Lambda)
            }
            (None, None) => (LrConfig::default().c_inverse_reg, RegParam::CInverse),
        };
        if !(c_inverse_reg > 0.0) {
            return Err(Error::Config(format!(
                "c_inverse_reg must be positive, got {c_inverse_reg}"
            )));
        }
        Ok(LrConfig {
            c_inverse_reg,
            tol: self.tol,
            max_iter: self.max_iter,
            fit_bias: self.fit_bias,
            seed,
            reg_given_as,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SvmSection {
    c: f64,
    tol: f64,
    max_iter: usize,
}

impl Default for SvmSection {
    fn default() -> Self {
        let d = SvmConfig::default();
        SvmSection {
            c: d.c,
            tol: d.tol,
            max_iter: d.max_iter,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawRunConfig {
    paths: PathsSection,
    pipeline: PipelineSection,
    features: FeatureConfig,
    lr: LrSection,
    svm: SvmSection,
    lbfgs: LbfgsConfig,
    eval: EvalSection,
    field: FieldSection,
    augment: AugmentSection,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub paths: PathsSection,
    pub pipeline: PipelineSection,
    pub features: FeatureConfig,
    pub lr: LrConfig,
    pub svm: SvmConfig,
    pub lbfgs: LbfgsConfig,
    pub eval: EvalSection,
    pub field: FieldSection,
    pub augment: AugmentSection,
}

fn resolve(base: &Path, p: PathBuf) -> PathBuf {
    if p.as_os_str().is_empty() || p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        if !path.exists() {
            return Err(Error::MissingPath {
                what: "config file",
                path: path.to_path_buf(),
            });
        }
        let raw_text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let raw: RawRunConfig = serde_json::from_str(&raw_text)
            .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))?;
        let base = path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .to_path_buf();

        let seed = raw.eval.seed;
        let lr = raw.lr.into_config(seed)?;
        let svm = SvmConfig {
            c: raw.svm.c,
            tol: raw.svm.tol,
            max_iter: raw.svm.max_iter,
            seed,
        };
        if !(raw.eval.split_ratio > 0.0 && raw.eval.split_ratio < 1.0) {
            return Err(Error::Config(format!(
                "eval.split_ratio must be strictly between 0 and 1, got {}",
                raw.eval.split_ratio
            )));
        }
        if raw.eval.k < 2 {
            return Err(Error::Config(format!(
                "eval.k must be at least 2, got {}",
                raw.eval.k
            )));
        }

        let mut paths = raw.paths;
        paths.comments = resolve(&base, paths.comments);
        paths.labels = resolve(&base, paths.labels);
        paths.stopwords = resolve(&base, paths.stopwords);
        paths.negations = resolve(&base, paths.negations);
        paths.lemmas = resolve(&base, paths.lemmas);
        paths.replay_store = paths.replay_store.map(|p| resolve(&base, p));
        paths.hate_suite = paths.hate_suite.map(|p| resolve(&base, p));
        paths.field_comments = paths.field_comments.map(|p| resolve(&base, p));
        paths.augmented = paths
            .augmented
            .into_iter()
            .map(|p| resolve(&base, p))
            .collect();
        paths.out_dir = resolve(&base, paths.out_dir);

        Ok(RunConfig {
            paths,
            pipeline: raw.pipeline,
            features: raw.features,
            lr,
            svm,
            lbfgs: raw.lbfgs,
            eval: raw.eval,
            field: raw.field,
            augment: raw.augment,
        })
    }

    /// CLI flags win over file values; the single run seed feeds every
    /// seeded component.
    pub fn override_seed(&mut self, seed: u64) {
        self.eval.seed = seed;
        self.lr.seed = seed;
        self.svm.seed = seed;
    }

    pub fn override_threshold(&mut self, threshold: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::Parameter(format!(
                "threshold must lie in [0, 1], got {threshold}"
            )));
        }
        self.field.threshold = threshold;
        Ok(())
    }

    pub fn require_file(path: &Path, what: &'static str) -> Result<()> {
        if path.as_os_str().is_empty() || !path.exists() {
            return Err(Error::MissingPath {
                what,
                path: path.to_path_buf(),
            });
        }
        Ok(())
    }

    /// Builds the text pipeline from the three term files; they must exist.
    pub fn pipeline_config(&self) -> Result<PipelineConfig> {
        Self::require_file(&self.paths.stopwords, "stopword list")?;
        Self::require_file(&self.paths.negations, "negation whitelist")?;
        Self::require_file(&self.paths.lemmas, "lemma dictionary")?;
        let mut cfg = PipelineConfig::from_files(
            &self.paths.stopwords,
            &self.paths.negations,
            &self.paths.lemmas,
        )?;
        cfg.language_filter = LanguageFilter {
            stopword_hit_threshold: self.pipeline.stopword_hit_threshold,
            min_tokens: self.pipeline.min_tokens,
        };
        Ok(cfg)
    }

    pub fn train_config(&self, algo: TrainAlgo) -> TrainConfig {
        TrainConfig {
            algo,
            features: self.features.clone(),
            lr: self.lr.clone(),
            svm: self.svm.clone(),
            lbfgs: self.lbfgs.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("run.json");
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        path
    }

    fn tmpdir(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("stimmung-config-{name}"));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn defaults_fill_missing_sections_and_paths_resolve_relative() {
        let dir = tmpdir("defaults");
        let path = write_config(
            &dir,
            r#"{ "paths": { "comments": "data/c.jsonl" }, "eval": { "seed": 9 } }"#,
        );
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.eval.split_ratio, 0.8);
        assert_eq!(cfg.eval.k, 10);
        assert_eq!(cfg.lr.c_inverse_reg, 0.1);
        assert_eq!(cfg.lr.seed, 9);
        assert_eq!(cfg.svm.seed, 9);
        assert_eq!(cfg.field.threshold, 0.5);
        assert_eq!(cfg.paths.comments, dir.join("data/c.jsonl"));
        assert_eq!(cfg.paths.out_dir, dir.join("out"));
    }

    #[test]
    fn penalty_lambda_is_the_reciprocal_of_c() {
        let dir = tmpdir("lambda");
        let path = write_config(&dir, r#"{ "lr": { "penalty_lambda": 4.0 } }"#);
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.lr.c_inverse_reg, 0.25);
        assert_eq!(cfg.lr.reg_given_as, RegParam::Lambda);

        let path = write_config(
            &dir,
            r#"{ "lr": { "penalty_lambda": 4.0, "c_inverse_reg": 0.5 } }"#,
        );
        let err = RunConfig::load(&path).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_config_errors() {
        let dir = tmpdir("unknown");
        let path = write_config(&dir, r#"{ "eval": { "spleet_ratio": 0.8 } }"#);
        let err = RunConfig::load(&path).unwrap_err();
        assert_eq!(err.exit_code(), 2);

        let path = write_config(&dir, r#"{ "eval": { "split_ratio": 1.5 } }"#);
        assert_eq!(RunConfig::load(&path).unwrap_err().exit_code(), 2);

        let path = write_config(&dir, r#"{ "eval": { "k": 1 } }"#);
        assert_eq!(RunConfig::load(&path).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn missing_config_file_names_the_path() {
        let err = RunConfig::load(Path::new("/nonexistent/run.json")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("/nonexistent/run.json"));
    }

    #[test]
    fn seed_override_propagates_to_every_component() {
        let dir = tmpdir("seed");
        let path = write_config(&dir, r#"{ "eval": { "seed": 1 } }"#);
        let mut cfg = RunConfig::load(&path).unwrap();
        cfg.override_seed(99);
        assert_eq!(cfg.eval.seed, 99);
        assert_eq!(cfg.lr.seed, 99);
        assert_eq!(cfg.svm.seed, 99);
    }
}
