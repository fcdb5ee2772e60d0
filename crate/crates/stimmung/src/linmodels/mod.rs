//! Linear classifiers over sparse text features: L2-regularized logistic
//! regression fit by L-BFGS, linear SVM fit by dual coordinate descent, and
//! a one-vs-rest wrapper for the ternary stance task. Trained models
//! serialize to a single JSON artifact with the vocabulary embedded, and a
//! loaded artifact scores bit-identically to the model it was saved from.

pub mod lbfgs;
pub mod svm;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{HateLabel, SentimentLabel};
use crate::error::{Error, Result};
use crate::features::{FeatureConfig, FeatureMode, SparseVector, Vocabulary};
use crate::textprep::PipelineConfig;

pub use lbfgs::{lbfgs_minimize, LbfgsConfig, LbfgsResult};
pub use svm::{dual_objective, primal_objective, solve_dual, DualSolution, SvmConfig};

pub const ARTIFACT_FORMAT_VERSION: u32 = 1;

/// Which key the run config used to express the LR penalty. `lambda` means
/// the raw penalty weight 1/c was given; the stored `c_inverse_reg` is its
/// reciprocal either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegParam {
    #[default]
    CInverse,
    Lambda,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrConfig {
    /// Inverse regularization strength a la sklearn's C; smaller = stronger.
    pub c_inverse_reg: f64,
    /// Gradient infinity-norm tolerance, forwarded to the optimizer.
    pub tol: f64,
    pub max_iter: usize,
    pub fit_bias: bool,
    pub seed: u64,
    pub reg_given_as: RegParam,
}

impl Default for LrConfig {
    fn default() -> Self {
        LrConfig {
            c_inverse_reg: 0.1,
            tol: 1e-6,
            max_iter: 1000,
            fit_bias: true,
            seed: 0,
            reg_given_as: RegParam::CInverse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainAlgo {
    Lr,
    Svm,
}

impl TrainAlgo {
    pub fn name(self) -> &'static str {
        match self {
            TrainAlgo::Lr => "lr",
            TrainAlgo::Svm => "svm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Hate,
    Sentiment,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Hate => "hate",
            TaskKind::Sentiment => "sentiment",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTask {
    Hate,
    SentimentOvrComponent,
}

/// A trained binary linear scorer. Weights are dense over the vocabulary
/// dimension; the bias is separate and unregularized for LR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub positive_class: String,
    pub task: ModelTask,
    pub algo: TrainAlgo,
    pub feature_mode: FeatureMode,
    pub converged: bool,
    pub config_fingerprint: String,
}

/// One binary component per sentiment class, in fixed class order
/// (neutral, israel, palestine). All components share vocabulary dimension
/// and feature mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvrModel {
    pub components: Vec<LinearModel>,
}

impl OvrModel {
    pub fn new(components: Vec<LinearModel>) -> Result<Self> {
        if components.len() != SentimentLabel::ALL.len() {
            return Err(Error::Data(format!(
                "one-vs-rest model needs exactly {} components, got {}",
                SentimentLabel::ALL.len(),
                components.len()
            )));
        }
        for (component, label) in components.iter().zip(SentimentLabel::ALL) {
            if component.positive_class != label.name() {
                return Err(Error::Data(format!(
                    "component order broken: expected {:?}, got {:?}",
                    label.name(),
                    component.positive_class
                )));
            }
        }
        let dim = components[0].weights.len();
        let mode = components[0].feature_mode;
        for c in &components[1..] {
            if c.weights.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.weights.len(),
                });
            }
            if c.feature_mode != mode {
                return Err(Error::Data(
                    "one-vs-rest components disagree on feature_mode".to_string(),
                ));
            }
        }
        Ok(OvrModel { components })
    }

    pub fn converged(&self) -> bool {
        self.components.iter().all(|c| c.converged)
    }

    pub fn feature_mode(&self) -> FeatureMode {
        self.components[0].feature_mode
    }
}

/// Everything a training run is parameterized by, for fingerprinting and
/// the artifact's config echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub algo: TrainAlgo,
    pub features: FeatureConfig,
    pub lr: LrConfig,
    pub svm: SvmConfig,
    pub lbfgs: LbfgsConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            algo: TrainAlgo::Lr,
            features: FeatureConfig::default(),
            lr: LrConfig::default(),
            svm: SvmConfig::default(),
            lbfgs: LbfgsConfig::default(),
        }
    }
}

fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part);
        hasher.update([0u8]); // separator so concatenations cannot collide
    }
    hex::encode(hasher.finalize())
}

impl TrainConfig {
    pub fn config_fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("train config serializes");
        sha256_hex(&[json.as_bytes()])
    }
}

/// Hash tying a model artifact to the exact text pipeline + featurization
/// that produced its vocabulary. Field scoring refuses on mismatch.
pub fn pipeline_fingerprint(pipeline: &PipelineConfig, features: &FeatureConfig) -> String {
    let p = serde_json::to_string(pipeline).expect("pipeline config serializes");
    let f = serde_json::to_string(features).expect("feature config serializes");
    sha256_hex(&[p.as_bytes(), f.as_bytes()])
}

/// Hash of the sorted training ids, the seed and the full train config;
/// identifies what a model was fit on.
pub fn train_fingerprint(train_ids: &[String], seed: u64, tc: &TrainConfig) -> String {
    let mut ids: Vec<&str> = train_ids.iter().map(String::as_str).collect();
    ids.sort_unstable();
    let joined = ids.join("\n");
    let tc_json = serde_json::to_string(tc).expect("train config serializes");
    sha256_hex(&[joined.as_bytes(), &seed.to_le_bytes(), tc_json.as_bytes()])
}

/// Numerically stable logistic function; safe for |z| far beyond 1e3.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

// ln(1 + exp(-t)) without overflow on either tail.
fn log1p_exp_neg(t: f64) -> f64 {
    if t > 0.0 {
        (-t).exp().ln_1p()
    } else {
        -t + t.exp().ln_1p()
    }
}

/// Value and gradient of the LR objective at `wb`:
/// L(w, b) = ||w||^2 / (2c) + sum_i ln(1 + exp(-y_i (w.x_i + b))).
/// `wb` is the weight vector with the bias appended when `fit_bias`; the
/// bias carries no penalty.
pub fn logreg_objective(
    x: &[SparseVector],
    y: &[f64],
    c_inverse_reg: f64,
    fit_bias: bool,
    wb: &[f64],
) -> (f64, Vec<f64>) {
    let dim = if fit_bias { wb.len() - 1 } else { wb.len() };
    let w = &wb[..dim];
    let b = if fit_bias { wb[dim] } else { 0.0 };

    let mut f = w.iter().map(|v| v * v).sum::<f64>() / (2.0 * c_inverse_reg);
    let mut grad = vec![0.0; wb.len()];
    for (gi, wi) in grad.iter_mut().zip(w) {
        *gi = wi / c_inverse_reg;
    }
    for (xi, &yi) in x.iter().zip(y) {
        let z = xi.dot_dense(w) + b;
        let t = yi * z;
        f += log1p_exp_neg(t);
        // d/dz ln(1 + exp(-y z)) = -y * sigmoid(-y z)
        let coeff = -yi * sigmoid(-t);
        for (j, v) in xi.iter() {
            grad[j] += coeff * v;
        }
        if fit_bias {
            grad[dim] += coeff;
        }
    }
    (f, grad)
}

fn check_binary_input(x: &[SparseVector], y: &[f64]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::Data(format!(
            "need at least 2 training rows, got {}",
            x.len()
        )));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::Data("labels must be +1 or -1".to_string()));
    }
    if !y.contains(&1.0) {
        return Err(Error::MissingClass("+1".to_string()));
    }
    if !y.iter().any(|&v| v == -1.0) {
        return Err(Error::MissingClass("-1".to_string()));
    }
    let dim = x[0].dimension();
    for xi in x {
        if xi.dimension() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: xi.dimension(),
            });
        }
    }
    Ok(dim)
}

/// Identity of a model being trained; everything the trainers cannot infer
/// from the data itself.
#[derive(Debug, Clone)]
pub struct ModelMeta {
    pub task: ModelTask,
    pub positive_class: String,
    pub feature_mode: FeatureMode,
    pub config_fingerprint: String,
}

/// Fits L2-regularized logistic regression by L-BFGS. The optimizer runs
/// with the LR config's tolerance and iteration cap; remaining line-search
/// knobs come from `lbfgs_cfg`.
pub fn train_logreg(
    x: &[SparseVector],
    y: &[f64],
    lr_cfg: &LrConfig,
    lbfgs_cfg: &LbfgsConfig,
    meta: ModelMeta,
) -> Result<LinearModel> {
    if !(lr_cfg.c_inverse_reg > 0.0) {
        return Err(Error::Parameter(format!(
            "c_inverse_reg must be positive, got {}",
            lr_cfg.c_inverse_reg
        )));
    }
    if !(lr_cfg.tol > 0.0) {
        return Err(Error::Parameter(format!(
            "tol must be positive, got {}",
            lr_cfg.tol
        )));
    }
    let dim = check_binary_input(x, y)?;
    let n_params = if lr_cfg.fit_bias { dim + 1 } else { dim };
    let x0 = vec![0.0; n_params];
    let cfg = LbfgsConfig {
        tol: lr_cfg.tol,
        max_iter: lr_cfg.max_iter,
        ..lbfgs_cfg.clone()
    };
    let objective = |wb: &[f64]| logreg_objective(x, y, lr_cfg.c_inverse_reg, lr_cfg.fit_bias, wb);
    let result = lbfgs_minimize(objective, &x0, &cfg)?;
    let (weights, bias) = if lr_cfg.fit_bias {
        (result.x[..dim].to_vec(), result.x[dim])
    } else {
        (result.x, 0.0)
    };
    Ok(LinearModel {
        weights,
        bias,
        positive_class: meta.positive_class,
        task: meta.task,
        algo: TrainAlgo::Lr,
        feature_mode: meta.feature_mode,
        converged: result.converged,
        config_fingerprint: meta.config_fingerprint,
    })
}

/// Fits a linear SVM by dual coordinate descent.
pub fn train_linear_svm(
    x: &[SparseVector],
    y: &[f64],
    svm_cfg: &SvmConfig,
    meta: ModelMeta,
) -> Result<LinearModel> {
    check_binary_input(x, y)?;
    let sol = solve_dual(x, y, svm_cfg)?;
    Ok(LinearModel {
        weights: sol.weights,
        bias: sol.bias,
        positive_class: meta.positive_class,
        task: meta.task,
        algo: TrainAlgo::Svm,
        feature_mode: meta.feature_mode,
        converged: sol.converged,
        config_fingerprint: meta.config_fingerprint,
    })
}

/// Trains the binary hate classifier with whichever algorithm the config
/// selects. The positive class is always "hate".
pub fn train_hate(x: &[SparseVector], y: &[HateLabel], tc: &TrainConfig) -> Result<LinearModel> {
    let signed: Vec<f64> = y.iter().map(|l| l.signed()).collect();
    let meta = ModelMeta {
        task: ModelTask::Hate,
        positive_class: "hate".to_string(),
        feature_mode: tc.features.mode,
        config_fingerprint: tc.config_fingerprint(),
    };
    match tc.algo {
        TrainAlgo::Lr => train_logreg(x, &signed, &tc.lr, &tc.lbfgs, meta),
        TrainAlgo::Svm => train_linear_svm(x, &signed, &tc.svm, meta),
    }
}

/// One-vs-rest over the three sentiment classes, all sharing the feature
/// space of `x`. Errors name the missing class if one has no examples.
pub fn train_sentiment(
    x: &[SparseVector],
    y: &[SentimentLabel],
    tc: &TrainConfig,
) -> Result<OvrModel> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    for class in SentimentLabel::ALL {
        if !y.contains(&class) {
            return Err(Error::MissingClass(class.name().to_string()));
        }
    }
    let fingerprint = tc.config_fingerprint();
    let mut components = Vec::with_capacity(3);
    for class in SentimentLabel::ALL {
        let signed: Vec<f64> = y
            .iter()
            .map(|&l| if l == class { 1.0 } else { -1.0 })
            .collect();
        let meta = ModelMeta {
            task: ModelTask::SentimentOvrComponent,
            positive_class: class.name().to_string(),
            feature_mode: tc.features.mode,
            config_fingerprint: fingerprint.clone(),
        };
        let component = match tc.algo {
            TrainAlgo::Lr => train_logreg(x, &signed, &tc.lr, &tc.lbfgs, meta)?,
            TrainAlgo::Svm => train_linear_svm(x, &signed, &tc.svm, meta)?,
        };
        components.push(component);
    }
    OvrModel::new(components)
}

pub fn decision_score(model: &LinearModel, x: &SparseVector) -> Result<f64> {
    if x.dimension() != model.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: model.weights.len(),
            found: x.dimension(),
        });
    }
    Ok(x.dot_dense(&model.weights) + model.bias)
}

/// Positive-class probability via the logistic link. Only meaningful for
/// LR models; SVM scores are not calibrated, so this refuses them.
pub fn predict_proba(model: &LinearModel, x: &SparseVector) -> Result<f64> {
    if model.algo == TrainAlgo::Svm {
        return Err(Error::Unsupported(
            "svm models expose decision_score only; probabilities are not calibrated".to_string(),
        ));
    }
    Ok(sigmoid(decision_score(model, x)?))
}

/// Binary decision: LR compares probability to the threshold (inclusive);
/// SVM takes the sign of the decision score.
pub fn predict_binary(model: &LinearModel, x: &SparseVector, threshold: f64) -> Result<bool> {
    match model.algo {
        TrainAlgo::Lr => Ok(predict_proba(model, x)? >= threshold),
        TrainAlgo::Svm => Ok(decision_score(model, x)? >= 0.0),
    }
}

/// Per-class decision scores in fixed class order.
pub fn ovr_scores(model: &OvrModel, x: &SparseVector) -> Result<Vec<f64>> {
    model
        .components
        .iter()
        .map(|c| decision_score(c, x))
        .collect()
}

/// Argmax over component scores; ties go to the earlier class in the fixed
/// order neutral < israel < palestine.
pub fn predict_ovr(model: &OvrModel, x: &SparseVector) -> Result<SentimentLabel> {
    let scores = ovr_scores(model, x)?;
    let mut best = SentimentLabel::ALL[0];
    let mut best_score = scores[0];
    for (label, &score) in SentimentLabel::ALL.iter().zip(&scores).skip(1) {
        if score > best_score {
            best = *label;
            best_score = score;
        }
    }
    Ok(best)
}

pub fn default_c_grid() -> Vec<f64> {
    vec![0.01, 0.05, 0.1, 0.5, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CTuneEntry {
    pub c: f64,
    pub fold_macro_f1: Vec<f64>,
    pub mean_macro_f1: f64,
    pub std_macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CTuneReport {
    pub format_version: u32,
    pub seed: u64,
    pub k: usize,
    pub entries: Vec<CTuneEntry>,
    pub best_c: f64,
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Parameter("c grid must be nonempty".to_string()));
    }
    for w in grid.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Parameter(
                "c grid must be strictly ascending".to_string(),
            ));
        }
    }
    if grid.iter().any(|&c| c <= 0.0) {
        return Err(Error::Parameter(
            "c grid values must be positive".to_string(),
        ));
    }
    Ok(())
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

// Shared sweep driver: stratified folds over class names, one SVM per
// (c, fold), macro-F1 on the held-out fold via the eval module.
#[allow(clippy::too_many_arguments)]
fn sweep_c(
    x: &[SparseVector],
    class_of: &[String],
    class_order: &[String],
    to_signed: &dyn Fn(&str, &str) -> f64,
    grid: &[f64],
    k: usize,
    seed: u64,
    base: &SvmConfig,
) -> Result<CTuneReport> {
    validate_grid(grid)?;
    if k < 2 {
        return Err(Error::Parameter(format!("k must be at least 2, got {k}")));
    }
    if x.len() < k {
        return Err(Error::Stratification(format!(
            "cannot spread {} row(s) over {k} folds",
            x.len()
        )));
    }
    let mut strata: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (idx, class) in class_of.iter().enumerate() {
        strata.entry(class.clone()).or_default().push(idx);
    }
    let fold_of = crate::corpus::assign_folds_by_class(&strata, k, seed);

    let mut entries = Vec::with_capacity(grid.len());
    for &c in grid {
        let cfg = SvmConfig { c, ..base.clone() };
        let mut fold_scores = Vec::with_capacity(k);
        for fold in 0..k {
            // one binary problem per positive class (single problem for the
            // binary task, three for one-vs-rest)
            let mut y_true: Vec<String> = Vec::new();
            let mut y_pred: Vec<String> = Vec::new();
            if class_order.len() == 2 {
                let train: Vec<usize> = (0..x.len()).filter(|i| fold_of[*i] != fold).collect();
                let test: Vec<usize> = (0..x.len()).filter(|i| fold_of[*i] == fold).collect();
                let xt: Vec<SparseVector> = train.iter().map(|&i| x[i].clone()).collect();
                let yt: Vec<f64> = train
                    .iter()
                    .map(|&i| to_signed(&class_of[i], &class_order[1]))
                    .collect();
                let sol = solve_dual(&xt, &yt, &cfg)
                    .map_err(|e| Error::Data(format!("fold {fold}, c = {c}: {e}")))?;
                for &i in &test {
                    let score = x[i].dot_dense(&sol.weights) + sol.bias;
                    y_pred.push(if score >= 0.0 {
                        class_order[1].clone()
                    } else {
                        class_order[0].clone()
                    });
                    y_true.push(class_of[i].clone());
                }
            } else {
                // one-vs-rest: argmax over per-class scores
                let train: Vec<usize> = (0..x.len()).filter(|i| fold_of[*i] != fold).collect();
                let test: Vec<usize> = (0..x.len()).filter(|i| fold_of[*i] == fold).collect();
                let xt: Vec<SparseVector> = train.iter().map(|&i| x[i].clone()).collect();
                let mut score_rows = vec![Vec::with_capacity(class_order.len()); test.len()];
                for class in class_order {
                    let yt: Vec<f64> = train
                        .iter()
                        .map(|&i| to_signed(&class_of[i], class))
                        .collect();
                    let sol = solve_dual(&xt, &yt, &cfg).map_err(|e| {
                        Error::Data(format!("fold {fold}, c = {c}, class {class}: {e}"))
                    })?;
                    for (row, &i) in score_rows.iter_mut().zip(&test) {
                        row.push(x[i].dot_dense(&sol.weights) + sol.bias);
                    }
                }
                for (row, &i) in score_rows.iter().zip(&test) {
                    let mut best = 0usize;
                    for (j, &s) in row.iter().enumerate().skip(1) {
                        if s > row[best] {
                            best = j;
                        }
                    }
                    y_pred.push(class_order[best].clone());
                    y_true.push(class_of[i].clone());
                }
            }
            let cm = crate::eval::confusion_matrix(&y_true, &y_pred, class_order)?;
            let summary = crate::eval::metrics_from_cm(&cm)?;
            fold_scores.push(summary.macro_f1);
        }
        let (mean, std) = mean_std(&fold_scores);
        entries.push(CTuneEntry {
            c,
            fold_macro_f1: fold_scores,
            mean_macro_f1: mean,
            std_macro_f1: std,
        });
    }

    // best = max mean; ties keep the smaller c (grid is ascending)
    let mut best_c = entries[0].c;
    let mut best_mean = entries[0].mean_macro_f1;
    for entry in &entries[1..] {
        if entry.mean_macro_f1 > best_mean {
            best_mean = entry.mean_macro_f1;
            best_c = entry.c;
        }
    }
    Ok(CTuneReport {
        format_version: ARTIFACT_FORMAT_VERSION,
        seed,
        k,
        entries,
        best_c,
    })
}

/// Sweeps the SVM cost over `grid` with stratified k-fold CV on the binary
/// hate task; best c maximizes mean macro-F1, ties prefer the smaller c.
pub fn tune_svm_c(
    x: &[SparseVector],
    y: &[HateLabel],
    grid: &[f64],
    k: usize,
    seed: u64,
    base: &SvmConfig,
) -> Result<CTuneReport> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let class_of: Vec<String> = y.iter().map(|l| l.name().to_string()).collect();
    let class_order = vec!["no_hate".to_string(), "hate".to_string()];
    let to_signed = |class: &str, positive: &str| if class == positive { 1.0 } else { -1.0 };
    sweep_c(x, &class_of, &class_order, &to_signed, grid, k, seed, base)
}

/// Same sweep for the ternary task; per-fold score is the macro-F1 of the
/// one-vs-rest argmax predictions.
pub fn tune_svm_c_ovr(
    x: &[SparseVector],
    y: &[SentimentLabel],
    grid: &[f64],
    k: usize,
    seed: u64,
    base: &SvmConfig,
) -> Result<CTuneReport> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let class_of: Vec<String> = y.iter().map(|l| l.name().to_string()).collect();
    let class_order: Vec<String> = SentimentLabel::ALL
        .iter()
        .map(|l| l.name().to_string())
        .collect();
    let to_signed = |class: &str, positive: &str| if class == positive { 1.0 } else { -1.0 };
    sweep_c(x, &class_of, &class_order, &to_signed, grid, k, seed, base)
}

/// One weight vector of a saved model. For the binary task there is exactly
/// one; for sentiment there are three in fixed class order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComponent {
    pub positive_class: String,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub converged: bool,
}

/// The on-disk model: vocabulary, weights and the full config echo in one
/// JSON document. Loading and saving round-trips bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format_version: u32,
    pub task: TaskKind,
    pub algo: TrainAlgo,
    pub feature_mode: FeatureMode,
    pub seed: u64,
    pub converged: bool,
    pub pipeline_fingerprint: String,
    pub train_fingerprint: String,
    pub config_fingerprint: String,
    pub train_config: TrainConfig,
    pub vocabulary: Vocabulary,
    pub components: Vec<ModelComponent>,
}

impl ModelArtifact {
    pub fn from_hate_model(
        model: &LinearModel,
        vocabulary: Vocabulary,
        tc: &TrainConfig,
        seed: u64,
        pipeline_fp: String,
        train_fp: String,
    ) -> Self {
        ModelArtifact {
            format_version: ARTIFACT_FORMAT_VERSION,
            task: TaskKind::Hate,
            algo: model.algo,
            feature_mode: model.feature_mode,
            seed,
            converged: model.converged,
            pipeline_fingerprint: pipeline_fp,
            train_fingerprint: train_fp,
            config_fingerprint: model.config_fingerprint.clone(),
            train_config: tc.clone(),
            vocabulary,
            components: vec![ModelComponent {
                positive_class: model.positive_class.clone(),
                weights: model.weights.clone(),
                bias: model.bias,
                converged: model.converged,
            }],
        }
    }

    pub fn from_sentiment_model(
        model: &OvrModel,
        vocabulary: Vocabulary,
        tc: &TrainConfig,
        seed: u64,
        pipeline_fp: String,
        train_fp: String,
    ) -> Self {
        ModelArtifact {
            format_version: ARTIFACT_FORMAT_VERSION,
            task: TaskKind::Sentiment,
            algo: model.components[0].algo,
            feature_mode: model.feature_mode(),
            seed,
            converged: model.converged(),
            pipeline_fingerprint: pipeline_fp,
            train_fingerprint: train_fp,
            config_fingerprint: model.components[0].config_fingerprint.clone(),
            train_config: tc.clone(),
            vocabulary,
            components: model
                .components
                .iter()
                .map(|c| ModelComponent {
                    positive_class: c.positive_class.clone(),
                    weights: c.weights.clone(),
                    bias: c.bias,
                    converged: c.converged,
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != ARTIFACT_FORMAT_VERSION {
            return Err(Error::Data(format!(
                "unsupported artifact format_version {}",
                self.format_version
            )));
        }
        self.vocabulary.validate()?;
        let expected = match self.task {
            TaskKind::Hate => 1,
            TaskKind::Sentiment => 3,
        };
        if self.components.len() != expected {
            return Err(Error::Data(format!(
                "{} artifact must carry {expected} component(s), found {}",
                self.task.name(),
                self.components.len()
            )));
        }
        for c in &self.components {
            if c.weights.len() != self.vocabulary.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.vocabulary.len(),
                    found: c.weights.len(),
                });
            }
        }
        Ok(())
    }

    fn component_model(&self, component: &ModelComponent, task: ModelTask) -> LinearModel {
        LinearModel {
            weights: component.weights.clone(),
            bias: component.bias,
            positive_class: component.positive_class.clone(),
            task,
            algo: self.algo,
            feature_mode: self.feature_mode,
            converged: component.converged,
            config_fingerprint: self.config_fingerprint.clone(),
        }
    }

    pub fn hate_model(&self) -> Result<LinearModel> {
        if self.task != TaskKind::Hate {
            return Err(Error::Data(format!(
                "artifact is a {} model, expected hate",
                self.task.name()
            )));
        }
        Ok(self.component_model(&self.components[0], ModelTask::Hate))
    }

    pub fn sentiment_model(&self) -> Result<OvrModel> {
        if self.task != TaskKind::Sentiment {
            return Err(Error::Data(format!(
                "artifact is a {} model, expected sentiment",
                self.task.name()
            )));
        }
        OvrModel::new(
            self.components
                .iter()
                .map(|c| self.component_model(c, ModelTask::SentimentOvrComponent))
                .collect(),
        )
    }
}

pub fn save_artifact(artifact: &ModelArtifact, path: &Path) -> Result<()> {
    artifact.validate()?;
    let mut json = serde_json::to_string_pretty(artifact).expect("artifact serializes");
    json.push('\n');
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn load_artifact(path: &Path) -> Result<ModelArtifact> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let artifact: ModelArtifact = serde_json::from_str(&raw).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    artifact.validate()?;
    Ok(artifact)
}
