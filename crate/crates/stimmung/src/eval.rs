//! Classifier evaluation: confusion matrices, precision/recall/F1, AUROC
//! via the rank statistic, holdout reports and stratified k-fold
//! cross-validation that refits the vocabulary inside every fold.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{FoldPlan, HateLabel, SentimentLabel};
use crate::error::{Error, Result};
use crate::features::{fit_vocabulary, vectorize, FeatureConfig, SparseVector, Vocabulary};
use crate::linmodels::{
    decision_score, ovr_scores, predict_binary, predict_ovr, train_hate, train_sentiment,
    LinearModel, OvrModel, TrainConfig,
};
use crate::textprep::TokenDoc;

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// counts[pred][true], square over `class_order`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub class_order: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Number of items whose true class is `class_idx`.
    pub fn support(&self, class_idx: usize) -> u64 {
        self.counts.iter().map(|row| row[class_idx]).sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.class_order.len()).map(|i| self.counts[i][i]).sum()
    }
}

pub fn confusion_matrix<S: AsRef<str>, T: AsRef<str>>(
    y_true: &[S],
    y_pred: &[T],
    class_order: &[String],
) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            found: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::Data(
            "cannot build a confusion matrix from zero predictions".to_string(),
        ));
    }
    if class_order.is_empty() {
        return Err(Error::Parameter("class_order must be nonempty".to_string()));
    }
    let index: BTreeMap<&str, usize> = class_order
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    if index.len() != class_order.len() {
        return Err(Error::Parameter(
            "class_order contains duplicates".to_string(),
        ));
    }
    let k = class_order.len();
    let mut counts = vec![vec![0u64; k]; k];
    for (t, p) in y_true.iter().zip(y_pred) {
        let ti = *index.get(t.as_ref()).ok_or_else(|| {
            Error::Data(format!("true label {:?} not in class order", t.as_ref()))
        })?;
        let pi = *index.get(p.as_ref()).ok_or_else(|| {
            Error::Data(format!(
                "predicted label {:?} not in class order",
                p.as_ref()
            ))
        })?;
        counts[pi][ti] += 1;
    }
    Ok(ConfusionMatrix {
        class_order: class_order.to_vec(),
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// True when a denominator was zero and the metric was pinned to 0.
    pub zero_division: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmMetrics {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_f1: f64,
    pub weighted_f1: f64,
}

fn ratio_or_zero(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

pub fn f1_from_pr(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

pub fn metrics_from_cm(cm: &ConfusionMatrix) -> Result<CmMetrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::Data("confusion matrix is empty".to_string()));
    }
    let k = cm.class_order.len();
    let mut per_class = Vec::with_capacity(k);
    for i in 0..k {
        let tp = cm.counts[i][i];
        let pred_i: u64 = cm.counts[i].iter().sum();
        let true_i = cm.support(i);
        let (precision, p_zero) = ratio_or_zero(tp, pred_i);
        let (recall, r_zero) = ratio_or_zero(tp, true_i);
        per_class.push(ClassMetrics {
            class: cm.class_order[i].clone(),
            precision,
            recall,
            f1: f1_from_pr(precision, recall),
            support: true_i,
            zero_division: p_zero || r_zero,
        });
    }
    let macro_f1 = per_class.iter().map(|m| m.f1).sum::<f64>() / k as f64;
    let weighted_f1 = per_class
        .iter()
        .map(|m| m.f1 * m.support as f64)
        .sum::<f64>()
        / total as f64;
    Ok(CmMetrics {
        accuracy: cm.correct() as f64 / total as f64,
        per_class,
        macro_f1,
        weighted_f1,
    })
}

/// AUROC by the Mann-Whitney rank statistic with midranks for ties:
/// (R_pos - n_pos (n_pos + 1) / 2) / (n_pos * n_neg).
pub fn auroc_binary(scores: &[f64], is_positive: &[bool]) -> Result<f64> {
    if scores.len() != is_positive.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            found: is_positive.len(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Data("scores must be finite for AUROC".to_string()));
    }
    let n_pos = is_positive.iter().filter(|&&p| p).count();
    let n_neg = scores.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric(
            "AUROC needs both classes present".to_string(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
    // midranks: tied scores all get the average of their rank range
    let mut rank = vec![0.0f64; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            rank[idx] = mid;
        }
        i = j + 1;
    }
    let r_pos: f64 = rank
        .iter()
        .zip(is_positive)
        .filter(|(_, &p)| p)
        .map(|(r, _)| r)
        .sum();
    let np = n_pos as f64;
    Ok((r_pos - np * (np + 1.0) / 2.0) / (np * n_neg as f64))
}

/// One-vs-rest AUROC per class from per-class score columns. Every class
/// must appear in `y` at least once.
pub fn auroc_ovr(score_rows: &[Vec<f64>], y: &[SentimentLabel]) -> Result<BTreeMap<String, f64>> {
    if score_rows.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: score_rows.len(),
            found: y.len(),
        });
    }
    for class in SentimentLabel::ALL {
        if !y.contains(&class) {
            return Err(Error::MissingClass(class.name().to_string()));
        }
    }
    let mut out = BTreeMap::new();
    for class in SentimentLabel::ALL {
        let j = class.index();
        let scores: Vec<f64> = score_rows.iter().map(|row| row[j]).collect();
        let labels: Vec<bool> = y.iter().map(|&l| l == class).collect();
        out.insert(class.name().to_string(), auroc_binary(&scores, &labels)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub format_version: u32,
    pub seed: u64,
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_f1: f64,
    pub weighted_f1: f64,
    pub auroc: BTreeMap<String, f64>,
    pub confusion: ConfusionMatrix,
    /// False when the model hit its iteration cap without reaching tol;
    /// scores are still reported but should be read with that in mind.
    pub converged: bool,
    pub training_accuracy: Option<f64>,
}

fn hate_class_order() -> Vec<String> {
    vec!["no_hate".to_string(), "hate".to_string()]
}

fn sentiment_class_order() -> Vec<String> {
    SentimentLabel::ALL
        .iter()
        .map(|l| l.name().to_string())
        .collect()
}

/// Holdout evaluation of the binary model at the given probability (LR) or
/// sign (SVM) threshold. AUROC is computed from raw decision scores.
pub fn evaluate_hate(
    model: &LinearModel,
    x: &[SparseVector],
    y: &[HateLabel],
    threshold: f64,
) -> Result<EvalReport> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let y_true: Vec<&str> = y.iter().map(|l| l.name()).collect();
    let mut y_pred = Vec::with_capacity(x.len());
    let mut scores = Vec::with_capacity(x.len());
    for xi in x {
        scores.push(decision_score(model, xi)?);
        y_pred.push(if predict_binary(model, xi, threshold)? {
            "hate"
        } else {
            "no_hate"
        });
    }
    let order = hate_class_order();
    let cm = confusion_matrix(&y_true, &y_pred, &order)?;
    let m = metrics_from_cm(&cm)?;
    let pos: Vec<bool> = y.iter().map(|&l| l == HateLabel::Hate).collect();
    let mut auroc = BTreeMap::new();
    auroc.insert("hate".to_string(), auroc_binary(&scores, &pos)?);
    let neg_scores: Vec<f64> = scores.iter().map(|s| -s).collect();
    let neg: Vec<bool> = pos.iter().map(|p| !p).collect();
    auroc.insert("no_hate".to_string(), auroc_binary(&neg_scores, &neg)?);
    Ok(EvalReport {
        format_version: REPORT_FORMAT_VERSION,
        seed: 0,
        accuracy: m.accuracy,
        per_class: m.per_class,
        macro_f1: m.macro_f1,
        weighted_f1: m.weighted_f1,
        auroc,
        confusion: cm,
        converged: model.converged,
        training_accuracy: None,
    })
}

/// Holdout evaluation of the ternary one-vs-rest model.
pub fn evaluate_sentiment(
    model: &OvrModel,
    x: &[SparseVector],
    y: &[SentimentLabel],
) -> Result<EvalReport> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let y_true: Vec<&str> = y.iter().map(|l| l.name()).collect();
    let mut y_pred = Vec::with_capacity(x.len());
    let mut score_rows = Vec::with_capacity(x.len());
    for xi in x {
        score_rows.push(ovr_scores(model, xi)?);
        y_pred.push(predict_ovr(model, xi)?.name());
    }
    let order = sentiment_class_order();
    let cm = confusion_matrix(&y_true, &y_pred, &order)?;
    let m = metrics_from_cm(&cm)?;
    let auroc = auroc_ovr(&score_rows, y)?;
    Ok(EvalReport {
        format_version: REPORT_FORMAT_VERSION,
        seed: 0,
        accuracy: m.accuracy,
        per_class: m.per_class,
        macro_f1: m.macro_f1,
        weighted_f1: m.weighted_f1,
        auroc,
        confusion: cm,
        converged: model.converged(),
        training_accuracy: None,
    })
}

/// CSV projection of a holdout report: one row per class, fold-level
/// metrics repeated. Leading comment line pins format version and seed.
pub fn eval_to_csv(report: &EvalReport) -> String {
    let mut out = format!(
        "# format_version={} seed={}\n",
        report.format_version, report.seed
    );
    out.push_str("class,precision,recall,f1,support,auroc,accuracy,macro_f1,weighted_f1\n");
    for m in &report.per_class {
        let auroc = report
            .auroc
            .get(&m.class)
            .map(|v| v.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            m.class,
            m.precision,
            m.recall,
            m.f1,
            m.support,
            auroc,
            report.accuracy,
            report.macro_f1,
            report.weighted_f1
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum TaskLabels {
    Hate(Vec<HateLabel>),
    Sentiment(Vec<SentimentLabel>),
}

impl TaskLabels {
    pub fn len(&self) -> usize {
        match self {
            TaskLabels::Hate(v) => v.len(),
            TaskLabels::Sentiment(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Vocabulary fitted on every fold except `held_out`; the held-out fold
/// contributes nothing, so CV never leaks test-side terms.
pub fn fold_vocabulary(
    docs: &[TokenDoc],
    plan: &FoldPlan,
    held_out: usize,
    cfg: &FeatureConfig,
) -> Result<Vocabulary> {
    let train_docs: Vec<TokenDoc> = docs
        .iter()
        .filter(|d| plan.fold_assignments.get(&d.comment_id) != Some(&held_out))
        .cloned()
        .collect();
    fit_vocabulary(&train_docs, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldEval {
    pub fold: usize,
    pub n_test: usize,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub weighted_f1: f64,
    pub per_class: Vec<ClassMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub format_version: u32,
    pub seed: u64,
    pub k: usize,
    pub per_fold: Vec<FoldEval>,
    pub mean: BTreeMap<String, f64>,
    pub std: BTreeMap<String, f64>,
    pub plan: FoldPlan,
}

#[derive(Debug, Clone)]
pub struct CvSpec {
    pub features: FeatureConfig,
    pub train: TrainConfig,
    pub threshold: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Stratified k-fold CV. Each fold refits vocabulary and model on the
/// other k-1 folds only; errors are annotated with the failing fold.
pub fn cross_validate(
    docs: &[TokenDoc],
    labels: &TaskLabels,
    plan: &FoldPlan,
    spec: &CvSpec,
) -> Result<CvReport> {
    if docs.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: docs.len(),
            found: labels.len(),
        });
    }
    if plan.fold_assignments.len() != docs.len() {
        return Err(Error::Data(format!(
            "fold plan covers {} ids but {} docs were given",
            plan.fold_assignments.len(),
            docs.len()
        )));
    }
    for d in docs {
        if !plan.fold_assignments.contains_key(&d.comment_id) {
            return Err(Error::Data(format!(
                "doc {:?} missing from the fold plan",
                d.comment_id
            )));
        }
    }

    let annotate = |fold: usize| move |e: Error| Error::Data(format!("fold {fold}: {e}"));
    let mut per_fold = Vec::with_capacity(plan.k);
    for fold in 0..plan.k {
        let vocab = fold_vocabulary(docs, plan, fold, &spec.features).map_err(annotate(fold))?;
        let mut x_train = Vec::new();
        let mut x_test = Vec::new();
        let mut train_idx = Vec::new();
        let mut test_idx = Vec::new();
        for (i, d) in docs.iter().enumerate() {
            let v = vectorize(d, &vocab, &spec.features);
            if plan.fold_assignments[&d.comment_id] == fold {
                x_test.push(v);
                test_idx.push(i);
            } else {
                x_train.push(v);
                train_idx.push(i);
            }
        }
        if x_test.is_empty() {
            return Err(Error::Data(format!("fold {fold}: no test rows")));
        }

        let (y_true, y_pred, order): (Vec<String>, Vec<String>, Vec<String>) = match labels {
            TaskLabels::Hate(y) => {
                let yt: Vec<HateLabel> = train_idx.iter().map(|&i| y[i]).collect();
                let model = train_hate(&x_train, &yt, &spec.train).map_err(annotate(fold))?;
                let mut pred = Vec::with_capacity(x_test.len());
                for v in &x_test {
                    pred.push(
                        if predict_binary(&model, v, spec.threshold).map_err(annotate(fold))? {
                            "hate".to_string()
                        } else {
                            "no_hate".to_string()
                        },
                    );
                }
                let truth = test_idx.iter().map(|&i| y[i].name().to_string()).collect();
                (truth, pred, hate_class_order())
            }
            TaskLabels::Sentiment(y) => {
                let yt: Vec<SentimentLabel> = train_idx.iter().map(|&i| y[i]).collect();
                let model = train_sentiment(&x_train, &yt, &spec.train).map_err(annotate(fold))?;
                let mut pred = Vec::with_capacity(x_test.len());
                for v in &x_test {
                    pred.push(
                        predict_ovr(&model, v)
                            .map_err(annotate(fold))?
                            .name()
                            .to_string(),
                    );
                }
                let truth = test_idx.iter().map(|&i| y[i].name().to_string()).collect();
                (truth, pred, sentiment_class_order())
            }
        };
        let cm = confusion_matrix(&y_true, &y_pred, &order).map_err(annotate(fold))?;
        let m = metrics_from_cm(&cm).map_err(annotate(fold))?;
        per_fold.push(FoldEval {
            fold,
            n_test: x_test.len(),
            accuracy: m.accuracy,
            macro_f1: m.macro_f1,
            weighted_f1: m.weighted_f1,
            per_class: m.per_class,
        });
    }

    let mut mean = BTreeMap::new();
    let mut std = BTreeMap::new();
    for (name, pick) in [
        (
            "accuracy",
            &(|f: &FoldEval| f.accuracy) as &dyn Fn(&FoldEval) -> f64,
        ),
        ("macro_f1", &|f: &FoldEval| f.macro_f1),
        ("weighted_f1", &|f: &FoldEval| f.weighted_f1),
    ] {
        let vals: Vec<f64> = per_fold.iter().map(pick).collect();
        let (m, s) = mean_std(&vals);
        mean.insert(name.to_string(), m);
        std.insert(name.to_string(), s);
    }
    Ok(CvReport {
        format_version: REPORT_FORMAT_VERSION,
        seed: plan.seed,
        k: plan.k,
        per_fold,
        mean,
        std,
        plan: plan.clone(),
    })
}

/// Flat CSV: one row per class per fold, fold-level metrics repeated.
pub fn cv_to_csv(report: &CvReport) -> String {
    let mut out = format!(
        "# format_version={} seed={}\n",
        report.format_version, report.seed
    );
    out.push_str("fold,class,precision,recall,f1,support,accuracy,macro_f1,weighted_f1\n");
    for f in &report.per_fold {
        for m in &f.per_class {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                f.fold,
                m.class,
                m.precision,
                m.recall,
                m.f1,
                m.support,
                f.accuracy,
                f.macro_f1,
                f.weighted_f1
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{make_folds, Comment, LabeledComment, Origin, StrataKey};
    use crate::features::FeatureMode;

    fn round4(v: f64) -> f64 {
        (v * 10_000.0).round() / 10_000.0
    }

    fn plan_items(docs: &[TokenDoc], labels: &[HateLabel]) -> Vec<LabeledComment> {
        docs.iter()
            .zip(labels)
            .map(|(d, l)| LabeledComment {
                comment: Comment {
                    id: d.comment_id.clone(),
                    video_id: None,
                    source: None,
                    published_at: None,
                    raw_text: d.tokens.join(" "),
                },
                hate: Some(*l),
                sentiment: None,
                origin: Origin::Scraped,
            })
            .collect()
    }

    #[test]
    fn confusion_matrix_counts_pred_by_true() {
        let order = vec!["neg".to_string(), "pos".to_string()];
        let cm = confusion_matrix(&["pos", "pos", "neg"], &["pos", "neg", "neg"], &order).unwrap();
        // tp=1, fn=1, tn=1, fp=0
        assert_eq!(cm.counts[1][1], 1);
        assert_eq!(cm.counts[0][1], 1);
        assert_eq!(cm.counts[0][0], 1);
        assert_eq!(cm.counts[1][0], 0);
        assert_eq!(cm.support(1), 2);
    }

    #[test]
    fn confusion_matrix_rejects_bad_input() {
        let order = vec!["a".to_string(), "b".to_string()];
        let empty: [&str; 0] = [];
        assert!(confusion_matrix(&empty, &empty, &order).is_err());
        assert!(confusion_matrix(&["a"], &["a", "b"], &order).is_err());
        assert!(confusion_matrix(&["c"], &["a"], &order).is_err());
        let dup = vec!["a".to_string(), "a".to_string()];
        assert!(confusion_matrix(&["a"], &["a"], &dup).is_err());
    }

    #[test]
    fn metrics_match_the_published_hate_speech_figures() {
        // tn=225 fp=91 fn=81 tp=263 over 660 items
        let order = vec!["no_hate".to_string(), "hate".to_string()];
        let cm = ConfusionMatrix {
            class_order: order,
            counts: vec![vec![225, 81], vec![91, 263]],
        };
        let m = metrics_from_cm(&cm).unwrap();
        assert_eq!(round4(m.accuracy), 0.7394);
        let hate = &m.per_class[1];
        assert_eq!(round4(hate.precision), 0.7429);
        assert_eq!(round4(hate.recall), 0.7645);
        // rounded precision/recall as printed reproduce the printed F1
        let f1 = f1_from_pr(0.74, 0.76);
        assert_eq!((f1 * 100.0).round() / 100.0, 0.75);
        assert_eq!(round4(f1), 0.7499);
    }

    #[test]
    fn degenerate_predictions_flag_zero_division() {
        let order = vec!["no_hate".to_string(), "hate".to_string()];
        let cm = confusion_matrix(
            &["hate", "no_hate", "no_hate"],
            &["no_hate", "no_hate", "no_hate"],
            &order,
        )
        .unwrap();
        let m = metrics_from_cm(&cm).unwrap();
        let hate = &m.per_class[1];
        assert_eq!(hate.precision, 0.0);
        assert_eq!(hate.recall, 0.0);
        assert_eq!(hate.f1, 0.0);
        assert!(hate.zero_division);
        assert!(!m.per_class[0].zero_division);
    }

    #[test]
    fn weighted_f1_weights_by_support() {
        let order = vec!["a".to_string(), "b".to_string()];
        // 3 of "a" all correct, 1 of "b" misclassified
        let cm = confusion_matrix(&["a", "a", "a", "b"], &["a", "a", "a", "a"], &order).unwrap();
        let m = metrics_from_cm(&cm).unwrap();
        // f1(a) = 2*(3/4)*1/(3/4+1) = 6/7; f1(b) = 0
        let expected = (6.0 / 7.0) * 3.0 / 4.0;
        assert!((m.weighted_f1 - expected).abs() < 1e-12);
        assert!((m.macro_f1 - (6.0 / 7.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn auroc_handles_ties_with_midranks() {
        let auc = auroc_binary(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap();
        assert!((auc - 0.75).abs() < 1e-12);

        let perfect = auroc_binary(&[0.1, 0.2, 0.8, 0.9], &[false, false, true, true]).unwrap();
        assert_eq!(perfect, 1.0);

        let tied = auroc_binary(&[0.5, 0.5, 0.5, 0.5], &[false, true, false, true]).unwrap();
        assert_eq!(tied, 0.5);

        // reversing the scores complements the area
        let rev = auroc_binary(&[0.9, 0.8, 0.2, 0.1], &[false, false, true, true]).unwrap();
        assert_eq!(rev, 0.0);
    }

    #[test]
    fn auroc_rejects_degenerate_input() {
        assert!(matches!(
            auroc_binary(&[0.1, 0.2], &[true, true]),
            Err(Error::UndefinedMetric(_))
        ));
        assert!(auroc_binary(&[f64::NAN, 0.2], &[true, false]).is_err());
    }

    #[test]
    fn ovr_auroc_rewards_one_hot_scores() {
        let y = vec![
            SentimentLabel::Neutral,
            SentimentLabel::ProIsrael,
            SentimentLabel::ProPalestine,
            SentimentLabel::Neutral,
        ];
        let rows: Vec<Vec<f64>> = y
            .iter()
            .map(|l| {
                let mut r = vec![0.0; 3];
                r[l.index()] = 1.0;
                r
            })
            .collect();
        let auroc = auroc_ovr(&rows, &y).unwrap();
        for (_, v) in auroc {
            assert_eq!(v, 1.0);
        }

        let flat: Vec<Vec<f64>> = y.iter().map(|_| vec![0.3; 3]).collect();
        let auroc = auroc_ovr(&flat, &y).unwrap();
        for (_, v) in auroc {
            assert_eq!(v, 0.5);
        }
    }

    #[test]
    fn ovr_auroc_requires_every_class() {
        let y = vec![SentimentLabel::Neutral, SentimentLabel::ProIsrael];
        let rows = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        assert!(matches!(auroc_ovr(&rows, &y), Err(Error::MissingClass(_))));
    }

    fn separable_docs() -> (Vec<TokenDoc>, Vec<HateLabel>) {
        let mut docs = Vec::new();
        let mut labels = Vec::new();
        for i in 0..3 {
            docs.push(TokenDoc {
                comment_id: format!("h{i}"),
                tokens: vec!["hass".to_string(), "schlimm".to_string()],
            });
            labels.push(HateLabel::Hate);
            docs.push(TokenDoc {
                comment_id: format!("n{i}"),
                tokens: vec!["frieden".to_string(), "gut".to_string()],
            });
            labels.push(HateLabel::NoHate);
        }
        (docs, labels)
    }

    #[test]
    fn leave_one_out_cv_is_perfect_on_separable_data() {
        let (docs, labels) = separable_docs();
        let plan = make_folds(&plan_items(&docs, &labels), 6, StrataKey::Hate, 3).unwrap();
        // weak regularization: at the default c the unregularized bias
        // would dominate these 5-doc folds and vote with the majority
        let mut train = TrainConfig::default();
        train.lr.c_inverse_reg = 10.0;
        let spec = CvSpec {
            features: FeatureConfig::default(),
            train,
            threshold: 0.5,
        };
        let report = cross_validate(&docs, &TaskLabels::Hate(labels), &plan, &spec).unwrap();
        assert_eq!(report.k, 6);
        assert_eq!(report.mean["accuracy"], 1.0);
        assert_eq!(report.std["accuracy"], 0.0);
        assert_eq!(report.per_fold.len(), 6);
    }

    #[test]
    fn cv_is_deterministic_for_a_fixed_seed() {
        let (docs, labels) = separable_docs();
        let items = plan_items(&docs, &labels);
        let spec = CvSpec {
            features: FeatureConfig {
                mode: FeatureMode::Tfidf,
                ..FeatureConfig::default()
            },
            train: TrainConfig::default(),
            threshold: 0.5,
        };
        let run = |seed: u64| {
            let plan = make_folds(&items, 3, StrataKey::Hate, seed).unwrap();
            let report =
                cross_validate(&docs, &TaskLabels::Hate(labels.clone()), &plan, &spec).unwrap();
            serde_json::to_string(&report).unwrap()
        };
        assert_eq!(run(11), run(11));
        assert_ne!(run(11), run(12));
    }

    #[test]
    fn fold_vocabulary_never_sees_the_held_out_fold() {
        let docs = vec![
            TokenDoc {
                comment_id: "a".to_string(),
                tokens: vec!["nur".to_string(), "hier".to_string()],
            },
            TokenDoc {
                comment_id: "b".to_string(),
                tokens: vec!["woanders".to_string()],
            },
            TokenDoc {
                comment_id: "c".to_string(),
                tokens: vec!["woanders".to_string(), "drittes".to_string()],
            },
            TokenDoc {
                comment_id: "d".to_string(),
                tokens: vec!["viertes".to_string()],
            },
        ];
        let labels: Vec<HateLabel> = (0..docs.len())
            .map(|i| {
                if i % 2 == 0 {
                    HateLabel::Hate
                } else {
                    HateLabel::NoHate
                }
            })
            .collect();
        let plan = make_folds(&plan_items(&docs, &labels), 2, StrataKey::Hate, 5).unwrap();
        for fold in 0..2 {
            let vocab = fold_vocabulary(&docs, &plan, fold, &FeatureConfig::default()).unwrap();
            for d in &docs {
                if plan.fold_assignments[&d.comment_id] == fold {
                    // tokens unique to held-out docs must be absent
                    for t in &d.tokens {
                        let elsewhere = docs.iter().any(|o| {
                            plan.fold_assignments[&o.comment_id] != fold && o.tokens.contains(t)
                        });
                        if !elsewhere {
                            assert!(vocab.index_of(t).is_none(), "leaked token {t:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn csv_projections_carry_the_meta_line() {
        let (docs, labels) = separable_docs();
        let plan = make_folds(&plan_items(&docs, &labels), 3, StrataKey::Hate, 9).unwrap();
        let spec = CvSpec {
            features: FeatureConfig::default(),
            train: TrainConfig::default(),
            threshold: 0.5,
        };
        let report = cross_validate(&docs, &TaskLabels::Hate(labels), &plan, &spec).unwrap();
        let csv = cv_to_csv(&report);
        assert!(csv.starts_with("# format_version=1 seed=9\n"));
        // one row per class per fold plus meta and header
        assert_eq!(csv.lines().count(), 2 + 3 * 2);
    }
}
