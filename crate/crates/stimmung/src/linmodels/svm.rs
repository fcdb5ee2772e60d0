//! Linear SVM trained by dual coordinate descent (hinge loss, L1 variant).
//!
//! The bias is handled as an augmented constant feature, so it shares the
//! L2 penalty with the weights and the dual has no equality constraint.
//! Coordinates are visited in a freshly shuffled order each epoch drawn
//! from one seeded stream, which makes runs bit-reproducible per seed.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::seeding::substream_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    /// Soft-margin cost; the box constraint is alpha in [0, c].
    pub c: f64,
    /// Convergence: largest projected-gradient magnitude over an epoch.
    pub tol: f64,
    /// Epoch cap.
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            tol: 1e-4,
            max_iter: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub alpha: Vec<f64>,
    pub converged: bool,
    pub epochs: usize,
    /// Largest projected-gradient magnitude seen in the final epoch.
    pub max_violation: f64,
}

/// Solves min_w 0.5*||(w, b)||^2 + c * sum_i max(0, 1 - y_i (w.x_i + b)).
/// Labels must be +-1 with both classes present.
pub fn solve_dual(x: &[SparseVector], y: &[f64], cfg: &SvmConfig) -> Result<DualSolution> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::Data("cannot train an SVM on zero rows".to_string()));
    }
    if !(cfg.c > 0.0) {
        return Err(Error::Parameter(format!(
            "svm c must be positive, got {}",
            cfg.c
        )));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::Data("svm labels must be +1 or -1".to_string()));
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

    let n = x.len();
    // diagonal of the augmented Gram matrix: ||x_i||^2 + 1 for the bias slot
    let q_diag: Vec<f64> = x.iter().map(|xi| xi.dot(xi) + 1.0).collect();
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut alpha = vec![0.0; n];
    let mut rng = substream_rng(cfg.seed, "svm-order");
    let mut order: Vec<usize> = (0..n).collect();
    let mut converged = false;
    let mut epochs = 0;
    let mut max_violation = f64::INFINITY;

    for epoch in 1..=cfg.max_iter {
        order.shuffle(&mut rng);
        let mut max_pg: f64 = 0.0;
        for &i in &order {
            let margin = x[i].dot_dense(&w) + b;
            let grad = y[i] * margin - 1.0;
            let pg = if alpha[i] <= 0.0 {
                grad.min(0.0)
            } else if alpha[i] >= cfg.c {
                grad.max(0.0)
            } else {
                grad
            };
            max_pg = max_pg.max(pg.abs());
            if pg != 0.0 {
                let updated = (alpha[i] - grad / q_diag[i]).clamp(0.0, cfg.c);
                let delta = (updated - alpha[i]) * y[i];
                if delta != 0.0 {
                    for (j, v) in x[i].iter() {
                        w[j] += delta * v;
                    }
                    b += delta;
                    alpha[i] = updated;
                }
            }
        }
        epochs = epoch;
        max_violation = max_pg;
        if max_pg <= cfg.tol {
            converged = true;
            break;
        }
    }

    Ok(DualSolution {
        weights: w,
        bias: b,
        alpha,
        converged,
        epochs,
        max_violation,
    })
}

/// Primal objective of the solved problem, with the bias inside the norm.
pub fn primal_objective(x: &[SparseVector], y: &[f64], c: f64, weights: &[f64], bias: f64) -> f64 {
    let norm_sq = weights.iter().map(|w| w * w).sum::<f64>() + bias * bias;
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| (1.0 - yi * (xi.dot_dense(weights) + bias)).max(0.0))
        .sum();
    0.5 * norm_sq + c * hinge
}

/// Dual objective sum(alpha) - 0.5 * ||sum alpha_i y_i x_aug_i||^2,
/// reconstructing the augmented weight vector from alpha.
pub fn dual_objective(x: &[SparseVector], y: &[f64], alpha: &[f64]) -> f64 {
    let dim = x.first().map(|v| v.dimension()).unwrap_or(0);
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    for ((xi, &yi), &ai) in x.iter().zip(y).zip(alpha) {
        for (j, v) in xi.iter() {
            w[j] += ai * yi * v;
        }
        b += ai * yi;
    }
    let norm_sq = w.iter().map(|v| v * v).sum::<f64>() + b * b;
    alpha.iter().sum::<f64>() - 0.5 * norm_sq
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(entries: Vec<(u32, f64)>, dim: usize) -> SparseVector {
        SparseVector::new(entries, dim).unwrap()
    }

    #[test]
    fn two_point_problem_recovers_the_known_optimum() {
        // x = -1 (y = -1) and x = +1 (y = +1) with large c: the margin
        // constraints are active and the optimum is w = 1, b = 0.
        let x = vec![sv(vec![(0, -1.0)], 1), sv(vec![(0, 1.0)], 1)];
        let y = vec![-1.0, 1.0];
        let cfg = SvmConfig {
            c: 100.0,
            tol: 1e-10,
            max_iter: 20_000,
            seed: 1,
        };
        let sol = solve_dual(&x, &y, &cfg).unwrap();
        assert!(sol.converged);
        assert!(
            (sol.weights[0] - 1.0).abs() < 1e-6,
            "w = {}",
            sol.weights[0]
        );
        assert!(sol.bias.abs() < 1e-6, "b = {}", sol.bias);
    }

    #[test]
    fn weak_duality_holds_and_gap_closes() {
        let x = vec![
            sv(vec![(0, 1.0), (1, 0.5)], 3),
            sv(vec![(0, 0.8), (2, -0.3)], 3),
            sv(vec![(1, -1.0)], 3),
            sv(vec![(0, -0.9), (2, 0.4)], 3),
            sv(vec![(1, 0.2), (2, 1.0)], 3),
            sv(vec![(0, -0.5), (1, -0.5)], 3),
        ];
        let y = vec![1.0, 1.0, -1.0, -1.0, 1.0, -1.0];
        let cfg = SvmConfig {
            c: 2.0,
            tol: 1e-9,
            max_iter: 50_000,
            seed: 3,
        };
        let sol = solve_dual(&x, &y, &cfg).unwrap();
        let p = primal_objective(&x, &y, cfg.c, &sol.weights, sol.bias);
        let d = dual_objective(&x, &y, &sol.alpha);
        assert!(d <= p + 1e-9, "dual {d} exceeds primal {p}");
        assert!(p - d < 1e-6, "gap {} too wide", p - d);
    }

    #[test]
    fn duplicating_every_row_leaves_the_separator_unchanged() {
        let x: Vec<SparseVector> = vec![
            sv(vec![(0, 2.0)], 2),
            sv(vec![(0, 1.5), (1, 0.5)], 2),
            sv(vec![(0, -1.0)], 2),
            sv(vec![(0, -2.0), (1, -0.2)], 2),
        ];
        let y = vec![1.0, 1.0, -1.0, -1.0];
        let cfg = SvmConfig {
            c: 1.0,
            tol: 1e-10,
            max_iter: 100_000,
            seed: 5,
        };
        let base = solve_dual(&x, &y, &cfg).unwrap();

        // duplicating every row with c halved keeps the same optimum
        let mut x2 = x.clone();
        x2.extend(x.iter().cloned());
        let mut y2 = y.clone();
        y2.extend(y.iter().cloned());
        let cfg2 = SvmConfig { c: 0.5, ..cfg };
        let dup = solve_dual(&x2, &y2, &cfg2).unwrap();

        for (a, b) in base.weights.iter().zip(&dup.weights) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
        assert!((base.bias - dup.bias).abs() < 1e-5);
    }

    #[test]
    fn alpha_respects_the_box_constraint() {
        let x = vec![
            sv(vec![(0, 1.0)], 2),
            sv(vec![(1, 1.0)], 2),
            sv(vec![(0, -1.0)], 2),
            sv(vec![(1, -1.0)], 2),
        ];
        let y = vec![1.0, 1.0, -1.0, -1.0];
        let cfg = SvmConfig {
            c: 0.7,
            ..SvmConfig::default()
        };
        let sol = solve_dual(&x, &y, &cfg).unwrap();
        for &a in &sol.alpha {
            assert!((0.0..=cfg.c + 1e-12).contains(&a), "alpha {a} out of box");
        }
    }

    #[test]
    fn same_seed_reproduces_the_solution_exactly() {
        let x = vec![
            sv(vec![(0, 1.0), (1, 2.0)], 2),
            sv(vec![(0, 2.0)], 2),
            sv(vec![(0, -1.0), (1, -1.0)], 2),
            sv(vec![(1, -2.0)], 2),
        ];
        let y = vec![1.0, 1.0, -1.0, -1.0];
        let cfg = SvmConfig::default();
        let a = solve_dual(&x, &y, &cfg).unwrap();
        let b = solve_dual(&x, &y, &cfg).unwrap();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.bias, b.bias);
        assert_eq!(a.alpha, b.alpha);
    }

    #[test]
    fn single_class_input_is_rejected() {
        let x = vec![sv(vec![(0, 1.0)], 1), sv(vec![(0, 2.0)], 1)];
        assert!(matches!(
            solve_dual(&x, &[1.0, 1.0], &SvmConfig::default()),
            Err(Error::MissingClass(_))
        ));
        assert!(matches!(
            solve_dual(&x, &[1.0, 0.5], &SvmConfig::default()),
            Err(Error::Data(_))
        ));
    }
}
