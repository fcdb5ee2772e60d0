//! Limited-memory BFGS with backtracking Armijo line search.
//!
//! The two-loop recursion keeps the last `memory` (s, y, rho) triples.
//! A step whose curvature product s.y fails the positivity gate clears the
//! whole history: stale pairs would otherwise keep describing a Hessian
//! the iterate has left behind. When the computed direction is not a
//! descent direction the history is likewise discarded and the step falls
//! back to steepest descent, so accepted iterations stay monotone.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LbfgsConfig {
    /// Number of curvature pairs kept for the two-loop recursion.
    pub memory: usize,
    /// Armijo sufficient-decrease constant.
    pub c1: f64,
    /// Step shrink factor per backtrack.
    pub shrink: f64,
    pub max_backtracks: u32,
    /// Convergence: infinity norm of the gradient falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LbfgsConfig {
    fn default() -> Self {
        LbfgsConfig {
            memory: 10,
            c1: 1e-4,
            shrink: 0.5,
            max_backtracks: 50,
            tol: 1e-6,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective value at the start plus after every accepted step.
    /// Nonincreasing by construction; kept for auditability.
    pub f_trace: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

// H*g via the standard two-loop recursion; history holds (s, y, rho) with
// rho = 1 / (s.y), newest at the back. The initial Hessian approximation is
// gamma * I with gamma = s.y / y.y of the newest pair.
fn two_loop(g: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let alpha = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= alpha * yi;
        }
        alphas.push(alpha);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
    }
    for ((s, y, rho), alpha) in history.iter().zip(alphas.into_iter().rev()) {
        let beta = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (alpha - beta) * si;
        }
    }
    q
}

/// Minimizes `objective`, which returns the value and gradient at a point.
/// Converges when the gradient infinity norm drops below `cfg.tol`; hitting
/// `max_iter` first is not an error, the result just says so.
pub fn lbfgs_minimize<F>(objective: F, x0: &[f64], cfg: &LbfgsConfig) -> Result<LbfgsResult>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    if cfg.memory == 0 || !(cfg.shrink > 0.0 && cfg.shrink < 1.0) || cfg.c1 <= 0.0 {
        return Err(Error::Parameter(
            "lbfgs needs memory >= 1, 0 < shrink < 1 and c1 > 0".to_string(),
        ));
    }
    let mut x = x0.to_vec();
    let (mut f, mut g) = objective(&x);
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteObjective);
    }
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut f_trace = vec![f];

    for iter in 0..cfg.max_iter {
        if inf_norm(&g) <= cfg.tol {
            return Ok(LbfgsResult {
                x,
                f,
                iterations: iter,
                converged: true,
                f_trace,
            });
        }

        let mut direction: Vec<f64> = two_loop(&g, &history).iter().map(|v| -v).collect();
        let mut slope = dot(&g, &direction);
        if slope >= 0.0 {
            // quasi-Newton direction went uphill: drop the history
            history.clear();
            direction = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_backtracks {
            let x_new: Vec<f64> = x
                .iter()
                .zip(&direction)
                .map(|(xi, di)| xi + step * di)
                .collect();
            let (f_new, g_new) = objective(&x_new);
            // non-finite trial values are treated as a failed backtrack
            if f_new.is_finite() && f_new <= f + cfg.c1 * step * slope {
                accepted = Some((x_new, f_new, g_new));
                break;
            }
            step *= cfg.shrink;
        }
        let (x_new, f_new, g_new) = accepted.ok_or(Error::LineSearchFailed {
            backtracks: cfg.max_backtracks,
            f,
            x: x.clone(),
        })?;
        if !f_new.is_finite() || g_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteObjective);
        }

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-10 {
            if history.len() == cfg.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        } else {
            // Armijo alone cannot guarantee positive curvature; a failed
            // pair means the kept history no longer describes the local
            // Hessian, so restart rather than steer by stale pairs
            history.clear();
        }

        x = x_new;
        f = f_new;
        g = g_new;
        f_trace.push(f);
    }

    let converged = inf_norm(&g) <= cfg.tol;
    Ok(LbfgsResult {
        x,
        f,
        iterations: cfg.max_iter,
        converged,
        f_trace,
    })
}
