use log::warn;
use serde::{Deserialize, Serialize};

use super::SolveResult;
use crate::error::{invalid, Result};
use crate::numerics::matrix::l2;
use crate::numerics::DenseMatrix;
use crate::sketches::LinearSketch;
use crate::sparse::SparseVector;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LassoOptions {
    /// Relative objective decrease below which an iteration counts as stalled.
    pub tol: f64,
    /// Consecutive stalled iterations that end the solve.
    pub patience: usize,
    pub max_iter: usize,
    pub power_iterations: usize,
    /// Coordinates with `|x_i|` at or below this are dropped from the result.
    pub prune: f64,
}

impl LassoOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            patience: 10,
            max_iter: 100_000,
            power_iterations: 20,
            prune: 1e-12,
        }
    }
}

/// `||Ax - b||_2^2 + lambda ||x||_1`.
pub fn lasso_objective(a: &DenseMatrix, b: &[f64], x: &[f64], lambda: f64) -> Result<f64> {
    let ax = a.matvec(x)?;
    let r2: f64 = ax.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum();
    Ok(r2 + lambda * x.iter().map(|v| v.abs()).sum::<f64>())
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    v.signum() * (v.abs() - t).max(0.0)
}

pub fn lasso_solve(a: &DenseMatrix, b: &[f64], lambda: f64, tol: f64) -> Result<SolveResult> {
    lasso_solve_traced(a, b, lambda, &LassoOptions::with_tol(tol)).map(|(res, _)| res)
}

/// Monotone accelerated proximal gradient with a soft-threshold prox. The
/// step is `1 / (4 ||A||^2)`, half the inverse Lipschitz constant of the
/// smooth part, with `||A||` from power iteration. Also returns the
/// objective after every iteration, starting with the value at `x = 0`.
pub fn lasso_solve_traced(
    a: &DenseMatrix,
    b: &[f64],
    lambda: f64,
    opts: &LassoOptions,
) -> Result<(SolveResult, Vec<f64>)> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(invalid!("lambda must lie in (0, 1), got {lambda}"));
    }
    if a.rows() != b.len() {
        return Err(invalid!("A has {} rows but b has length {}", a.rows(), b.len()));
    }
    let d = a.cols();
    let norm = a.spectral_norm_estimate(opts.power_iterations);
    if norm > 1.0 + 1e-9 || l2(b) > 1.0 + 1e-9 {
        warn!("lasso expects ||A|| <= 1 and ||b|| <= 1, got {norm:.4} and {:.4}", l2(b));
    }
    let objective = |x: &[f64]| lasso_objective(a, b, x, lambda);
    let mut x = vec![0.0; d];
    let mut f = objective(&x)?;
    let mut trace = vec![f];
    let mut converged = norm == 0.0;
    if !converged {
        let step = 1.0 / (4.0 * norm * norm);
        let mut y = x.clone();
        let mut t = 1.0f64;
        let mut stalled = 0;
        for _ in 0..opts.max_iter {
            let mut r = a.matvec(&y)?;
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= bi;
            }
            let grad = a.matvec_transposed(&r)?;
            let z: Vec<f64> = y
                .iter()
                .zip(&grad)
                .map(|(yi, gi)| soft_threshold(yi - 2.0 * step * gi, step * lambda))
                .collect();
            let fz = objective(&z)?;
            let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
            let x_prev = std::mem::take(&mut x);
            let f_prev = f;
            if fz <= f {
                x = z.clone();
                f = fz;
            } else {
                x = x_prev.clone();
            }
            y = (0..d)
                .map(|i| x[i] + (t / t_next) * (z[i] - x[i]) + ((t - 1.0) / t_next) * (x[i] - x_prev[i]))
                .collect();
            t = t_next;
            trace.push(f);
            let decrease = if f_prev > 0.0 { (f_prev - f) / f_prev } else { 0.0 };
            stalled = if decrease < opts.tol { stalled + 1 } else { 0 };
            if stalled >= opts.patience {
                converged = true;
                break;
            }
        }
    }
    let x = SparseVector::from_dense(&x, opts.prune);
    let cost = lasso_objective(a, b, &x.to_dense(), lambda)?;
    Ok((
        SolveResult {
            x,
            cost,
            support_explored: 0,
            converged,
        },
        trace,
    ))
}

/// Solves the LASSO on `(SA, Sb)` and reports the objective of the result
/// on the original `(A, b)`.
pub fn lasso_sketched_solve(
    s: &LinearSketch,
    a: &DenseMatrix,
    b: &[f64],
    lambda: f64,
    tol: f64,
) -> Result<SolveResult> {
    let sa = s.apply_matrix(a)?;
    let sb = s.apply(b)?;
    let mut res = lasso_solve(&sa, &sb, lambda, tol)?;
    res.cost = lasso_objective(a, b, &res.x.to_dense(), lambda)?;
    Ok(res)
}
