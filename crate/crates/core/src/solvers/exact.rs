use std::sync::atomic::{AtomicBool, Ordering};

use super::enumerate::best_support;
use super::SolveResult;
use crate::error::{invalid, Result};
use crate::losses::lp_norm;
use crate::numerics::linalg::least_squares;
use crate::numerics::matrix::l2;
use crate::numerics::DenseMatrix;
use crate::sparse::SparseVector;

fn columns(a: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..a.cols()).map(|j| a.column(j)).collect()
}

fn check_dims(a: &DenseMatrix, b: &[f64], k: usize) -> Result<()> {
    if a.rows() != b.len() {
        return Err(invalid!("A has {} rows but b has length {}", a.rows(), b.len()));
    }
    if k > a.cols() {
        return Err(invalid!("k = {k} exceeds d = {}", a.cols()));
    }
    Ok(())
}

fn residual(cols: &[Vec<f64>], b: &[f64], support: &[usize], coef: &[f64]) -> Vec<f64> {
    let mut r: Vec<f64> = b.iter().map(|v| -v).collect();
    for (&j, &c) in support.iter().zip(coef) {
        for (ri, aij) in r.iter_mut().zip(&cols[j]) {
            *ri += c * aij;
        }
    }
    r
}

/// Exact `min ||Ax - b||_2` over all `k`-sparse `x`, by least squares on
/// every support of size `k`.
pub fn brute_force_sparse_l2(a: &DenseMatrix, b: &[f64], k: usize) -> Result<SolveResult> {
    check_dims(a, b, k)?;
    let cols = columns(a);
    let d = a.cols();
    let best = best_support(d, k, |support| {
        let sel: Vec<&[f64]> = support.iter().map(|&j| cols[j].as_slice()).collect();
        let ls = least_squares(&sel, b);
        Ok(Some((ls.residual_norm, ls.coef)))
    })?;
    let (_, support, coef) = best.expect("at least one support");
    let x = SparseVector::on_support(d, &support, &coef)?;
    let cost = l2(&residual(&cols, b, &support, &coef));
    Ok(SolveResult {
        x,
        cost,
        support_explored: super::binomial(d, k) as usize,
        converged: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IrlsOptions {
    /// Floor on `|r_i|` inside the weights `|r_i|^(p-2)`.
    pub delta: f64,
    /// Stop once the relative objective change falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IrlsOptions {
    fn default() -> Self {
        Self {
            delta: 1e-8,
            tol: 1e-9,
            max_iter: 500,
        }
    }
}

/// Iteratively reweighted least squares for `min_c ||sum_j c_j col_j - b||_p`
/// over the given columns. Returns `(coef, converged)`.
fn irls(sel: &[&[f64]], b: &[f64], p: f64, opts: &IrlsOptions) -> (Vec<f64>, bool) {
    let n = b.len();
    let objective = |coef: &[f64]| -> f64 {
        let mut r: Vec<f64> = b.iter().map(|v| -v).collect();
        for (c, col) in coef.iter().zip(sel) {
            for (ri, v) in r.iter_mut().zip(col.iter()) {
                *ri += c * v;
            }
        }
        r.iter().map(|v| v.abs().powf(p)).sum()
    };
    let mut coef = least_squares(sel, b).coef;
    let mut obj = objective(&coef);
    let mut best = (obj, coef.clone());
    if sel.is_empty() || obj == 0.0 {
        return (coef, true);
    }
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let mut r: Vec<f64> = b.iter().map(|v| -v).collect();
        for (c, col) in coef.iter().zip(sel) {
            for (ri, v) in r.iter_mut().zip(col.iter()) {
                *ri += c * v;
            }
        }
        let sw: Vec<f64> = r.iter().map(|v| v.abs().max(opts.delta).powf((p - 2.0) / 2.0)).collect();
        let wcols: Vec<Vec<f64>> = sel
            .iter()
            .map(|col| col.iter().zip(&sw).map(|(v, w)| v * w).collect())
            .collect();
        let wrefs: Vec<&[f64]> = wcols.iter().map(|c| c.as_slice()).collect();
        let wb: Vec<f64> = (0..n).map(|i| b[i] * sw[i]).collect();
        coef = least_squares(&wrefs, &wb).coef;
        let next = objective(&coef);
        if next < best.0 {
            best = (next, coef.clone());
        }
        let change = (obj - next).abs() / obj.max(f64::MIN_POSITIVE);
        obj = next;
        if change < opts.tol {
            converged = true;
            break;
        }
    }
    (best.1, converged)
}

/// Exact-support search for `min ||Ax - b||_p`, `p in [1, 2)`, with each
/// support solved by IRLS. `converged` is false if any support hit the
/// iteration cap.
pub fn brute_force_sparse_lp(a: &DenseMatrix, b: &[f64], k: usize, p: f64) -> Result<SolveResult> {
    brute_force_sparse_lp_with(a, b, k, p, &IrlsOptions::default())
}

pub fn brute_force_sparse_lp_with(
    a: &DenseMatrix,
    b: &[f64],
    k: usize,
    p: f64,
    opts: &IrlsOptions,
) -> Result<SolveResult> {
    check_dims(a, b, k)?;
    if !(1.0..2.0).contains(&p) {
        return Err(invalid!("lp solver needs p in [1, 2), got {p}"));
    }
    let cols = columns(a);
    let d = a.cols();
    let all_converged = AtomicBool::new(true);
    let best = best_support(d, k, |support| {
        let sel: Vec<&[f64]> = support.iter().map(|&j| cols[j].as_slice()).collect();
        let (coef, ok) = irls(&sel, b, p, opts);
        if !ok {
            all_converged.store(false, Ordering::Relaxed);
        }
        let cost = lp_norm(&residual(&cols, b, support, &coef), p)?;
        Ok(Some((cost, coef)))
    })?;
    let (_, support, coef) = best.expect("at least one support");
    let x = SparseVector::on_support(d, &support, &coef)?;
    let cost = lp_norm(&residual(&cols, b, &support, &coef), p)?;
    Ok(SolveResult {
        x,
        cost,
        support_explored: super::binomial(d, k) as usize,
        converged: all_converged.load(Ordering::Relaxed),
    })
}
