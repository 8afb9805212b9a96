use serde::{Deserialize, Serialize};

use super::enumerate::best_support;
use super::SolveResult;
use crate::error::{invalid, Result};
use crate::estimators::{Estimator, SketchedData};
use crate::numerics::linalg::least_squares;
use crate::numerics::matrix::axpy;
use crate::sparse::SparseVector;

/// Derivative-free coordinate search: each sweep tries `+-step` on every
/// coordinate and keeps improvements; a sweep without one shrinks the step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternSearch {
    pub sweeps: usize,
    pub shrink: f64,
    /// First step as a fraction of the largest starting coefficient.
    pub initial_fraction: f64,
}

impl Default for PatternSearch {
    fn default() -> Self {
        Self {
            sweeps: 200,
            shrink: 0.5,
            initial_fraction: 0.5,
        }
    }
}

impl PatternSearch {
    /// Minimizes `objective(r)` over `r = sum_j c_j cols_j - target`, starting
    /// from `start`. Returns the best coefficients and value.
    pub fn minimize(
        &self,
        cols: &[&[f64]],
        target: &[f64],
        start: &[f64],
        objective: impl Fn(&[f64]) -> Result<f64>,
    ) -> Result<(Vec<f64>, f64)> {
        let mut c = start.to_vec();
        let mut r: Vec<f64> = target.iter().map(|v| -v).collect();
        for (cj, col) in c.iter().zip(cols) {
            axpy(*cj, col, &mut r);
        }
        let mut best = objective(&r)?;
        let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut step = self.initial_fraction * if scale > 0.0 { scale } else { 1.0 };
        let mut trial = r.clone();
        for _ in 0..self.sweeps {
            if best == 0.0 {
                break;
            }
            let mut improved = false;
            for j in 0..c.len() {
                for h in [step, -step] {
                    trial.copy_from_slice(&r);
                    axpy(h, cols[j], &mut trial);
                    let value = objective(&trial)?;
                    if value < best {
                        best = value;
                        c[j] += h;
                        std::mem::swap(&mut r, &mut trial);
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= self.shrink;
            }
        }
        Ok((c, best))
    }
}

/// `argmin` of an estimator over `k`-sparse `x`, by enumerating supports.
/// The `L2` estimator is minimized exactly by least squares on the sketched
/// columns; the others by [`PatternSearch`] from that least-squares point.
/// `cost` is the estimator value at the returned `x`.
pub fn sketched_sparse_min<D: SketchedData + Sync + ?Sized>(
    si: &D,
    estimator: &Estimator,
    k: usize,
) -> Result<SolveResult> {
    sketched_sparse_min_with(si, estimator, k, &PatternSearch::default())
}

pub fn sketched_sparse_min_with<D: SketchedData + Sync + ?Sized>(
    si: &D,
    estimator: &Estimator,
    k: usize,
    search: &PatternSearch,
) -> Result<SolveResult> {
    let d = si.dim();
    if k > d {
        return Err(invalid!("k = {k} exceeds d = {d}"));
    }
    let sb = si.sketched_b();
    let sketch = si.sketch();
    let best = best_support(d, k, |support| {
        let cols: Vec<&[f64]> = support.iter().map(|&j| si.sketched_column(j)).collect();
        let ls = least_squares(&cols, sb);
        match estimator {
            Estimator::L2 => Ok(Some((ls.residual_norm, ls.coef))),
            _ => {
                let (c, value) =
                    search.minimize(&cols, sb, &ls.coef, |r| estimator.from_residual(sketch, r))?;
                Ok(Some((value, c)))
            }
        }
    })?;
    let (_, support, coef) = best.expect("at least one support");
    let x = SparseVector::on_support(d, &support, &coef)?;
    let cost = estimator.evaluate(si, &x)?;
    Ok(SolveResult {
        x,
        cost,
        support_explored: super::binomial(d, k) as usize,
        converged: true,
    })
}
