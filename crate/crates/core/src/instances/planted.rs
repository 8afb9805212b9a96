use super::RegressionInstance;
use crate::error::{invalid, Result};
use crate::numerics::linalg::solve_spd;
use crate::sparse::SparseVector;

/// `M = 2 * sqrt(n / (eps * k))`, twice the smallest weight for which the
/// gadget row pins `sum(x)` near `sqrt(k)`.
pub fn planted_gadget_weight(n: usize, eps: f64, k: usize) -> f64 {
    2.0 * (n as f64 / (eps * k as f64)).sqrt()
}

/// Appends the row `[M, ..., M]` to `A` and `sqrt(k) * M` to `b`.
pub fn gen_planted_regression(inst: &RegressionInstance, eps: f64) -> Result<RegressionInstance> {
    let k = inst
        .meta
        .k
        .ok_or_else(|| invalid!("planted regression needs an instance with k in its metadata"))?;
    if inst.meta.planted_support.is_none() {
        return Err(invalid!("planted regression needs a planted support"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid!("eps must lie in (0, 1), got {eps}"));
    }
    let m = planted_gadget_weight(inst.n(), eps, k);
    let mut a = inst.a.clone();
    a.push_row(&vec![m; inst.d()])?;
    let mut b = inst.b.clone();
    b.push((k as f64).sqrt() * m);
    let mut meta = inst.meta.clone();
    meta.gadget_m = Some(m);
    meta.epsilon = Some(eps);
    RegressionInstance::new(a, b, meta)
}

/// `1 + ||x||^2 + (1 - eps x.v)^2 + (M^2/n)(sum(x) - sqrt(k))^2`, where `k`
/// is the number of nonzeros of `v`.
pub fn eval_planted_loss(x: &SparseVector, v: &[f64], eps: f64, m: f64, n: usize) -> Result<f64> {
    if x.dim() != v.len() {
        return Err(invalid!("x has dimension {} but v has {}", x.dim(), v.len()));
    }
    let k = v.iter().filter(|e| **e != 0.0).count() as f64;
    let xv: f64 = x.iter().map(|(i, xi)| xi * v[i]).sum();
    let sum: f64 = x.values().iter().sum();
    let norm2: f64 = x.values().iter().map(|e| e * e).sum();
    let gadget = m * m / n as f64;
    Ok(1.0 + norm2 + (1.0 - eps * xv).powi(2) + gadget * (sum - k.sqrt()).powi(2))
}

/// Exact minimizer of [`eval_planted_loss`] over vectors supported on
/// `support`. The loss is a convex quadratic there, so the minimizer solves
/// `(I + eps^2 v v^T + (M^2/n) 1 1^T) x = eps v + (M^2/n) sqrt(k) 1`.
pub fn minimize_planted_loss_on_support(
    support: &[usize],
    v: &[f64],
    eps: f64,
    m: f64,
    n: usize,
) -> Result<(SparseVector, f64)> {
    let d = v.len();
    let mut support = support.to_vec();
    support.sort_unstable();
    support.dedup();
    if support.iter().any(|&i| i >= d) {
        return Err(invalid!("support index out of range for d = {d}"));
    }
    let s = support.len();
    let k = v.iter().filter(|e| **e != 0.0).count() as f64;
    let c = m * m / n as f64;
    let vs: Vec<f64> = support.iter().map(|&i| v[i]).collect();
    let mut h = vec![0.0; s * s];
    for i in 0..s {
        for j in 0..s {
            h[i * s + j] = eps * eps * vs[i] * vs[j] + c + if i == j { 1.0 } else { 0.0 };
        }
    }
    let rhs: Vec<f64> = vs.iter().map(|vi| eps * vi + c * k.sqrt()).collect();
    let xs = solve_spd(&h, s, &rhs).ok_or_else(|| invalid!("planted-loss system not positive definite"))?;
    let x = SparseVector::on_support(d, &support, &xs)?;
    let l = eval_planted_loss(&x, v, eps, m, n)?;
    Ok((x, l))
}
