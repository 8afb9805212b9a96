//! Loss evaluations and imbalance (mu) certification.
//!
//! Every loss here is a function of the residual `r = Ax - b`, with large
//! positive `r` being the penalized side. Logistic is `ln(1 + e^r)` and hinge
//! is `max(0, 1 + r)`, so both stay within a constant of `max(0, r)`.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::instances::RegressionInstance;
use crate::numerics::stable::lower_median_in_place;
use crate::numerics::RngStream;

pub fn lp_norm(y: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(invalid!("lp norm needs finite p >= 1, got {p}"));
    }
    if p == 1.0 {
        return Ok(y.iter().map(|v| v.abs()).sum());
    }
    if p == 2.0 {
        return Ok(crate::numerics::matrix::l2(y));
    }
    // scale by the max entry so large values do not overflow in |y|^p
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = y.iter().map(|v| (v.abs() / scale).powf(p)).sum();
    Ok(scale * s.powf(1.0 / p))
}

/// Median of `|y_i|`; lower median for even length.
pub fn median_norm(y: &[f64]) -> Result<f64> {
    if y.is_empty() {
        return Err(invalid!("median of an empty vector"));
    }
    let mut abs: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    Ok(lower_median_in_place(&mut abs))
}

pub fn relu_norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v.max(0.0)).sum()
}

pub fn f_norm(y: &[f64], f: &HingeLikeLoss) -> f64 {
    y.iter().map(|&v| f.eval(v)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LossFamily {
    Logistic,
    Hinge,
    ReluReference,
    /// Piecewise-linear through `(xs, ys)`, extended linearly past both ends.
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
}

/// A loss `f` with Lipschitz constant `l`, `|f - relu| <= a1` everywhere and
/// `f >= a2` on `[0, inf)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HingeLikeLoss {
    pub family: LossFamily,
    pub l: f64,
    pub a1: f64,
    pub a2: f64,
}

const GRID_LO: f64 = -50.0;
const GRID_HI: f64 = 50.0;
const GRID_STEP: f64 = 1e-3;

impl HingeLikeLoss {
    pub fn logistic() -> Self {
        Self {
            family: LossFamily::Logistic,
            l: 1.0,
            a1: std::f64::consts::LN_2,
            a2: std::f64::consts::LN_2,
        }
    }

    pub fn hinge() -> Self {
        Self {
            family: LossFamily::Hinge,
            l: 1.0,
            a1: 1.0,
            a2: 1.0,
        }
    }

    /// `max(0, r)` itself. Not hinge-like (`a2 = 0`); used to check that the
    /// hinge estimator collapses to the relu estimator.
    pub fn relu_reference() -> Self {
        Self {
            family: LossFamily::ReluReference,
            l: 1.0,
            a1: 0.0,
            a2: 0.0,
        }
    }

    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>, l: f64, a1: f64, a2: f64) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(invalid!("tabulated loss needs at least two (x, y) pairs of equal length"));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid!("tabulated loss abscissae must be strictly increasing"));
        }
        let f = Self {
            family: LossFamily::Tabulated { xs, ys },
            l,
            a1,
            a2,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.family {
            LossFamily::Logistic => r.max(0.0) + (-r.abs()).exp().ln_1p(),
            LossFamily::Hinge => (1.0 + r).max(0.0),
            LossFamily::ReluReference => r.max(0.0),
            LossFamily::Tabulated { xs, ys } => {
                let n = xs.len();
                let seg = match xs.partition_point(|&x| x <= r) {
                    0 => 0,
                    i if i >= n => n - 2,
                    i => i - 1,
                };
                let t = (r - xs[seg]) / (xs[seg + 1] - xs[seg]);
                ys[seg] + t * (ys[seg + 1] - ys[seg])
            }
        }
    }

    /// Checks the declared `(l, a1, a2)` on the grid `[-50, 50]` with step
    /// `1e-3`.
    pub fn validate(&self) -> Result<()> {
        if !(self.l > 0.0) || !(self.a1 >= 0.0) || !(self.a2 >= 0.0) {
            return Err(invalid!("loss constants must satisfy l > 0, a1 >= 0, a2 >= 0"));
        }
        let steps = ((GRID_HI - GRID_LO) / GRID_STEP).round() as usize;
        let slack = 1e-12;
        let mut prev: Option<(f64, f64)> = None;
        for s in 0..=steps {
            let x = GRID_LO + s as f64 * GRID_STEP;
            let fx = self.eval(x);
            if (fx - x.max(0.0)).abs() > self.a1 + slack {
                return Err(invalid!("|f - relu| exceeds a1 = {} at x = {x}", self.a1));
            }
            if x >= 0.0 && fx < self.a2 - slack {
                return Err(invalid!("f({x}) = {fx} below a2 = {}", self.a2));
            }
            if let Some((px, pf)) = prev {
                if (fx - pf).abs() > self.l * (x - px) + slack {
                    return Err(invalid!("f is not {}-Lipschitz near x = {x}", self.l));
                }
            }
            prev = Some((x, fx));
        }
        Ok(())
    }

    /// As [`validate`](Self::validate), and additionally requires
    /// `a1, a2 > 0` as the hinge-like estimator's analysis does.
    pub fn require_hinge_like(&self) -> Result<()> {
        if !(self.a1 > 0.0 && self.a2 > 0.0) {
            return Err(invalid!("loss is not hinge-like: need a1 > 0 and a2 > 0"));
        }
        self.validate()
    }

    /// `16 * max(1, l, a1, 1/a2)^4`.
    pub fn lower_bound_constant(&self) -> f64 {
        16.0 * [1.0, self.l, self.a1, 1.0 / self.a2]
            .into_iter()
            .fold(0.0, f64::max)
            .powi(4)
    }

    /// `(n + ||y||_1) / (C * mu)`, a lower bound on `f_norm(y)` whenever `y`
    /// lies in a column space with imbalance at most `mu`.
    pub fn f_norm_lower_bound(&self, n: usize, l1: f64, mu: f64) -> f64 {
        (n as f64 + l1) / (self.lower_bound_constant() * mu)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuCertificate {
    /// Certified by the instance's construction, when known.
    pub upper_bound: Option<f64>,
    /// Best `||(Ax)^+||_1 / ||(Ax)^-||_1` found by search.
    pub empirical_lower: f64,
}

/// `||(y)^+||_1 / ||(y)^-||_1`; `None` when the negative part vanishes.
pub fn imbalance_ratio(y: &[f64]) -> Option<f64> {
    let pos: f64 = y.iter().map(|v| v.max(0.0)).sum();
    let neg: f64 = y.iter().map(|v| (-v).max(0.0)).sum();
    if neg == 0.0 {
        if pos == 0.0 {
            Some(1.0)
        } else {
            None
        }
    } else {
        Some(pos / neg)
    }
}

/// Certifies the imbalance of `[A, b]` (just `A` when `b = 0`): the upper
/// bound comes from the instance's construction, the lower bound from random
/// directions refined by coordinate ascent.
pub fn certify_mu(
    instance: &RegressionInstance,
    search_trials: usize,
    rng: &mut RngStream,
) -> Result<MuCertificate> {
    let a = &instance.a;
    let n = a.rows();
    if n == 0 {
        return Err(invalid!("instance has no rows"));
    }
    let use_b = instance.b.iter().any(|v| *v != 0.0);
    let dim = a.cols() + usize::from(use_b);
    let image = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut s = crate::numerics::matrix::dot(a.row(i), &x[..a.cols()]);
                if use_b {
                    s += instance.b[i] * x[a.cols()];
                }
                s
            })
            .collect()
    };
    // ratio of x and of -x in one pass; None means unbounded
    let score = |x: &[f64]| -> Option<f64> {
        let y = image(x);
        let r = imbalance_ratio(&y)?;
        if r == 0.0 {
            return None;
        }
        Some(r.max(1.0 / r))
    };

    let mut best = 1.0f64;
    let mut best_x: Vec<f64> = Vec::new();
    for _ in 0..search_trials.max(1) {
        let x: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let Some(s) = score(&x) else {
            return Err(Error::UnboundedMu);
        };
        if s > best || best_x.is_empty() {
            best = best.max(s);
            best_x = x;
        }
    }
    // axis directions catch single columns of one sign
    for j in 0..dim {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        if image(&e).iter().all(|v| *v == 0.0) {
            continue;
        }
        match score(&e) {
            None => return Err(Error::UnboundedMu),
            Some(s) if s > best => {
                best = s;
                best_x = e;
            }
            _ => {}
        }
    }

    let mut step = 1.0;
    let mut x = best_x;
    for _ in 0..40 {
        let mut improved = false;
        for j in 0..dim {
            for dir in [step, -step] {
                x[j] += dir;
                match score(&x) {
                    None => return Err(Error::UnboundedMu),
                    Some(s) if s > best => {
                        best = s;
                        improved = true;
                    }
                    _ => x[j] -= dir,
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    Ok(MuCertificate {
        upper_bound: instance.meta.mu_upper,
        empirical_lower: best,
    })
}
