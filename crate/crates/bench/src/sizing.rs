//! Sketch sizes as functions of the instance parameters and the configured
//! big-O constants.

use sparsketch::estimators::{RecoveryParams, RecoveryShape};
use sparsketch::{Error, Result};

use crate::config::ExperimentConfig;

fn ceil_count(x: f64) -> usize {
    (x.ceil() as usize).max(1)
}

/// `ceil(C_gauss * k * ln(d/k) / eps^2)`.
pub fn gaussian_rows(c_gauss: f64, d: usize, k: usize, eps: f64) -> usize {
    let k = k.max(1) as f64;
    ceil_count(c_gauss * k * (d as f64 / k).ln() / (eps * eps))
}

/// `ceil(C_med * k * (ln(d/k) + ln(k/eps)) / eps^2)`.
pub fn median_rows(c_med: f64, d: usize, k: usize, eps: f64) -> usize {
    let k = k.max(1) as f64;
    let log = (d as f64 / k).ln() + (k / eps).ln();
    ceil_count(c_med * k * log / (eps * eps))
}

/// `ceil(C_relu * mu^2 * k * ln(mu d / (eps delta)) / eps^2)`.
pub fn relu_rows(c_relu: f64, mu: f64, d: usize, k: usize, eps: f64, delta: f64) -> usize {
    let k = k.max(1) as f64;
    let log = (mu * d as f64 / (eps * delta)).ln();
    ceil_count(c_relu * mu * mu * k * log / (eps * eps))
}

/// `ceil(C_hinge * k * ln(n d / eps) / eps^2)`.
pub fn hinge_sample_rows(c_hinge: f64, n: usize, d: usize, k: usize, eps: f64) -> usize {
    let k = k.max(1) as f64;
    ceil_count(c_hinge * k * (n as f64 * d as f64 / eps).ln() / (eps * eps))
}

/// `ceil(C_L * ln(d/delta) / (lambda^2 eps^2))`.
pub fn lasso_rows(c_l: f64, d: usize, delta: f64, lambda: f64, eps: f64) -> usize {
    ceil_count(c_l * (d as f64 / delta).ln() / (lambda * lambda * eps * eps))
}

pub fn recovery_shape(cfg: &ExperimentConfig) -> Result<RecoveryShape> {
    RecoveryParams {
        c_a: cfg.c_a,
        c_b: cfg.c_b,
    }
    .shape(cfg.d, cfg.k, cfg.eps)
}

/// The primary sketch size of an experiment: the override when present,
/// otherwise the formula for its sketch family.
pub fn primary_rows(cfg: &ExperimentConfig) -> Result<usize> {
    use crate::config::ExperimentId::*;
    if let Some(m) = cfg.m {
        return Ok(m);
    }
    Ok(match cfg.experiment {
        EmbedL2 | SketchedMin => gaussian_rows(cfg.c_gauss, cfg.d, cfg.k, cfg.eps),
        EmbedLp => {
            if cfg.k == 0 {
                return Err(Error::InvalidArgument(
                    "embed-lp with k = 0 needs an explicit m".into(),
                ));
            }
            median_rows(cfg.c_med, cfg.d, cfg.k, cfg.eps)
        }
        EmbedRelu | EmbedHinge => relu_rows(cfg.c_relu_m1, cfg.mu, cfg.d, cfg.k, cfg.eps, cfg.delta),
        Lasso => lasso_rows(cfg.c_l, cfg.d, cfg.delta, cfg.lambda, cfg.eps),
        Recover => recovery_shape(cfg)?.measurements(),
        SamplingFail => cfg.n / 3,
        SupportSweep | CalibrateStable => 0,
    })
}
