//! Deterministic checks that need no trials: support-family invariants and
//! the planted-loss table.

use serde::{Deserialize, Serialize};

use sparsketch::instances::{
    build_support_family, minimize_planted_loss_on_support, planted_gadget_weight, verify_family, FamilyReport,
    SupportFamily,
};
use sparsketch::numerics::RngStream;
use sparsketch::Result;

pub fn family_check(d: usize, k: usize, t: usize, c_overlap: f64, seed: u64) -> Result<(SupportFamily, FamilyReport)> {
    let family = build_support_family(d, k, t, c_overlap, &mut RngStream::new(seed, 0))?;
    let report = verify_family(&family);
    Ok((family, report))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedRow {
    pub alpha: usize,
    /// Exact minimum of the planted loss over supports with overlap `alpha`.
    pub minimum: f64,
    /// `3 - 2 (alpha/k) eps`.
    pub law: f64,
}

impl PlantedRow {
    pub fn deviation(&self) -> f64 {
        self.minimum - self.law
    }
}

/// Planted vector with `k` entries `1/sqrt(k)` on the first `k` of `2k`
/// coordinates, so every overlap `0..=k` has a support of size `k`.
fn planted_vector(k: usize) -> Vec<f64> {
    (0..2 * k).map(|i| if i < k { 1.0 / (k as f64).sqrt() } else { 0.0 }).collect()
}

/// Minimum of the planted loss on a support sharing `alpha` indices with the
/// planted one, with the gadget weight `M = 2 sqrt(n/(eps k))`.
pub fn planted_minimum(k: usize, alpha: usize, eps: f64, n: usize) -> Result<f64> {
    let v = planted_vector(k);
    let m = planted_gadget_weight(n, eps, k);
    let support: Vec<usize> = (0..alpha).chain(k..(2 * k - alpha)).collect();
    Ok(minimize_planted_loss_on_support(&support, &v, eps, m, n)?.1)
}

pub fn planted_table(k: usize, eps: f64, n: usize, alphas: &[usize]) -> Result<Vec<PlantedRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            Ok(PlantedRow {
                alpha,
                minimum: planted_minimum(k, alpha, eps, n)?,
                law: 3.0 - 2.0 * (alpha as f64 / k as f64) * eps,
            })
        })
        .collect()
}

/// Largest `c` such that every support with overlap `alpha < 19k/20` has
/// minimum loss at least `(1 + c eps)` times the overall minimum.
pub fn fit_planted_constant(k: usize, eps: f64, n: usize) -> Result<f64> {
    let best = planted_minimum(k, k, eps, n)?;
    let mut c = f64::INFINITY;
    for alpha in (0..k).filter(|a| 20 * a < 19 * k) {
        let l = planted_minimum(k, alpha, eps, n)?;
        c = c.min((l / best - 1.0) / eps);
    }
    Ok(c)
}
