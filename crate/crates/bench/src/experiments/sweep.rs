use sparsketch::estimators::{Estimator, SketchedInstance};
use sparsketch::instances::{build_support_family, gen_planted_regression, gen_spiked_instance};
use sparsketch::sketches::build_gaussian_sketch;
use sparsketch::solvers::sketched_sparse_min;
use sparsketch::Result;

use super::{finish, purpose, run_trials, stream, Outcome, SHARED_TRIAL};
use crate::config::ExperimentConfig;
use crate::report::{CurvePoint, ExperimentReport};

/// Fraction of the planted support a trial must recover to count as a
/// success: the "more than 19k/20" threshold.
pub const RECOVERY_FRACTION: f64 = 0.95;

/// Overlap constant of the support family.
const FAMILY_OVERLAP: f64 = 0.9;

/// Trial `t` sketches a fresh planted-gadget instance with
/// `m = m_grid[t % len]` Gaussian rows, solves sketched k-sparse l2, and
/// records the fraction of the planted support it found.
pub(super) fn run_support_recovery_sweep(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let family = build_support_family(cfg.d, cfg.k, 1, FAMILY_OVERLAP, &mut stream(cfg, SHARED_TRIAL, purpose::FAMILY))?;
    let grid = &cfg.m_grid;
    let records = run_trials(cfg, |t| {
        let m = grid[t % grid.len()];
        let mut rng = stream(cfg, t as u64, purpose::INSTANCE);
        let spiked = gen_spiked_instance(cfg.n, family.d, cfg.k, cfg.eps, &family, &mut rng)?;
        let planted = gen_planted_regression(&spiked, cfg.eps)?;
        let truth = planted.meta.planted_support.clone().expect("spiked instances record their support");
        let s = build_gaussian_sketch(m, planted.n(), &mut stream(cfg, t as u64, purpose::SKETCH))?;
        let si = SketchedInstance::new(s, &planted)?;
        let res = sketched_sparse_min(&si, &Estimator::L2, cfg.k)?;
        let hits = res.x.support().iter().filter(|j| truth.contains(j)).count();
        let fraction = hits as f64 / truth.len().max(1) as f64;
        Ok(Outcome::new(
            fraction,
            fraction >= RECOVERY_FRACTION,
            &[("m", m as f64), ("recovered", hits as f64)],
        ))
    })?;
    let curve = grid
        .iter()
        .map(|&m| {
            let at: Vec<_> = records.iter().filter(|r| r.aux["m"] == m as f64).collect();
            let count = at.len().max(1) as f64;
            CurvePoint {
                m,
                trials: at.len(),
                mean_value: at.iter().map(|r| r.value).sum::<f64>() / count,
                success_rate: at.iter().filter(|r| r.success).count() as f64 / count,
            }
        })
        .collect();
    Ok(finish(
        cfg,
        records,
        &[("family_d", family.d as f64), ("family_size", family.len() as f64)],
        curve,
    ))
}
