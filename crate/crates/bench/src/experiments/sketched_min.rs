use sparsketch::estimators::{Estimator, SketchedInstance};
use sparsketch::instances::gen_gaussian_sparse_instance;
use sparsketch::numerics::matrix::l2;
use sparsketch::sketches::build_gaussian_sketch;
use sparsketch::solvers::{brute_force_sparse_l2, sketched_sparse_min};
use sparsketch::Result;

use super::{finish, purpose, run_trials, stream, Outcome};
use crate::config::ExperimentConfig;
use crate::report::ExperimentReport;
use crate::sizing;

/// Sketch-and-solve k-sparse l2 regression against the exhaustive optimum;
/// success when the sketched minimizer's true cost is within `1 + 4 eps`.
pub(super) fn run_sketched_min_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let m = sizing::primary_rows(cfg)?;
    let records = run_trials(cfg, |t| {
        let inst =
            gen_gaussian_sparse_instance(cfg.n, cfg.d, cfg.k, cfg.noise, &mut stream(cfg, t as u64, purpose::INSTANCE))?;
        let opt = brute_force_sparse_l2(&inst.a, &inst.b, cfg.k)?.cost;
        let s = build_gaussian_sketch(m, inst.n(), &mut stream(cfg, t as u64, purpose::SKETCH))?;
        let si = SketchedInstance::new(s, &inst)?;
        let res = sketched_sparse_min(&si, &Estimator::L2, cfg.k)?;
        let cost = l2(&inst.residual_sparse(&res.x)?);
        Ok(Outcome::new(
            cost / opt,
            cost <= (1.0 + 4.0 * cfg.eps) * opt,
            &[("m", m as f64), ("opt", opt), ("true_cost", cost)],
        ))
    })?;
    Ok(finish(cfg, records, &[("m", m as f64)], vec![]))
}
