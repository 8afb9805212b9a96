use sparsketch::instances::{gen_gaussian_sparse_instance, RegressionInstance};
use sparsketch::numerics::matrix::l2;
use sparsketch::sketches::build_gaussian_sketch;
use sparsketch::solvers::{lasso_objective, lasso_solve};
use sparsketch::Result;

use super::{finish, purpose, run_trials, stream, Outcome};
use crate::config::ExperimentConfig;
use crate::report::ExperimentReport;
use crate::sizing;

/// Relative tolerance of every LASSO solve in the experiment.
const LASSO_TOL: f64 = 1e-10;

/// Scales `A` and `b` so that `||A||_2 <= 1` and `||b||_2 = 1`. The power
/// iteration estimate is inflated by 1% since it approaches from below.
pub(crate) fn normalize(inst: &mut RegressionInstance) {
    let s = inst.a.spectral_norm_estimate(100) * 1.01;
    if s > 0.0 {
        inst.a.scale(1.0 / s);
    }
    let nb = l2(&inst.b);
    if nb > 0.0 {
        inst.b.iter_mut().for_each(|v| *v /= nb);
    }
}

pub(super) fn run_lasso_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let m = sizing::primary_rows(cfg)?;
    let records = run_trials(cfg, |t| {
        let mut inst =
            gen_gaussian_sparse_instance(cfg.n, cfg.d, cfg.k, cfg.noise, &mut stream(cfg, t as u64, purpose::INSTANCE))?;
        normalize(&mut inst);
        let opt = lasso_solve(&inst.a, &inst.b, cfg.lambda, LASSO_TOL)?.cost;
        let s = build_gaussian_sketch(m, inst.n(), &mut stream(cfg, t as u64, purpose::SKETCH))?;
        let sa = s.apply_matrix(&inst.a)?;
        let sb = s.apply(&inst.b)?;
        let sketched = lasso_solve(&sa, &sb, cfg.lambda, LASSO_TOL)?;
        let x = sketched.x.to_dense();
        let cost = lasso_objective(&inst.a, &inst.b, &x, cfg.lambda)?;
        let l1 = sketched.x.l1();
        let norm_ok = l1 <= 2.0 * sketched.cost / cfg.lambda;
        Ok(Outcome::new(
            cost / opt,
            cost <= (1.0 + cfg.eps) * opt,
            &[
                ("m", m as f64),
                ("opt", opt),
                ("sketched_cost", cost),
                ("sketched_opt", sketched.cost),
                ("l1_norm", l1),
                ("norm_bound_ok", if norm_ok { 1.0 } else { 0.0 }),
            ],
        ))
    })?;
    Ok(finish(cfg, records, &[("m", m as f64)], vec![]))
}
