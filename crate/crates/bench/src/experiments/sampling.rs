use rand::seq::index::sample;

use sparsketch::estimators::{Estimator, SketchedInstance};
use sparsketch::instances::gen_sampling_failure_instance;
use sparsketch::sketches::LinearSketch;
use sparsketch::solvers::sketched_sparse_min;
use sparsketch::Result;

use super::{finish, purpose, run_trials, stream, Outcome};
use crate::config::ExperimentConfig;
use crate::report::ExperimentReport;
use crate::sizing;

/// Samples `m` distinct rows of `[I, e_i]` and decodes the best 1-sparse
/// vector from the sample alone. Success means exact recovery of `e_i`.
pub(super) fn run_sampling_failure_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let m = sizing::primary_rows(cfg)?.min(cfg.n);
    let records = run_trials(cfg, |t| {
        let inst = gen_sampling_failure_instance(cfg.n, &mut stream(cfg, t as u64, purpose::INSTANCE))?;
        let i = inst.meta.planted_index.expect("generator records the planted index");
        let mut rows = sample(&mut stream(cfg, t as u64, purpose::SKETCH), cfg.n, m).into_vec();
        rows.sort_unstable();
        let sampled = rows.binary_search(&i).is_ok();
        let s = LinearSketch::row_sampler_from_indices(cfg.n, rows)?;
        let si = SketchedInstance::new(s, &inst)?;
        let res = sketched_sparse_min(&si, &Estimator::L2, 1)?;
        let exact = res.x.support() == [i] && (res.x.values()[0] - 1.0).abs() < 1e-12;
        let miss = res.x.to_dense().iter().zip(&inst.b).map(|(a, b)| (a - b).abs()).sum::<f64>();
        Ok(Outcome::new(
            miss,
            exact,
            &[
                ("m", m as f64),
                ("planted_index", i as f64),
                ("sampled", if sampled { 1.0 } else { 0.0 }),
            ],
        ))
    })?;
    Ok(finish(cfg, records, &[("m", m as f64), ("predicted_rate", m as f64 / cfg.n as f64)], vec![]))
}
