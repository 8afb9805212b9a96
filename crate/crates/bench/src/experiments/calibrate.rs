use sparsketch::numerics::{calibrate_stable_scale, empirical_abs_median, StableParams};
use sparsketch::Result;

use super::{finish, purpose, run_trials, stream, Outcome};
use crate::config::ExperimentConfig;
use crate::report::ExperimentReport;

/// Exponent of trial `t`: evenly spaced over `[1, 2]` across the trials, or
/// the configured `p` for a single trial.
pub(crate) fn trial_exponent(cfg: &ExperimentConfig, t: usize) -> f64 {
    if cfg.trials == 1 {
        cfg.p
    } else {
        1.0 + t as f64 / (cfg.trials - 1) as f64
    }
}

/// Monte-Carlo median of `|X|` under the closed-form scale; success when it
/// is within `eps` of 1.
pub(super) fn run_calibration_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let records = run_trials(cfg, |t| {
        let p = trial_exponent(cfg, t);
        let params = StableParams::new(p, calibrate_stable_scale(p)?)?;
        let median = empirical_abs_median(&params, cfg.samples, &mut stream(cfg, t as u64, purpose::SAMPLE));
        let dev = (median - 1.0).abs();
        Ok(Outcome::new(dev, dev <= cfg.eps, &[("p", p), ("median", median)]))
    })?;
    Ok(finish(cfg, records, &[("samples", cfg.samples as f64)], vec![]))
}
