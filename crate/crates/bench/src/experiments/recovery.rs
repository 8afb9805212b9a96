use sparsketch::estimators::{build_recovery_sketches, recover_from_sketches};
use sparsketch::instances::gen_powerlaw_signal;
use sparsketch::Result;

use super::{finish, purpose, run_trials, stream, Outcome};
use crate::config::ExperimentConfig;
use crate::report::ExperimentReport;
use crate::sizing;

/// `||x - x_k||_2^2`: the energy outside the `k` largest magnitudes.
fn tail_energy(x: &[f64], k: usize) -> f64 {
    let mut sq: Vec<f64> = x.iter().map(|v| v * v).collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    sq[k.min(sq.len())..].iter().sum()
}

pub(super) fn run_sparse_recovery_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let shape = sizing::recovery_shape(cfg)?;
    let measurements = shape.measurements();
    let records = run_trials(cfg, |t| {
        let x = gen_powerlaw_signal(cfg.d, cfg.k, cfg.decay, &mut stream(cfg, t as u64, purpose::SIGNAL))?;
        let (s1, s2) = build_recovery_sketches(&shape, cfg.d, &mut stream(cfg, t as u64, purpose::SKETCH))?;
        let out1 = s1.apply(&x)?;
        let out2 = s2.apply(&x)?;
        let xhat = recover_from_sketches(&s1, &out1, &s2, &out2, cfg.k)?.to_dense();
        let error: f64 = x.iter().zip(&xhat).map(|(a, b)| (a - b) * (a - b)).sum();
        let tail = tail_energy(&x, cfg.k);
        let ratio = if tail > 0.0 { error / tail } else if error == 0.0 { 0.0 } else { f64::MAX };
        Ok(Outcome::new(
            ratio,
            error <= (1.0 + cfg.eps) * tail,
            &[("measurements", measurements as f64), ("error", error), ("tail", tail)],
        ))
    })?;
    let gaussian = sizing::gaussian_rows(cfg.c_gauss, cfg.d, cfg.k, cfg.eps);
    Ok(finish(
        cfg,
        records,
        &[
            ("measurements", measurements as f64),
            ("b1", shape.b1 as f64),
            ("t1", shape.t1 as f64),
            ("b2", shape.b2 as f64),
            ("t2", shape.t2 as f64),
            ("gaussian_rows", gaussian as f64),
        ],
        vec![],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_energy_drops_the_largest_entries() {
        assert_eq!(tail_energy(&[3.0, -1.0, 0.5, -4.0], 2), 1.25);
        assert_eq!(tail_energy(&[1.0], 3), 0.0);
    }
}
