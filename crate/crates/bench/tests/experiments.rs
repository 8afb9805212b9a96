use sparsketch_bench::{run_experiment, ExperimentConfig, ExperimentId};

fn small(id: ExperimentId) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(id);
    cfg.master_seed = 42;
    cfg.trials = 6;
    cfg.n = 120;
    cfg.d = 8;
    cfg.k = 2;
    cfg.probes = 20;
    cfg.samples = 20_000;
    cfg
}

#[test]
fn identical_configs_give_identical_reports() {
    for id in ExperimentId::ALL {
        let mut cfg = small(id);
        match id {
            ExperimentId::Recover => {
                cfg.n = 400;
                cfg.d = 400;
            }
            ExperimentId::SupportSweep => cfg.m_grid = vec![4, 32],
            _ => {}
        }
        let a = run_experiment(&cfg).unwrap().without_timings();
        let b = run_experiment(&cfg).unwrap().without_timings();
        assert_eq!(a, b, "{id}");
        assert_eq!(a.records.len(), cfg.trials);
        assert_eq!(a.config, cfg, "report echoes the config");
    }
}

#[test]
fn per_trial_records_do_not_depend_on_trial_count() {
    let mut cfg = small(ExperimentId::EmbedL2);
    let short = run_experiment(&cfg).unwrap().without_timings();
    cfg.trials = 12;
    let long = run_experiment(&cfg).unwrap().without_timings();
    assert_eq!(short.records[..], long.records[..6]);
}

#[test]
fn seeds_change_the_draws() {
    let mut cfg = small(ExperimentId::EmbedL2);
    let a = run_experiment(&cfg).unwrap();
    cfg.master_seed += 1;
    let b = run_experiment(&cfg).unwrap();
    assert_ne!(a.records[0].value, b.records[0].value);
}

#[test]
fn success_rate_is_mean_of_flags() {
    let r = run_experiment(&small(ExperimentId::SamplingFail)).unwrap();
    let mean = r.records.iter().filter(|t| t.success).count() as f64 / r.records.len() as f64;
    assert_eq!(r.summary.success_rate, mean);
}

#[test]
fn slack_regime_always_succeeds() {
    for id in [ExperimentId::EmbedL2, ExperimentId::EmbedLp] {
        let mut cfg = small(id);
        cfg.eps = 0.9;
        cfg.m = Some(4000);
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.summary.success_rate, 1.0, "{id}");
    }
}

#[test]
fn single_gaussian_row_cannot_embed() {
    let mut cfg = small(ExperimentId::EmbedL2);
    cfg.trials = 20;
    cfg.eps = 0.1;
    cfg.m = Some(1);
    let r = run_experiment(&cfg).unwrap();
    assert!(r.summary.success_rate <= 0.1, "rate {}", r.summary.success_rate);
}

#[test]
fn lasso_with_one_row_misses_the_optimum() {
    let mut cfg = small(ExperimentId::Lasso);
    cfg.n = 200;
    cfg.d = 20;
    cfg.trials = 10;
    cfg.eps = 0.05;
    cfg.m = Some(1);
    let r = run_experiment(&cfg).unwrap();
    assert!(r.summary.success_rate <= 0.2, "rate {}", r.summary.success_rate);
}

#[test]
fn sampling_every_row_always_recovers() {
    let mut cfg = small(ExperimentId::SamplingFail);
    cfg.n = 12;
    cfg.d = 12;
    cfg.m = Some(12);
    let r = run_experiment(&cfg).unwrap();
    assert_eq!(r.summary.success_rate, 1.0);
}

#[test]
fn recovery_with_tiny_tables_fails() {
    let mut cfg = small(ExperimentId::Recover);
    cfg.n = 2000;
    cfg.d = 2000;
    cfg.k = 10;
    cfg.eps = 0.1;
    cfg.c_a = 0.05;
    cfg.c_b = 0.1;
    let r = run_experiment(&cfg).unwrap();
    assert!(r.summary.success_rate < 0.5, "rate {}", r.summary.success_rate);
}

#[test]
fn support_sweep_curve_covers_the_grid() {
    let mut cfg = small(ExperimentId::SupportSweep);
    cfg.m_grid = vec![3, 30, 300];
    let r = run_experiment(&cfg).unwrap();
    let ms: Vec<usize> = r.summary.curve.iter().map(|c| c.m).collect();
    assert_eq!(ms, cfg.m_grid);
    assert_eq!(r.summary.curve.iter().map(|c| c.trials).sum::<usize>(), cfg.trials);
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = small(ExperimentId::EmbedL2);
    cfg.eps = 1.5;
    assert!(run_experiment(&cfg).is_err());
    let mut cfg = small(ExperimentId::EmbedLp);
    cfg.k = 0;
    assert!(run_experiment(&cfg).is_err(), "k = 0 without an explicit m");
}
