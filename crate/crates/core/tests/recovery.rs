use proptest::prelude::*;

use sparsketch::estimators::{build_recovery_sketches, recover_from_sketches, RecoveryParams};
use sparsketch::instances::{gen_powerlaw_signal, powerlaw_tail_energy};
use sparsketch::numerics::RngStream;

fn params() -> RecoveryParams {
    RecoveryParams { c_a: 2.0, c_b: 1.0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// A k-sparse signal with well separated entries collides with at most
    /// a minority of tables, so every point query is exact.
    #[test]
    fn exactly_sparse_signals_are_recovered(seed in 0u64..10_000) {
        let (d, k) = (1000, 4);
        let mut rng = RngStream::new(seed, 0);
        let shape = params().shape(d, k, 0.25).unwrap();
        let (s1, s2) = build_recovery_sketches(&shape, d, &mut rng).unwrap();
        let mut x = vec![0.0; d];
        for (j, idx) in [17usize, 230, 512, 999].iter().enumerate() {
            x[*idx] = if j % 2 == 0 { 3.0 + j as f64 } else { -2.0 - j as f64 };
        }
        let xh = recover_from_sketches(&s1, &s1.apply(&x).unwrap(), &s2, &s2.apply(&x).unwrap(), k).unwrap();
        prop_assert_eq!(xh.support(), &[17usize, 230, 512, 999][..]);
        for (got, idx) in xh.values().iter().zip([17usize, 230, 512, 999]) {
            prop_assert!((got - x[idx]).abs() < 1e-12);
        }
    }
}

#[test]
fn power_law_recovery_meets_the_tail_bound_on_most_seeds() {
    let (d, k, eps, decay) = (2000, 8, 0.25, 1.0);
    let tail = powerlaw_tail_energy(d, k, decay);
    let shape = params().shape(d, k, eps).unwrap();
    let mut ok = 0;
    for seed in 0..20 {
        let mut rng = RngStream::new(seed, 7);
        let x = gen_powerlaw_signal(d, k, decay, &mut rng).unwrap();
        let (s1, s2) = build_recovery_sketches(&shape, d, &mut rng).unwrap();
        let xh = recover_from_sketches(&s1, &s1.apply(&x).unwrap(), &s2, &s2.apply(&x).unwrap(), k).unwrap();
        let dense = xh.to_dense();
        let err: f64 = x.iter().zip(&dense).map(|(a, b)| (a - b).powi(2)).sum();
        if err <= (1.0 + eps) * tail {
            ok += 1;
        }
    }
    assert!(ok >= 18, "{ok} of 20 seeds");
}

#[test]
fn recovery_uses_fewer_measurements_than_the_dimension() {
    let shape = params().shape(100_000, 10, 0.25).unwrap();
    assert!(shape.measurements() < 100_000 / 10);
}
