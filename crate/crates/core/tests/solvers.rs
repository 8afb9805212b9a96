use proptest::prelude::*;

use sparsketch::estimators::{Estimator, SketchedInstance};
use sparsketch::instances::{gen_gaussian_sparse_instance, gen_sampling_failure_instance};
use sparsketch::numerics::linalg::solve_spd;
use sparsketch::numerics::matrix::dot;
use sparsketch::numerics::{DenseMatrix, RngStream};
use sparsketch::sketches::{build_gaussian_sketch, build_row_sampler_identity};
use sparsketch::solvers::{brute_force_sparse_l2, lasso_objective, lasso_solve, sketched_sparse_min};

/// Unrestricted least squares through the normal equations.
fn least_squares(a: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let d = a.cols();
    let cols: Vec<Vec<f64>> = (0..d).map(|j| a.column(j)).collect();
    let mut g = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            g[i * d + j] = dot(&cols[i], &cols[j]);
        }
    }
    let rhs: Vec<f64> = cols.iter().map(|c| dot(c, b)).collect();
    solve_spd(&g, d, &rhs).unwrap()
}

fn normalized(seed: u64, n: usize, d: usize) -> (DenseMatrix, Vec<f64>) {
    let inst = gen_gaussian_sparse_instance(n, d, 3, 0.3, &mut RngStream::new(seed, 0)).unwrap();
    let mut a = inst.a.clone();
    a.scale(1.0 / (1.05 * inst.a.spectral_norm_estimate(200)));
    let nb = inst.b.iter().map(|v| v * v).sum::<f64>().sqrt();
    (a, inst.b.iter().map(|v| v / nb).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The LASSO solution is no worse than two independent candidates:
    /// the unpenalized least-squares solution and zero.
    #[test]
    fn lasso_beats_least_squares_and_zero(seed in 0u64..1000, lambda in 0.01f64..0.5) {
        let (a, b) = normalized(seed, 60, 8);
        let res = lasso_solve(&a, &b, lambda, 1e-12).unwrap();
        let ls = least_squares(&a, &b);
        let zero = vec![0.0; 8];
        let got = lasso_objective(&a, &b, &res.x.to_dense(), lambda).unwrap();
        prop_assert!(got <= lasso_objective(&a, &b, &ls, lambda).unwrap() + 1e-9);
        prop_assert!(got <= lasso_objective(&a, &b, &zero, lambda).unwrap() + 1e-9);
    }

    /// With k = d the sparse problem is plain least squares.
    #[test]
    fn full_support_brute_force_is_least_squares(seed in 0u64..1000) {
        let inst = gen_gaussian_sparse_instance(30, 4, 2, 0.5, &mut RngStream::new(seed, 0)).unwrap();
        let res = brute_force_sparse_l2(&inst.a, &inst.b, 4).unwrap();
        let ls = least_squares(&inst.a, &inst.b);
        let r = inst.residual(&ls).unwrap();
        let ls_cost = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((res.cost - ls_cost).abs() <= 1e-9 * (1.0 + ls_cost));
    }
}

#[test]
fn large_gaussian_sketch_nearly_preserves_the_optimum() {
    let inst = gen_gaussian_sparse_instance(300, 10, 2, 0.5, &mut RngStream::new(4, 0)).unwrap();
    let opt = brute_force_sparse_l2(&inst.a, &inst.b, 2).unwrap().cost;
    let s = build_gaussian_sketch(2000, 300, &mut RngStream::new(4, 1)).unwrap();
    let si = SketchedInstance::new(s, &inst).unwrap();
    let res = sketched_sparse_min(&si, &Estimator::L2, 2).unwrap();
    let r = inst.residual_sparse(&res.x).unwrap();
    let true_cost = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(true_cost <= 1.05 * opt, "{true_cost} vs {opt}");
}

#[test]
fn sampling_every_row_recovers_the_planted_vector() {
    let inst = gen_sampling_failure_instance(15, &mut RngStream::new(8, 0)).unwrap();
    let i = inst.meta.planted_index.unwrap();
    let si = SketchedInstance::new(build_row_sampler_identity(15).unwrap(), &inst).unwrap();
    let res = sketched_sparse_min(&si, &Estimator::L2, 1).unwrap();
    assert_eq!(res.x.support(), &[i]);
    assert!((res.x.values()[0] - 1.0).abs() < 1e-12);
    assert!(res.cost < 1e-12);
}
