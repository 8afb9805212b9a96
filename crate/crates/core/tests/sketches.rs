use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use sparsketch::numerics::matrix::l2;
use sparsketch::numerics::RngStream;
use sparsketch::sketches::{
    build_countsketch, build_gaussian_sketch, build_hinge_sketch, build_stable_sketch, LinearSketch,
};

fn sketches(n: usize, seed: u64) -> Vec<LinearSketch> {
    let mut rng = RngStream::new(seed, 0);
    vec![
        build_gaussian_sketch(7, n, &mut rng).unwrap(),
        build_stable_sketch(9, n, 1.3, &mut rng).unwrap(),
        build_countsketch(5, 3, n, &mut rng).unwrap(),
        build_hinge_sketch(6, 4, n, &mut rng).unwrap(),
    ]
}

fn gaussian_vec(n: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_sketch_is_linear(seed in 0u64..1000, n in 2usize..40, alpha in -5.0f64..5.0) {
        let mut rng = RngStream::new(seed, 1);
        let y = gaussian_vec(n, &mut rng);
        let z = gaussian_vec(n, &mut rng);
        let combo: Vec<f64> = y.iter().zip(&z).map(|(a, b)| alpha * a + b).collect();
        for s in sketches(n, seed) {
            let sy = s.apply(&y).unwrap();
            let sz = s.apply(&z).unwrap();
            let lhs = s.apply(&combo).unwrap();
            let scale = 1.0 + l2(&sy) * alpha.abs() + l2(&sz);
            for ((l, a), b) in lhs.iter().zip(&sy).zip(&sz) {
                prop_assert!((l - (alpha * a + b)).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn dense_form_and_matrix_application_agree(seed in 0u64..1000, n in 2usize..25) {
        let mut rng = RngStream::new(seed, 2);
        let cols: Vec<Vec<f64>> = (0..3).map(|_| gaussian_vec(n, &mut rng)).collect();
        let a = sparsketch::numerics::DenseMatrix::from_columns(&cols).unwrap();
        for s in sketches(n, seed) {
            let dense = s.densify().unwrap();
            let sa = s.apply_matrix(&a).unwrap();
            for (j, col) in cols.iter().enumerate() {
                let direct = s.apply(col).unwrap();
                let via_dense = dense.matvec(col).unwrap();
                for i in 0..s.m() {
                    prop_assert!((direct[i] - via_dense[i]).abs() <= 1e-10 * (1.0 + direct[i].abs()));
                    prop_assert!((direct[i] - sa.get(i, j)).abs() <= 1e-10 * (1.0 + direct[i].abs()));
                }
            }
        }
    }
}

#[test]
fn json_documents_rebuild_identical_sketches() {
    let mut rng = RngStream::new(5, 0);
    let y = gaussian_vec(30, &mut rng);
    for s in sketches(30, 17) {
        let back = LinearSketch::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(back.apply(&y).unwrap(), s.apply(&y).unwrap());
        assert_eq!(back.kind(), s.kind());
    }
}

/// Median of `|X|` for `X = (S y)_1` over many independent single-row
/// sketches equals `||y||_p`, because `X` is `||y||_p` times a calibrated
/// stable variable whose absolute median is 1.
#[test]
fn single_stable_row_scales_by_the_p_norm() {
    let y = [0.5, -2.0, 1.0, 3.0];
    for p in [1.0, 1.5] {
        let norm = y.iter().map(|v: &f64| v.abs().powf(p)).sum::<f64>().powf(1.0 / p);
        let mut rng = RngStream::new(99, p.to_bits());
        let mut draws: Vec<f64> = (0..100_000)
            .map(|_| build_stable_sketch(1, 4, p, &mut rng).unwrap().apply(&y).unwrap()[0].abs())
            .collect();
        draws.sort_by(f64::total_cmp);
        let median = draws[draws.len() / 2];
        assert_relative_eq!(median, norm, max_relative = 0.02);
    }
}

#[test]
fn cauchy_columns_have_cauchy_quartiles() {
    let mut rng = RngStream::new(3, 0);
    let s = build_stable_sketch(40_000, 3, 1.0, &mut rng).unwrap();
    let mut col: Vec<f64> = s.apply(&[1.0, 0.0, 0.0]).unwrap().iter().map(|v| v.abs()).collect();
    col.sort_by(f64::total_cmp);
    // |X| for standard Cauchy X has quantile function tan(pi q / 2)
    let q = |f: f64| col[(f * col.len() as f64) as usize];
    assert_relative_eq!(q(0.5), 1.0, max_relative = 0.03);
    assert_relative_eq!(q(0.75), (3.0 * std::f64::consts::PI / 8.0).tan(), max_relative = 0.04);
    assert_relative_eq!(q(0.25), (std::f64::consts::PI / 8.0).tan(), max_relative = 0.04);
}

#[test]
fn shape_mismatches_are_rejected() {
    for s in sketches(10, 1) {
        assert!(s.apply(&[1.0; 9]).is_err());
    }
}
