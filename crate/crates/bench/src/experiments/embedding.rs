use sparsketch::estimators::{Estimator, SketchedData, SketchedInstance};
use sparsketch::instances::{gen_gaussian_sparse_instance, gen_mu_instance, RegressionInstance};
use sparsketch::losses::{f_norm, lp_norm, relu_norm, HingeLikeLoss};
use sparsketch::numerics::linalg::{cholesky, forward_substitute, symmetric_eigenvalues};
use sparsketch::numerics::matrix::{dot, l2};
use sparsketch::sketches::{build_gaussian_sketch, build_hinge_sketch, build_relu_sketch, build_stable_sketch, LinearSketch};
use sparsketch::solvers::{
    binomial, brute_force_sparse_l2, brute_force_sparse_lp, check_support_guard, unrank_support,
};
use sparsketch::{Error, Result, SparseVector};

use super::{finish, purpose, run_trials, stream, Outcome, SHARED_TRIAL};
use crate::config::{ExperimentConfig, ExperimentId};
use crate::probes::probe_points;
use crate::report::ExperimentReport;
use crate::sizing;

/// Instance, optimum and probes shared by the trials that use them.
struct Prepared {
    inst: RegressionInstance,
    probes: Vec<SparseVector>,
    /// Gram matrix of `[A, b]` for the exact l2 distortion.
    gram: Option<Vec<f64>>,
}

fn optimum(cfg: &ExperimentConfig, inst: &RegressionInstance) -> Result<SparseVector> {
    if check_support_guard(inst.d(), cfg.k).is_err() {
        let planted = inst.meta.planted_x.as_deref().map(|x| SparseVector::from_dense(x, 0.0));
        return Ok(planted.unwrap_or_else(|| SparseVector::zero(inst.d())));
    }
    let res = match cfg.experiment {
        ExperimentId::EmbedLp if cfg.p < 2.0 => brute_force_sparse_lp(&inst.a, &inst.b, cfg.k, cfg.p)?,
        _ => brute_force_sparse_l2(&inst.a, &inst.b, cfg.k)?,
    };
    Ok(res.x)
}

/// Row-major Gram matrix of the columns `cols`.
fn gram_of(cols: &[&[f64]]) -> Vec<f64> {
    let s = cols.len();
    let mut g = vec![0.0; s * s];
    for i in 0..s {
        for j in i..s {
            let v = dot(cols[i], cols[j]);
            g[i * s + j] = v;
            g[j * s + i] = v;
        }
    }
    g
}

impl Prepared {
    fn new(cfg: &ExperimentConfig, trial: u64) -> Result<Self> {
        let mut rng = stream(cfg, trial, purpose::INSTANCE);
        let inst = match cfg.experiment {
            ExperimentId::EmbedL2 | ExperimentId::EmbedLp => {
                gen_gaussian_sparse_instance(cfg.n, cfg.d, cfg.k, cfg.noise, &mut rng)?
            }
            _ => gen_mu_instance(cfg.n / 2, cfg.d, cfg.mu, &mut rng)?,
        };
        let x_star = optimum(cfg, &inst)?;
        let probes = probe_points(&inst, cfg.k, &x_star, cfg.probes, &mut stream(cfg, trial, purpose::PROBES))?;
        let gram = (cfg.experiment == ExperimentId::EmbedL2).then(|| {
            let cols: Vec<Vec<f64>> = (0..inst.d()).map(|j| inst.a.column(j)).collect();
            let mut refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
            refs.push(&inst.b);
            gram_of(&refs)
        });
        Ok(Self { inst, probes, gram })
    }
}

/// Largest `| ||S y|| / ||y|| - 1 |` over every `y` in the span of `b` and
/// any `k` columns of `A`, which contains every residual `Ax - b` with
/// `||x||_0 <= k`. `g` and `h` are the Gram matrices of `[A, b]` and
/// `[SA, Sb]` (index `d` is `b`). Spans that are numerically degenerate are
/// skipped. `None` when there are too many supports to enumerate.
pub fn universal_l2_distortion(g: &[f64], h: &[f64], d: usize, k: usize) -> Option<f64> {
    let count = check_support_guard(d, k).ok()?;
    let s = k + 1;
    let mut worst = 0.0f64;
    let mut gs = vec![0.0; s * s];
    let mut hs = vec![0.0; s * s];
    for rank in 0..count {
        let mut idx = unrank_support(rank, d, k);
        idx.push(d);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                gs[a * s + b] = g[i * (d + 1) + j];
                hs[a * s + b] = h[i * (d + 1) + j];
            }
        }
        let Some(l) = cholesky(&gs, s) else { continue };
        // L^-1 H L^-T, column by column; H is symmetric so its columns are rows
        let y: Vec<Vec<f64>> = (0..s).map(|j| forward_substitute(&l, s, &hs[j * s..(j + 1) * s])).collect();
        let mut c = vec![0.0; s * s];
        for i in 0..s {
            let row: Vec<f64> = (0..s).map(|j| y[j][i]).collect();
            let z = forward_substitute(&l, s, &row);
            for j in 0..s {
                c[i * s + j] = z[j];
            }
        }
        let ev = symmetric_eigenvalues(&c, s);
        let lo = ev[0].max(0.0).sqrt();
        let hi = ev[s - 1].max(0.0).sqrt();
        worst = worst.max((hi - 1.0).abs()).max((1.0 - lo).abs());
    }
    debug_assert_eq!(count, binomial(d, k));
    Some(worst)
}

fn relative_error(est: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        if est == 0.0 {
            0.0
        } else {
            f64::MAX
        }
    } else {
        (est - exact).abs() / exact
    }
}

pub(super) fn run_embedding_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let kind = cfg.experiment;
    if kind == ExperimentId::EmbedLp && cfg.p >= 2.0 {
        return Err(Error::InvalidArgument("embed-lp needs p in [1, 2)".into()));
    }
    let m = sizing::primary_rows(cfg)?;
    let n_rows = match kind {
        ExperimentId::EmbedRelu | ExperimentId::EmbedHinge => 2 * (cfg.n / 2),
        _ => cfg.n,
    };
    let m2 = sizing::hinge_sample_rows(cfg.c_hinge_m2, n_rows, cfg.d, cfg.k, cfg.eps);
    let loss = HingeLikeLoss::logistic();
    let estimator = match kind {
        ExperimentId::EmbedL2 => Estimator::L2,
        ExperimentId::EmbedLp => Estimator::Median,
        ExperimentId::EmbedRelu => Estimator::Relu,
        _ => Estimator::Hinge { f: loss.clone(), n: n_rows },
    };
    let shared = if cfg.instance_per_trial {
        None
    } else {
        Some(Prepared::new(cfg, SHARED_TRIAL)?)
    };

    let records = run_trials(cfg, |t| {
        let fresh;
        let prep = match &shared {
            Some(p) => p,
            None => {
                fresh = Prepared::new(cfg, t as u64)?;
                &fresh
            }
        };
        let inst = &prep.inst;
        let mut rng = stream(cfg, t as u64, purpose::SKETCH);
        let sketch: LinearSketch = match kind {
            ExperimentId::EmbedL2 => build_gaussian_sketch(m, inst.n(), &mut rng)?,
            ExperimentId::EmbedLp => build_stable_sketch(m, inst.n(), cfg.p, &mut rng)?,
            ExperimentId::EmbedRelu => build_relu_sketch(m, inst.n(), &mut rng)?,
            _ => build_hinge_sketch(m, m2, inst.n(), &mut rng)?,
        };
        let si = SketchedInstance::new(sketch, inst)?;

        let mut worst = 0.0f64;
        let mut side_ok = true;
        for x in &prep.probes {
            let r = inst.residual_sparse(x)?;
            let est = estimator.evaluate(&si, x)?;
            let exact = match kind {
                ExperimentId::EmbedL2 => l2(&r),
                ExperimentId::EmbedLp => lp_norm(&r, cfg.p)?,
                ExperimentId::EmbedRelu => relu_norm(&r),
                _ => f_norm(&r, &loss),
            };
            worst = worst.max(relative_error(est, exact));
            let l1: f64 = r.iter().map(|v| v.abs()).sum();
            side_ok &= match kind {
                ExperimentId::EmbedRelu => (est - exact).abs() <= cfg.eps / (2.0 * cfg.mu) * l1,
                ExperimentId::EmbedHinge => exact >= loss.f_norm_lower_bound(inst.n(), l1, cfg.mu),
                _ => true,
            };
        }
        let success = worst <= cfg.eps;
        let flag = if side_ok { 1.0 } else { 0.0 };
        Ok(match kind {
            ExperimentId::EmbedL2 => {
                let d = inst.d();
                let mut cols: Vec<&[f64]> = (0..d).map(|j| si.sketched_column(j)).collect();
                cols.push(si.sketched_b());
                let h = gram_of(&cols);
                let g = prep.gram.as_ref().expect("l2 experiments keep the Gram matrix");
                let exact = universal_l2_distortion(g, &h, d, cfg.k).unwrap_or(-1.0);
                Outcome::new(worst, success, &[("m", m as f64), ("exact_max_distortion", exact)])
            }
            ExperimentId::EmbedLp => Outcome::new(worst, success, &[("m", m as f64)]),
            ExperimentId::EmbedRelu => Outcome::new(worst, success, &[("m", m as f64), ("l1_bound_ok", flag)]),
            _ => Outcome::new(
                worst,
                success,
                &[("m1", m as f64), ("m2", m2 as f64), ("lower_bound_ok", flag)],
            ),
        })
    })?;

    let mut extras = vec![("m", m as f64)];
    if kind == ExperimentId::EmbedHinge {
        extras.push(("m2", m2 as f64));
    }
    Ok(finish(cfg, records, &extras, vec![]))
}
