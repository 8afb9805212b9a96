//! Probe points standing in for the "for all k-sparse x" quantifier of the
//! embedding experiments.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use sparsketch::instances::RegressionInstance;
use sparsketch::numerics::matrix::dot;
use sparsketch::numerics::RngStream;
use sparsketch::{Result, SparseVector};

fn random_support(d: usize, k: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut s = sample(rng, d, k).into_vec();
    s.sort_unstable();
    s
}

/// `count` probes: half random `k`-sparse vectors with standard normal
/// entries, a quarter perturbations of `x_star` at scales from `1e-3` to 1
/// (relative to its largest entry), and the rest axis-aligned vectors, first
/// at each column's best 1-sparse coefficient, then at magnitudes from
/// `1e-2` to `1e2` with alternating signs.
pub fn probe_points(
    inst: &RegressionInstance,
    k: usize,
    x_star: &SparseVector,
    count: usize,
    rng: &mut RngStream,
) -> Result<Vec<SparseVector>> {
    let d = inst.d();
    if k == 0 {
        return Ok(vec![SparseVector::zero(d); count]);
    }
    let n_random = count / 2;
    let n_near = count / 4;
    let n_axis = count - n_random - n_near;
    let mut out = Vec::with_capacity(count);

    for _ in 0..n_random {
        let s = random_support(d, k, rng);
        let v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        out.push(SparseVector::on_support(d, &s, &v)?);
    }

    // pad the optimum's support to size k with random extra indices
    let mut support = x_star.support().to_vec();
    let mut base = x_star.values().to_vec();
    if support.len() < k {
        let pool = sample(rng, d, (2 * k).min(d)).into_vec();
        for j in pool {
            if support.len() == k {
                break;
            }
            if !support.contains(&j) {
                support.push(j);
                base.push(0.0);
            }
        }
    }
    let scale = x_star.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..n_near {
        let level = if n_near > 1 { i as f64 / (n_near - 1) as f64 } else { 0.0 };
        let sigma = scale * 10f64.powf(-3.0 + 3.0 * level);
        let mut dense = vec![0.0; d];
        for (j, b) in support.iter().zip(&base) {
            dense[*j] = b + sigma * rng.sample::<f64, _>(StandardNormal);
        }
        out.push(SparseVector::from_dense(&dense, 0.0));
    }

    let offset = rng.random_range(0..d);
    let half = n_axis / 2;
    for i in 0..n_axis {
        let j = (offset + i) % d;
        let t = if i < half {
            let col = inst.a.column(j);
            let nn = dot(&col, &col);
            let c = if nn > 0.0 { dot(&col, &inst.b) / nn } else { 0.0 };
            if c != 0.0 {
                c
            } else {
                1.0
            }
        } else {
            let rest = n_axis - half;
            let level = if rest > 1 { (i - half) as f64 / (rest - 1) as f64 } else { 0.0 };
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * 10f64.powf(-2.0 + 4.0 * level)
        };
        out.push(SparseVector::on_support(d, &[j], &[t])?);
    }
    Ok(out)
}
