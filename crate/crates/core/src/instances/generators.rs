use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{InstanceMeta, RegressionInstance, SupportFamily};
use crate::error::{invalid, Result};
use crate::numerics::{sample_gaussian_matrix, DenseMatrix, RngStream};

/// `alpha` with `(I + alpha z z^T)^2 = I + z z^T`.
pub fn spike_root_coefficient(z: &[f64]) -> f64 {
    let s: f64 = z.iter().map(|v| v * v).sum();
    if s == 0.0 {
        return 0.0;
    }
    // (sqrt(1+s) - 1)/s, written to avoid cancellation for small s
    1.0 / ((1.0 + s).sqrt() + 1.0)
}

/// Gaussian data with covariance `I + z z^T`, where `z(1) = 1` and
/// `z = eps/sqrt(k)` on the labels of a uniformly chosen family member.
/// Column 1 of `Z` becomes `b`; the rest becomes `A`.
pub fn gen_spiked_instance(
    n: usize,
    d: usize,
    k: usize,
    eps: f64,
    family: &SupportFamily,
    rng: &mut RngStream,
) -> Result<RegressionInstance> {
    if n == 0 {
        return Err(invalid!("spiked instance needs n >= 1"));
    }
    if family.is_empty() {
        return Err(invalid!("support family is empty"));
    }
    if family.d != d || family.k != k {
        return Err(invalid!(
            "family has (d, k) = ({}, {}) but ({d}, {k}) was requested",
            family.d,
            family.k
        ));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(invalid!("eps must be finite and non-negative"));
    }
    let member = rng.random_range(0..family.len());
    let mut z = vec![0.0; d];
    z[0] = 1.0;
    for &label in &family.members[member] {
        if label >= 2 {
            z[label - 1] = eps / (k as f64).sqrt();
        }
    }
    let alpha = spike_root_coefficient(&z);
    let g = sample_gaussian_matrix(n, d, 1.0, rng)?;
    // Z = G (I + alpha z z^T) = G + alpha (G z) z^T
    let gz = g.matvec(&z)?;
    let zmat = DenseMatrix::from_fn(n, d, |i, j| g.get(i, j) + alpha * gz[i] * z[j]);
    let b = zmat.column(0);
    let a = DenseMatrix::from_fn(n, d - 1, |i, j| zmat.get(i, j + 1));
    let meta = InstanceMeta {
        planted_support: Some(family.member_columns(member)),
        spike: Some(z),
        epsilon: Some(eps),
        k: Some(k),
        ..InstanceMeta::default()
    };
    RegressionInstance::new(a, b, meta)
}

/// `A` i.i.d. standard normal, `b = A x* + noise * g` with `x*` supported on
/// `k` uniform columns with standard normal values.
pub fn gen_gaussian_sparse_instance(
    n: usize,
    d: usize,
    k: usize,
    noise: f64,
    rng: &mut RngStream,
) -> Result<RegressionInstance> {
    if k > d {
        return Err(invalid!("k = {k} exceeds d = {d}"));
    }
    let a = sample_gaussian_matrix(n, d, 1.0, rng)?;
    let mut support: Vec<usize> = sample(rng, d, k).into_vec();
    support.sort_unstable();
    let mut x = vec![0.0; d];
    for &j in &support {
        x[j] = rng.sample(StandardNormal);
    }
    let mut b = a.matvec(&x)?;
    for v in b.iter_mut() {
        *v += noise * rng.sample::<f64, _>(StandardNormal);
    }
    let meta = InstanceMeta {
        planted_support: Some(support),
        planted_x: Some(x),
        k: Some(k),
        ..InstanceMeta::default()
    };
    RegressionInstance::new(a, b, meta)
}

/// `A = I_n`, `b = e_i` for a uniform `i`.
pub fn gen_sampling_failure_instance(n: usize, rng: &mut RngStream) -> Result<RegressionInstance> {
    if n <= 9 {
        return Err(invalid!("sampling-failure instance needs n > 9, got {n}"));
    }
    let i = rng.random_range(0..n);
    let mut b = vec![0.0; n];
    b[i] = 1.0;
    let meta = InstanceMeta {
        planted_index: Some(i),
        k: Some(1),
        ..InstanceMeta::default()
    };
    RegressionInstance::new(DenseMatrix::identity(n), b, meta)
}

/// `A = [G; -G/c_mu]` with `b = 0`. Every row pair maps `x` to `(g, -g/c)`,
/// so `||(Ax)^+||_1 <= c_mu * ||(Ax)^-||_1` for all `x`.
pub fn gen_mu_instance(n_half: usize, d: usize, c_mu: f64, rng: &mut RngStream) -> Result<RegressionInstance> {
    if !(c_mu >= 1.0 && c_mu.is_finite()) {
        return Err(invalid!("c_mu must be >= 1, got {c_mu}"));
    }
    let g = sample_gaussian_matrix(n_half, d, 1.0, rng)?;
    let a = DenseMatrix::from_fn(2 * n_half, d, |i, j| {
        if i < n_half {
            g.get(i, j)
        } else {
            -g.get(i - n_half, j) / c_mu
        }
    });
    let meta = InstanceMeta {
        mu_upper: Some(c_mu),
        ..InstanceMeta::default()
    };
    RegressionInstance::new(a, vec![0.0; 2 * n_half], meta)
}

/// `x_{pi(i)} = i^(-decay)` for `i = 1..=d` and a uniform permutation `pi`,
/// with the `k` largest entries multiplied by 3.
pub fn gen_powerlaw_signal(d: usize, k: usize, decay: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    if !(decay > 0.5) {
        return Err(invalid!("decay must exceed 0.5, got {decay}"));
    }
    if k > d {
        return Err(invalid!("k = {k} exceeds d = {d}"));
    }
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let mut x = vec![0.0; d];
    for (rank, &pos) in perm.iter().enumerate() {
        let v = ((rank + 1) as f64).powf(-decay);
        x[pos] = if rank < k { 3.0 * v } else { v };
    }
    Ok(x)
}

/// `||x - x_k||_2^2` of [`gen_powerlaw_signal`], summed before permutation.
pub fn powerlaw_tail_energy(d: usize, k: usize, decay: f64) -> f64 {
    ((k + 1)..=d).map(|i| (i as f64).powf(-2.0 * decay)).sum()
}
