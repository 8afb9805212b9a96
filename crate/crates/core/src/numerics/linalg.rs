//! Small dense kernels: pivoted QR least squares, Cholesky, and a Jacobi
//! eigen-solver for tiny symmetric matrices.

use super::matrix::{axpy, dot, l2};

/// Relative threshold on `|R_jj| / |R_00|` below which a pivoted column is
/// treated as linearly dependent.
const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct LeastSquares {
    /// Coefficients in the caller's column order; dependent columns get 0.
    pub coef: Vec<f64>,
    pub residual_norm: f64,
    pub rank: usize,
}

/// Solves `min ||sum_j coef_j * columns[j] - b||_2` by Householder QR with
/// column pivoting. Rank-deficient inputs get a basic solution with zeros on
/// the dropped columns.
pub fn least_squares(columns: &[&[f64]], b: &[f64]) -> LeastSquares {
    let n = b.len();
    let k = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == n));
    let mut work: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut diag = vec![0.0; k];
    let steps = n.min(k);
    let mut rank = 0;
    let mut first_pivot = 0.0;

    for j in 0..steps {
        // pivot on largest remaining column norm
        let (p, pnorm) = (j..k)
            .map(|c| (c, l2(&work[c][j..])))
            .fold((j, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if j == 0 {
            first_pivot = pnorm;
        }
        if pnorm == 0.0 || pnorm <= RANK_TOL * first_pivot {
            break;
        }
        work.swap(j, p);
        perm.swap(j, p);

        let x0 = work[j][j];
        let alpha = if x0 >= 0.0 { -pnorm } else { pnorm };
        let mut v = work[j][j..].to_vec();
        v[0] -= alpha;
        let vv = dot(&v, &v);
        if vv > 0.0 {
            let beta = 2.0 / vv;
            for c in work.iter_mut().skip(j + 1) {
                let s = beta * dot(&v, &c[j..]);
                axpy(-s, &v, &mut c[j..]);
            }
            let s = beta * dot(&v, &rhs[j..]);
            axpy(-s, &v, &mut rhs[j..]);
        }
        diag[j] = alpha;
        rank = j + 1;
    }

    let mut z = vec![0.0; k];
    for j in (0..rank).rev() {
        let mut acc = rhs[j];
        for c in (j + 1)..rank {
            acc -= work[c][j] * z[c];
        }
        z[j] = acc / diag[j];
    }
    let mut coef = vec![0.0; k];
    for (pos, &orig) in perm.iter().enumerate() {
        coef[orig] = z[pos];
    }

    let mut resid = b.to_vec();
    for (c, col) in coef.iter().zip(columns) {
        if *c != 0.0 {
            axpy(-c, col, &mut resid);
        }
    }
    LeastSquares {
        coef,
        residual_norm: l2(&resid),
        rank,
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite `k x k`
/// row-major matrix. `None` if not numerically positive definite.
pub fn cholesky(a: &[f64], k: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = a[i * k + j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    Some(l)
}

/// Solves `L y = b` for lower-triangular `L`.
pub fn forward_substitute(l: &[f64], k: usize, b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; k];
    for i in 0..k {
        let mut s = b[i];
        for p in 0..i {
            s -= l[i * k + p] * y[p];
        }
        y[i] = s / l[i * k + i];
    }
    y
}

/// Solves `L^T x = y` for lower-triangular `L`.
pub fn backward_substitute_transposed(l: &[f64], k: usize, y: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = y[i];
        for p in (i + 1)..k {
            s -= l[p * k + i] * x[p];
        }
        x[i] = s / l[i * k + i];
    }
    x
}

/// Solves `A x = b` for symmetric positive definite `A`.
pub fn solve_spd(a: &[f64], k: usize, b: &[f64]) -> Option<Vec<f64>> {
    let l = cholesky(a, k)?;
    let y = forward_substitute(&l, k, b);
    Some(backward_substitute_transposed(&l, k, &y))
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations,
/// returned in ascending order.
pub fn symmetric_eigenvalues(a: &[f64], k: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * k + j] * m[i * k + j])
            .sum();
        let scale: f64 = (0..k).map(|i| m[i * k + i] * m[i * k + i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = m[p * k + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * k + p];
                let aqq = m[q * k + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..k {
                    let arp = m[r * k + p];
                    let arq = m[r * k + q];
                    m[r * k + p] = c * arp - s * arq;
                    m[r * k + q] = s * arp + c * arq;
                }
                for r in 0..k {
                    let apr = m[p * k + r];
                    let aqr = m[q * k + r];
                    m[p * k + r] = c * apr - s * aqr;
                    m[q * k + r] = s * apr + c * aqr;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..k).map(|i| m[i * k + i]).collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}
