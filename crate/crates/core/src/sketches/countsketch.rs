use serde::{Deserialize, Serialize};

use super::hash::{smallest_prime_at_least, AffineHash};
use crate::error::{invalid, Result};
use crate::numerics::RngStream;

/// Hashed CountSketch with `tables` rows of `buckets` signed counters.
///
/// Output coordinate `tau * buckets + beta` holds
/// `sum_{i : h_tau(i) = beta} s_tau(i) * y_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountSketchState {
    buckets: usize,
    tables: usize,
    n: usize,
    prime: u64,
    bucket_hash: Vec<AffineHash>,
    sign_hash: Vec<AffineHash>,
}

impl CountSketchState {
    pub fn build(buckets: usize, tables: usize, n: usize, rng: &mut RngStream) -> Result<Self> {
        if buckets < 2 {
            return Err(invalid!("countsketch needs at least 2 buckets, got {buckets}"));
        }
        if tables == 0 {
            return Err(invalid!("countsketch needs at least one table"));
        }
        if n == 0 {
            return Err(invalid!("countsketch input dimension must be positive"));
        }
        let prime = smallest_prime_at_least(n as u64);
        let mut bucket_hash = Vec::with_capacity(tables);
        let mut sign_hash = Vec::with_capacity(tables);
        for _ in 0..tables {
            bucket_hash.push(AffineHash::random(prime, rng));
            sign_hash.push(AffineHash::random(prime, rng));
        }
        Ok(Self {
            buckets,
            tables,
            n,
            prime,
            bucket_hash,
            sign_hash,
        })
    }

    /// Rebuilds from stored hash coefficients, validating them.
    pub fn from_parts(
        buckets: usize,
        tables: usize,
        n: usize,
        bucket_hash: Vec<AffineHash>,
        sign_hash: Vec<AffineHash>,
    ) -> Result<Self> {
        let prime = smallest_prime_at_least(n as u64);
        if buckets < 2 || tables == 0 || n == 0 {
            return Err(invalid!("bad countsketch dims b={buckets} t={tables} n={n}"));
        }
        if bucket_hash.len() != tables || sign_hash.len() != tables {
            return Err(invalid!("countsketch needs one bucket and one sign hash per table"));
        }
        let ok = |h: &AffineHash| h.prime == prime && h.a >= 1 && h.a < prime && h.b < prime;
        if !bucket_hash.iter().chain(&sign_hash).all(ok) {
            return Err(invalid!("countsketch hash coefficients out of range"));
        }
        Ok(Self {
            buckets,
            tables,
            n,
            prime,
            bucket_hash,
            sign_hash,
        })
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    pub fn tables(&self) -> usize {
        self.tables
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn bucket_hashes(&self) -> &[AffineHash] {
        &self.bucket_hash
    }

    pub fn sign_hashes(&self) -> &[AffineHash] {
        &self.sign_hash
    }

    pub fn output_len(&self) -> usize {
        self.buckets * self.tables
    }

    /// Flat output index of coordinate `i` in table `table`.
    #[inline]
    pub fn slot(&self, table: usize, i: usize) -> usize {
        table * self.buckets + self.bucket_hash[table].bucket(i as u64, self.buckets)
    }

    #[inline]
    pub fn sign(&self, table: usize, i: usize) -> f64 {
        self.sign_hash[table].sign(i as u64)
    }

    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.n {
            return Err(invalid!("countsketch input length {} != {}", y.len(), self.n));
        }
        let mut out = vec![0.0; self.output_len()];
        for (i, &v) in y.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for t in 0..self.tables {
                out[self.slot(t, i)] += self.sign(t, i) * v;
            }
        }
        Ok(out)
    }

    /// Median over tables of `s_t(i) * output[t, h_t(i)]`; lower median for
    /// an even table count.
    pub fn point_query(&self, output: &[f64], i: usize) -> Result<f64> {
        if i >= self.n {
            return Err(invalid!("point query index {i} out of range (n = {})", self.n));
        }
        if output.len() != self.output_len() {
            return Err(invalid!(
                "countsketch output length {} != {}",
                output.len(),
                self.output_len()
            ));
        }
        let mut est: Vec<f64> = (0..self.tables)
            .map(|t| self.sign(t, i) * output[self.slot(t, i)])
            .collect();
        Ok(crate::numerics::stable::lower_median_in_place(&mut est))
    }
}

/// Free-function form of [`CountSketchState::point_query`].
pub fn point_query(cs: &CountSketchState, output: &[f64], i: usize) -> Result<f64> {
    cs.point_query(output, i)
}
