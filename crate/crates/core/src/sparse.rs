use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A vector in `R^d` stored by its nonzero entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    d: usize,
    support: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zero(d: usize) -> Self {
        Self {
            d,
            support: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from parallel index/value lists. Indices must be strictly
    /// increasing and in range; zero values are dropped.
    pub fn new(d: usize, support: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(invalid!(
                "support has {} indices but {} values",
                support.len(),
                values.len()
            ));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid!("support must be strictly increasing"));
        }
        if support.last().is_some_and(|&i| i >= d) {
            return Err(invalid!("support index out of range for d = {d}"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid!("sparse values must be finite"));
        }
        let (support, values) = support
            .into_iter()
            .zip(values)
            .filter(|(_, v)| *v != 0.0)
            .unzip();
        Ok(Self { d, support, values })
    }

    /// Entries with `|x_i| <= prune` are dropped.
    pub fn from_dense(x: &[f64], prune: f64) -> Self {
        let (support, values) = x
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > prune)
            .map(|(i, v)| (i, *v))
            .unzip();
        Self {
            d: x.len(),
            support,
            values,
        }
    }

    /// Values on `support` (which must be sorted); zeros are dropped.
    pub fn on_support(d: usize, support: &[usize], values: &[f64]) -> Result<Self> {
        Self::new(d, support.to_vec(), values.to_vec())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.support.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.support.iter().copied().zip(self.values.iter().copied())
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero(self.d);
        }
        Self {
            d: self.d,
            support: self.support.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}
