//! Regression instances and their generators.

mod document;
mod family;
mod generators;
mod planted;

pub use document::{GeneratorRecipe, InstanceDocument, InstanceSpec, INSTANCE_DOCUMENT_VERSION};
pub use family::{build_support_family, verify_family, FamilyReport, SupportFamily};
pub use generators::{
    gen_gaussian_sparse_instance, gen_mu_instance, gen_powerlaw_signal, gen_sampling_failure_instance,
    gen_spiked_instance, powerlaw_tail_energy, spike_root_coefficient,
};
pub use planted::{
    eval_planted_loss, gen_planted_regression, minimize_planted_loss_on_support, planted_gadget_weight,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::DenseMatrix;

/// Generator-provided facts about an instance. A field is set only by the
/// generator that knows it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    /// Planted support as column indices of `A`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted_support: Option<Vec<usize>>,
    /// Spike `z` over the columns of `[b, A]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spike: Option<Vec<f64>>,
    /// Certified upper bound on the imbalance ratio.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_upper: Option<f64>,
    /// Weight `M` of the appended gadget row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gadget_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// The row/column singled out by the sampling-failure instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted_index: Option<usize>,
    /// Planted coefficient vector for Gaussian sparse instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted_x: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionInstance {
    pub a: DenseMatrix,
    pub b: Vec<f64>,
    pub meta: InstanceMeta,
}

impl RegressionInstance {
    pub fn new(a: DenseMatrix, b: Vec<f64>, meta: InstanceMeta) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(invalid!("A has {} rows but b has length {}", a.rows(), b.len()));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(invalid!("b must be finite"));
        }
        Ok(Self { a, b, meta })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn d(&self) -> usize {
        self.a.cols()
    }

    /// `Ax - b` for a dense `x`.
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.a.matvec(x)?;
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        Ok(r)
    }

    /// `Ax - b` for a sparse `x`, touching only its support columns.
    pub fn residual_sparse(&self, x: &crate::sparse::SparseVector) -> Result<Vec<f64>> {
        if x.dim() != self.d() {
            return Err(invalid!("x has dimension {} but A has {} columns", x.dim(), self.d()));
        }
        let mut r: Vec<f64> = self.b.iter().map(|v| -v).collect();
        for i in 0..self.n() {
            let row = self.a.row(i);
            r[i] += x.iter().map(|(j, v)| row[j] * v).sum::<f64>();
        }
        Ok(r)
    }
}
