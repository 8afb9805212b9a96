//! Versioned JSON form of a [`RegressionInstance`]: explicit entries for
//! small matrices, or a generator recipe plus stream position that rebuilds
//! the instance exactly.

use serde::{Deserialize, Serialize};

use super::{
    gen_gaussian_sparse_instance, gen_mu_instance, gen_sampling_failure_instance, InstanceMeta,
    RegressionInstance,
};
use crate::error::{invalid, Result};
use crate::numerics::{DenseMatrix, RngStream, StreamPosition};

pub const INSTANCE_DOCUMENT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorRecipe {
    GaussianSparse { n: usize, d: usize, k: usize, noise: f64 },
    Mu { n_half: usize, d: usize, c_mu: f64 },
    SamplingFailure { n: usize },
}

impl GeneratorRecipe {
    pub fn generate(&self, rng: &mut RngStream) -> Result<RegressionInstance> {
        match *self {
            GeneratorRecipe::GaussianSparse { n, d, k, noise } => gen_gaussian_sparse_instance(n, d, k, noise, rng),
            GeneratorRecipe::Mu { n_half, d, c_mu } => gen_mu_instance(n_half, d, c_mu, rng),
            GeneratorRecipe::SamplingFailure { n } => gen_sampling_failure_instance(n, rng),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "storage", rename_all = "snake_case")]
pub enum InstanceSpec {
    Explicit {
        rows: usize,
        cols: usize,
        /// Row-major entries of `A`.
        a: Vec<f64>,
        b: Vec<f64>,
        meta: InstanceMeta,
    },
    Recipe {
        recipe: GeneratorRecipe,
        position: StreamPosition,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub version: u32,
    pub instance: InstanceSpec,
}

impl InstanceDocument {
    pub fn explicit(inst: &RegressionInstance) -> Self {
        Self {
            version: INSTANCE_DOCUMENT_VERSION,
            instance: InstanceSpec::Explicit {
                rows: inst.n(),
                cols: inst.d(),
                a: inst.a.as_slice().to_vec(),
                b: inst.b.clone(),
                meta: inst.meta.clone(),
            },
        }
    }

    /// Document for the instance `recipe` draws from `rng`'s current position.
    pub fn recipe(recipe: GeneratorRecipe, rng: &RngStream) -> Self {
        Self {
            version: INSTANCE_DOCUMENT_VERSION,
            instance: InstanceSpec::Recipe {
                recipe,
                position: rng.position(),
            },
        }
    }

    pub fn materialize(&self) -> Result<RegressionInstance> {
        if self.version != INSTANCE_DOCUMENT_VERSION {
            return Err(invalid!(
                "unsupported instance document version {} (expected {INSTANCE_DOCUMENT_VERSION})",
                self.version
            ));
        }
        match &self.instance {
            InstanceSpec::Explicit { rows, cols, a, b, meta } => {
                RegressionInstance::new(DenseMatrix::new(*rows, *cols, a.clone())?, b.clone(), meta.clone())
            }
            InstanceSpec::Recipe { recipe, position } => recipe.generate(&mut RngStream::from_position(*position)),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
