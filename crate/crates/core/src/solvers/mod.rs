//! Exact and sketched k-sparse solvers and LASSO.

mod enumerate;
mod exact;
mod lasso;
mod sketched;

pub use enumerate::{binomial, check_support_guard, unrank_support, SUPPORT_GUARD};
pub use exact::{brute_force_sparse_l2, brute_force_sparse_lp, IrlsOptions};
pub use lasso::{lasso_objective, lasso_sketched_solve, lasso_solve, lasso_solve_traced, LassoOptions};
pub use sketched::{sketched_sparse_min, PatternSearch};

use serde::{Deserialize, Serialize};

use crate::sparse::SparseVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub x: SparseVector,
    /// Objective value at `x`, recomputed from scratch.
    pub cost: f64,
    pub support_explored: usize,
    pub converged: bool,
}
