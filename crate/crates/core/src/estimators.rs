//! Loss estimators that see only `SA`, `Sb` and a sparse `x`, plus the
//! two-stage CountSketch recovery decoder.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::instances::RegressionInstance;
use crate::losses::{lp_norm, median_norm, relu_norm, HingeLikeLoss};
use crate::numerics::matrix::{axpy, l2};
use crate::numerics::{DenseMatrix, RngStream};
use crate::sketches::{
    build_countsketch, CompositeShape, CountSketchState, LinearSketch, SegmentRole, SketchKind,
};
use crate::sparse::SparseVector;

/// Read access to a sketched regression problem.
pub trait SketchedData {
    fn sketch(&self) -> &LinearSketch;
    fn sketched_b(&self) -> &[f64];
    /// Column `j` of `SA`.
    fn sketched_column(&self, j: usize) -> &[f64];
    /// Number of columns of `A`.
    fn dim(&self) -> usize;
}

/// `(S, SA, Sb)` with `SA` stored column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SketchedInstance {
    sketch: LinearSketch,
    sa: Vec<f64>,
    sb: Vec<f64>,
    d: usize,
}

impl SketchedInstance {
    pub fn new(sketch: LinearSketch, inst: &RegressionInstance) -> Result<Self> {
        Self::from_parts(sketch, &inst.a, &inst.b)
    }

    pub fn from_parts(sketch: LinearSketch, a: &DenseMatrix, b: &[f64]) -> Result<Self> {
        if a.rows() != sketch.n() || b.len() != sketch.n() {
            return Err(invalid!(
                "sketch expects {} rows, got A with {} and b with {}",
                sketch.n(),
                a.rows(),
                b.len()
            ));
        }
        let sa = sketch.apply_matrix(a)?;
        let m = sketch.m();
        let d = a.cols();
        let mut cols = vec![0.0; m * d];
        for i in 0..m {
            for (j, v) in sa.row(i).iter().enumerate() {
                cols[j * m + i] = *v;
            }
        }
        let sb = sketch.apply(b)?;
        Ok(Self { sketch, sa: cols, sb, d })
    }

    pub fn sa_matrix(&self) -> DenseMatrix {
        let m = self.sketch.m();
        DenseMatrix::from_fn(m, self.d, |i, j| self.sa[j * m + i])
    }
}

impl SketchedData for SketchedInstance {
    fn sketch(&self) -> &LinearSketch {
        &self.sketch
    }

    fn sketched_b(&self) -> &[f64] {
        &self.sb
    }

    fn sketched_column(&self, j: usize) -> &[f64] {
        let m = self.sketch.m();
        &self.sa[j * m..(j + 1) * m]
    }

    fn dim(&self) -> usize {
        self.d
    }
}

/// `SA x - Sb`, reading only the columns in `x`'s support.
pub fn sketched_residual<D: SketchedData + ?Sized>(si: &D, x: &SparseVector) -> Result<Vec<f64>> {
    if x.dim() != si.dim() {
        return Err(invalid!("x has dimension {} but the instance has {} columns", x.dim(), si.dim()));
    }
    let mut r: Vec<f64> = si.sketched_b().iter().map(|v| -v).collect();
    for (j, v) in x.iter() {
        axpy(v, si.sketched_column(j), &mut r);
    }
    Ok(r)
}

/// `||SAx - Sb||_2`.
pub fn estimate_l2<D: SketchedData + ?Sized>(si: &D, x: &SparseVector) -> Result<f64> {
    Ok(l2(&sketched_residual(si, x)?))
}

/// Median of `|SAx - Sb|` for a stable sketch. An identity stable sketch
/// (test mode) reports the exact `l_p` norm instead.
pub fn estimate_med<D: SketchedData + ?Sized>(si: &D, x: &SparseVector) -> Result<f64> {
    median_from_sketched_residual(si.sketch(), &sketched_residual(si, x)?)
}

fn median_from_sketched_residual(sketch: &LinearSketch, r: &[f64]) -> Result<f64> {
    match sketch.stable_p() {
        None => Err(invalid!("median estimator needs a stable sketch, got {:?}", sketch.kind())),
        Some(p) if sketch.is_identity() => lp_norm(r, p),
        Some(_) => median_norm(r),
    }
}

/// First stable block in layout order.
fn median_block(sketch: &LinearSketch) -> Option<&LinearSketch> {
    if sketch.kind() == SketchKind::Stable {
        return Some(sketch);
    }
    sketch.children().iter().find_map(median_block)
}

/// `(median of the Cauchy segment + the all-ones coordinate) / 2`.
pub fn estimate_relu<D: SketchedData + ?Sized>(si: &D, x: &SparseVector) -> Result<f64> {
    let r = sketched_residual(si, x)?;
    relu_from_sketched_residual(si.sketch(), &r)
}

/// `(n/m2) * sum over sampled rows of (f - relu)(r_i) + relu estimate`.
pub fn estimate_hinge<D: SketchedData + ?Sized>(
    si: &D,
    x: &SparseVector,
    f: &HingeLikeLoss,
    n: usize,
) -> Result<f64> {
    let r = sketched_residual(si, x)?;
    hinge_from_sketched_residual(si.sketch(), &r, f, n)
}

pub(crate) fn relu_from_sketched_residual(sketch: &LinearSketch, r: &[f64]) -> Result<f64> {
    let shape = sketch.composite_shape();
    if shape != Some(CompositeShape::Relu) && shape != Some(CompositeShape::Hinge) {
        return Err(invalid!("relu estimator needs a relu or hinge composite sketch"));
    }
    let med = sketch
        .segment(SegmentRole::Median)
        .ok_or_else(|| invalid!("sketch layout has no median segment"))?;
    let ones = sketch
        .segment(SegmentRole::OnesRow)
        .ok_or_else(|| invalid!("sketch layout has no all-ones row"))?;
    let block = median_block(sketch).ok_or_else(|| invalid!("sketch has no stable block"))?;
    Ok((median_from_sketched_residual(block, &r[med.range()])? + r[ones.offset]) / 2.0)
}

pub(crate) fn hinge_from_sketched_residual(
    sketch: &LinearSketch,
    r: &[f64],
    f: &HingeLikeLoss,
    n: usize,
) -> Result<f64> {
    if sketch.composite_shape() != Some(CompositeShape::Hinge) {
        return Err(invalid!("hinge estimator needs a hinge composite sketch"));
    }
    if n != sketch.n() {
        return Err(invalid!("n = {n} does not match the sketch input dimension {}", sketch.n()));
    }
    let sampled = sketch
        .segment(SegmentRole::Sampled)
        .ok_or_else(|| invalid!("sketch layout has no sampled segment"))?;
    let rows = &r[sampled.range()];
    let gap: f64 = rows.iter().map(|&v| f.eval(v) - v.max(0.0)).sum();
    let g_relu = relu_from_sketched_residual(sketch, r)?;
    Ok(n as f64 / sampled.len as f64 * gap + g_relu)
}

/// Which sketch-space estimator a solver minimizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "snake_case")]
pub enum Estimator {
    L2,
    Median,
    Relu,
    Hinge { f: HingeLikeLoss, n: usize },
}

impl Estimator {
    pub fn evaluate<D: SketchedData + ?Sized>(&self, si: &D, x: &SparseVector) -> Result<f64> {
        let r = sketched_residual(si, x)?;
        self.from_residual(si.sketch(), &r)
    }

    /// Estimate from a precomputed sketched residual `SAx - Sb`.
    pub fn from_residual(&self, sketch: &LinearSketch, r: &[f64]) -> Result<f64> {
        match self {
            Estimator::L2 => Ok(l2(r)),
            Estimator::Median => median_from_sketched_residual(sketch, r),
            Estimator::Relu => relu_from_sketched_residual(sketch, r),
            Estimator::Hinge { f, n } => hinge_from_sketched_residual(sketch, r, f, *n),
        }
    }

    /// The exact loss this estimator targets, on an unsketched residual.
    pub fn exact_loss(&self, residual: &[f64], p: f64) -> Result<f64> {
        match self {
            Estimator::L2 => Ok(l2(residual)),
            Estimator::Median => crate::losses::lp_norm(residual, p),
            Estimator::Relu => Ok(relu_norm(residual)),
            Estimator::Hinge { f, .. } => Ok(crate::losses::f_norm(residual, f)),
        }
    }
}

/// Big-O constants of the two-stage recovery sketch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryParams {
    pub c_a: f64,
    pub c_b: f64,
}

/// Bucket and table counts of both stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryShape {
    pub b1: usize,
    pub t1: usize,
    pub b2: usize,
    pub t2: usize,
}

impl RecoveryShape {
    /// Total number of linear measurements.
    pub fn measurements(&self) -> usize {
        self.b1 * self.t1 + self.b2 * self.t2
    }
}

fn round_up_odd(t: usize) -> usize {
    t.max(1) | 1
}

impl RecoveryParams {
    /// `b1 = ceil(c_a k/eps)`, `t1 = ceil(c_b log2 d)`, `b2 = ceil(c_a k/eps^2)`,
    /// `t2 = ceil(c_b log2(k/eps))`, table counts rounded up to odd.
    pub fn shape(&self, d: usize, k: usize, eps: f64) -> Result<RecoveryShape> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid!("eps must lie in (0, 1), got {eps}"));
        }
        if k == 0 || k > d {
            return Err(invalid!("need 1 <= k <= d, got k = {k}, d = {d}"));
        }
        if !(self.c_a > 0.0 && self.c_b > 0.0) {
            return Err(invalid!("recovery constants must be positive"));
        }
        let kf = k as f64;
        Ok(RecoveryShape {
            b1: ((self.c_a * kf / eps).ceil() as usize).max(2),
            t1: round_up_odd((self.c_b * (d as f64).log2()).ceil() as usize),
            b2: ((self.c_a * kf / (eps * eps)).ceil() as usize).max(2),
            t2: round_up_odd((self.c_b * (kf / eps).log2()).ceil() as usize),
        })
    }
}

/// Draws both CountSketch stages from `rng`.
pub fn build_recovery_sketches(
    shape: &RecoveryShape,
    d: usize,
    rng: &mut RngStream,
) -> Result<(LinearSketch, LinearSketch)> {
    Ok((
        build_countsketch(shape.b1, shape.t1, d, rng)?,
        build_countsketch(shape.b2, shape.t2, d, rng)?,
    ))
}

/// Indices of the `count` largest `|values|`, ties to the lower index,
/// returned in ascending index order.
fn top_by_magnitude(indices: &[usize], values: &[f64], count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..indices.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .abs()
            .total_cmp(&values[a].abs())
            .then(indices[a].cmp(&indices[b]))
    });
    let mut chosen: Vec<usize> = order.into_iter().take(count).map(|p| indices[p]).collect();
    chosen.sort_unstable();
    chosen
}

/// Stage 1 keeps the `b1` coordinates with the largest point-query
/// magnitudes; stage 2 re-estimates those and returns the top `k`.
pub fn sparse_recover(
    out1: &[f64],
    cs1: &CountSketchState,
    out2: &[f64],
    cs2: &CountSketchState,
    k: usize,
) -> Result<SparseVector> {
    let d = cs1.n();
    if cs2.n() != d {
        return Err(invalid!("stage sketches disagree on dimension ({d} vs {})", cs2.n()));
    }
    if k > d {
        return Err(invalid!("k = {k} exceeds d = {d}"));
    }
    let all: Vec<usize> = (0..d).collect();
    let est1 = all
        .iter()
        .map(|&i| cs1.point_query(out1, i))
        .collect::<Result<Vec<_>>>()?;
    let candidates = top_by_magnitude(&all, &est1, cs1.buckets().min(d));
    let est2 = candidates
        .iter()
        .map(|&i| cs2.point_query(out2, i))
        .collect::<Result<Vec<_>>>()?;
    let chosen = top_by_magnitude(&candidates, &est2, k);
    let values: Vec<f64> = chosen
        .iter()
        .map(|i| est2[candidates.binary_search(i).expect("chosen from candidates")])
        .collect();
    SparseVector::new(d, chosen, values)
}

/// [`sparse_recover`] on the outputs of two CountSketch [`LinearSketch`]es.
pub fn recover_from_sketches(
    s1: &LinearSketch,
    out1: &[f64],
    s2: &LinearSketch,
    out2: &[f64],
    k: usize,
) -> Result<SparseVector> {
    let cs1 = s1.countsketch().ok_or_else(|| invalid!("stage 1 is not a CountSketch"))?;
    let cs2 = s2.countsketch().ok_or_else(|| invalid!("stage 2 is not a CountSketch"))?;
    sparse_recover(out1, cs1, out2, cs2, k)
}
