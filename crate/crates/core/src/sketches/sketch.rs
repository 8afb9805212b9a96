use rand::Rng;
use serde::{Deserialize, Serialize};

use super::countsketch::CountSketchState;
use crate::error::{invalid, Result};
use crate::numerics::matrix::dot;
use crate::numerics::{
    calibrate_stable_scale, sample_gaussian_matrix, sample_stable_matrix, DenseMatrix, RngStream,
    StableParams, StreamPosition,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SketchKind {
    Gaussian,
    Stable,
    Countsketch,
    OnesRow,
    RowSampler,
    Composite,
}

/// What an output segment of a sketch holds; estimators look segments up by role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentRole {
    Gaussian,
    Median,
    Countsketch,
    OnesRow,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub role: SegmentRole,
    pub offset: usize,
    pub len: usize,
}

impl Segment {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositeShape {
    /// `[p=1 stable rows; all-ones row]`
    Relu,
    /// `[relu composite; uniform row sampler]`
    Hinge,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DenseFamily {
    Gaussian,
    Stable { p: f64 },
}

/// Where a dense payload came from. Sampled payloads are regenerated from
/// their stream position when deserialized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DenseOrigin {
    Sampled(StreamPosition),
    /// Test mode: the payload is the `n x n` identity.
    Identity,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Body {
    Dense {
        family: DenseFamily,
        origin: DenseOrigin,
        matrix: DenseMatrix,
    },
    CountSketch(CountSketchState),
    OnesRow,
    RowSampler {
        indices: Vec<usize>,
    },
    Composite {
        shape: CompositeShape,
        children: Vec<LinearSketch>,
    },
}

/// An oblivious linear map `S: R^n -> R^m`. Construction never looks at the data.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSketch {
    m: usize,
    n: usize,
    pub(crate) body: Body,
}

/// Dense `m x n` sketch with i.i.d. `N(0, 1/m)` entries.
pub fn build_gaussian_sketch(m: usize, n: usize, rng: &mut RngStream) -> Result<LinearSketch> {
    if m == 0 || n == 0 {
        return Err(invalid!("gaussian sketch needs m, n >= 1 (got m={m}, n={n})"));
    }
    let origin = rng.position();
    let matrix = sample_gaussian_matrix(m, n, 1.0 / m as f64, rng)?;
    Ok(LinearSketch {
        m,
        n,
        body: Body::Dense {
            family: DenseFamily::Gaussian,
            origin: DenseOrigin::Sampled(origin),
            matrix,
        },
    })
}

/// Dense `m x n` sketch of i.i.d. symmetric p-stable entries whose absolute
/// value has median 1.
pub fn build_stable_sketch(m: usize, n: usize, p: f64, rng: &mut RngStream) -> Result<LinearSketch> {
    if !(1.0..2.0).contains(&p) {
        return Err(invalid!("stable sketch needs p in [1, 2), got {p}"));
    }
    if m == 0 || n == 0 {
        return Err(invalid!("stable sketch needs m, n >= 1 (got m={m}, n={n})"));
    }
    let origin = rng.position();
    let params = StableParams::new(p, calibrate_stable_scale(p)?)?;
    let matrix = sample_stable_matrix(m, n, &params, rng)?;
    Ok(LinearSketch {
        m,
        n,
        body: Body::Dense {
            family: DenseFamily::Stable { p },
            origin: DenseOrigin::Sampled(origin),
            matrix,
        },
    })
}

pub fn build_countsketch(b: usize, t: usize, n: usize, rng: &mut RngStream) -> Result<LinearSketch> {
    let cs = CountSketchState::build(b, t, n, rng)?;
    Ok(LinearSketch::from_countsketch(cs))
}

/// `[S_l1; 1^T]`: an `m`-row Cauchy sketch followed by one exact all-ones row.
pub fn build_relu_sketch(m: usize, n: usize, rng: &mut RngStream) -> Result<LinearSketch> {
    let l1 = build_stable_sketch(m, n, 1.0, rng)?;
    Ok(LinearSketch::composite(
        CompositeShape::Relu,
        vec![l1, LinearSketch::ones_row(n)?],
    ))
}

/// Uniform sampling of `m2` rows with replacement. Unscaled: the `n/m2`
/// factor belongs to the hinge estimator.
pub fn build_row_sampler(m2: usize, n: usize, rng: &mut RngStream) -> Result<LinearSketch> {
    if m2 == 0 || n == 0 {
        return Err(invalid!("row sampler needs m2, n >= 1 (got m2={m2}, n={n})"));
    }
    let indices = (0..m2).map(|_| rng.random_range(0..n)).collect();
    LinearSketch::row_sampler_from_indices(n, indices)
}

/// Row sampler that selects every row once, in order (test mode).
pub fn build_row_sampler_identity(n: usize) -> Result<LinearSketch> {
    LinearSketch::row_sampler_from_indices(n, (0..n).collect())
}

/// `[S_relu; S_u]` with layout `(median rows | ones row | sampled rows)`.
pub fn build_hinge_sketch(m1: usize, m2: usize, n: usize, rng: &mut RngStream) -> Result<LinearSketch> {
    let relu = build_relu_sketch(m1, n, rng)?;
    let sampler = build_row_sampler(m2, n, rng)?;
    Ok(LinearSketch::composite(CompositeShape::Hinge, vec![relu, sampler]))
}

/// Free-function form of [`LinearSketch::apply`].
pub fn apply(sketch: &LinearSketch, y: &[f64]) -> Result<Vec<f64>> {
    sketch.apply(y)
}

impl LinearSketch {
    pub(crate) fn from_countsketch(cs: CountSketchState) -> Self {
        Self {
            m: cs.output_len(),
            n: cs.n(),
            body: Body::CountSketch(cs),
        }
    }

    pub fn ones_row(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("ones row needs n >= 1"));
        }
        Ok(Self {
            m: 1,
            n,
            body: Body::OnesRow,
        })
    }

    pub fn row_sampler_from_indices(n: usize, indices: Vec<usize>) -> Result<Self> {
        if n == 0 || indices.is_empty() {
            return Err(invalid!("row sampler needs n >= 1 and at least one index"));
        }
        if let Some(bad) = indices.iter().find(|&&i| i >= n) {
            return Err(invalid!("sampled row {bad} out of range (n = {n})"));
        }
        Ok(Self {
            m: indices.len(),
            n,
            body: Body::RowSampler { indices },
        })
    }

    /// Dense identity tagged as `family` (test mode for estimators and solvers).
    pub fn identity(family: DenseFamily, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("identity sketch needs n >= 1"));
        }
        Ok(Self {
            m: n,
            n,
            body: Body::Dense {
                family,
                origin: DenseOrigin::Identity,
                matrix: DenseMatrix::identity(n),
            },
        })
    }

    /// Relu composite whose median block is the identity (test mode).
    pub fn relu_identity(n: usize) -> Result<Self> {
        Ok(Self::composite(
            CompositeShape::Relu,
            vec![
                Self::identity(DenseFamily::Stable { p: 1.0 }, n)?,
                Self::ones_row(n)?,
            ],
        ))
    }

    pub(crate) fn composite(shape: CompositeShape, children: Vec<LinearSketch>) -> Self {
        let n = children[0].n;
        debug_assert!(children.iter().all(|c| c.n == n));
        let m = children.iter().map(|c| c.m).sum();
        Self {
            m,
            n,
            body: Body::Composite { shape, children },
        }
    }

    /// Hinge composite from explicit parts (used for identity test modes).
    pub fn hinge_from_parts(relu: LinearSketch, sampler: LinearSketch) -> Result<Self> {
        if relu.composite_shape() != Some(CompositeShape::Relu) || sampler.kind() != SketchKind::RowSampler
        {
            return Err(invalid!("hinge composite needs a relu composite and a row sampler"));
        }
        if relu.n != sampler.n {
            return Err(invalid!("hinge parts disagree on input dimension"));
        }
        Ok(Self::composite(CompositeShape::Hinge, vec![relu, sampler]))
    }

    pub fn kind(&self) -> SketchKind {
        match &self.body {
            Body::Dense {
                family: DenseFamily::Gaussian,
                ..
            } => SketchKind::Gaussian,
            Body::Dense {
                family: DenseFamily::Stable { .. },
                ..
            } => SketchKind::Stable,
            Body::CountSketch(_) => SketchKind::Countsketch,
            Body::OnesRow => SketchKind::OnesRow,
            Body::RowSampler { .. } => SketchKind::RowSampler,
            Body::Composite { .. } => SketchKind::Composite,
        }
    }

    pub fn composite_shape(&self) -> Option<CompositeShape> {
        match &self.body {
            Body::Composite { shape, .. } => Some(*shape),
            _ => None,
        }
    }

    pub fn children(&self) -> &[LinearSketch] {
        match &self.body {
            Body::Composite { children, .. } => children,
            _ => &[],
        }
    }

    /// Output dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Input dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dense_matrix(&self) -> Option<&DenseMatrix> {
        match &self.body {
            Body::Dense { matrix, .. } => Some(matrix),
            _ => None,
        }
    }

    pub fn countsketch(&self) -> Option<&CountSketchState> {
        match &self.body {
            Body::CountSketch(cs) => Some(cs),
            _ => None,
        }
    }

    pub fn sampled_indices(&self) -> Option<&[usize]> {
        match &self.body {
            Body::RowSampler { indices } => Some(indices),
            _ => None,
        }
    }

    /// Stability index of a stable block.
    pub fn stable_p(&self) -> Option<f64> {
        match &self.body {
            Body::Dense {
                family: DenseFamily::Stable { p },
                ..
            } => Some(*p),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(
            &self.body,
            Body::Dense {
                origin: DenseOrigin::Identity,
                ..
            }
        )
    }

    /// Output segments in order; composites are flattened.
    pub fn layout(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        self.push_layout(0, &mut out);
        out
    }

    fn push_layout(&self, offset: usize, out: &mut Vec<Segment>) {
        let role = match &self.body {
            Body::Dense {
                family: DenseFamily::Gaussian,
                ..
            } => SegmentRole::Gaussian,
            Body::Dense { .. } => SegmentRole::Median,
            Body::CountSketch(_) => SegmentRole::Countsketch,
            Body::OnesRow => SegmentRole::OnesRow,
            Body::RowSampler { .. } => SegmentRole::Sampled,
            Body::Composite { children, .. } => {
                let mut off = offset;
                for c in children {
                    c.push_layout(off, out);
                    off += c.m;
                }
                return;
            }
        };
        out.push(Segment {
            role,
            offset,
            len: self.m,
        });
    }

    /// First segment with the given role.
    pub fn segment(&self, role: SegmentRole) -> Option<Segment> {
        self.layout().into_iter().find(|s| s.role == role)
    }

    /// `S y` in the sketch's output layout.
    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.n {
            return Err(invalid!("sketch input length {} != n = {}", y.len(), self.n));
        }
        Ok(match &self.body {
            Body::Dense { matrix, .. } => (0..self.m).map(|i| dot(matrix.row(i), y)).collect(),
            Body::CountSketch(cs) => cs.apply(y)?,
            Body::OnesRow => vec![y.iter().sum()],
            Body::RowSampler { indices } => indices.iter().map(|&i| y[i]).collect(),
            Body::Composite { children, .. } => {
                let mut out = Vec::with_capacity(self.m);
                for c in children {
                    out.extend(c.apply(y)?);
                }
                out
            }
        })
    }

    /// `S A` for an `n x d` matrix `A`.
    pub fn apply_matrix(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        if a.rows() != self.n {
            return Err(invalid!("sketch input has {} rows, expected {}", a.rows(), self.n));
        }
        let d = a.cols();
        match &self.body {
            Body::Dense { origin: DenseOrigin::Identity, .. } => Ok(a.clone()),
            Body::Dense { matrix, .. } => matrix.matmul(a),
            Body::CountSketch(cs) => {
                let mut out = DenseMatrix::zeros(self.m, d);
                for i in 0..self.n {
                    let row = a.row(i);
                    for t in 0..cs.tables() {
                        let s = cs.sign(t, i);
                        let dst = out.row_mut(cs.slot(t, i));
                        for (o, v) in dst.iter_mut().zip(row) {
                            *o += s * v;
                        }
                    }
                }
                Ok(out)
            }
            Body::OnesRow => {
                let mut out = DenseMatrix::zeros(1, d);
                for i in 0..self.n {
                    for (o, v) in out.row_mut(0).iter_mut().zip(a.row(i)) {
                        *o += v;
                    }
                }
                Ok(out)
            }
            Body::RowSampler { indices } => {
                let mut out = DenseMatrix::zeros(self.m, d);
                for (r, &i) in indices.iter().enumerate() {
                    out.row_mut(r).copy_from_slice(a.row(i));
                }
                Ok(out)
            }
            Body::Composite { children, .. } => {
                let mut out = DenseMatrix::zeros(0, d);
                for c in children {
                    let part = c.apply_matrix(a)?;
                    for r in 0..part.rows() {
                        out.push_row(part.row(r))?;
                    }
                }
                Ok(out)
            }
        }
    }

    /// Explicit `m x n` matrix of the sketch, column by column.
    pub fn densify(&self) -> Result<DenseMatrix> {
        let mut out = DenseMatrix::zeros(self.m, self.n);
        let mut e = vec![0.0; self.n];
        for j in 0..self.n {
            e[j] = 1.0;
            let col = self.apply(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, j, v);
            }
            e[j] = 0.0;
        }
        Ok(out)
    }
}
