//! Versioned JSON form of a [`LinearSketch`]. Dense payloads are stored as
//! the stream position they were drawn from and regenerated on load, so a
//! document stays small and reproduces the sketch bit for bit.

use serde::{Deserialize, Serialize};

use super::countsketch::CountSketchState;
use super::hash::AffineHash;
use super::sketch::{
    build_gaussian_sketch, build_stable_sketch, Body, CompositeShape, DenseFamily, DenseOrigin,
    LinearSketch,
};
use crate::error::{invalid, Result};
use crate::numerics::{RngStream, StreamPosition};

pub const SKETCH_DOCUMENT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SketchDocument {
    pub version: u32,
    pub sketch: SketchSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OriginSpec {
    Sampled { position: StreamPosition },
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SketchSpec {
    Gaussian {
        m: usize,
        n: usize,
        origin: OriginSpec,
    },
    Stable {
        m: usize,
        n: usize,
        p: f64,
        origin: OriginSpec,
    },
    Countsketch {
        buckets: usize,
        tables: usize,
        n: usize,
        bucket_hash: Vec<AffineHash>,
        sign_hash: Vec<AffineHash>,
    },
    OnesRow {
        n: usize,
    },
    RowSampler {
        n: usize,
        indices: Vec<usize>,
    },
    Composite {
        shape: CompositeShape,
        children: Vec<SketchSpec>,
    },
}

impl LinearSketch {
    pub fn to_spec(&self) -> SketchSpec {
        let (m, n) = (self.m(), self.n());
        match &self.body {
            Body::Dense { family, origin, .. } => {
                let origin = match origin {
                    DenseOrigin::Sampled(position) => OriginSpec::Sampled { position: *position },
                    DenseOrigin::Identity => OriginSpec::Identity,
                };
                match family {
                    DenseFamily::Gaussian => SketchSpec::Gaussian { m, n, origin },
                    DenseFamily::Stable { p } => SketchSpec::Stable { m, n, p: *p, origin },
                }
            }
            Body::CountSketch(cs) => SketchSpec::Countsketch {
                buckets: cs.buckets(),
                tables: cs.tables(),
                n,
                bucket_hash: cs.bucket_hashes().to_vec(),
                sign_hash: cs.sign_hashes().to_vec(),
            },
            Body::OnesRow => SketchSpec::OnesRow { n },
            Body::RowSampler { indices } => SketchSpec::RowSampler {
                n,
                indices: indices.clone(),
            },
            Body::Composite { shape, children } => SketchSpec::Composite {
                shape: *shape,
                children: children.iter().map(|c| c.to_spec()).collect(),
            },
        }
    }

    pub fn from_spec(spec: &SketchSpec) -> Result<Self> {
        match spec {
            SketchSpec::Gaussian { m, n, origin } => match origin {
                OriginSpec::Identity => identity_checked(DenseFamily::Gaussian, *m, *n),
                OriginSpec::Sampled { position } => {
                    build_gaussian_sketch(*m, *n, &mut RngStream::from_position(*position))
                }
            },
            SketchSpec::Stable { m, n, p, origin } => match origin {
                OriginSpec::Identity => identity_checked(DenseFamily::Stable { p: *p }, *m, *n),
                OriginSpec::Sampled { position } => {
                    build_stable_sketch(*m, *n, *p, &mut RngStream::from_position(*position))
                }
            },
            SketchSpec::Countsketch {
                buckets,
                tables,
                n,
                bucket_hash,
                sign_hash,
            } => Ok(LinearSketch::from_countsketch(CountSketchState::from_parts(
                *buckets,
                *tables,
                *n,
                bucket_hash.clone(),
                sign_hash.clone(),
            )?)),
            SketchSpec::OnesRow { n } => LinearSketch::ones_row(*n),
            SketchSpec::RowSampler { n, indices } => {
                LinearSketch::row_sampler_from_indices(*n, indices.clone())
            }
            SketchSpec::Composite { shape, children } => {
                let children = children
                    .iter()
                    .map(LinearSketch::from_spec)
                    .collect::<Result<Vec<_>>>()?;
                validate_composite(*shape, &children)?;
                Ok(LinearSketch::composite(*shape, children))
            }
        }
    }

    pub fn to_document(&self) -> SketchDocument {
        SketchDocument {
            version: SKETCH_DOCUMENT_VERSION,
            sketch: self.to_spec(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SketchDocument = serde_json::from_str(text)?;
        if doc.version != SKETCH_DOCUMENT_VERSION {
            return Err(invalid!(
                "unsupported sketch document version {} (expected {SKETCH_DOCUMENT_VERSION})",
                doc.version
            ));
        }
        Self::from_spec(&doc.sketch)
    }
}

fn identity_checked(family: DenseFamily, m: usize, n: usize) -> Result<LinearSketch> {
    if m != n {
        return Err(invalid!("identity sketch must be square, got {m}x{n}"));
    }
    LinearSketch::identity(family, n)
}

fn validate_composite(shape: CompositeShape, children: &[LinearSketch]) -> Result<()> {
    use super::sketch::SketchKind;
    let ok = match shape {
        CompositeShape::Relu => {
            children.len() == 2
                && children[0].kind() == SketchKind::Stable
                && children[1].kind() == SketchKind::OnesRow
        }
        CompositeShape::Hinge => {
            children.len() == 2
                && children[0].composite_shape() == Some(CompositeShape::Relu)
                && children[1].kind() == SketchKind::RowSampler
        }
    };
    if !ok {
        return Err(invalid!("composite children do not match shape {shape:?}"));
    }
    if children.iter().any(|c| c.n() != children[0].n()) {
        return Err(invalid!("composite children disagree on input dimension"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketches::{build_countsketch, build_hinge_sketch, build_relu_sketch, build_row_sampler};

    #[test]
    fn every_kind_round_trips() {
        let mut rng = RngStream::new(21, 4);
        let sketches = vec![
            build_gaussian_sketch(5, 7, &mut rng).unwrap(),
            build_stable_sketch(4, 7, 1.5, &mut rng).unwrap(),
            build_countsketch(3, 3, 7, &mut rng).unwrap(),
            LinearSketch::ones_row(7).unwrap(),
            build_row_sampler(6, 7, &mut rng).unwrap(),
            build_relu_sketch(5, 7, &mut rng).unwrap(),
            build_hinge_sketch(5, 4, 7, &mut rng).unwrap(),
            LinearSketch::identity(DenseFamily::Gaussian, 7).unwrap(),
            LinearSketch::relu_identity(7).unwrap(),
        ];
        for s in sketches {
            let text = s.to_json().unwrap();
            let back = LinearSketch::from_json(&text).unwrap();
            assert_eq!(back, s);
            let y: Vec<f64> = (0..7).map(|i| (i as f64 * 0.9).sin()).collect();
            let a = s.apply(&y).unwrap();
            let b = back.apply(&y).unwrap();
            assert!(a.iter().zip(&b).all(|(u, v)| u.to_bits() == v.to_bits()));
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let s = LinearSketch::ones_row(3).unwrap();
        let mut doc = s.to_document();
        doc.version = 99;
        let text = serde_json::to_string(&doc).unwrap();
        assert!(LinearSketch::from_json(&text).is_err());
        assert!(LinearSketch::from_json("{\"version\":1,\"sketch\":{\"kind\":\"nope\"}}").is_err());
        let bad = SketchSpec::Composite {
            shape: CompositeShape::Relu,
            children: vec![SketchSpec::OnesRow { n: 3 }, SketchSpec::OnesRow { n: 3 }],
        };
        assert!(LinearSketch::from_spec(&bad).is_err());
        let bad = SketchSpec::RowSampler { n: 3, indices: vec![3] };
        assert!(LinearSketch::from_spec(&bad).is_err());
    }
}
