//! Oblivious linear sketches and their serialized form.

pub mod countsketch;
pub mod document;
pub mod hash;
pub mod sketch;

pub use countsketch::{point_query, CountSketchState};
pub use document::{OriginSpec, SketchDocument, SketchSpec, SKETCH_DOCUMENT_VERSION};
pub use hash::{is_prime, smallest_prime_at_least, AffineHash};
pub use sketch::{
    apply, build_countsketch, build_gaussian_sketch, build_hinge_sketch, build_relu_sketch,
    build_row_sampler, build_row_sampler_identity, build_stable_sketch, CompositeShape,
    DenseFamily, DenseOrigin, LinearSketch, Segment, SegmentRole, SketchKind,
};
