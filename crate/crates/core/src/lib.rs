//! Low-diameter decompositions with strong diameter guarantees, built from
//! approximate set-source shortest path computations.
//!
//! Every algorithm is generic over the [`Scalar`] used for edge lengths; the
//! aliases at the crate root fix it to `f64`.

// Parameter checks are written as `!(x > 0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backbone;
pub mod bbg;
pub mod clustering;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod ldc;
pub mod ldd;
pub mod oracle;
pub mod padded;
pub mod sampling;
pub mod scalar;
pub mod separator;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Graph = graph::WeightedGraph<f64>;
pub type Clustering = clustering::Clustering<f64>;
pub type PaddedDecomposition = padded::PaddedDecomposition<f64>;
pub type BlurResult = bbg::BlurResult<f64>;
pub type WeakSeparator = separator::WeakSeparator<f64>;
pub type BackboneClustering = backbone::BackboneClustering<f64>;
pub type PathNet = backbone::PathNet<f64>;
pub type SsspResult = graph::SsspResult<f64>;
