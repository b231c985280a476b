use super::sssp::{exact_sssp_within, Scope};
use super::{NodeSubset, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `{v : d(v, center_set) <= radius}` over the whole graph.
pub fn ball<F: Scalar>(g: &WeightedGraph<F>, center_set: &NodeSubset, radius: F) -> Result<NodeSubset> {
    ball_within(g, Scope::whole(), center_set, radius)
}

/// Ball around `center_set` in the subgraph selected by `scope`.
pub fn ball_within<F: Scalar>(
    g: &WeightedGraph<F>,
    scope: Scope<'_>,
    center_set: &NodeSubset,
    radius: F,
) -> Result<NodeSubset> {
    if !(radius >= F::zero()) {
        return Err(Error::param("radius", "must be non-negative"));
    }
    Ok(exact_sssp_within(g, scope, center_set)?.within(radius))
}
