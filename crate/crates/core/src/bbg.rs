//! Ball growing around a seed set with a uniformly random radius.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeSubset, Scope, WeightedGraph};
use crate::oracle::SsspOracle;
use crate::sampling::Stream;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct BlurResult<F> {
    /// The seed set together with every node within the sampled radius.
    pub grown: NodeSubset,
    pub threshold: F,
    /// Active edges with exactly one endpoint in `grown`.
    pub cut_edges: Vec<EdgeId>,
}

/// Grows `seed` inside `active` to the nodes at approximate distance at most
/// `r`, where `r` is uniform on `(0, rho]`.
pub fn blur<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    seed: &NodeSubset,
    rho: F,
    epsilon: F,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<BlurResult<F>> {
    if !(rho > F::zero()) || !rho.is_finite() {
        return Err(Error::param("rho", "must be positive and finite"));
    }
    let u: f64 = stream.rng().gen();
    let threshold = rho * F::lit(1.0 - u);
    blur_with_threshold(g, active, seed, threshold, epsilon, oracle)
}

/// [`blur`] with a caller-chosen radius.
pub fn blur_with_threshold<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    seed: &NodeSubset,
    threshold: F,
    epsilon: F,
    oracle: &mut SsspOracle,
) -> Result<BlurResult<F>> {
    if !(threshold >= F::zero()) {
        return Err(Error::param("threshold", "must be non-negative"));
    }
    if seed.is_empty() {
        return Err(Error::EmptySources);
    }
    if let Some(v) = seed.iter().find(|&v| !active.contains(v)) {
        return Err(Error::Inactive { node: v });
    }
    let sp = oracle.set_sssp(g, Scope::within(active), seed, epsilon)?;
    let mut grown = seed.clone();
    for v in active.iter() {
        if sp.dist[v] <= threshold {
            grown.insert(v);
        }
    }
    let cut_edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            active.contains(e.u) && active.contains(e.v) && grown.contains(e.u) != grown.contains(e.v)
        })
        .map(|(id, _)| id)
        .collect();
    Ok(BlurResult {
        grown,
        threshold,
        cut_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{generate, GeneratorSpec};

    fn path(n: usize) -> WeightedGraph<f64> {
        generate(&GeneratorSpec::Path, n, 0).unwrap()
    }

    #[test]
    fn grows_path_within_radius() {
        let g = path(4);
        let all = g.all_nodes();
        let seed = NodeSubset::singleton(4, 0);
        let mut o = SsspOracle::exact();
        let r = blur_with_threshold(&g, &all, &seed, 1.5, 0.0, &mut o).unwrap();
        assert_eq!(r.grown.to_vec(), vec![0, 1]);
        assert_eq!(r.cut_edges, vec![1]);
        assert_eq!(o.counters_snapshot().sssp_calls, 1);
    }

    #[test]
    fn tiny_radius_keeps_seed_only() {
        let g = path(4);
        let all = g.all_nodes();
        let seed = NodeSubset::singleton(4, 0);
        let mut o = SsspOracle::exact();
        let r = blur_with_threshold(&g, &all, &seed, 0.5, 0.0, &mut o).unwrap();
        assert_eq!(r.grown.to_vec(), vec![0]);
    }

    #[test]
    fn sampled_threshold_in_range() {
        let g = path(10);
        let all = g.all_nodes();
        let seed = NodeSubset::singleton(10, 0);
        for i in 0..50 {
            let mut o = SsspOracle::exact();
            let r = blur(&g, &all, &seed, 3.0, 0.0, &mut o, Stream::new(i)).unwrap();
            assert!(r.threshold > 0.0 && r.threshold <= 3.0);
            assert!(seed.is_subset(&r.grown));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = path(4);
        let all = g.all_nodes();
        let mut o = SsspOracle::exact();
        let seed = NodeSubset::singleton(4, 0);
        assert!(matches!(
            blur(&g, &all, &seed, 0.0, 0.0, &mut o, Stream::new(1)),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            blur(&g, &all, &NodeSubset::empty(4), 1.0, 0.0, &mut o, Stream::new(1)),
            Err(Error::EmptySources)
        ));
        let part = NodeSubset::from_nodes(4, [1, 2]);
        assert!(matches!(
            blur(&g, &part, &seed, 1.0, 0.0, &mut o, Stream::new(1)),
            Err(Error::Inactive { node: 0 })
        ));
    }

    #[test]
    fn growth_is_monotone_in_threshold() {
        let g: WeightedGraph<f64> = generate(&GeneratorSpec::Grid, 36, 0).unwrap();
        let all = g.all_nodes();
        let seed = NodeSubset::from_nodes(36, [0, 35]);
        let mut prev = NodeSubset::empty(36);
        for t in 0..8 {
            let mut o = SsspOracle::exact();
            let r = blur_with_threshold(&g, &all, &seed, t as f64 * 0.7, 0.0, &mut o).unwrap();
            assert!(prev.is_subset(&r.grown));
            prev = r.grown;
        }
    }
}
