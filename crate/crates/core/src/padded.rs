//! Exponential-shift clustering through a virtual super-source.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ancestor_sum, ball_within, NodeId, NodeSubset, RootedForest, Scope, Vertex, WeightedGraph};
use crate::oracle::{SsspOracle, VirtualSourceSpec};
use crate::sampling::{sample_texp, Stream, TexpParams};
use crate::scalar::{log2_at_least_one, Scalar};

/// How strictly the covering precondition is checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Covering {
    /// Fail when a node is farther than `(1+ε)·2D` from the super-source.
    #[default]
    Enforce,
    /// Only fail on nodes no center reaches at all.
    Trust,
}

#[derive(Clone, Debug)]
pub struct PaddedDecomposition<F> {
    /// Cluster per node; `None` exactly for inactive nodes.
    pub cluster_of: Vec<Option<usize>>,
    pub center_of_cluster: Vec<NodeId>,
    pub members: Vec<Vec<NodeId>>,
    /// `(center, δ)` for every supplied center, in id order.
    pub shift_of_center: Vec<(NodeId, F)>,
    /// Approximate distance from the super-source.
    pub dist_via_source: Vec<F>,
    pub forest: RootedForest,
}

impl<F: Scalar> PaddedDecomposition<F> {
    pub fn cluster_count(&self) -> usize {
        self.center_of_cluster.len()
    }

    /// Label vector with `usize::MAX` for inactive nodes, suitable for
    /// [`Scope::with_labels`].
    pub fn labels(&self) -> Vec<usize> {
        self.cluster_of.iter().map(|c| c.unwrap_or(usize::MAX)).collect()
    }
}

/// Largest `ε` accepted for a packing bound `tau`.
pub fn max_epsilon(tau: usize) -> f64 {
    1.0 / (40.0 * log2_at_least_one(tau as f64))
}

/// Shift parameter `2 + 2·log τ`.
pub fn shift_lambda(tau: usize) -> f64 {
    2.0 + 2.0 * log2_at_least_one(tau as f64)
}

#[allow(clippy::too_many_arguments)]
pub fn pseudo_padded_decompose<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    centers: &NodeSubset,
    diameter: F,
    tau: usize,
    epsilon: F,
    covering: Covering,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<PaddedDecomposition<F>> {
    let n = g.node_count();
    if !(diameter > F::zero()) || !diameter.is_finite() {
        return Err(Error::param("diameter", "must be positive and finite"));
    }
    if tau == 0 {
        return Err(Error::param("tau", "must be at least 1"));
    }
    if !(epsilon >= F::zero()) || epsilon.as_f64() > max_epsilon(tau) * (1.0 + 1e-12) {
        return Err(Error::param(
            "epsilon",
            format!("must lie in [0, {}] for tau = {tau}", max_epsilon(tau)),
        ));
    }
    if let Some(x) = centers.iter().find(|&x| !active.contains(x)) {
        return Err(Error::Inactive { node: x });
    }
    if centers.is_empty() {
        return Err(Error::EmptySources);
    }

    let params = TexpParams::new(shift_lambda(tau), diameter)?;
    let mut rng = stream.child("shift", 0).rng();
    let shift_of_center: Vec<(NodeId, F)> = centers
        .iter()
        .map(|x| (x, sample_texp(&params, &mut rng)))
        .collect();
    let virtuals = VirtualSourceSpec::super_source(shift_of_center.iter().map(|&(x, d)| (x, diameter - d)));
    let sp = oracle.approx_set_sssp(g, Scope::within(active), &virtuals, &[Vertex::Virtual(0)], epsilon)?;

    let bound = (F::one() + epsilon) * F::lit(2.0) * diameter;
    for v in active.iter() {
        let d = sp.dist[v];
        let violated = match covering {
            Covering::Enforce => !(d <= bound),
            Covering::Trust => !d.is_finite(),
        };
        if violated {
            return Err(Error::CoveringViolation {
                node: v,
                distance: d.as_f64(),
                bound: bound.as_f64(),
            });
        }
    }

    let forest = RootedForest::from_sssp(&sp);
    let roots: Vec<Option<NodeId>> = (0..n)
        .map(|v| (forest.contains(v) && forest.parent(v).is_none()).then_some(v))
        .collect();
    let root_of = ancestor_sum(&forest, &roots, |a, b| a.or(*b));
    oracle.note_aggregation(1);

    let mut cluster_index = vec![usize::MAX; n];
    let mut center_of_cluster = Vec::new();
    for x in centers.iter() {
        if sp.pred[x] == Some(Vertex::Virtual(0)) {
            cluster_index[x] = center_of_cluster.len();
            center_of_cluster.push(x);
        }
    }
    let mut cluster_of = vec![None; n];
    let mut members = vec![Vec::new(); center_of_cluster.len()];
    for v in active.iter() {
        let root = root_of[v].ok_or_else(|| Error::Invariant(format!("node {v} has no root")))?;
        let c = cluster_index[root];
        if c == usize::MAX {
            return Err(Error::Invariant(format!("node {v} rooted at non-center {root}")));
        }
        cluster_of[v] = Some(c);
        members[c].push(v);
    }

    Ok(PaddedDecomposition {
        cluster_of,
        center_of_cluster,
        members,
        shift_of_center,
        dist_via_source: sp.dist,
        forest,
    })
}

/// Monte-Carlo estimate, per node, of `Pr[B(v, γD) ⊆ K(v)]` over `trials`
/// decompositions of the whole graph.
#[allow(clippy::too_many_arguments)]
pub fn padding_rate<F: Scalar>(
    g: &WeightedGraph<F>,
    centers: &NodeSubset,
    diameter: F,
    tau: usize,
    epsilon: F,
    gamma: F,
    trials: usize,
    stream: Stream,
) -> Result<Vec<f64>> {
    if !(gamma >= epsilon) || gamma.as_f64() > 1.0 / 32.0 {
        return Err(Error::param("gamma", "must lie in [epsilon, 1/32]"));
    }
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    let n = g.node_count();
    let all = g.all_nodes();
    let radius = gamma * diameter;
    let balls: Vec<Vec<NodeId>> = (0..n)
        .into_par_iter()
        .map(|v| ball_within(g, Scope::whole(), &NodeSubset::singleton(n, v), radius).map(|b| b.to_vec()))
        .collect::<Result<_>>()?;
    let per_trial: Vec<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut oracle = SsspOracle::exact();
            let p = pseudo_padded_decompose(
                g,
                &all,
                centers,
                diameter,
                tau,
                epsilon,
                Covering::Enforce,
                &mut oracle,
                stream.child("trial", t as u64),
            )?;
            Ok((0..n)
                .map(|v| balls[v].iter().all(|&u| p.cluster_of[u] == p.cluster_of[v]))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0usize; n];
    for row in &per_trial {
        for (c, &ok) in counts.iter_mut().zip(row) {
            *c += ok as usize;
        }
    }
    Ok(counts.into_iter().map(|c| c as f64 / trials as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{generate, GeneratorSpec};

    fn decompose(g: &WeightedGraph<f64>, centers: &NodeSubset, d: f64, seed: u64) -> PaddedDecomposition<f64> {
        let mut o = SsspOracle::exact();
        let p = pseudo_padded_decompose(
            g,
            &g.all_nodes(),
            centers,
            d,
            g.node_count(),
            0.0,
            Covering::Enforce,
            &mut o,
            Stream::new(seed),
        )
        .unwrap();
        assert_eq!(o.counters_snapshot().sssp_calls, 1);
        p
    }

    #[test]
    fn single_center_one_cluster() {
        let g: WeightedGraph<f64> = generate(&GeneratorSpec::Path, 6, 0).unwrap();
        let p = decompose(&g, &NodeSubset::singleton(6, 2), 5.0, 3);
        assert_eq!(p.cluster_count(), 1);
        assert_eq!(p.members[0].len(), 6);
        assert_eq!(p.center_of_cluster, vec![2]);
    }

    #[test]
    fn lone_node() {
        let g: WeightedGraph<f64> = WeightedGraph::new(1, vec![]).unwrap();
        let p = decompose(&g, &NodeSubset::full(1), 1.0, 0);
        assert_eq!(p.members, vec![vec![0]]);
    }

    #[test]
    fn clusters_contain_centers_and_parents() {
        let g: WeightedGraph<f64> = generate(&GeneratorSpec::Grid, 36, 0).unwrap();
        for seed in 0..30 {
            let p = decompose(&g, &g.all_nodes(), 3.0, seed);
            for (c, &x) in p.center_of_cluster.iter().enumerate() {
                assert_eq!(p.cluster_of[x], Some(c));
            }
            for v in 0..36 {
                if let Some(u) = p.forest.parent(v) {
                    assert_eq!(p.cluster_of[u], p.cluster_of[v]);
                }
            }
        }
    }

    #[test]
    fn covering_violation_is_reported() {
        let g: WeightedGraph<f64> = generate(&GeneratorSpec::Path, 10, 0).unwrap();
        let mut o = SsspOracle::exact();
        let r = pseudo_padded_decompose(
            &g,
            &g.all_nodes(),
            &NodeSubset::singleton(10, 0),
            1.0,
            10,
            0.0,
            Covering::Enforce,
            &mut o,
            Stream::new(0),
        );
        assert!(matches!(r, Err(Error::CoveringViolation { .. })));
    }

    #[test]
    fn unreachable_node_fails_even_when_trusted() {
        let g: WeightedGraph<f64> = WeightedGraph::from_triples(3, &[(0, 1, 1.0)]).unwrap();
        let mut o = SsspOracle::exact();
        let r = pseudo_padded_decompose(
            &g,
            &g.all_nodes(),
            &NodeSubset::singleton(3, 0),
            1.0,
            3,
            0.0,
            Covering::Trust,
            &mut o,
            Stream::new(0),
        );
        assert!(matches!(r, Err(Error::CoveringViolation { node: 2, .. })));
    }

    #[test]
    fn rejects_large_epsilon() {
        let g: WeightedGraph<f64> = generate(&GeneratorSpec::Path, 4, 0).unwrap();
        let mut o = SsspOracle::exact();
        let r = pseudo_padded_decompose(
            &g,
            &g.all_nodes(),
            &g.all_nodes(),
            2.0,
            4,
            0.1,
            Covering::Enforce,
            &mut o,
            Stream::new(0),
        );
        assert!(matches!(r, Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn zero_gamma_pads_everything() {
        let g: WeightedGraph<f64> = generate(&GeneratorSpec::Path, 16, 0).unwrap();
        let rates = padding_rate(&g, &g.all_nodes(), 4.0, 16, 0.0, 0.0, 20, Stream::new(1)).unwrap();
        assert!(rates.iter().all(|&r| r == 1.0));
    }

    #[test]
    fn separate_components_always_padded() {
        let g: WeightedGraph<f64> = WeightedGraph::new(2, vec![]).unwrap();
        let rates = padding_rate(&g, &g.all_nodes(), 32.0, 2, 0.0, 1.0 / 32.0, 20, Stream::new(1)).unwrap();
        assert_eq!(rates, vec![1.0, 1.0]);
    }
}
