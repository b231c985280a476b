//! Strong-diameter low-diameter clustering built on a pseudo-padded
//! decomposition followed by boundary filtering and ball growing.

use serde::{Deserialize, Serialize};

use crate::bbg::blur;
use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{ancestor_sum, NodeId, NodeSubset, RootedForest, Scope, Vertex, WeightedGraph};
use crate::oracle::{SsspOracle, VirtualSourceSpec};
use crate::padded::{pseudo_padded_decompose, Covering, PaddedDecomposition};
use crate::sampling::Stream;
use crate::scalar::{log2_at_least_one, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdcParams {
    /// Divisor in the blur radius `ρ = D / (c_blur · log τ)`.
    pub c_blur: f64,
    pub covering: Covering,
    /// Overrides the default `ε = 1/(1024 · log τ)`.
    pub epsilon: Option<f64>,
}

impl Default for LdcParams {
    fn default() -> Self {
        Self {
            c_blur: 128.0,
            covering: Covering::Enforce,
            epsilon: None,
        }
    }
}

impl LdcParams {
    pub fn epsilon_for(&self, tau: usize) -> f64 {
        self.epsilon
            .unwrap_or_else(|| 1.0 / (1024.0 * log2_at_least_one(tau as f64)))
    }

    pub fn rho_for<F: Scalar>(&self, diameter: F, tau: usize) -> F {
        diameter / F::lit(self.c_blur * log2_at_least_one(tau as f64))
    }
}

/// Intermediate sets of one [`build_ldc`] application.
#[derive(Clone, Debug)]
pub struct LdcTrace<F> {
    pub padded: PaddedDecomposition<F>,
    /// Approximate distance from each node to its padded cluster's boundary.
    pub boundary_dist: Vec<F>,
    /// Nodes far enough from every boundary.
    pub interior: NodeSubset,
    /// Interior nodes connected to their own center by a short interior path.
    pub kept: NodeSubset,
    /// `kept` after ball growing.
    pub blurred: NodeSubset,
    pub rho: F,
    pub epsilon: F,
    pub clustering: Clustering<F>,
}

/// One clustering application with strong diameter at most `8·diameter`.
/// Nodes may stay unclustered.
#[allow(clippy::too_many_arguments)]
pub fn build_ldc<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    centers: &NodeSubset,
    diameter: F,
    tau: usize,
    params: &LdcParams,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<Clustering<F>> {
    build_ldc_traced(g, active, centers, diameter, tau, params, oracle, stream).map(|t| t.clustering)
}

#[allow(clippy::too_many_arguments)]
pub fn build_ldc_traced<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    centers: &NodeSubset,
    diameter: F,
    tau: usize,
    params: &LdcParams,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<LdcTrace<F>> {
    let n = g.node_count();
    if !(params.c_blur > 0.0) {
        return Err(Error::param("c_blur", "must be positive"));
    }
    let epsilon = F::lit(params.epsilon_for(tau));
    let rho = params.rho_for(diameter, tau);

    let padded = pseudo_padded_decompose(
        g,
        active,
        centers,
        diameter,
        tau,
        epsilon,
        params.covering,
        oracle,
        stream.child("padded", 0),
    )?;
    let labels = padded.labels();

    let mut omega: Vec<(NodeId, F)> = Vec::new();
    for v in active.iter() {
        let w = g
            .neighbors(v)
            .filter(|&(u, _, _)| active.contains(u) && labels[u] != labels[v])
            .map(|(_, _, len)| len)
            .fold(F::infinity(), F::min);
        if w.is_finite() {
            omega.push((v, w));
        }
    }
    oracle.note_aggregation(1);
    let boundary_dist = if omega.is_empty() {
        vec![F::infinity(); n]
    } else {
        let virtuals = VirtualSourceSpec::super_source(omega);
        oracle
            .approx_set_sssp(
                g,
                Scope::within(active).with_labels(&labels),
                &virtuals,
                &[Vertex::Virtual(0)],
                epsilon,
            )?
            .dist
    };

    let threshold = rho + epsilon * diameter;
    let interior = NodeSubset::from_nodes(n, active.iter().filter(|&v| boundary_dist[v] >= threshold));
    let mut clustering = Clustering::new(n);
    let empty = |interior, kept, blurred, clustering| LdcTrace {
        padded: padded.clone(),
        boundary_dist: boundary_dist.clone(),
        interior,
        kept,
        blurred,
        rho,
        epsilon,
        clustering,
    };

    let leaders = NodeSubset::from_nodes(n, padded.center_of_cluster.iter().copied());
    let interior_centers = NodeSubset::from_nodes(n, leaders.iter().filter(|&x| interior.contains(x)));
    if interior_centers.is_empty() {
        return Ok(empty(interior, NodeSubset::empty(n), NodeSubset::empty(n), clustering));
    }
    let sp = oracle.set_sssp(g, Scope::within(&interior), &interior_centers, epsilon)?;
    let forest = RootedForest::from_sssp(&sp);
    let roots: Vec<Option<NodeId>> = (0..n)
        .map(|v| (forest.contains(v) && forest.parent(v).is_none()).then_some(v))
        .collect();
    let root_of = ancestor_sum(&forest, &roots, |a, b| a.or(*b));
    oracle.note_aggregation(1);
    let reach = F::lit(3.0) * diameter;
    let kept = NodeSubset::from_nodes(
        n,
        interior.iter().filter(|&v| {
            let own = padded.cluster_of[v].map(|c| padded.center_of_cluster[c]);
            root_of[v].is_some() && root_of[v] == own && sp.dist[v] <= reach
        }),
    );
    if kept.is_empty() {
        return Ok(empty(interior, kept, NodeSubset::empty(n), clustering));
    }

    let grown = blur(g, active, &kept, rho, epsilon, oracle, stream.child("blur", 0))?;
    let blurred = grown.grown;

    let final_centers = NodeSubset::from_nodes(n, kept.iter().filter(|&v| leaders.contains(v)));
    let sp = oracle.set_sssp(
        g,
        Scope::within(&blurred).with_labels(&labels),
        &final_centers,
        epsilon,
    )?;
    let forest = RootedForest::from_sssp(&sp);
    let roots: Vec<Option<NodeId>> = (0..n)
        .map(|v| (forest.contains(v) && forest.parent(v).is_none()).then_some(v))
        .collect();
    let root_of = ancestor_sum(&forest, &roots, |a, b| a.or(*b));
    oracle.note_aggregation(1);

    let mut by_center: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for v in blurred.iter() {
        if let Some(r) = root_of[v] {
            by_center[r].push(v);
        }
    }
    let bound = F::lit(8.0) * diameter;
    for x in final_centers.iter() {
        let members = std::mem::take(&mut by_center[x]);
        if !members.is_empty() {
            clustering.push_cluster(members, Some(x), bound, 1);
        }
    }
    clustering.cut_edges = clustering.separated_edges(g, active);
    clustering.rounds = 1;
    Ok(empty(interior, kept, blurred, clustering))
}
