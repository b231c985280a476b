//! Node-to-cluster assignments shared by every decomposition routine.

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, NodeId, NodeSubset, WeightedGraph};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster<F> {
    pub id: usize,
    pub members: Vec<NodeId>,
    /// Center node, when the cluster was grown from one.
    pub center: Option<NodeId>,
    /// Strong diameter the producing algorithm guarantees.
    pub diameter_bound: F,
    /// Recursion round (1-based) in which the cluster was emitted.
    pub round: usize,
}

/// Disjoint clusters over a graph. Partial for clusterings that may leave
/// nodes out, total for decompositions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clustering<F> {
    pub node_count: usize,
    pub cluster_of: Vec<Option<usize>>,
    pub clusters: Vec<Cluster<F>>,
    /// Edges whose endpoints were separated, in the order decided.
    pub cut_edges: Vec<EdgeId>,
    /// Number of clustering rounds that produced this result.
    pub rounds: usize,
}

impl<F: Scalar> Clustering<F> {
    pub fn new(node_count: usize) -> Self {
        Self {
            node_count,
            cluster_of: vec![None; node_count],
            clusters: Vec::new(),
            cut_edges: Vec::new(),
            rounds: 0,
        }
    }

    /// Adds a cluster over nodes that are not yet assigned; returns its id.
    pub fn push_cluster(
        &mut self,
        members: Vec<NodeId>,
        center: Option<NodeId>,
        diameter_bound: F,
        round: usize,
    ) -> usize {
        let id = self.clusters.len();
        for &v in &members {
            debug_assert!(self.cluster_of[v].is_none(), "node {v} clustered twice");
            self.cluster_of[v] = Some(id);
        }
        self.clusters.push(Cluster {
            id,
            members,
            center,
            diameter_bound,
            round,
        });
        id
    }

    pub fn clustered(&self) -> NodeSubset {
        NodeSubset::from_nodes(
            self.node_count,
            (0..self.node_count).filter(|&v| self.cluster_of[v].is_some()),
        )
    }

    pub fn clustered_fraction(&self, active: &NodeSubset) -> f64 {
        if active.is_empty() {
            return 1.0;
        }
        let k = active.iter().filter(|&v| self.cluster_of[v].is_some()).count();
        k as f64 / active.len() as f64
    }

    pub fn is_total_on(&self, active: &NodeSubset) -> bool {
        active.iter().all(|v| self.cluster_of[v].is_some())
    }

    /// Whether edge endpoints `u` and `v` end up separated: in different
    /// clusters, or exactly one of them clustered.
    pub fn separates(&self, u: NodeId, v: NodeId) -> bool {
        match (self.cluster_of[u], self.cluster_of[v]) {
            (None, None) => false,
            (a, b) => a != b,
        }
    }

    /// Edges with both endpoints in `active` that this clustering separates.
    pub fn separated_edges(&self, g: &WeightedGraph<F>, active: &NodeSubset) -> Vec<EdgeId> {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| active.contains(e.u) && active.contains(e.v) && self.separates(e.u, e.v))
            .map(|(id, _)| id)
            .collect()
    }
}
