//! Weighted undirected graphs, node subsets, exact distances and the tree
//! primitives the decomposition algorithms are assembled from.

mod ball;
mod components;
mod forest;
pub mod generate;
pub mod io;
pub(crate) mod sssp;

pub use ball::{ball, ball_within};
pub use components::connected_components;
pub use forest::{ancestor_sum, path_select, root_path, subtree_sum, RootedForest};
pub use generate::{generate, GeneratorSpec};
pub use sssp::{exact_sssp, exact_sssp_within, Scope, SsspResult, Vertex};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge<F> {
    pub u: NodeId,
    pub v: NodeId,
    pub length: F,
}

impl<F: Scalar> Edge<F> {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable undirected graph with strictly positive edge lengths.
#[derive(Clone, Debug)]
pub struct WeightedGraph<F> {
    node_count: usize,
    edges: Vec<Edge<F>>,
    // (neighbor, edge id) pairs
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl<F: Scalar> WeightedGraph<F> {
    /// Builds a graph, checking lengths against the default cap `n³`.
    pub fn new(node_count: usize, edges: Vec<Edge<F>>) -> Result<Self> {
        let cap = default_weight_cap::<F>(node_count);
        Self::with_weight_cap(node_count, edges, cap)
    }

    /// Builds a graph whose edge lengths must lie in `(0, cap]`.
    pub fn with_weight_cap(node_count: usize, edges: Vec<Edge<F>>, cap: F) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); node_count];
        for (id, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= node_count {
                    return Err(Error::NodeOutOfRange { node: x, node_count });
                }
            }
            let reason = if e.u == e.v {
                Some("self-loop")
            } else if !(e.length > F::zero()) {
                Some("length must be positive")
            } else if !e.length.is_finite() || e.length > cap {
                Some("length exceeds the weight cap")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(Error::InvalidEdge {
                    u: e.u,
                    v: e.v,
                    length: e.length.as_f64(),
                    reason,
                });
            }
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
        }
        Ok(Self {
            node_count,
            edges,
            adjacency,
        })
    }

    pub fn from_triples(node_count: usize, triples: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let edges = triples
            .iter()
            .map(|&(u, v, w)| Edge {
                u,
                v,
                length: F::lit(w),
            })
            .collect();
        Self::new(node_count, edges)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<F>] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge<F> {
        &self.edges[id]
    }

    /// Iterates `(neighbor, edge id, length)` for every edge incident to `v`.
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, EdgeId, F)> + '_ {
        self.adjacency[v]
            .iter()
            .map(move |&(w, id)| (w, id, self.edges[id].length))
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    /// Shortest edge joining `u` and `v`, if they are adjacent.
    pub fn length_between(&self, u: NodeId, v: NodeId) -> Option<F> {
        self.neighbors(u)
            .filter(|&(w, _, _)| w == v)
            .map(|(_, _, len)| len)
            .reduce(F::min)
    }

    /// Total length of a node sequence whose consecutive nodes are adjacent.
    pub fn walk_length(&self, walk: &[NodeId]) -> Option<F> {
        walk.windows(2)
            .map(|p| self.length_between(p[0], p[1]))
            .try_fold(F::zero(), |acc, len| len.map(|l| acc + l))
    }

    pub fn total_length(&self) -> F {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn all_nodes(&self) -> NodeSubset {
        NodeSubset::full(self.node_count)
    }
}

fn default_weight_cap<F: Scalar>(n: usize) -> F {
    let n = (n.max(2)) as f64;
    F::lit(n * n * n)
}

/// A set of node ids drawn from `[0, universe)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSubset {
    membership: FixedBitSet,
    size: usize,
}

impl NodeSubset {
    pub fn empty(universe: usize) -> Self {
        Self {
            membership: FixedBitSet::with_capacity(universe),
            size: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut membership = FixedBitSet::with_capacity(universe);
        membership.insert_range(..);
        Self {
            membership,
            size: universe,
        }
    }

    pub fn singleton(universe: usize, v: NodeId) -> Self {
        let mut s = Self::empty(universe);
        s.insert(v);
        s
    }

    pub fn from_nodes(universe: usize, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut s = Self::empty(universe);
        for v in nodes {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.membership.len()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.membership.contains(v)
    }

    /// Returns `true` if `v` was not already present.
    pub fn insert(&mut self, v: NodeId) -> bool {
        let fresh = !self.membership.put(v);
        if fresh {
            self.size += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: NodeId) -> bool {
        let present = self.membership.contains(v);
        if present {
            self.membership.set(v, false);
            self.size -= 1;
        }
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.membership.ones()
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<NodeId> {
        self.membership.minimum()
    }

    pub fn union_with(&mut self, other: &NodeSubset) {
        self.membership.union_with(&other.membership);
        self.size = self.membership.count_ones(..);
    }

    pub fn difference_with(&mut self, other: &NodeSubset) {
        self.membership.difference_with(&other.membership);
        self.size = self.membership.count_ones(..);
    }

    pub fn intersect_with(&mut self, other: &NodeSubset) {
        self.membership.intersect_with(&other.membership);
        self.size = self.membership.count_ones(..);
    }

    pub fn is_subset(&self, other: &NodeSubset) -> bool {
        self.membership.is_subset(&other.membership)
    }

    pub fn is_disjoint(&self, other: &NodeSubset) -> bool {
        self.membership.is_disjoint(&other.membership)
    }
}

impl std::ops::Index<NodeId> for NodeSubset {
    type Output = bool;

    fn index(&self, v: NodeId) -> &bool {
        &self.membership[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(WeightedGraph::<f64>::from_triples(2, &[(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::<f64>::from_triples(2, &[(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::<f64>::from_triples(2, &[(0, 1, -1.0)]).is_err());
        assert!(WeightedGraph::<f64>::from_triples(2, &[(0, 2, 1.0)]).is_err());
        // cap for n=2 is 8
        assert!(WeightedGraph::<f64>::from_triples(2, &[(0, 1, 9.0)]).is_err());
        assert!(WeightedGraph::<f64>::from_triples(2, &[(0, 1, 8.0)]).is_ok());
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = WeightedGraph::<f64>::from_triples(3, &[(0, 1, 1.0), (1, 2, 2.5)]).unwrap();
        let n1: Vec<_> = g.neighbors(1).collect();
        assert_eq!(n1, vec![(0, 0, 1.0), (2, 1, 2.5)]);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.total_length(), 3.5);
    }

    #[test]
    fn subset_size_tracks_membership() {
        let mut s = NodeSubset::empty(10);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(7);
        assert_eq!(s.len(), 2);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert_eq!(s.to_vec(), vec![7]);
        let mut f = NodeSubset::full(10);
        f.difference_with(&s);
        assert_eq!(f.len(), 9);
        assert!(!f.contains(7));
        assert!(s.is_disjoint(&f));
    }
}
