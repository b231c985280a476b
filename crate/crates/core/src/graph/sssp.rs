use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{NodeId, NodeSubset, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A vertex of a graph augmented with temporary virtual nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    Real(NodeId),
    Virtual(usize),
}

/// Undirected edge between a virtual node and a real or virtual node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VirtualEdge<F> {
    pub virtual_id: usize,
    pub target: Vertex,
    pub weight: F,
}

/// Restricts a shortest-path computation to the subgraph induced by `active`
/// and, when `labels` is set, to edges whose endpoints carry equal labels.
#[derive(Clone, Copy, Debug, Default)]
pub struct Scope<'a> {
    pub active: Option<&'a NodeSubset>,
    pub labels: Option<&'a [usize]>,
}

impl<'a> Scope<'a> {
    pub fn whole() -> Self {
        Self::default()
    }

    pub fn within(active: &'a NodeSubset) -> Self {
        Self {
            active: Some(active),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: &'a [usize]) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn admits(&self, v: NodeId) -> bool {
        self.active.is_none_or(|a| a.contains(v))
    }

    fn edge_allowed(&self, u: NodeId, v: NodeId) -> bool {
        self.admits(v) && self.labels.is_none_or(|l| l[u] == l[v])
    }
}

/// Distances and a predecessor forest rooted at the sources.
#[derive(Clone, Debug)]
pub struct SsspResult<F> {
    /// Distance per real node; `+inf` when unreachable.
    pub dist: Vec<F>,
    /// Predecessor per real node; `None` for sources and unreachable nodes.
    pub pred: Vec<Option<Vertex>>,
    pub source_set: NodeSubset,
    pub virtual_sources: Vec<usize>,
    pub virtual_dist: Vec<F>,
    pub virtual_pred: Vec<Option<Vertex>>,
    /// Vertices in the order they were settled.
    pub settle_order: Vec<Vertex>,
}

impl<F: Scalar> SsspResult<F> {
    pub fn node_count(&self) -> usize {
        self.dist.len()
    }

    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.dist[v].is_finite()
    }

    pub fn dist_of(&self, x: Vertex) -> F {
        match x {
            Vertex::Real(v) => self.dist[v],
            Vertex::Virtual(j) => self.virtual_dist[j],
        }
    }

    pub fn pred_of(&self, x: Vertex) -> Option<Vertex> {
        match x {
            Vertex::Real(v) => self.pred[v],
            Vertex::Virtual(j) => self.virtual_pred[j],
        }
    }

    /// Real predecessor of `v`, if its parent in the forest is a real node.
    pub fn real_pred(&self, v: NodeId) -> Option<NodeId> {
        match self.pred[v] {
            Some(Vertex::Real(u)) => Some(u),
            _ => None,
        }
    }

    /// Real nodes with finite distance at most `radius`.
    pub fn within(&self, radius: F) -> NodeSubset {
        NodeSubset::from_nodes(
            self.dist.len(),
            (0..self.dist.len()).filter(|&v| self.dist[v] <= radius),
        )
    }
}

#[derive(Clone, Copy, Debug)]
struct Key<F> {
    dist: F,
    index: usize,
}

impl<F: Scalar> PartialEq for Key<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<F: Scalar> Eq for Key<F> {}

impl<F: Scalar> PartialOrd for Key<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Scalar> Ord for Key<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .partial_cmp(&other.dist)
            .expect("distances are never NaN")
            .then(self.index.cmp(&other.index))
    }
}

/// Dijkstra on `g` restricted to `scope`, augmented with `virtual_count`
/// virtual nodes. Ties on distance are settled in order of smaller index,
/// where real node `v` has index `v` and virtual node `j` has index `n + j`.
pub(crate) fn dijkstra<F: Scalar>(
    g: &WeightedGraph<F>,
    scope: Scope<'_>,
    virtual_edges: &[VirtualEdge<F>],
    virtual_count: usize,
    sources: &[Vertex],
) -> SsspResult<F> {
    let n = g.node_count();
    let total = n + virtual_count;
    let index_of = |x: Vertex| match x {
        Vertex::Real(v) => v,
        Vertex::Virtual(j) => n + j,
    };
    let vertex_of = |i: usize| {
        if i < n {
            Vertex::Real(i)
        } else {
            Vertex::Virtual(i - n)
        }
    };

    // virtual adjacency, keyed by augmented index
    let mut extra: Vec<Vec<(usize, F)>> = vec![Vec::new(); total];
    for e in virtual_edges {
        let a = n + e.virtual_id;
        let b = index_of(e.target);
        if let Vertex::Real(v) = e.target {
            if !scope.admits(v) {
                continue;
            }
        }
        extra[a].push((b, e.weight));
        extra[b].push((a, e.weight));
    }

    let mut dist = vec![F::infinity(); total];
    let mut pred: Vec<Option<usize>> = vec![None; total];
    let mut settled = vec![false; total];
    let mut order = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut source_set = NodeSubset::empty(n);
    let mut virtual_sources = Vec::new();

    for &s in sources {
        let i = index_of(s);
        match s {
            Vertex::Real(v) => {
                source_set.insert(v);
            }
            Vertex::Virtual(j) => virtual_sources.push(j),
        }
        if dist[i] > F::zero() {
            dist[i] = F::zero();
            heap.push(Reverse(Key {
                dist: F::zero(),
                index: i,
            }));
        }
    }

    while let Some(Reverse(Key { dist: d, index: i })) = heap.pop() {
        if settled[i] || d > dist[i] {
            continue;
        }
        settled[i] = true;
        order.push(vertex_of(i));
        let mut relax = |j: usize, w: F, dist: &mut [F], pred: &mut [Option<usize>]| {
            if settled[j] {
                return;
            }
            let cand = d + w;
            if cand < dist[j] {
                dist[j] = cand;
                pred[j] = Some(i);
                heap.push(Reverse(Key {
                    dist: cand,
                    index: j,
                }));
            }
        };
        if i < n {
            for (j, _, w) in g.neighbors(i) {
                if scope.edge_allowed(i, j) {
                    relax(j, w, &mut dist, &mut pred);
                }
            }
        }
        for &(j, w) in &extra[i] {
            relax(j, w, &mut dist, &mut pred);
        }
    }

    let virtual_dist = dist.split_off(n);
    let mut pred: Vec<Option<Vertex>> = pred.into_iter().map(|p| p.map(vertex_of)).collect();
    let virtual_pred = pred.split_off(n);
    SsspResult {
        dist,
        pred,
        source_set,
        virtual_sources,
        virtual_dist,
        virtual_pred,
        settle_order: order,
    }
}

/// Exact shortest distances from `sources` over the whole graph.
pub fn exact_sssp<F: Scalar>(g: &WeightedGraph<F>, sources: &NodeSubset) -> Result<SsspResult<F>> {
    exact_sssp_within(g, Scope::whole(), sources)
}

/// Exact shortest distances from `sources` inside `scope`.
pub fn exact_sssp_within<F: Scalar>(
    g: &WeightedGraph<F>,
    scope: Scope<'_>,
    sources: &NodeSubset,
) -> Result<SsspResult<F>> {
    if sources.is_empty() {
        return Err(Error::EmptySources);
    }
    let n = g.node_count();
    let mut list = Vec::with_capacity(sources.len());
    for v in sources.iter() {
        if v >= n {
            return Err(Error::NodeOutOfRange {
                node: v,
                node_count: n,
            });
        }
        if !scope.admits(v) {
            return Err(Error::Inactive { node: v });
        }
        list.push(Vertex::Real(v));
    }
    Ok(dijkstra(g, scope, &[], 0, &list))
}
