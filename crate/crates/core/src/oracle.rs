//! The `(1+ε)`-approximate set-source shortest-path oracle with virtual
//! nodes, and the counters that stand in for round complexity.
//!
//! Two backends are available. [`Backend::Exact`] runs Dijkstra on the
//! augmented graph and meets the contract for every `ε >= 0`.
//! [`Backend::Perturbed`] inflates every distance by an independent factor
//! in `[1, 1+ε]` and then re-selects predecessors so distances stay
//! consistent along the tree; it exists to exercise algorithm logic against
//! genuinely approximate distances.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::sssp::dijkstra;
pub use crate::graph::sssp::VirtualEdge;
use crate::graph::{NodeSubset, Scope, SsspResult, Vertex, WeightedGraph};
use crate::sampling::Stream;
use crate::scalar::{log2_at_least_one, Scalar};

/// Temporary virtual nodes attached to the graph for a single oracle call.
#[derive(Clone, Debug, Default)]
pub struct VirtualSourceSpec<F> {
    pub virtual_count: usize,
    pub edges: Vec<VirtualEdge<F>>,
}

impl<F: Scalar> VirtualSourceSpec<F> {
    pub fn none() -> Self {
        Self {
            virtual_count: 0,
            edges: Vec::new(),
        }
    }

    /// One virtual node (id 0) joined to each listed node with the given
    /// weight.
    pub fn super_source(edges: impl IntoIterator<Item = (usize, F)>) -> Self {
        Self {
            virtual_count: 1,
            edges: edges
                .into_iter()
                .map(|(v, weight)| VirtualEdge {
                    virtual_id: 0,
                    target: Vertex::Real(v),
                    weight,
                })
                .collect(),
        }
    }
}

/// Upper bound on virtual nodes per call: `max(8, ⌈log2 n⌉²)`.
pub fn virtual_cap(n: usize) -> usize {
    let l = log2_at_least_one(n as f64).ceil() as usize;
    (l * l).max(8)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounters {
    pub sssp_calls: u64,
    pub aggregation_passes: u64,
    pub max_recursion_depth: u64,
}

impl OracleCounters {
    pub fn merge(&mut self, other: &OracleCounters) {
        self.sssp_calls += other.sssp_calls;
        self.aggregation_passes += other.aggregation_passes;
        self.max_recursion_depth = self.max_recursion_depth.max(other.max_recursion_depth);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "kebab-case")]
pub enum Backend {
    Exact,
    Perturbed { seed: u64 },
}

/// Oracle state for one run: the backend plus its operation counters.
#[derive(Clone, Debug)]
pub struct SsspOracle {
    backend: Backend,
    counters: OracleCounters,
}

impl Default for SsspOracle {
    fn default() -> Self {
        Self::exact()
    }
}

impl SsspOracle {
    pub fn new(backend: Backend) -> Self {
        Self {
            backend,
            counters: OracleCounters::default(),
        }
    }

    pub fn exact() -> Self {
        Self::new(Backend::Exact)
    }

    pub fn perturbed(seed: u64) -> Self {
        Self::new(Backend::Perturbed { seed })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn counters_snapshot(&self) -> OracleCounters {
        self.counters
    }

    pub fn counters_reset(&mut self) {
        self.counters = OracleCounters::default();
    }

    /// Records `passes` minor-aggregation-equivalent operations.
    pub fn note_aggregation(&mut self, passes: u64) {
        self.counters.aggregation_passes += passes;
    }

    pub fn note_depth(&mut self, depth: usize) {
        self.counters.max_recursion_depth = self.counters.max_recursion_depth.max(depth as u64);
    }

    /// Set-source shortest paths without virtual nodes.
    pub fn set_sssp<F: Scalar>(
        &mut self,
        g: &WeightedGraph<F>,
        scope: Scope<'_>,
        sources: &NodeSubset,
        epsilon: F,
    ) -> Result<SsspResult<F>> {
        let list: Vec<Vertex> = sources.iter().map(Vertex::Real).collect();
        self.approx_set_sssp(g, scope, &VirtualSourceSpec::<F>::none(), &list, epsilon)
    }

    /// `(1+ε)`-approximate distances from `sources` in the subgraph selected
    /// by `scope`, augmented with `virtuals`.
    ///
    /// The result never underestimates, stays within `(1+ε)` of the exact
    /// distance, and its distances telescope exactly along predecessors.
    pub fn approx_set_sssp<F: Scalar>(
        &mut self,
        g: &WeightedGraph<F>,
        scope: Scope<'_>,
        virtuals: &VirtualSourceSpec<F>,
        sources: &[Vertex],
        epsilon: F,
    ) -> Result<SsspResult<F>> {
        let n = g.node_count();
        if !(epsilon >= F::zero()) {
            return Err(Error::param("epsilon", "must be non-negative"));
        }
        if sources.is_empty() {
            return Err(Error::EmptySources);
        }
        if virtuals.virtual_count > virtual_cap(n) {
            return Err(Error::param(
                "virtual_count",
                format!("{} exceeds the cap {}", virtuals.virtual_count, virtual_cap(n)),
            ));
        }
        let check_vertex = |x: Vertex| -> Result<()> {
            match x {
                Vertex::Real(v) if v >= n => Err(Error::NodeOutOfRange {
                    node: v,
                    node_count: n,
                }),
                Vertex::Real(v) if !scope.admits(v) => Err(Error::Inactive { node: v }),
                Vertex::Virtual(j) if j >= virtuals.virtual_count => Err(Error::UnknownVirtual { id: j }),
                _ => Ok(()),
            }
        };
        for &s in sources {
            check_vertex(s)?;
        }
        for e in &virtuals.edges {
            check_vertex(Vertex::Virtual(e.virtual_id))?;
            check_vertex(e.target)?;
            if !(e.weight >= F::zero()) || !e.weight.is_finite() {
                return Err(Error::param("virtual edge weight", "must be finite and non-negative"));
            }
        }

        self.counters.sssp_calls += 1;
        let exact = dijkstra(g, scope, &virtuals.edges, virtuals.virtual_count, sources);
        match self.backend {
            Backend::Exact => Ok(exact),
            Backend::Perturbed { seed } => {
                let stream = Stream::new(seed).child("perturb", self.counters.sssp_calls);
                Ok(perturb(g, scope, virtuals, exact, epsilon, stream))
            }
        }
    }
}

fn perturb<F: Scalar>(
    g: &WeightedGraph<F>,
    scope: Scope<'_>,
    virtuals: &VirtualSourceSpec<F>,
    exact: SsspResult<F>,
    epsilon: F,
    stream: Stream,
) -> SsspResult<F> {
    let n = g.node_count();
    let total = n + virtuals.virtual_count;
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
    let mut extra: Vec<Vec<(usize, F)>> = vec![Vec::new(); total];
    for e in &virtuals.edges {
        let (a, b) = (n + e.virtual_id, index_of(e.target));
        extra[a].push((b, e.weight));
        extra[b].push((a, e.weight));
    }

    let mut exact_dist = exact.dist.clone();
    exact_dist.extend_from_slice(&exact.virtual_dist);
    let mut exact_pred: Vec<Option<usize>> = exact.pred.iter().map(|p| p.map(index_of)).collect();
    exact_pred.extend(exact.virtual_pred.iter().map(|p| p.map(index_of)));

    let mut position = vec![usize::MAX; total];
    for (k, &x) in exact.settle_order.iter().enumerate() {
        position[index_of(x)] = k;
    }

    let mut rng = stream.rng();
    let one_plus = F::one() + epsilon;
    let mut dist = vec![F::infinity(); total];
    let mut pred: Vec<Option<usize>> = vec![None; total];
    for &x in &exact.settle_order {
        let i = index_of(x);
        let Some(p_exact) = exact_pred[i] else {
            dist[i] = F::zero();
            continue;
        };
        let d = exact_dist[i];
        let factor = F::one() + epsilon * F::lit(rng.gen::<f64>());
        let target = d * factor;
        let limit = d * one_plus;

        let mut best: Option<(F, usize, F)> = None;
        let mut consider = |j: usize, w: F| {
            if position[j] >= position[i] {
                return;
            }
            let val = dist[j] + w;
            if val > limit || val < d {
                return;
            }
            let gap = (val - target).abs();
            let better = match best {
                None => true,
                Some((bg, bj, _)) => gap < bg || (gap == bg && j < bj),
            };
            if better {
                best = Some((gap, j, val));
            }
        };
        if i < n {
            for (j, _, w) in g.neighbors(i) {
                if scope.admits(j) && scope.labels.is_none_or(|l| l[i] == l[j]) {
                    consider(j, w);
                }
            }
        }
        for &(j, w) in &extra[i] {
            consider(j, w);
        }
        let (p, val) = match best {
            Some((_, j, val)) => (j, val),
            None => {
                // rounding pushed every candidate past the limit; the exact
                // predecessor is within it up to float error
                let w = edge_length(g, &extra, p_exact, i);
                (p_exact, dist[p_exact] + w)
            }
        };
        dist[i] = val;
        pred[i] = Some(p);
    }

    let virtual_dist = dist.split_off(n);
    let mut pred: Vec<Option<Vertex>> = pred.into_iter().map(|p| p.map(vertex_of)).collect();
    let virtual_pred = pred.split_off(n);
    SsspResult {
        dist,
        pred,
        source_set: exact.source_set,
        virtual_sources: exact.virtual_sources,
        virtual_dist,
        virtual_pred,
        settle_order: exact.settle_order,
    }
}

fn edge_length<F: Scalar>(g: &WeightedGraph<F>, extra: &[Vec<(usize, F)>], a: usize, b: usize) -> F {
    let n = g.node_count();
    let mut best = F::infinity();
    if a < n && b < n {
        for (j, _, w) in g.neighbors(a) {
            if j == b && w < best {
                best = w;
            }
        }
    }
    for &(j, w) in &extra[a] {
        if j == b && w < best {
            best = w;
        }
    }
    best
}
