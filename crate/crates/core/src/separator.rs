//! Sampling of weak path separators: bounded-length shortest-path-tree paths
//! together with their `εD` surroundings, removed until every remaining
//! node sees few nodes within distance `D`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ball_within, path_select, root_path, NodeId, NodeSubset, RootedForest, Scope, WeightedGraph};
use crate::oracle::SsspOracle;
use crate::sampling::{pick_uniform, Stream};
use crate::scalar::{log2_at_least_one, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatorParams {
    /// Constant in the iteration budget `C_sep · ε⁻¹ · k · log n`.
    pub c_sep: f64,
    /// Allowed fraction of the component inside any remaining `D`-ball.
    pub shrink: f64,
    /// Iterations between exact checks; `None` means `max(1, ⌈log n⌉)`.
    pub check_period: Option<usize>,
    pub early_exit: bool,
    /// Record the ball-count potential after every iteration (costly).
    pub track_potential: bool,
}

impl Default for SeparatorParams {
    fn default() -> Self {
        Self {
            c_sep: 768.0,
            shrink: 7.0 / 8.0,
            check_period: None,
            early_exit: true,
            track_potential: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatorEntry<F> {
    /// Tree path from the sampled root to the sampled endpoint.
    pub path: Vec<NodeId>,
    pub path_length: F,
    pub surround: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct WeakSeparator<F> {
    pub entries: Vec<SeparatorEntry<F>>,
    pub removed: NodeSubset,
    pub iterations_run: usize,
    pub iteration_budget: usize,
    /// Outcome of the final exact check.
    pub verified: bool,
    /// Ball-count potential per iteration, when tracked.
    pub potential: Vec<usize>,
}

impl<F: Scalar> WeakSeparator<F> {
    pub fn path_nodes(&self) -> NodeSubset {
        let mut s = NodeSubset::empty(self.removed.universe());
        for e in &self.entries {
            for &v in &e.path {
                s.insert(v);
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationCheck {
    pub holds: bool,
    /// First node whose residual ball is too large, with that ball's size.
    pub offender: Option<(NodeId, usize)>,
}

pub fn iteration_budget(c_sep: f64, epsilon: f64, k: usize, n: usize) -> usize {
    (c_sep / epsilon * k as f64 * log2_at_least_one(n as f64)).ceil() as usize
}

/// Exact check that every node of `active ∖ removed` has at most
/// `shrink · |active|` nodes within distance `diameter` in the residual graph.
pub fn verify_weak_separation<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    removed: &NodeSubset,
    diameter: F,
    shrink: f64,
) -> Result<SeparationCheck> {
    let n = g.node_count();
    let mut residual = active.clone();
    residual.difference_with(removed);
    let limit = shrink * active.len() as f64;
    let nodes = residual.to_vec();
    let sizes: Vec<usize> = nodes
        .par_iter()
        .map(|&v| {
            ball_within(g, Scope::within(&residual), &NodeSubset::singleton(n, v), diameter).map(|b| b.len())
        })
        .collect::<Result<_>>()?;
    let offender = nodes
        .iter()
        .zip(&sizes)
        .find(|&(_, &s)| s as f64 > limit)
        .map(|(&v, &s)| (v, s));
    Ok(SeparationCheck {
        holds: offender.is_none(),
        offender,
    })
}

/// Number of residual nodes with at least `shrink · |active|` nodes within
/// `2D` in the residual graph.
pub fn separation_potential<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    residual: &NodeSubset,
    diameter: F,
    shrink: f64,
) -> Result<usize> {
    let n = g.node_count();
    let limit = shrink * active.len() as f64;
    let radius = F::lit(2.0) * diameter;
    let nodes = residual.to_vec();
    let counts: Vec<bool> = nodes
        .par_iter()
        .map(|&v| {
            ball_within(g, Scope::within(residual), &NodeSubset::singleton(n, v), radius)
                .map(|b| b.len() as f64 >= limit)
        })
        .collect::<Result<_>>()?;
    Ok(counts.into_iter().filter(|&b| b).count())
}

#[allow(clippy::too_many_arguments)]
pub fn sample_weak_separator<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    diameter: F,
    epsilon: F,
    k: usize,
    params: &SeparatorParams,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<WeakSeparator<F>> {
    let n = g.node_count();
    if !(epsilon > F::zero() && epsilon <= F::one()) {
        return Err(Error::param("epsilon", "must lie in (0, 1]"));
    }
    if !(diameter > F::zero()) || !diameter.is_finite() {
        return Err(Error::param("diameter", "must be positive and finite"));
    }
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let size = active.len();
    let budget = iteration_budget(params.c_sep, epsilon.as_f64(), k, size);
    let period = params
        .check_period
        .unwrap_or_else(|| (log2_at_least_one(size as f64).ceil() as usize).max(1));
    let two_approx = F::one();
    let reach = F::lit(4.0) * diameter;
    let surround_radius = epsilon * diameter;

    let mut residual = active.clone();
    let mut removed = NodeSubset::empty(n);
    let mut entries = Vec::new();
    let mut potential = Vec::new();
    let mut verified = false;
    let mut iterations_run = 0;
    for t in 1..=budget {
        if residual.is_empty() {
            break;
        }
        iterations_run = t;
        let v = pick_uniform(&residual, &mut stream.child("root", t as u64).rng())?;
        let sp = oracle.set_sssp(g, Scope::within(&residual), &NodeSubset::singleton(n, v), two_approx)?;
        let candidates = NodeSubset::from_nodes(n, residual.iter().filter(|&w| sp.dist[w] <= reach));
        let w = pick_uniform(&candidates, &mut stream.child("endpoint", t as u64).rng())?;
        let forest = RootedForest::from_sssp(&sp);
        let path_set = path_select(&forest, w)?;
        oracle.note_aggregation(1);
        let path = root_path(&forest, w)?;
        let path_length = g
            .walk_length(&path)
            .ok_or_else(|| Error::Invariant("separator path is not a walk".into()))?;
        if !(path_length <= reach) {
            return Err(Error::Invariant(format!(
                "separator path of length {path_length} exceeds {reach}"
            )));
        }

        let around = oracle.set_sssp(g, Scope::within(active), &path_set, two_approx)?;
        let mut surround = path_set;
        for u in active.iter() {
            if around.dist[u] <= surround_radius {
                surround.insert(u);
            }
        }
        residual.difference_with(&surround);
        removed.union_with(&surround);
        entries.push(SeparatorEntry {
            path,
            path_length,
            surround: surround.to_vec(),
        });
        if params.track_potential {
            potential.push(separation_potential(g, active, &residual, diameter, params.shrink)?);
        }
        if params.early_exit
            && t % period == 0
            && !residual.is_empty()
            && verify_weak_separation(g, active, &removed, diameter, params.shrink)?.holds
        {
            verified = true;
            break;
        }
    }
    if !verified {
        verified = verify_weak_separation(g, active, &removed, diameter, params.shrink)?.holds;
    }
    if params.track_potential {
        log::debug!("separator potential: {potential:?}");
    }
    Ok(WeakSeparator {
        entries,
        removed,
        iterations_run,
        iteration_budget: budget,
        verified,
        potential,
    })
}
