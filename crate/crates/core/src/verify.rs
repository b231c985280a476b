//! Brute-force validators and the statistics used to judge Monte-Carlo
//! experiments.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{ball, connected_components, exact_sssp_within, NodeId, NodeSubset, Scope, WeightedGraph};
use crate::oracle::OracleCounters;
use crate::sampling::Stream;
use crate::scalar::Scalar;

/// Clusters up to this size get an exact all-pairs diameter.
pub const BRUTE_FORCE_LIMIT: usize = 512;
const SAMPLED_PAIRS: usize = 1000;

/// All-pairs distances by Floyd–Warshall. `+inf` marks unreachable pairs.
pub fn floyd_warshall<F: Scalar>(g: &WeightedGraph<F>) -> Vec<Vec<F>> {
    let n = g.node_count();
    let mut d = vec![vec![F::infinity(); n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = F::zero();
    }
    for e in g.edges() {
        if e.length < d[e.u][e.v] {
            d[e.u][e.v] = e.length;
            d[e.v][e.u] = e.length;
        }
    }
    for k in 0..n {
        let row_k = d[k].clone();
        for row in d.iter_mut() {
            let dik = row[k];
            if !dik.is_finite() {
                continue;
            }
            for (j, &dkj) in row_k.iter().enumerate() {
                let via = dik + dkj;
                if via < row[j] {
                    row[j] = via;
                }
            }
        }
    }
    d
}

/// Largest finite shortest-path distance between any two nodes.
pub fn weighted_diameter<F: Scalar>(g: &WeightedGraph<F>) -> F {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map(|s| {
            let sp = exact_sssp_within(g, Scope::whole(), &NodeSubset::singleton(n, s)).expect("node in range");
            sp.dist.into_iter().filter(|d| d.is_finite()).fold(F::zero(), F::max)
        })
        .reduce(F::zero, F::max)
}

/// Strong diameter of `members`, measured inside the induced subgraph.
/// Returns the value and whether it is exact (otherwise it is a lower bound
/// from sampled pairs). Infinite when the induced subgraph is disconnected.
pub fn strong_diameter<F: Scalar>(g: &WeightedGraph<F>, members: &[NodeId], stream: Stream) -> (f64, bool) {
    let n = g.node_count();
    let set = NodeSubset::from_nodes(n, members.iter().copied());
    let eccentricity = |s: NodeId| -> f64 {
        let sp = exact_sssp_within(g, Scope::within(&set), &NodeSubset::singleton(n, s)).expect("member is active");
        members
            .iter()
            .map(|&v| sp.dist[v].as_f64())
            .fold(0.0, f64::max)
    };
    if members.len() <= BRUTE_FORCE_LIMIT {
        let d = members.par_iter().map(|&s| eccentricity(s)).reduce(|| 0.0, f64::max);
        return (d, true);
    }
    let mut rng = stream.rng();
    let mut sources: Vec<NodeId> = Vec::new();
    let mut targets: Vec<Vec<NodeId>> = Vec::new();
    for _ in 0..SAMPLED_PAIRS {
        let u = members[rng.gen_range(0..members.len())];
        let v = members[rng.gen_range(0..members.len())];
        match sources.iter().position(|&s| s == u) {
            Some(i) => targets[i].push(v),
            None => {
                sources.push(u);
                targets.push(vec![v]);
            }
        }
    }
    let d = sources
        .par_iter()
        .zip(targets.par_iter())
        .map(|(&s, ts)| {
            let sp = exact_sssp_within(g, Scope::within(&set), &NodeSubset::singleton(n, s)).expect("member is active");
            ts.iter().map(|&v| sp.dist[v].as_f64()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    (d, false)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A node listed in two clusters, or listed in a cluster that its
    /// `cluster_of` entry does not name.
    Overlap { node: NodeId },
    EmptyCluster { cluster: usize },
    Disconnected { cluster: usize },
    Unclustered { node: NodeId },
    DiameterExceeded { cluster: usize, diameter: f64, bound: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
    /// Largest measured strong diameter over all clusters.
    pub max_strong_diameter: f64,
    /// False when some cluster was too large for the exact check, in which
    /// case its diameter is a sampled lower bound.
    pub diameters_exact: bool,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<AuditReport> {
        if self.is_clean() {
            Ok(self)
        } else {
            Err(Error::AuditFailed {
                violations: self.violations.len(),
            })
        }
    }
}

/// Checks disjointness, connectivity, optional totality and the strong
/// diameter of every cluster against `diameter_bound`.
pub fn audit_clustering<F: Scalar>(
    g: &WeightedGraph<F>,
    c: &Clustering<F>,
    expect_total: bool,
    diameter_bound: F,
) -> AuditReport {
    let n = g.node_count();
    let mut violations = Vec::new();
    let mut seen = vec![false; n];
    for cl in &c.clusters {
        if cl.members.is_empty() {
            violations.push(Violation::EmptyCluster { cluster: cl.id });
        }
        for &v in &cl.members {
            if seen[v] || c.cluster_of[v] != Some(cl.id) {
                violations.push(Violation::Overlap { node: v });
            }
            seen[v] = true;
        }
    }
    if expect_total {
        violations.extend((0..n).filter(|&v| !seen[v]).map(|v| Violation::Unclustered { node: v }));
    }
    let bound = diameter_bound.as_f64();
    let per_cluster: Vec<(Option<Violation>, Option<Violation>, f64, bool)> = c
        .clusters
        .par_iter()
        .filter(|cl| !cl.members.is_empty())
        .map(|cl| {
            let set = NodeSubset::from_nodes(n, cl.members.iter().copied());
            let disconnected = connected_components(g, &set).len() != 1;
            let (d, exact) = if disconnected {
                (f64::INFINITY, true)
            } else {
                strong_diameter(g, &cl.members, Stream::new(cl.id as u64))
            };
            let over = (!disconnected && d > bound * (1.0 + 1e-9)).then_some(Violation::DiameterExceeded {
                cluster: cl.id,
                diameter: d,
                bound,
            });
            (
                disconnected.then_some(Violation::Disconnected { cluster: cl.id }),
                over,
                d,
                exact,
            )
        })
        .collect();
    let mut max_strong_diameter: f64 = 0.0;
    let mut diameters_exact = true;
    for (a, b, d, exact) in per_cluster {
        violations.extend(a);
        violations.extend(b);
        if d.is_finite() {
            max_strong_diameter = max_strong_diameter.max(d);
        }
        diameters_exact &= exact;
    }
    AuditReport {
        violations,
        max_strong_diameter,
        diameters_exact,
    }
}

/// Aggregated outcome of repeated randomized runs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub per_edge_cut_count: Vec<u64>,
    pub trials: usize,
    /// Counters summed over trials (recursion depth is the maximum).
    pub counters: OracleCounters,
    /// `NaN` when diameters were not audited.
    pub max_cluster_strong_diameter: f64,
    pub recursion_depth: usize,
    pub depth_per_trial: Vec<usize>,
    pub sssp_calls_per_trial: Vec<u64>,
    pub clustered_fraction_per_trial: Vec<f64>,
}

impl RunStats {
    pub fn new(edge_count: usize) -> Self {
        Self {
            per_edge_cut_count: vec![0; edge_count],
            max_cluster_strong_diameter: f64::NAN,
            ..Default::default()
        }
    }

    pub fn record(&mut self, cut: &[bool], counters: &OracleCounters, depth: usize, clustered_fraction: f64, max_diameter: f64) {
        for (c, &x) in self.per_edge_cut_count.iter_mut().zip(cut) {
            *c += x as u64;
        }
        self.trials += 1;
        self.counters.merge(counters);
        self.recursion_depth = self.recursion_depth.max(depth);
        self.depth_per_trial.push(depth);
        self.sssp_calls_per_trial.push(counters.sssp_calls);
        self.clustered_fraction_per_trial.push(clustered_fraction);
        if !max_diameter.is_nan() {
            self.max_cluster_strong_diameter = if self.max_cluster_strong_diameter.is_nan() {
                max_diameter
            } else {
                self.max_cluster_strong_diameter.max(max_diameter)
            };
        }
    }

    pub fn cut_rate(&self, edge: usize) -> f64 {
        self.per_edge_cut_count[edge] as f64 / self.trials as f64
    }
}

/// Wilson score interval for `successes` out of `trials` at the given
/// two-sided confidence level.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Wilson interval for one edge's cut probability. Needs at least 30 trials.
pub fn ci_cut_rate(stats: &RunStats, edge: usize, confidence: f64) -> Result<(f64, f64)> {
    if stats.trials < 30 {
        return Err(Error::param("trials", format!("need at least 30, have {}", stats.trials)));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::param("confidence", "must lie in (0, 1)"));
    }
    if edge >= stats.per_edge_cut_count.len() {
        return Err(Error::param("edge", format!("no edge {edge}")));
    }
    Ok(wilson_interval(stats.per_edge_cut_count[edge], stats.trials as u64, confidence))
}

/// Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value `sqrt(-ln(α/2)/2) / sqrt(n)`.
pub fn ks_critical(samples: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (samples as f64).sqrt()
}

/// Pearson statistic for observed counts against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

/// Upper `alpha` critical value of the chi-square distribution.
pub fn chi_square_critical(degrees_of_freedom: usize, alpha: f64) -> f64 {
    ChiSquared::new(degrees_of_freedom as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - alpha)
}

/// Largest number of `centers` inside any ball of the given radius.
pub fn max_centers_within<F: Scalar>(g: &WeightedGraph<F>, centers: &NodeSubset, radius: F) -> Result<usize> {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map(|v| {
            let b = ball(g, &NodeSubset::singleton(n, v), radius)?;
            Ok(b.iter().filter(|&u| centers.contains(u)).count())
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}
