//! Low-diameter decompositions obtained by reapplying a clustering
//! procedure to the unclustered residual until every node is clustered.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backbone::{build_kpath_ldd, BackboneParams};
use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{NodeSubset, WeightedGraph};
use crate::ldc::{build_ldc, LdcParams};
use crate::oracle::{Backend, OracleCounters, SsspOracle};
use crate::sampling::Stream;
use crate::scalar::{log2_at_least_one, Scalar};
use crate::verify::{audit_clustering, RunStats};

/// A randomized procedure that clusters part of the active node set.
pub trait ClusteringProcedure<F: Scalar>: Sync {
    fn cluster(
        &self,
        g: &WeightedGraph<F>,
        active: &NodeSubset,
        oracle: &mut SsspOracle,
        stream: Stream,
    ) -> Result<Clustering<F>>;

    /// Strong diameter guaranteed for every emitted cluster.
    fn diameter_bound(&self) -> F;
}

/// [`build_ldc`] with every active node as a center.
#[derive(Clone, Debug)]
pub struct GeneralLdc<F> {
    pub diameter: F,
    pub tau: usize,
    pub params: LdcParams,
}

impl<F: Scalar> ClusteringProcedure<F> for GeneralLdc<F> {
    fn cluster(
        &self,
        g: &WeightedGraph<F>,
        active: &NodeSubset,
        oracle: &mut SsspOracle,
        stream: Stream,
    ) -> Result<Clustering<F>> {
        build_ldc(g, active, active, self.diameter, self.tau, &self.params, oracle, stream)
    }

    fn diameter_bound(&self) -> F {
        F::lit(8.0) * self.diameter
    }
}

/// Default round cap `64 · log₂ n`.
pub fn default_round_cap(n: usize) -> usize {
    (64.0 * log2_at_least_one(n as f64)).ceil() as usize
}

pub fn build_ldd<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    procedure: &dyn ClusteringProcedure<F>,
    round_cap: Option<usize>,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<Clustering<F>> {
    let n = g.node_count();
    let cap = round_cap.unwrap_or_else(|| default_round_cap(n));
    let mut residual = active.clone();
    let mut result = Clustering::new(n);
    let mut round = 0;
    while !residual.is_empty() {
        round += 1;
        if round > cap {
            return Err(Error::IterationCap {
                procedure: "low-diameter decomposition",
                cap,
            });
        }
        oracle.note_depth(round);
        let part = procedure.cluster(g, &residual, oracle, stream.child("round", round as u64))?;
        for c in part.clusters {
            for &v in &c.members {
                residual.remove(v);
            }
            result.push_cluster(c.members, c.center, c.diameter_bound, round);
        }
        result.cut_edges.extend(part.cut_edges);
    }
    result.rounds = round;
    Ok(result)
}

/// Decomposition with strong diameter `diameter`, running the clustering
/// procedure at `diameter / divisor` with `τ = n`.
pub fn general_ldd<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    diameter: F,
    divisor: f64,
    params: &LdcParams,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<Clustering<F>> {
    if !(divisor >= 8.0) {
        return Err(Error::param("divisor", "must be at least 8 to keep the diameter bound"));
    }
    let procedure = GeneralLdc {
        diameter: diameter / F::lit(divisor),
        tau: g.node_count(),
        params: *params,
    };
    build_ldd(g, active, &procedure, None, oracle, stream)
}

/// Which decomposition [`measure_cut_rates`] runs per trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "driver", rename_all = "kebab-case")]
pub enum DriverConfig {
    /// Reapplied clustering at `diameter / divisor` (divisor 8 gives final
    /// diameter `diameter`).
    GeneralLdd {
        diameter: f64,
        divisor: f64,
        params: LdcParams,
    },
    /// A single clustering application at scale `diameter`, driven to
    /// totality; final strong diameter at most `8 · diameter`.
    GeneralLdcScale { diameter: f64, params: LdcParams },
    /// One clustering application at scale `diameter`; nodes may stay
    /// unclustered.
    SingleLdc { diameter: f64, params: LdcParams },
    KPathLdd {
        diameter: f64,
        k: usize,
        params: BackboneParams,
    },
}

impl DriverConfig {
    pub fn general(diameter: f64) -> Self {
        DriverConfig::GeneralLdd {
            diameter,
            divisor: 8.0,
            params: LdcParams::default(),
        }
    }

    /// Strong diameter every output cluster must respect.
    pub fn diameter_bound(&self) -> f64 {
        match self {
            DriverConfig::GeneralLdd { diameter, .. } => *diameter,
            DriverConfig::GeneralLdcScale { diameter, .. } | DriverConfig::SingleLdc { diameter, .. } => 8.0 * diameter,
            DriverConfig::KPathLdd { diameter, .. } => *diameter,
        }
    }

    /// Whether every node ends up clustered.
    pub fn is_total(&self) -> bool {
        !matches!(self, DriverConfig::SingleLdc { .. })
    }

    pub fn run<F: Scalar>(&self, g: &WeightedGraph<F>, oracle: &mut SsspOracle, stream: Stream) -> Result<Clustering<F>> {
        let all = g.all_nodes();
        match self {
            DriverConfig::GeneralLdd {
                diameter,
                divisor,
                params,
            } => general_ldd(g, &all, F::lit(*diameter), *divisor, params, oracle, stream),
            DriverConfig::GeneralLdcScale { diameter, params } => {
                let procedure = GeneralLdc {
                    diameter: F::lit(*diameter),
                    tau: g.node_count(),
                    params: *params,
                };
                build_ldd(g, &all, &procedure, None, oracle, stream)
            }
            DriverConfig::SingleLdc { diameter, params } => {
                build_ldc(g, &all, &all, F::lit(*diameter), g.node_count(), params, oracle, stream)
            }
            DriverConfig::KPathLdd { diameter, k, params } => {
                build_kpath_ldd(g, F::lit(*diameter), *k, params, oracle, stream)
            }
        }
    }
}

/// Options for [`measure_cut_rates`].
#[derive(Clone, Copy, Debug)]
pub struct MeasureOptions {
    pub backend: Backend,
    /// Also compute every cluster's strong diameter (brute force).
    pub audit_diameter: bool,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            backend: Backend::Exact,
            audit_diameter: false,
        }
    }
}

struct TrialOutcome {
    cut: Vec<bool>,
    counters: OracleCounters,
    depth: usize,
    clustered_fraction: f64,
    max_diameter: f64,
}

/// Runs `trials` independent decompositions and counts how often each edge
/// is cut. Trials run in parallel on the current rayon pool; the result does
/// not depend on the number of threads.
pub fn measure_cut_rates<F: Scalar>(
    g: &WeightedGraph<F>,
    driver: &DriverConfig,
    trials: usize,
    stream: Stream,
    options: MeasureOptions,
) -> Result<RunStats> {
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    let all = g.all_nodes();
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_stream = stream.child("trial", t as u64);
            let backend = match options.backend {
                Backend::Exact => Backend::Exact,
                Backend::Perturbed { seed } => Backend::Perturbed {
                    seed: seed ^ (t as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
                },
            };
            let mut oracle = SsspOracle::new(backend);
            let c = driver.run(g, &mut oracle, trial_stream)?;
            let mut cut = vec![false; g.edge_count()];
            for &e in &c.cut_edges {
                cut[e] = true;
            }
            let max_diameter = if options.audit_diameter {
                audit_clustering(g, &c, driver.is_total(), F::lit(driver.diameter_bound())).max_strong_diameter
            } else {
                f64::NAN
            };
            Ok(TrialOutcome {
                cut,
                counters: oracle.counters_snapshot(),
                depth: c.rounds,
                clustered_fraction: c.clustered_fraction(&all),
                max_diameter,
            })
        })
        .collect::<Result<_>>()?;
    let mut stats = RunStats::new(g.edge_count());
    for o in outcomes {
        stats.record(&o.cut, &o.counters, o.depth, o.clustered_fraction, o.max_diameter);
    }
    Ok(stats)
}
