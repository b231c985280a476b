//! Backbone clusterings for k-path separable graphs, δ-nets on backbone
//! paths, and the refinement that turns a backbone clustering into a
//! strong-diameter clustering.

use serde::{Deserialize, Serialize};

use crate::bbg::blur;
use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, NodeSubset, Scope, WeightedGraph};
use crate::ldc::{build_ldc, LdcParams};
use crate::ldd::{build_ldd, default_round_cap, general_ldd, ClusteringProcedure};
use crate::oracle::SsspOracle;
use crate::padded::Covering;
use crate::sampling::{sample_texp, Stream, TexpParams};
use crate::scalar::{log2_at_least_one, loglog2_at_least_one, Scalar};
use crate::separator::{sample_weak_separator, SeparatorParams};

/// Named constant sets for the backbone construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Constants from the analysis.
    Analysis,
    /// Smaller partition diameter so that small graphs actually split.
    #[default]
    Desk,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackboneParams {
    pub profile: Profile,
    /// Partition diameter factor in `D' = c_partition · D · log² n`.
    pub c_partition: f64,
    /// Separator accuracy `ε = 1 / (c_epsilon · log² n)`.
    pub c_epsilon: f64,
    /// Blur radius divisor in `ρ = D / (c_blur · log log n)`.
    pub c_blur: f64,
    pub separator: SeparatorParams,
    /// Clustering used by the partition step.
    pub partition_ldc: LdcParams,
    /// Clustering used by the refinement step.
    pub refine_ldc: LdcParams,
}

impl BackboneParams {
    pub fn for_profile(profile: Profile) -> Self {
        Self {
            profile,
            c_partition: match profile {
                Profile::Analysis => 100.0,
                Profile::Desk => 2.0,
            },
            c_epsilon: 10_000.0,
            c_blur: 16.0,
            separator: SeparatorParams::default(),
            partition_ldc: LdcParams::default(),
            refine_ldc: LdcParams {
                covering: Covering::Trust,
                ..LdcParams::default()
            },
        }
    }

    pub fn analysis() -> Self {
        Self::for_profile(Profile::Analysis)
    }

    pub fn desk() -> Self {
        Self::for_profile(Profile::Desk)
    }
}

impl Default for BackboneParams {
    fn default() -> Self {
        Self::desk()
    }
}

/// Which step of the backbone construction separated an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutPhase {
    /// Endpoints fell into different partitions.
    Partition,
    /// Endpoints shared a partition; ball growing separated them.
    Blur,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackboneCluster {
    pub id: usize,
    pub members: Vec<NodeId>,
    pub backbone: Vec<Vec<NodeId>>,
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackboneClustering<F> {
    pub cluster_of: Vec<Option<usize>>,
    pub clusters: Vec<BackboneCluster>,
    pub cut_edges: Vec<(EdgeId, CutPhase)>,
    pub rounds: usize,
    /// Pseudo-diameter parameter `D/4`.
    pub d_bc: F,
}

impl<F: Scalar> BackboneClustering<F> {
    pub fn backbone_nodes(&self, cluster: usize) -> NodeSubset {
        NodeSubset::from_nodes(
            self.cluster_of.len(),
            self.clusters[cluster].backbone.iter().flatten().copied(),
        )
    }

    pub fn max_path_count(&self) -> usize {
        self.clusters.iter().map(|c| c.backbone.len()).max().unwrap_or(0)
    }
}

/// Derived constants of one backbone construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BackboneScales<F> {
    pub partition_diameter: F,
    pub separator_epsilon: F,
    pub d_bc: F,
    pub rho_blur: F,
    pub texp_lambda: f64,
}

impl<F: Scalar> BackboneScales<F> {
    pub fn new(diameter: F, n: usize, params: &BackboneParams) -> Self {
        let log_n = log2_at_least_one(n as f64);
        let loglog = loglog2_at_least_one(n);
        Self {
            partition_diameter: diameter * F::lit(params.c_partition * log_n * log_n),
            separator_epsilon: F::lit(1.0 / (params.c_epsilon * log_n * log_n)),
            d_bc: diameter / F::lit(4.0),
            rho_blur: diameter / F::lit(params.c_blur * loglog),
            texp_lambda: 4.0 * loglog,
        }
    }
}

pub fn build_backbone_clustering<F: Scalar>(
    g: &WeightedGraph<F>,
    active: &NodeSubset,
    diameter: F,
    k: usize,
    params: &BackboneParams,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<BackboneClustering<F>> {
    let n = g.node_count();
    if !(diameter > F::zero()) || !diameter.is_finite() {
        return Err(Error::param("diameter", "must be positive and finite"));
    }
    let scales = BackboneScales::new(diameter, n, params);
    let texp = TexpParams::new(scales.texp_lambda, scales.d_bc)?;
    let cap = default_round_cap(n);

    let mut result = BackboneClustering {
        cluster_of: vec![None; n],
        clusters: Vec::new(),
        cut_edges: Vec::new(),
        rounds: 0,
        d_bc: scales.d_bc,
    };
    let mut uncharted = active.clone();
    let mut round = 0;
    while !uncharted.is_empty() {
        round += 1;
        if round > cap {
            return Err(Error::IterationCap {
                procedure: "backbone clustering",
                cap,
            });
        }
        let round_stream = stream.child("round", round as u64);
        let partitions = general_ldd(
            g,
            &uncharted,
            scales.partition_diameter,
            8.0,
            &params.partition_ldc,
            oracle,
            round_stream.child("partition", 0),
        )?;
        let mut emitted = Vec::new();
        for (i, part) in partitions.clusters.iter().enumerate() {
            let part_set = NodeSubset::from_nodes(n, part.members.iter().copied());
            let i = i as u64;
            let sep = sample_weak_separator(
                g,
                &part_set,
                scales.partition_diameter,
                scales.separator_epsilon,
                k,
                &params.separator,
                oracle,
                round_stream.child("separator", i),
            )?;
            let sp = oracle.set_sssp(g, Scope::within(&part_set), &sep.removed, scales.separator_epsilon)?;
            let x = sample_texp(&texp, &mut round_stream.child("texp", i).rng());
            let radius = (F::one() + scales.separator_epsilon) * x;
            let ball = NodeSubset::from_nodes(n, part_set.iter().filter(|&w| sp.dist[w] <= radius));
            let grown = blur(
                g,
                &part_set,
                &ball,
                scales.rho_blur,
                scales.separator_epsilon,
                oracle,
                round_stream.child("blur", i),
            )?;
            let backbone = sep.entries.into_iter().map(|e| e.path).collect();
            emitted.push((grown.grown, backbone));
        }
        for (members, backbone) in emitted {
            let id = result.clusters.len();
            for v in members.iter() {
                result.cluster_of[v] = Some(id);
                uncharted.remove(v);
            }
            result.clusters.push(BackboneCluster {
                id,
                members: members.to_vec(),
                backbone,
                round,
            });
        }
        for (e, edge) in g.edges().iter().enumerate() {
            let (cu, cv) = (result.cluster_of[edge.u], result.cluster_of[edge.v]);
            let fresh = |c: Option<usize>| c.is_some_and(|c| result.clusters[c].round == round);
            let in_play = |v: NodeId, c: Option<usize>| active.contains(v) && (c.is_none() || fresh(c));
            if !(in_play(edge.u, cu) && in_play(edge.v, cv)) || !(fresh(cu) || fresh(cv)) || cu == cv {
                continue;
            }
            let phase = if partitions.cluster_of[edge.u] == partitions.cluster_of[edge.v] {
                CutPhase::Blur
            } else {
                CutPhase::Partition
            };
            result.cut_edges.push((e, phase));
        }
    }
    result.rounds = round;
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathNet<F> {
    pub marks: Vec<NodeId>,
    pub delta: F,
}

/// Greedy δ-net along `path`: the first node is marked, then every node
/// whose path distance from the previous mark exceeds `delta`.
pub fn path_net<F: Scalar>(g: &WeightedGraph<F>, path: &[NodeId], delta: F) -> Result<PathNet<F>> {
    let Some(&first) = path.first() else {
        return Err(Error::param("path", "must not be empty"));
    };
    if !(delta > F::zero()) {
        return Err(Error::param("delta", "must be positive"));
    }
    let mut marks = vec![first];
    let mut since = F::zero();
    for p in path.windows(2) {
        let len = g.length_between(p[0], p[1]).ok_or_else(|| {
            Error::param("path", format!("nodes {} and {} are not adjacent", p[0], p[1]))
        })?;
        since += len;
        if since > delta {
            marks.push(p[1]);
            since = F::zero();
        }
    }
    Ok(PathNet { marks, delta })
}

/// Net and packing bound used when refining one backbone cluster.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineInfo {
    pub cluster: usize,
    pub centers: Vec<NodeId>,
    pub tau: usize,
}

/// One strong-diameter clustering application per backbone cluster, using
/// the net marks of its backbone as centers. Clusters have strong diameter
/// at most `16 · D_BC`.
pub fn refine<F: Scalar>(
    g: &WeightedGraph<F>,
    bc: &BackboneClustering<F>,
    params: &BackboneParams,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<(Clustering<F>, Vec<RefineInfo>)> {
    let n = g.node_count();
    let mut out = Clustering::new(n);
    let mut infos = Vec::new();
    let scale = F::lit(2.0) * bc.d_bc;
    for cl in &bc.clusters {
        if cl.backbone.is_empty() {
            return Err(Error::EmptyBackbone { cluster: cl.id });
        }
        let mut centers = NodeSubset::empty(n);
        let mut max_marks = 0;
        for path in &cl.backbone {
            let net = path_net(g, path, bc.d_bc)?;
            max_marks = max_marks.max(net.marks.len());
            for m in net.marks {
                centers.insert(m);
            }
        }
        let tau = (cl.backbone.len() * max_marks).max(1);
        let members = NodeSubset::from_nodes(n, cl.members.iter().copied());
        let part = build_ldc(
            g,
            &members,
            &centers,
            scale,
            tau,
            &params.refine_ldc,
            oracle,
            stream.child("refine", cl.id as u64),
        )?;
        for c in part.clusters {
            out.push_cluster(c.members, c.center, F::lit(16.0) * bc.d_bc, cl.round);
        }
        infos.push(RefineInfo {
            cluster: cl.id,
            centers: centers.to_vec(),
            tau,
        });
    }
    out.rounds = 1;
    Ok((out, infos))
}

/// Backbone clustering followed by refinement, as a clustering procedure
/// with strong diameter `4 · backbone_diameter`.
#[derive(Clone, Debug)]
pub struct KPathLdc<F> {
    /// Parameter `D` of the backbone construction (`D_BC = D/4`).
    pub backbone_diameter: F,
    pub k: usize,
    pub params: BackboneParams,
}

impl<F: Scalar> ClusteringProcedure<F> for KPathLdc<F> {
    fn cluster(
        &self,
        g: &WeightedGraph<F>,
        active: &NodeSubset,
        oracle: &mut SsspOracle,
        stream: Stream,
    ) -> Result<Clustering<F>> {
        let bc = build_backbone_clustering(
            g,
            active,
            self.backbone_diameter,
            self.k,
            &self.params,
            oracle,
            stream.child("backbone", 0),
        )?;
        let (mut c, _) = refine(g, &bc, &self.params, oracle, stream.child("refine", 0))?;
        c.cut_edges = c.separated_edges(g, active);
        Ok(c)
    }

    fn diameter_bound(&self) -> F {
        F::lit(4.0) * self.backbone_diameter
    }
}

/// Decomposition of a k-path separable graph with strong diameter
/// `diameter`: backbone pseudo-diameter `diameter/16`, refined and reapplied
/// until every node is clustered.
pub fn build_kpath_ldd<F: Scalar>(
    g: &WeightedGraph<F>,
    diameter: F,
    k: usize,
    params: &BackboneParams,
    oracle: &mut SsspOracle,
    stream: Stream,
) -> Result<Clustering<F>> {
    let procedure = KPathLdc {
        backbone_diameter: diameter / F::lit(4.0),
        k,
        params: *params,
    };
    build_ldd(g, &g.all_nodes(), &procedure, None, oracle, stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{generate, GeneratorSpec};

    fn unit_path(n: usize) -> WeightedGraph<f64> {
        generate(&GeneratorSpec::Path, n, 0).unwrap()
    }

    #[test]
    fn greedy_net_on_unit_path() {
        let g = unit_path(11);
        let path: Vec<usize> = (0..11).collect();
        assert_eq!(path_net(&g, &path, 3.0).unwrap().marks, vec![0, 4, 8]);
        assert_eq!(path_net(&g, &path, 20.0).unwrap().marks, vec![0]);
        assert_eq!(path_net(&g, &[5], 1.0).unwrap().marks, vec![5]);
        assert!(path_net(&g, &[], 1.0).is_err());
        assert!(path_net(&g, &[0, 2], 1.0).is_err());
    }

    #[test]
    fn lone_node_backbone() {
        let g: WeightedGraph<f64> = WeightedGraph::new(1, vec![]).unwrap();
        let mut o = SsspOracle::exact();
        let bc = build_backbone_clustering(&g, &g.all_nodes(), 4.0, 1, &BackboneParams::desk(), &mut o, Stream::new(0))
            .unwrap();
        assert_eq!(bc.clusters.len(), 1);
        assert_eq!(bc.clusters[0].backbone, vec![vec![0]]);
        let c = build_kpath_ldd(&g, 4.0, 1, &BackboneParams::desk(), &mut o, Stream::new(0)).unwrap();
        assert_eq!(c.clusters.len(), 1);
    }

    #[test]
    fn empty_backbone_is_an_error() {
        let g = unit_path(2);
        let bc = BackboneClustering {
            cluster_of: vec![Some(0), Some(0)],
            clusters: vec![BackboneCluster {
                id: 0,
                members: vec![0, 1],
                backbone: vec![],
                round: 1,
            }],
            cut_edges: vec![],
            rounds: 1,
            d_bc: 1.0,
        };
        let mut o = SsspOracle::exact();
        assert!(matches!(
            refine(&g, &bc, &BackboneParams::desk(), &mut o, Stream::new(0)),
            Err(Error::EmptyBackbone { cluster: 0 })
        ));
    }

    #[test]
    fn backbone_covers_active_set() {
        let g: WeightedGraph<f64> = generate(&GeneratorSpec::Grid, 36, 0).unwrap();
        for seed in 0..5 {
            let mut o = SsspOracle::exact();
            let bc = build_backbone_clustering(&g, &g.all_nodes(), 8.0, 3, &BackboneParams::desk(), &mut o, Stream::new(seed))
                .unwrap();
            assert!(bc.cluster_of.iter().all(|c| c.is_some()));
            for c in &bc.clusters {
                for p in &c.backbone {
                    assert!(g.walk_length(p).is_some());
                    assert!(p.iter().all(|&v| bc.cluster_of[v] == Some(c.id)));
                }
            }
        }
    }
}
