#![allow(dead_code)]

use lowdiam::Clustering;
use lowdiam::graph::generate::{generate, GeneratorSpec};
use lowdiam::PaddedDecomposition;
use lowdiam::Graph;

/// Seed used for every generated test graph.
pub const GRAPH_SEED: u64 = 2024;

pub struct CorpusGraph {
    pub name: &'static str,
    pub graph: Graph,
    /// Declared path-separability.
    pub k: usize,
    /// Diameter parameter used for this graph.
    pub diameter: f64,
}

pub fn unit_path(n: usize) -> Graph {
    generate(&GeneratorSpec::Path, n, GRAPH_SEED).unwrap()
}

/// Unit path on 64 nodes, 8×8 unit grid, random tree on 60 nodes with
/// lengths in `[1, 4]`, random 3-tree on 48 nodes.
pub fn corpus() -> Vec<CorpusGraph> {
    vec![
        CorpusGraph {
            name: "path-64",
            graph: unit_path(64),
            k: 1,
            diameter: 8.0,
        },
        CorpusGraph {
            name: "grid-8x8",
            graph: generate(&GeneratorSpec::Grid, 64, GRAPH_SEED).unwrap(),
            k: 3,
            diameter: 6.0,
        },
        CorpusGraph {
            name: "tree-60",
            graph: generate(&GeneratorSpec::RandomTree { max_weight: 4.0 }, 60, GRAPH_SEED).unwrap(),
            k: 1,
            diameter: 5.0,
        },
        CorpusGraph {
            name: "ktree-48",
            graph: generate(
                &GeneratorSpec::KTree {
                    width: 3,
                    max_weight: 1.0,
                },
                48,
                GRAPH_SEED,
            )
            .unwrap(),
            k: 3,
            diameter: 4.0,
        },
    ]
}

/// Graphs with a declared path-separability other than the plain path.
pub fn separable_corpus() -> Vec<CorpusGraph> {
    corpus().into_iter().filter(|c| c.name != "path-64").collect()
}

/// Seeds for one experiment: `count` consecutive values in a block that is
/// disjoint from every other experiment's block.
pub fn seeds(experiment: u64, count: u64) -> impl Iterator<Item = u64> {
    (0..count).map(move |i| experiment * 1_000_000 + i)
}

pub fn as_clustering(p: &PaddedDecomposition, bound: f64) -> Clustering {
    let mut c = Clustering::new(p.cluster_of.len());
    for (i, members) in p.members.iter().enumerate() {
        c.push_cluster(members.clone(), Some(p.center_of_cluster[i]), bound, 1);
    }
    c
}

/// All-pairs distances inside the subgraph induced by `members`, indexed by
/// position in `members`. Plain Floyd–Warshall.
pub fn induced_distances(g: &Graph, members: &[usize]) -> Vec<Vec<f64>> {
    let m = members.len();
    let mut local = vec![usize::MAX; g.node_count()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let mut d = vec![vec![f64::INFINITY; m]; m];
    for i in 0..m {
        d[i][i] = 0.0;
    }
    for e in g.edges() {
        let (a, b) = (local[e.u], local[e.v]);
        if a != usize::MAX && b != usize::MAX {
            d[a][b] = d[a][b].min(e.length);
            d[b][a] = d[a][b];
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Strong diameter of `members`; infinite when they are disconnected.
pub fn induced_diameter(g: &Graph, members: &[usize]) -> f64 {
    induced_distances(g, members).iter().flatten().copied().fold(0.0, f64::max)
}

/// Connectivity of the induced subgraph by recursive depth-first search.
pub fn induced_connected(g: &Graph, members: &[usize]) -> bool {
    fn visit(g: &Graph, v: usize, inside: &[bool], seen: &mut [bool]) {
        seen[v] = true;
        for (w, _, _) in g.neighbors(v) {
            if inside[w] && !seen[w] {
                visit(g, w, inside, seen);
            }
        }
    }
    let Some(&first) = members.first() else {
        return true;
    };
    let mut inside = vec![false; g.node_count()];
    for &v in members {
        inside[v] = true;
    }
    let mut seen = vec![false; g.node_count()];
    visit(g, first, &inside, &mut seen);
    members.iter().all(|&v| seen[v])
}

/// Disjointness and (optionally) totality, checked from the member lists.
pub fn partition_ok(c: &Clustering, expect_total: bool) -> bool {
    let mut owner = vec![None; c.node_count];
    for cl in &c.clusters {
        for &v in &cl.members {
            if owner[v].is_some() || c.cluster_of[v] != Some(cl.id) {
                return false;
            }
            owner[v] = Some(cl.id);
        }
    }
    !expect_total || owner.iter().all(Option::is_some)
}
