//! Seeded synthetic graph families.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Edge, WeightedGraph};
use crate::error::{Error, Result};
use crate::sampling::Stream;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// Unit-length path.
    Path,
    /// Path with lengths uniform in `[1, max_weight]`.
    WeightedPath { max_weight: f64 },
    /// Square unit grid; `n` must be a perfect square.
    Grid,
    /// Uniform random recursive tree with lengths uniform in `[1, max_weight]`.
    RandomTree { max_weight: f64 },
    /// Random tree plus `extra_edges` random chords, lengths uniform in
    /// `[1, max_weight]`.
    RandomConnected { extra_edges: usize, max_weight: f64 },
    /// Random `width`-tree: a chain of `(width+1)`-cliques glued along
    /// `width`-cliques. Treewidth is `width` by construction, so the graph is
    /// `width`-path separable.
    KTree { width: usize, max_weight: f64 },
}

impl GeneratorSpec {
    /// Parses a kind name, filling in parameters from the given defaults.
    pub fn from_kind(kind: &str, max_weight: f64, width: usize, extra_edges: Option<usize>) -> Result<Self> {
        Ok(match kind {
            "path" => GeneratorSpec::Path,
            "weighted-path" => GeneratorSpec::WeightedPath { max_weight },
            "grid" => GeneratorSpec::Grid,
            "tree" | "random-tree" => GeneratorSpec::RandomTree { max_weight },
            "random" | "random-connected" => GeneratorSpec::RandomConnected {
                extra_edges: extra_edges.unwrap_or(0),
                max_weight,
            },
            "ktree" | "tau-tree" => GeneratorSpec::KTree { width, max_weight },
            other => return Err(Error::UnknownGenerator(other.to_string())),
        })
    }

    /// Path count a `k`-path separator needs for this family, when known by
    /// construction.
    pub fn declared_k(&self) -> Option<usize> {
        match self {
            GeneratorSpec::Path
            | GeneratorSpec::WeightedPath { .. }
            | GeneratorSpec::RandomTree { .. } => Some(1),
            GeneratorSpec::Grid => Some(3),
            GeneratorSpec::KTree { width, .. } => Some(*width),
            GeneratorSpec::RandomConnected { .. } => None,
        }
    }
}

fn length<F: Scalar, R: Rng>(rng: &mut R, max_weight: f64) -> F {
    if max_weight <= 1.0 {
        F::one()
    } else {
        F::lit(rng.gen_range(1.0..=max_weight))
    }
}

fn check_max_weight(w: f64) -> Result<()> {
    if w.is_finite() && w >= 1.0 {
        Ok(())
    } else {
        Err(Error::param("max_weight", "must be a finite value >= 1"))
    }
}

/// Builds a graph of the requested family. Deterministic in `seed`.
pub fn generate<F: Scalar>(spec: &GeneratorSpec, n: usize, seed: u64) -> Result<WeightedGraph<F>> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let mut rng = Stream::new(seed).child("generate", 0).rng();
    let mut edges: Vec<Edge<F>> = Vec::new();
    let mut push = |u, v, length| edges.push(Edge { u, v, length });
    match *spec {
        GeneratorSpec::Path => {
            for i in 1..n {
                push(i - 1, i, F::one());
            }
        }
        GeneratorSpec::WeightedPath { max_weight } => {
            check_max_weight(max_weight)?;
            for i in 1..n {
                push(i - 1, i, length(&mut rng, max_weight));
            }
        }
        GeneratorSpec::Grid => {
            let side = (n as f64).sqrt().round() as usize;
            if side * side != n {
                return Err(Error::param("n", format!("grid needs a perfect square, got {n}")));
            }
            for r in 0..side {
                for c in 0..side {
                    let v = r * side + c;
                    if c + 1 < side {
                        push(v, v + 1, F::one());
                    }
                    if r + 1 < side {
                        push(v, v + side, F::one());
                    }
                }
            }
        }
        GeneratorSpec::RandomTree { max_weight } => {
            check_max_weight(max_weight)?;
            for v in 1..n {
                let p = rng.gen_range(0..v);
                push(p, v, length(&mut rng, max_weight));
            }
        }
        GeneratorSpec::RandomConnected {
            extra_edges,
            max_weight,
        } => {
            check_max_weight(max_weight)?;
            for v in 1..n {
                let p = rng.gen_range(0..v);
                push(p, v, length(&mut rng, max_weight));
            }
            if n >= 2 {
                let mut added = 0;
                while added < extra_edges {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u != v {
                        push(u.min(v), u.max(v), length(&mut rng, max_weight));
                        added += 1;
                    }
                }
            }
        }
        GeneratorSpec::KTree { width, max_weight } => {
            check_max_weight(max_weight)?;
            if width == 0 {
                return Err(Error::param("width", "must be at least 1"));
            }
            let base = n.min(width + 1);
            for u in 0..base {
                for v in u + 1..base {
                    push(u, v, length(&mut rng, max_weight));
                }
            }
            if n > width + 1 {
                // every width-subset of the base clique is an attachable clique
                let mut cliques: Vec<Vec<usize>> = (0..base)
                    .map(|skip| (0..base).filter(|&x| x != skip).collect())
                    .collect();
                for v in base..n {
                    let pick = cliques[rng.gen_range(0..cliques.len())].clone();
                    for &u in &pick {
                        push(u, v, length(&mut rng, max_weight));
                    }
                    for i in 0..pick.len() {
                        let mut c = pick.clone();
                        c[i] = v;
                        cliques.push(c);
                    }
                }
            }
        }
    }
    WeightedGraph::new(n, edges)
}
