//! Rooted forests and the aggregate operations run over them: ancestor sums,
//! subtree sums and root-path selection.

use super::sssp::SsspResult;
use super::{NodeId, NodeSubset};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct RootedForest {
    parent: Vec<Option<NodeId>>,
    root_of: Vec<Option<NodeId>>,
    in_forest: Vec<bool>,
    // in-forest nodes, every parent before its children
    top_down: Vec<NodeId>,
}

impl RootedForest {
    /// Validates the parent pointers. Every parent must itself be in the
    /// forest, and following parents from any node must reach a root.
    pub fn new(parent: Vec<Option<NodeId>>, in_forest: Vec<bool>) -> Result<Self> {
        let n = parent.len();
        if in_forest.len() != n {
            return Err(Error::param("in_forest", "length differs from parent"));
        }
        for v in 0..n {
            if let Some(p) = parent[v] {
                if p >= n {
                    return Err(Error::NodeOutOfRange {
                        node: p,
                        node_count: n,
                    });
                }
                if !in_forest[v] || !in_forest[p] {
                    return Err(Error::NotInForest {
                        node: if in_forest[v] { p } else { v },
                    });
                }
            }
        }

        const UNSEEN: u8 = 0;
        const OPEN: u8 = 1;
        const DONE: u8 = 2;
        let mut state = vec![UNSEEN; n];
        let mut depth = vec![0usize; n];
        let mut root_of = vec![None; n];
        let mut stack = Vec::new();
        for s in 0..n {
            if !in_forest[s] || state[s] == DONE {
                continue;
            }
            let mut v = s;
            loop {
                match state[v] {
                    DONE => break,
                    OPEN => return Err(Error::CyclicForest { node: v }),
                    _ => {}
                }
                state[v] = OPEN;
                stack.push(v);
                match parent[v] {
                    Some(p) => v = p,
                    None => break,
                }
            }
            while let Some(u) = stack.pop() {
                match parent[u] {
                    Some(p) if state[p] == DONE => {
                        depth[u] = depth[p] + 1;
                        root_of[u] = root_of[p];
                    }
                    Some(p) => return Err(Error::CyclicForest { node: p }),
                    None => {
                        depth[u] = 0;
                        root_of[u] = Some(u);
                    }
                }
                state[u] = DONE;
            }
        }

        let mut top_down: Vec<NodeId> = (0..n).filter(|&v| in_forest[v]).collect();
        top_down.sort_by_key(|&v| depth[v]);
        Ok(Self {
            parent,
            root_of,
            in_forest,
            top_down,
        })
    }

    /// Forest over real nodes induced by a shortest-path result. Nodes whose
    /// predecessor is virtual become roots.
    pub fn from_sssp<F: Scalar>(r: &SsspResult<F>) -> Self {
        let n = r.node_count();
        let parent = (0..n).map(|v| r.real_pred(v)).collect();
        let in_forest = (0..n).map(|v| r.is_reachable(v)).collect();
        Self::new(parent, in_forest).expect("predecessor pointers of a shortest-path run form a forest")
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn root_of(&self, v: NodeId) -> Option<NodeId> {
        self.root_of[v]
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.in_forest[v]
    }

    pub fn roots(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.top_down
            .iter()
            .copied()
            .filter(|&v| self.parent[v].is_none())
    }

    pub fn top_down(&self) -> &[NodeId] {
        &self.top_down
    }
}

/// `A(v) = x_r ⊗ … ⊗ x_v` over the root path of `v`, applied root first.
/// Nodes outside the forest keep their input.
pub fn ancestor_sum<T: Clone>(
    f: &RootedForest,
    inputs: &[T],
    combine: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let mut out = inputs.to_vec();
    for &v in &f.top_down {
        if let Some(p) = f.parent[v] {
            out[v] = combine(&out[p], &inputs[v]);
        }
    }
    out
}

/// `D(v)` = combination of the inputs of all descendants of `v`, inclusive.
/// Nodes outside the forest keep their input.
pub fn subtree_sum<T: Clone>(
    f: &RootedForest,
    inputs: &[T],
    combine: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let mut out = inputs.to_vec();
    for &v in f.top_down.iter().rev() {
        if let Some(p) = f.parent[v] {
            out[p] = combine(&out[p], &out[v]);
        }
    }
    out
}

/// Nodes on the path from the root of `target`'s tree down to `target`.
///
/// Computed as a subtree sum of the indicator of `target`: exactly the nodes
/// on the root path see a one.
pub fn path_select(f: &RootedForest, target: NodeId) -> Result<NodeSubset> {
    if target >= f.node_count() || !f.contains(target) {
        return Err(Error::NotInForest { node: target });
    }
    let mut inputs = vec![0u32; f.node_count()];
    inputs[target] = 1;
    let sums = subtree_sum(f, &inputs, |a, b| a + b);
    Ok(NodeSubset::from_nodes(
        f.node_count(),
        (0..f.node_count()).filter(|&v| f.contains(v) && sums[v] == 1),
    ))
}

/// Root-to-target path as an ordered node sequence.
pub fn root_path(f: &RootedForest, target: NodeId) -> Result<Vec<NodeId>> {
    if target >= f.node_count() || !f.contains(target) {
        return Err(Error::NotInForest { node: target });
    }
    let mut path = vec![target];
    let mut v = target;
    while let Some(p) = f.parent[v] {
        path.push(p);
        v = p;
    }
    path.reverse();
    Ok(path)
}
