use std::collections::VecDeque;

use super::{NodeSubset, WeightedGraph};
use crate::scalar::Scalar;

/// Maximal connected node sets of the subgraph induced by `active`, ordered
/// by their smallest node id.
pub fn connected_components<F: Scalar>(g: &WeightedGraph<F>, active: &NodeSubset) -> Vec<NodeSubset> {
    let n = g.node_count();
    let mut seen = NodeSubset::empty(n);
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in active.iter() {
        if seen.contains(s) {
            continue;
        }
        let mut comp = NodeSubset::empty(n);
        seen.insert(s);
        comp.insert(s);
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for (w, _, _) in g.neighbors(v) {
                if active.contains(w) && seen.insert(w) {
                    comp.insert(w);
                    queue.push_back(w);
                }
            }
        }
        out.push(comp);
    }
    out
}
