use std::collections::BTreeMap;

use super::CooccurrenceGraph;
use crate::error::{Error, Result};

/// Weighted Newman modularity of a partition (`partition[v]` is the
/// community label of node `v`; labels need not be contiguous):
///
/// `Q = sum over communities c of L_c / m - (D_c / 2m)^2`
///
/// where `L_c` is the weight inside `c`, `D_c` the summed strength of its
/// nodes and `m` the total edge weight.
pub fn modularity(g: &CooccurrenceGraph, partition: &[usize]) -> Result<f64> {
    if partition.len() != g.node_count() {
        return Err(Error::PartitionSize {
            expected: g.node_count(),
            got: partition.len(),
        });
    }
    let m = g.total_weight();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    // (internal weight, total strength), exact in integers
    let mut per_community: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for (v, &c) in partition.iter().enumerate() {
        per_community.entry(c).or_default().1 += g.strength(v);
    }
    for (u, v, w) in g.edges() {
        if partition[u] == partition[v] {
            per_community.get_mut(&partition[u]).expect("seen above").0 += w;
        }
    }
    let m = m as f64;
    Ok(per_community
        .values()
        .map(|&(inside, strength)| {
            let share = strength as f64 / (2.0 * m);
            inside as f64 / m - share * share
        })
        .sum())
}
