//! Deterministic Louvain modularity maximization.
//!
//! 1. Local moving: visit nodes in ascending id order and move each to the
//!    neighbouring community (or an empty one) with the largest modularity
//!    gain, ties to the lowest community id. A move is taken only if it
//!    raises Q by more than [`MIN_GAIN`]. Sweep until nothing moves.
//! 2. Aggregation: collapse every community into a super-node (internal
//!    weight becomes a self-loop) and repeat from 1 on the smaller graph.
//!
//! When a level no longer moves anything, the resulting partition is
//! polished once more by local moving on the original graph, starting from
//! that partition. If this moves nodes, aggregation resumes; otherwise no
//! single node can improve Q by switching community and the run stops.
//!
//! Louvain can stop where only a multi-node move would help. As a last step,
//! every pair of adjacent communities is tentatively merged and the search
//! above is rerun from the merged partition; the result is kept only when it
//! beats the current Q by more than [`MIN_GAIN`]. This repeats until no merge
//! pays off, so Q never decreases and the final partition is still locally
//! optimal. No randomness is involved.

use std::collections::{BTreeMap, BTreeSet};

use super::{modularity, CooccurrenceGraph};
use crate::error::{Error, Result};

/// Smallest modularity improvement that counts as a move.
pub const MIN_GAIN: f64 = 1e-10;

// Guards against cycling on floating-point noise; never reached in practice
// because every accepted move raises Q by more than MIN_GAIN.
const MAX_ROUNDS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityAssignment {
    /// Community of each node; ids are contiguous and numbered in order of
    /// their smallest member.
    pub membership: Vec<usize>,
    pub modularity_q: f64,
    /// Q after every pass that changed the partition, starting with the
    /// all-singletons partition.
    pub pass_modularity: Vec<f64>,
}

impl CommunityAssignment {
    pub fn community_count(&self) -> usize {
        self.membership.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn members(&self, community: usize) -> Vec<usize> {
        (0..self.membership.len())
            .filter(|&v| self.membership[v] == community)
            .collect()
    }
}

/// Weighted graph where `self_loops[i]` is `A_ii` (twice the weight
/// collapsed into node `i`), so `strength[i] = self_loops[i] + sum_j A_ij`.
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    strength: Vec<f64>,
    two_m: f64,
}

impl Level {
    fn from_graph(g: &CooccurrenceGraph) -> Self {
        let adjacency: Vec<Vec<(usize, f64)>> = (0..g.node_count())
            .map(|u| g.neighbors(u).map(|(v, w)| (v, w as f64)).collect())
            .collect();
        let strength = adjacency
            .iter()
            .map(|adj| adj.iter().map(|&(_, w)| w).sum())
            .collect::<Vec<f64>>();
        Level {
            self_loops: vec![0.0; adjacency.len()],
            two_m: strength.iter().sum(),
            strength,
            adjacency,
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    /// Collapses communities (contiguous ids `0..count`) into super-nodes.
    fn aggregate(&self, community: &[usize]) -> Level {
        let count = community.iter().max().map_or(0, |&c| c + 1);
        let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
        let mut self_loops = vec![0.0; count];
        let mut strength = vec![0.0; count];
        for u in 0..self.len() {
            let cu = community[u];
            self_loops[cu] += self.self_loops[u];
            strength[cu] += self.strength[u];
            for &(v, w) in &self.adjacency[u] {
                let cv = community[v];
                if cu == cv {
                    self_loops[cu] += w;
                } else {
                    *links[cu].entry(cv).or_insert(0.0) += w;
                }
            }
        }
        Level {
            adjacency: links.into_iter().map(|l| l.into_iter().collect()).collect(),
            self_loops,
            strength,
            two_m: self.two_m,
        }
    }
}

/// Sweeps local moves until none improves Q. `community` holds ids in
/// `0..level.len()`. Returns whether any node moved.
fn local_moving(level: &Level, community: &mut [usize]) -> bool {
    let n = level.len();
    let m = level.two_m / 2.0;
    let mut total = vec![0.0; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        total[community[v]] += level.strength[v];
        size[community[v]] += 1;
    }
    let mut empty: BTreeSet<usize> = (0..n).filter(|&c| size[c] == 0).collect();

    let mut moved_any = false;
    let mut links: BTreeMap<usize, f64> = BTreeMap::new();
    loop {
        let mut moved = false;
        for v in 0..n {
            let k = level.strength[v];
            let from = community[v];
            links.clear();
            for &(u, w) in &level.adjacency[v] {
                *links.entry(community[u]).or_insert(0.0) += w;
            }

            total[from] -= k;
            size[from] -= 1;
            if size[from] == 0 {
                empty.insert(from);
            }

            let gain = |c: usize, links: &BTreeMap<usize, f64>| {
                links.get(&c).copied().unwrap_or(0.0) - total[c] * k / level.two_m
            };
            let stay = gain(from, &links);
            let mut candidates: BTreeSet<usize> = links.keys().copied().collect();
            candidates.insert(from);
            if let Some(&isolated) = empty.iter().next() {
                candidates.insert(isolated);
            }
            let mut best = (from, stay);
            let mut first = true;
            for &c in &candidates {
                let g = gain(c, &links);
                if first || g > best.1 {
                    best = (c, g);
                    first = false;
                }
            }
            let target = if best.0 != from && (best.1 - stay) / m > MIN_GAIN {
                best.0
            } else {
                from
            };

            total[target] += k;
            size[target] += 1;
            empty.remove(&target);
            if target != from {
                community[v] = target;
                moved = true;
            }
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    moved_any
}

/// Relabels to contiguous ids in order of first appearance.
fn relabel(labels: &mut [usize]) {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    for l in labels.iter_mut() {
        let next = map.len();
        *l = *map.entry(*l).or_insert(next);
    }
}

/// Two-phase Louvain starting from `membership`, followed by polishing on
/// the original graph. Q after every pass that changed the partition is
/// appended to `history`.
fn descend(g: &CooccurrenceGraph, base: &Level, membership: &mut Vec<usize>, history: &mut Vec<f64>) -> Result<()> {
    for _ in 0..MAX_ROUNDS {
        let mut level = base.aggregate(membership);
        loop {
            let mut community: Vec<usize> = (0..level.len()).collect();
            if !local_moving(&level, &mut community) {
                break;
            }
            relabel(&mut community);
            for c in membership.iter_mut() {
                *c = community[*c];
            }
            history.push(modularity(g, membership)?);
            level = level.aggregate(&community);
        }

        let mut polished = membership.clone();
        if !local_moving(base, &mut polished) {
            break;
        }
        relabel(&mut polished);
        *membership = polished;
        history.push(modularity(g, membership)?);
    }
    relabel(membership);
    Ok(())
}

/// Pairs of communities joined by at least one edge, in ascending order.
fn adjacent_communities(g: &CooccurrenceGraph, membership: &[usize]) -> BTreeSet<(usize, usize)> {
    g.edges()
        .map(|(u, v, _)| (membership[u], membership[v]))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect()
}

/// Partitions `g` into communities by Louvain modularity maximization.
pub fn louvain(g: &CooccurrenceGraph) -> Result<CommunityAssignment> {
    let n = g.node_count();
    if g.total_weight() == 0 {
        return Err(Error::EmptyGraph);
    }
    let base = Level::from_graph(g);
    let mut membership: Vec<usize> = (0..n).collect();
    let mut history = vec![modularity(g, &membership)?];
    descend(g, &base, &mut membership, &mut history)?;
    let mut q = modularity(g, &membership)?;

    for _ in 0..MAX_ROUNDS {
        let mut better = None;
        for (a, b) in adjacent_communities(g, &membership) {
            let mut candidate: Vec<usize> = membership.iter().map(|&c| if c == b { a } else { c }).collect();
            relabel(&mut candidate);
            descend(g, &base, &mut candidate, &mut Vec::new())?;
            let candidate_q = modularity(g, &candidate)?;
            if candidate_q - q > MIN_GAIN {
                better = Some((candidate, candidate_q));
                break;
            }
        }
        match better {
            Some((candidate, candidate_q)) => {
                membership = candidate;
                q = candidate_q;
                history.push(q);
            }
            None => break,
        }
    }

    Ok(CommunityAssignment {
        modularity_q: q,
        membership,
        pass_modularity: history,
    })
}
