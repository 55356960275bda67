//! Betweenness centrality by Brandes' dependency accumulation.
//!
//! For every source `s` a single-source shortest-path pass counts the
//! shortest paths `sigma[v]` and records predecessors; walking the settled
//! vertices backwards accumulates `delta[v] = sum over successors w of
//! sigma[v] / sigma[w] * (1 + delta[w])`. Summing `delta` over sources
//! counts every unordered pair twice.
//!
//! Sources run in parallel; their dependency vectors are summed in source
//! order so the result does not depend on the thread count.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::CooccurrenceGraph;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetweennessMode {
    /// Every edge has length 1.
    #[default]
    Unweighted,
    /// Edge `{u, v}` has length `1 / w(u, v)`, so strong ties are short.
    Weighted,
}

impl fmt::Display for BetweennessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetweennessMode::Unweighted => "unweighted",
            BetweennessMode::Weighted => "weighted",
        })
    }
}

impl FromStr for BetweennessMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "unweighted" => Ok(BetweennessMode::Unweighted),
            "weighted" => Ok(BetweennessMode::Weighted),
            other => Err(Error::Config(format!(
                "betweenness mode {other:?} is not \"unweighted\" or \"weighted\""
            ))),
        }
    }
}

/// Normalized betweenness, one score in `[0, 1]` per node id.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub scores: Vec<f64>,
    pub mode: BetweennessMode,
}

impl CentralityScores {
    pub fn get(&self, node: usize) -> f64 {
        self.scores[node]
    }
}

/// Betweenness normalized by the number of pairs not involving the node,
/// `(n-1)(n-2)/2`; zero for graphs of two nodes or fewer.
pub fn betweenness_centrality(g: &CooccurrenceGraph, mode: BetweennessMode) -> CentralityScores {
    let n = g.node_count();
    let raw = raw_betweenness(g, mode);
    let scores = if n <= 2 {
        vec![0.0; n]
    } else {
        let pairs = ((n - 1) * (n - 2)) as f64 / 2.0;
        raw.iter().map(|b| (b / pairs).clamp(0.0, 1.0)).collect()
    };
    CentralityScores { scores, mode }
}

/// Unnormalized betweenness over unordered pairs `{s, t}`:
/// `b(v) = sum of sigma_st(v) / sigma_st`. Unreachable pairs contribute 0.
pub fn raw_betweenness(g: &CooccurrenceGraph, mode: BetweennessMode) -> Vec<f64> {
    let n = g.node_count();
    let adjacency: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|u| {
            g.neighbors(u)
                .map(|(v, w)| {
                    let len = match mode {
                        BetweennessMode::Unweighted => 1.0,
                        BetweennessMode::Weighted => 1.0 / w as f64,
                    };
                    (v, len)
                })
                .collect()
        })
        .collect();

    let per_source: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| match mode {
            BetweennessMode::Unweighted => dependencies_bfs(&adjacency, s),
            BetweennessMode::Weighted => dependencies_dijkstra(&adjacency, s),
        })
        .collect();

    let mut total = vec![0.0; n];
    for delta in &per_source {
        for (t, d) in total.iter_mut().zip(delta) {
            *t += d;
        }
    }
    total.iter().map(|b| b / 2.0).collect()
}

struct ShortestPaths {
    order: Vec<usize>,
    preds: Vec<Vec<usize>>,
    sigma: Vec<f64>,
}

fn accumulate(source: usize, paths: ShortestPaths) -> Vec<f64> {
    let ShortestPaths { order, preds, sigma } = paths;
    let mut delta = vec![0.0; sigma.len()];
    for &w in order.iter().rev() {
        let coeff = (1.0 + delta[w]) / sigma[w];
        for &v in &preds[w] {
            delta[v] += sigma[v] * coeff;
        }
    }
    delta[source] = 0.0;
    delta
}

fn dependencies_bfs(adjacency: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let n = adjacency.len();
    let mut dist = vec![usize::MAX; n];
    let mut sigma = vec![0.0; n];
    let mut preds = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    dist[source] = 0;
    sigma[source] = 1.0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(w, _) in &adjacency[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    accumulate(source, ShortestPaths { order, preds, sigma })
}

// Path lengths are sums of reciprocals, so equal-length paths can differ in
// the last bits.
const LENGTH_TOLERANCE: f64 = 1e-12;

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= LENGTH_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

#[derive(PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then node id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dependencies_dijkstra(adjacency: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let n = adjacency.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut sigma = vec![0.0; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    sigma[source] = 1.0;
    heap.push(Frontier { dist: 0.0, node: source });
    while let Some(Frontier { node: v, .. }) = heap.pop() {
        if settled[v] {
            continue;
        }
        settled[v] = true;
        order.push(v);
        for &(w, len) in &adjacency[v] {
            if settled[w] {
                continue;
            }
            let alt = dist[v] + len;
            if dist[w].is_infinite() || (alt < dist[w] && !same_length(alt, dist[w])) {
                dist[w] = alt;
                sigma[w] = sigma[v];
                preds[w].clear();
                preds[w].push(v);
                heap.push(Frontier { dist: alt, node: w });
            } else if same_length(alt, dist[w]) {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    accumulate(source, ShortestPaths { order, preds, sigma })
}
