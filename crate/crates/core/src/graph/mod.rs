//! Entity co-occurrence network and its topology.

mod betweenness;
mod louvain;
mod modularity;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

pub use betweenness::{betweenness_centrality, raw_betweenness, BetweennessMode, CentralityScores};
pub use louvain::{louvain, CommunityAssignment};
pub use modularity::modularity;

use crate::corpus::Document;
use crate::entities::Entity;
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub label: String,
    /// Reference count of the entity.
    pub weight: u64,
}

/// Weighted undirected graph without self-loops. Node ids are dense
/// (`0..node_count`); edge weights are positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CooccurrenceGraph {
    nodes: Vec<Node>,
    adjacency: Vec<BTreeMap<usize, u64>>,
}

impl CooccurrenceGraph {
    pub fn with_nodes<I, S>(nodes: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let nodes: Vec<Node> = nodes
            .into_iter()
            .enumerate()
            .map(|(id, (label, weight))| Node {
                id,
                label: label.into(),
                weight,
            })
            .collect();
        let adjacency = vec![BTreeMap::new(); nodes.len()];
        CooccurrenceGraph { nodes, adjacency }
    }

    /// `n` nodes labelled `n0..`, each of weight 1, plus the given edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut g = Self::with_nodes((0..n).map(|i| (format!("n{i}"), 1)));
        for &(u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Adds `w` to the weight of edge `{u, v}`. Zero weights are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize, w: u64) -> Result<()> {
        let n = self.nodes.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::NodeOutOfRange { index: x, nodes: n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if w == 0 {
            return Ok(());
        }
        *self.adjacency[u].entry(v).or_insert(0) += w;
        *self.adjacency[v].entry(u).or_insert(0) += w;
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    /// Weight of `{u, v}`, zero when absent.
    pub fn weight(&self, u: usize, v: usize) -> u64 {
        self.adjacency
            .get(u)
            .and_then(|adj| adj.get(&v))
            .copied()
            .unwrap_or(0)
    }

    /// Neighbours of `u` in ascending id order with edge weights.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.adjacency[u].iter().map(|(&v, &w)| (v, w))
    }

    /// Every edge once as `(u, v, w)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.range(u + 1..).map(move |(&v, &w)| (u, v, w)))
    }

    /// Weighted degree `k_u`.
    pub fn strength(&self, u: usize) -> u64 {
        self.adjacency[u].values().sum()
    }

    /// Total edge weight `m`.
    pub fn total_weight(&self) -> u64 {
        self.edges().map(|(_, _, w)| w).sum()
    }
}

/// Textual unit within which two entities count as co-occurring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CooccurrenceUnit {
    #[default]
    Sentence,
    /// Mentions at most this many tokens apart.
    Window(usize),
}

impl fmt::Display for CooccurrenceUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CooccurrenceUnit::Sentence => f.write_str("sentence"),
            CooccurrenceUnit::Window(w) => write!(f, "window:{w}"),
        }
    }
}

impl FromStr for CooccurrenceUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sentence" => Ok(CooccurrenceUnit::Sentence),
            "window" => Ok(CooccurrenceUnit::Window(DEFAULT_WINDOW)),
            other => other
                .strip_prefix("window:")
                .and_then(|w| w.parse().ok())
                .map(CooccurrenceUnit::Window)
                .ok_or_else(|| {
                    Error::Config(format!(
                        "co-occurrence unit {other:?} is not \"sentence\" or \"window:<tokens>\""
                    ))
                }),
        }
    }
}

/// Builds the co-occurrence network of `entities` (node `i` is
/// `entities[i]`, weighted by its reference count).
///
/// With [`CooccurrenceUnit::Sentence`] the edge weight is the number of
/// sentences mentioning both entities; repeated mentions inside one sentence
/// count once. With [`CooccurrenceUnit::Window`] it is the number of mention
/// pairs at most `W` tokens apart.
pub fn build_cooccurrence_graph(entities: &[Entity], doc: &Document, unit: CooccurrenceUnit) -> CooccurrenceGraph {
    let mut g = CooccurrenceGraph::with_nodes(
        entities
            .iter()
            .map(|e| (e.canonical.clone(), e.reference_count as u64)),
    );
    match unit {
        CooccurrenceUnit::Sentence => {
            let mut by_sentence: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for (id, e) in entities.iter().enumerate() {
                for m in &e.mentions {
                    by_sentence.entry(m.sentence_index).or_default().insert(id);
                }
            }
            for present in by_sentence.values() {
                let ids: Vec<usize> = present.iter().copied().collect();
                for (a, &u) in ids.iter().enumerate() {
                    for &v in &ids[a + 1..] {
                        g.add_edge(u, v, 1).expect("distinct in-range ids");
                    }
                }
            }
        }
        CooccurrenceUnit::Window(width) => {
            let mut located: Vec<(usize, usize)> = entities
                .iter()
                .enumerate()
                .flat_map(|(id, e)| {
                    e.mentions
                        .iter()
                        .filter_map(move |m| doc.token_at(m.span.start).map(|t| (t, id)))
                })
                .collect();
            located.sort_unstable();
            for (a, &(ta, u)) in located.iter().enumerate() {
                for &(tb, v) in &located[a + 1..] {
                    if tb - ta > width {
                        break;
                    }
                    if u != v {
                        g.add_edge(u, v, 1).expect("distinct in-range ids");
                    }
                }
            }
        }
    }
    g
}
