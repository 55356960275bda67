//! Serializers: GraphML, DOT, CSV and SVG.
//!
//! Every writer is a pure function of its input (and seed), and emits in a
//! fixed order, so equal inputs give byte-identical files.

mod dot;
mod graphml;
mod tables;
mod trend_svg;
mod wordcloud;

pub use dot::export_dot;
pub use graphml::{export_graphml, parse_graphml};
pub use tables::{
    centrality_csv, clusters_csv, communities_csv, entities_csv, factors_csv, frequency_csv,
    parse_entities_csv, trend_csv,
};
pub use trend_svg::render_trend_svg;
pub use wordcloud::{render_wordcloud_svg, wordcloud_layout, PlacedWord, WORDCLOUD_HEIGHT, WORDCLOUD_WIDTH};

use crate::error::{Error, Result};
use crate::graph::{BetweennessMode, CentralityScores, CommunityAssignment, CooccurrenceGraph};

/// Fill colours indexed by community id modulo 12.
pub const COMMUNITY_PALETTE: [&str; 12] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
];

/// Stroke colours for line charts.
pub const LINE_PALETTE: [&str; 12] = [
    "#1f78b4", "#e31a1c", "#33a02c", "#ff7f00", "#6a3d9a", "#b15928",
    "#a6cee3", "#fb9a99", "#b2df8a", "#fdbf6f", "#cab2d6", "#8c8c00",
];

/// Community membership with its modularity, as carried in graph files.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityLabels {
    pub membership: Vec<usize>,
    pub modularity_q: f64,
}

impl From<&CommunityAssignment> for CommunityLabels {
    fn from(a: &CommunityAssignment) -> Self {
        CommunityLabels {
            membership: a.membership.clone(),
            modularity_q: a.modularity_q,
        }
    }
}

/// A co-occurrence graph with optional per-node annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedGraph {
    pub graph: CooccurrenceGraph,
    pub centrality: Option<CentralityScores>,
    pub communities: Option<CommunityLabels>,
}

impl AnnotatedGraph {
    pub fn new(graph: CooccurrenceGraph) -> Self {
        AnnotatedGraph {
            graph,
            centrality: None,
            communities: None,
        }
    }

    pub fn with_centrality(mut self, scores: CentralityScores) -> Result<Self> {
        self.check_cover(scores.scores.len())?;
        self.centrality = Some(scores);
        Ok(self)
    }

    pub fn with_communities(mut self, communities: impl Into<CommunityLabels>) -> Result<Self> {
        let communities = communities.into();
        self.check_cover(communities.membership.len())?;
        self.communities = Some(communities);
        Ok(self)
    }

    fn check_cover(&self, got: usize) -> Result<()> {
        if got != self.graph.node_count() {
            return Err(Error::PartitionSize {
                expected: self.graph.node_count(),
                got,
            });
        }
        Ok(())
    }

    pub(crate) fn betweenness_mode(&self) -> Option<BetweennessMode> {
        self.centrality.as_ref().map(|c| c.mode)
    }
}
