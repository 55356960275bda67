//! Story charting for plain-text books.
//!
//! The crate turns a text into a set of analyses that together chart the
//! story it tells:
//!
//! - [`corpus`]: sentence splitting, tokenization, stopword marking, term
//!   frequencies and per-segment term trends.
//! - [`entities`]: proper-noun detection (heuristic or imported from an
//!   external tagger), alias resolution and selection of the entities worth
//!   charting.
//! - [`graph`]: the weighted entity co-occurrence network, betweenness
//!   centrality, modularity and Louvain communities.
//! - [`factors`]: entity × segment usage matrix, correlation PCA and k-means
//!   clustering in factor space.
//! - [`export`]: GraphML, DOT, CSV and SVG writers.
//! - [`pipeline`]: configuration and the staged pipeline that writes the full
//!   result bundle.
//!
//! Every operation is a deterministic function of its inputs (and seed, where
//! one is taken), so the same text and configuration always produce a
//! byte-identical bundle.

#![forbid(unsafe_code)]

pub mod corpus;
pub mod entities;
pub mod error;
pub mod export;
pub mod factors;
pub mod graph;
pub mod pipeline;
pub mod rng;

pub use corpus::{
    load_document, remove_stopwords, split_sentences, term_frequencies, tokenize, trend_series,
    Document, FrequencyTable, Span, StopwordSet, Token, TrendSeries,
};
pub use entities::{
    detect_proper_nouns, import_mentions, resolve_aliases, select_entities, AliasMap, Entity,
    EntityMention, SelectionThresholds,
};
pub use error::{Error, Result};
pub use export::{
    export_dot, export_graphml, parse_graphml, render_trend_svg, render_wordcloud_svg,
    AnnotatedGraph, CommunityLabels,
};
pub use factors::{
    build_feature_matrix, kmeans, pca, standardize, ClusterAssignment, FactorModel, FeatureMatrix,
    Matrix,
};
pub use graph::{
    betweenness_centrality, build_cooccurrence_graph, louvain, modularity, BetweennessMode,
    CentralityScores, CommunityAssignment, CooccurrenceGraph, CooccurrenceUnit,
};
pub use pipeline::{run_pipeline, PipelineConfig, Stage};
