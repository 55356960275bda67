//! Configuration and the staged pipeline.
//!
//! Each stage reads the input text and/or files written by earlier stages
//! and writes its own files into a [`Bundle`]. [`run_pipeline`] runs every
//! stage in order on an in-memory bundle and writes it out only when all of
//! them succeed; [`run_stage`] runs one stage against the files already in
//! the output directory. Both go through the same stage functions, so a
//! bundle built stage by stage equals the one-shot bundle byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::corpus::{
    load_document, term_frequencies, trend_series, Document, StopwordSet, DEFAULT_MIN_TERM_LENGTH,
    DEFAULT_SEGMENT_COUNT,
};
use crate::entities::{
    detect_proper_nouns, import_mentions, interaction_counts, resolve_aliases, select_entities,
    surname_aliases, AliasMap, SelectionThresholds,
};
use crate::error::{Error, Result};
use crate::export::{
    centrality_csv, clusters_csv, communities_csv, entities_csv, export_dot, export_graphml,
    factors_csv, frequency_csv, parse_entities_csv, parse_graphml, render_trend_svg,
    render_wordcloud_svg, trend_csv, AnnotatedGraph,
};
use crate::factors::{build_feature_matrix, kmeans, pca, standardize};
use crate::graph::{
    betweenness_centrality, build_cooccurrence_graph, louvain, BetweennessMode, CooccurrenceUnit,
};

pub const DEFAULT_PCA_K: usize = 3;
pub const DEFAULT_CLUSTER_K: usize = 3;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_WORDCLOUD_TOP: usize = 100;
/// Terms charted when no trend terms are configured.
pub const DEFAULT_TREND_TERM_COUNT: usize = 5;
pub const TREND_WIDTH: u32 = 800;
pub const TREND_HEIGHT: u32 = 400;
pub const REPORT_FILE: &str = "report.json";

/// Every file of a complete bundle.
pub const BUNDLE_FILES: [&str; 12] = [
    "frequencies.csv",
    "wordcloud.svg",
    "trends.csv",
    "trends.svg",
    "entities.csv",
    "graph.graphml",
    "graph.dot",
    "centrality.csv",
    "communities.csv",
    "factors.csv",
    "clusters.csv",
    REPORT_FILE,
];

mod as_string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Run parameters. The JSON form uses these field names; missing fields
/// take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input_path: PathBuf,
    pub output_dir: PathBuf,
    pub segment_count: usize,
    pub stopword_path: Option<PathBuf>,
    pub alias_map_path: Option<PathBuf>,
    /// Mentions from an external tagger; when set, the capitalization
    /// heuristic is not used.
    pub mentions_path: Option<PathBuf>,
    #[serde(with = "as_string")]
    pub cooccurrence_unit: CooccurrenceUnit,
    pub min_refs: usize,
    pub min_interactions: usize,
    pub top_n: usize,
    #[serde(with = "as_string")]
    pub betweenness_mode: BetweennessMode,
    pub pca_k: usize,
    pub cluster_k: usize,
    pub seed: u64,
    /// Empty means the most frequent terms.
    pub trend_terms: Vec<String>,
    /// Row limit of frequencies.csv (all terms when unset).
    pub freq_top: Option<usize>,
    pub wordcloud_top: usize,
    /// Fold single-word entities into the unique multi-word entity sharing
    /// their last word.
    pub auto_merge_surnames: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let thresholds = SelectionThresholds::default();
        PipelineConfig {
            input_path: PathBuf::new(),
            output_dir: PathBuf::from("storychart-out"),
            segment_count: DEFAULT_SEGMENT_COUNT,
            stopword_path: None,
            alias_map_path: None,
            mentions_path: None,
            cooccurrence_unit: CooccurrenceUnit::default(),
            min_refs: thresholds.min_refs,
            min_interactions: thresholds.min_interactions,
            top_n: thresholds.top_n,
            betweenness_mode: BetweennessMode::default(),
            pca_k: DEFAULT_PCA_K,
            cluster_k: DEFAULT_CLUSTER_K,
            seed: DEFAULT_SEED,
            trend_terms: Vec::new(),
            freq_top: None,
            wordcloud_top: DEFAULT_WORDCLOUD_TOP,
            auto_merge_surnames: false,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&bytes).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("segment_count", self.segment_count),
            ("top_n", self.top_n),
            ("pca_k", self.pca_k),
            ("cluster_k", self.cluster_k),
            ("wordcloud_top", self.wordcloud_top),
        ];
        for (name, value) in positive {
            if value == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if self.input_path.as_os_str().is_empty() {
            return Err(Error::Config("input_path is required".into()));
        }
        if let CooccurrenceUnit::Window(0) = self.cooccurrence_unit {
            return Err(Error::Config("co-occurrence window must be at least 1 token".into()));
        }
        Ok(())
    }

    pub fn thresholds(&self) -> SelectionThresholds {
        SelectionThresholds {
            min_refs: self.min_refs,
            min_interactions: self.min_interactions,
            top_n: self.top_n,
        }
    }

    /// The parameters recorded in the report: everything but the output
    /// directory, so a bundle does not depend on where it was written.
    fn report_parameters(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Value::Object(map) = &mut v {
            map.remove("output_dir");
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Freq,
    Trend,
    Entities,
    Graph,
    Communities,
    Centrality,
    Factors,
}

impl Stage {
    /// Pipeline order.
    pub const ALL: [Stage; 7] = [
        Stage::Freq,
        Stage::Trend,
        Stage::Entities,
        Stage::Graph,
        Stage::Communities,
        Stage::Centrality,
        Stage::Factors,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Freq => "freq",
            Stage::Trend => "trend",
            Stage::Entities => "entities",
            Stage::Graph => "graph",
            Stage::Communities => "communities",
            Stage::Centrality => "centrality",
            Stage::Factors => "factors",
        }
    }

    /// Bundle files the stage (re)writes, besides the report.
    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Stage::Freq => &["frequencies.csv", "wordcloud.svg"],
            Stage::Trend => &["trends.csv", "trends.svg"],
            Stage::Entities => &["entities.csv"],
            Stage::Graph => &["graph.graphml", "graph.dot"],
            Stage::Communities => &["communities.csv", "graph.graphml", "graph.dot"],
            Stage::Centrality => &["centrality.csv", "graph.graphml", "graph.dot"],
            Stage::Factors => &["factors.csv", "clusters.csv"],
        }
    }

    /// Bundle files the stage reads.
    pub fn prerequisites(self) -> &'static [&'static str] {
        match self {
            Stage::Graph | Stage::Factors => &["entities.csv"],
            Stage::Communities | Stage::Centrality => &["graph.graphml"],
            _ => &[],
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown stage {s:?}")))
    }
}

/// An error tagged with the stage that raised it (`None` for configuration
/// and bundle I/O outside any stage).
#[derive(Debug, thiserror::Error)]
pub struct StageError {
    pub stage: Option<Stage>,
    #[source]
    pub error: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stage {
            Some(stage) => write!(f, "{stage} stage failed: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

impl StageError {
    fn new(stage: Option<Stage>, error: Error) -> Self {
        StageError { stage, error }
    }

    /// 2 for usage, configuration and I/O problems, 3 for analysis failures.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_usage_error() {
            2
        } else {
            3
        }
    }
}

/// Result files by name. Reads fall back to `dir` for files not produced in
/// this run; only files put during the run are written back.
#[derive(Debug, Clone, Default)]
pub struct Bundle {
    dir: Option<PathBuf>,
    files: BTreeMap<String, Vec<u8>>,
    written: BTreeSet<String>,
}

impl Bundle {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// A bundle backed by the files already in `dir`.
    pub fn on_disk(dir: impl Into<PathBuf>) -> Self {
        Bundle {
            dir: Some(dir.into()),
            ..Self::default()
        }
    }

    /// Contents of `name`, from this run or from disk.
    pub fn get(&mut self, name: &str) -> Result<Option<&[u8]>> {
        if !self.files.contains_key(name) {
            if let Some(dir) = &self.dir {
                let path = dir.join(name);
                match fs::read(&path) {
                    Ok(bytes) => {
                        self.files.insert(name.to_owned(), bytes);
                    }
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
                    Err(e) => return Err(Error::io(path, e)),
                }
            }
        }
        Ok(self.files.get(name).map(Vec::as_slice))
    }

    fn require(&mut self, name: &str) -> Result<Vec<u8>> {
        let missing = self.dir.as_deref().unwrap_or(Path::new("")).join(name);
        self.get(name)?
            .map(<[u8]>::to_vec)
            .ok_or(Error::MissingPrerequisite(missing))
    }

    pub fn put(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.insert(name.to_owned(), bytes);
        self.written.insert(name.to_owned());
    }

    /// Files produced in this run.
    pub fn written(&self) -> impl Iterator<Item = (&str, &[u8])> {
        self.written
            .iter()
            .map(|n| (n.as_str(), self.files[n].as_slice()))
    }

    /// Writes the files produced in this run into `dir`, each through a
    /// temporary file and a rename.
    pub fn commit(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, bytes) in self.written() {
            let path = dir.join(name);
            let tmp = dir.join(format!(".{name}.tmp"));
            fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
            if let Err(e) = fs::rename(&tmp, &path) {
                let _ = fs::remove_file(&tmp);
                return Err(Error::io(path, e));
            }
        }
        Ok(())
    }
}

/// Lazily loaded inputs shared by the stages of one run.
struct Session<'a> {
    config: &'a PipelineConfig,
    document: Option<Document>,
}

impl<'a> Session<'a> {
    fn new(config: &'a PipelineConfig) -> Self {
        Session {
            config,
            document: None,
        }
    }

    fn document(&mut self) -> Result<&Document> {
        if self.document.is_none() {
            let path = &self.config.input_path;
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let stopwords = match &self.config.stopword_path {
                Some(p) => StopwordSet::from_file(p)?,
                None => StopwordSet::portuguese(),
            };
            let doc = load_document(&bytes, self.config.segment_count)?.with_stopwords(&stopwords);
            self.document = Some(doc);
        }
        Ok(self.document.as_ref().expect("just loaded"))
    }
}

/// What a stage contributes to the report.
struct Section {
    body: Map<String, Value>,
    warnings: Vec<String>,
    uses_document: bool,
}

impl Section {
    fn new() -> Self {
        Section {
            body: Map::new(),
            warnings: Vec::new(),
            uses_document: true,
        }
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.body.insert(key.to_owned(), serde_json::to_value(value).expect("serializable"));
    }
}

fn stage_freq(s: &mut Session, bundle: &mut Bundle) -> Result<Section> {
    let cfg = s.config;
    let doc = s.document()?;
    let table = term_frequencies(doc, false, DEFAULT_MIN_TERM_LENGTH);
    bundle.put("frequencies.csv", frequency_csv(&table, cfg.freq_top)?);
    bundle.put("wordcloud.svg", render_wordcloud_svg(&table, cfg.wordcloud_top, cfg.seed)?);

    let mut sec = Section::new();
    sec.set("distinct_terms", table.len());
    sec.set("counted_tokens", table.entries.values().sum::<usize>());
    sec.set(
        "top_terms",
        table.top(10).into_iter().map(|(t, c)| json!([t, c])).collect::<Vec<_>>(),
    );
    sec.set("wordcloud_terms", table.len().min(cfg.wordcloud_top));
    Ok(sec)
}

fn stage_trend(s: &mut Session, bundle: &mut Bundle) -> Result<Section> {
    let cfg = s.config;
    let doc = s.document()?;
    let mut sec = Section::new();
    let terms: Vec<String> = if cfg.trend_terms.is_empty() {
        let table = term_frequencies(doc, false, DEFAULT_MIN_TERM_LENGTH);
        sec.warnings.push(format!(
            "no trend terms given; charting the {DEFAULT_TREND_TERM_COUNT} most frequent terms"
        ));
        table
            .top(DEFAULT_TREND_TERM_COUNT)
            .into_iter()
            .map(|(t, _)| t.to_owned())
            .collect()
    } else {
        cfg.trend_terms.clone()
    };
    let series = trend_series(doc, &terms)?;
    for t in &series.unknown_terms {
        sec.warnings.push(format!("trend term {t:?} does not occur in the text"));
    }
    bundle.put("trends.csv", trend_csv(&series)?);
    bundle.put("trends.svg", render_trend_svg(&series, TREND_WIDTH, TREND_HEIGHT)?);
    sec.set("terms", &series.terms);
    sec.set(
        "totals",
        (0..series.terms.len()).map(|t| series.row_total(t)).collect::<Vec<_>>(),
    );
    sec.set("unknown_terms", &series.unknown_terms);
    Ok(sec)
}

fn stage_entities(s: &mut Session, bundle: &mut Bundle) -> Result<Section> {
    let cfg = s.config;
    let doc = s.document()?;
    let mut sec = Section::new();

    let mut aliases = match &cfg.alias_map_path {
        Some(p) => AliasMap::from_json(&fs::read(p).map_err(|e| Error::io(p, e))?)?,
        None => AliasMap::new(),
    };
    let mentions = match &cfg.mentions_path {
        Some(p) => {
            let import = import_mentions(&fs::read(p).map_err(|e| Error::io(p, e))?, doc)?;
            aliases.extend(&import.aliases)?;
            sec.set("source", "import");
            import.mentions
        }
        None => {
            sec.set("source", "heuristic");
            detect_proper_nouns(doc, None)
        }
    };
    let mut candidates = resolve_aliases(&mentions, &aliases);
    if cfg.auto_merge_surnames {
        let merges = surname_aliases(&candidates);
        for (alias, canonical) in merges.iter() {
            sec.warnings.push(format!("merged {alias:?} into {canonical:?}"));
        }
        aliases.extend(&merges)?;
        candidates = resolve_aliases(&mentions, &aliases);
    }
    let preview = build_cooccurrence_graph(&candidates, doc, cfg.cooccurrence_unit);
    let partners = interaction_counts(&preview);
    let candidate_count = candidates.len();
    let selected = select_entities(candidates.clone(), &preview, cfg.thresholds())?;
    if selected.len() < 2 {
        sec.warnings
            .push("fewer than two entities selected; factor analysis will fail".into());
    }
    bundle.put("entities.csv", entities_csv(&selected, &partners)?);

    sec.set("mentions", mentions.len());
    sec.set("aliases", aliases.len());
    sec.set("candidates", candidate_count);
    sec.set("selected", selected.len());
    sec.set(
        "selected_names",
        selected.iter().map(|e| e.canonical.as_str()).collect::<Vec<_>>(),
    );
    Ok(sec)
}

fn stage_graph(s: &mut Session, bundle: &mut Bundle) -> Result<Section> {
    let cfg = s.config;
    let entities_file = bundle.require("entities.csv")?;
    let doc = s.document()?;
    let entities = parse_entities_csv(&entities_file, doc)?;
    let graph = build_cooccurrence_graph(&entities, doc, cfg.cooccurrence_unit);

    let mut sec = Section::new();
    let isolated = (0..graph.node_count())
        .filter(|&u| graph.neighbors(u).next().is_none())
        .count();
    if graph.edge_count() == 0 {
        sec.warnings.push("the co-occurrence graph has no edges".into());
    }
    sec.set("unit", cfg.cooccurrence_unit.to_string());
    sec.set("nodes", graph.node_count());
    sec.set("edges", graph.edge_count());
    sec.set("total_weight", graph.total_weight());
    sec.set("isolated_nodes", isolated);
    let annotated = AnnotatedGraph::new(graph);
    bundle.put("graph.graphml", export_graphml(&annotated));
    bundle.put("graph.dot", export_dot(&annotated));
    Ok(sec)
}

fn stage_communities(s: &mut Session, bundle: &mut Bundle) -> Result<Section> {
    let annotated = parse_graphml(&bundle.require("graph.graphml")?)?;
    let communities = louvain(&annotated.graph)?;
    bundle.put("communities.csv", communities_csv(&annotated.graph, &communities)?);
    let sizes: Vec<usize> = (0..communities.community_count())
        .map(|c| communities.members(c).len())
        .collect();
    let annotated = annotated.with_communities(&communities)?;
    bundle.put("graph.graphml", export_graphml(&annotated));
    bundle.put("graph.dot", export_dot(&annotated));

    let mut sec = Section::new();
    sec.uses_document = false;
    let _ = s;
    sec.set("count", communities.community_count());
    sec.set("modularity", communities.modularity_q);
    sec.set("pass_modularity", &communities.pass_modularity);
    sec.set("sizes", sizes);
    Ok(sec)
}

fn stage_centrality(s: &mut Session, bundle: &mut Bundle) -> Result<Section> {
    let mode = s.config.betweenness_mode;
    let annotated = parse_graphml(&bundle.require("graph.graphml")?)?;
    let scores = betweenness_centrality(&annotated.graph, mode);
    bundle.put("centrality.csv", centrality_csv(&annotated.graph, &scores)?);

    let mut ranked: Vec<(&str, f64)> = annotated
        .graph
        .nodes()
        .iter()
        .map(|n| (n.label.as_str(), scores.scores[n.id]))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut sec = Section::new();
    sec.uses_document = false;
    sec.set("mode", mode.to_string());
    sec.set(
        "top",
        ranked.iter().take(5).map(|(l, b)| json!([l, b])).collect::<Vec<_>>(),
    );

    let annotated = annotated.clone().with_centrality(scores)?;
    bundle.put("graph.graphml", export_graphml(&annotated));
    bundle.put("graph.dot", export_dot(&annotated));
    Ok(sec)
}

fn stage_factors(s: &mut Session, bundle: &mut Bundle) -> Result<Section> {
    let cfg = s.config;
    let entities_file = bundle.require("entities.csv")?;
    let doc = s.document()?;
    let entities = parse_entities_csv(&entities_file, doc)?;
    let mut sec = Section::new();

    let z = standardize(&build_feature_matrix(&entities, doc)?)?;
    let k = cfg.pca_k.min(z.cols());
    if k < cfg.pca_k {
        sec.warnings.push(format!(
            "pca_k {} exceeds the {} usable segments; keeping {k} components",
            cfg.pca_k,
            z.cols()
        ));
    }
    let model = pca(&z, k)?;
    let clusters_k = cfg.cluster_k.min(z.rows());
    if clusters_k < cfg.cluster_k {
        sec.warnings.push(format!(
            "cluster_k {} exceeds the {} entities; using {clusters_k} clusters",
            cfg.cluster_k,
            z.rows()
        ));
    }
    let clusters = kmeans(&model.scores, clusters_k, cfg.seed)?;
    bundle.put("factors.csv", factors_csv(&model)?);
    bundle.put("clusters.csv", clusters_csv(&model.row_labels, &clusters)?);

    let mut sizes = vec![0usize; clusters_k];
    for &c in &clusters.labels {
        sizes[c] += 1;
    }
    sec.set("components", k);
    sec.set("eigenvalues", &model.eigenvalues);
    sec.set("explained_variance_ratio", &model.explained_variance_ratio);
    sec.set("cumulative_explained", model.cumulative_explained());
    sec.set("dropped_segments", &z.dropped_columns);
    sec.set(
        "clusters",
        json!({
            "k": clusters_k,
            "sizes": sizes,
            "sse": clusters.sse,
            "iterations": clusters.iterations,
            "converged": clusters.converged,
        }),
    );
    Ok(sec)
}

fn execute(stage: Stage, s: &mut Session, bundle: &mut Bundle) -> Result<()> {
    let section = match stage {
        Stage::Freq => stage_freq(s, bundle),
        Stage::Trend => stage_trend(s, bundle),
        Stage::Entities => stage_entities(s, bundle),
        Stage::Graph => stage_graph(s, bundle),
        Stage::Communities => stage_communities(s, bundle),
        Stage::Centrality => stage_centrality(s, bundle),
        Stage::Factors => stage_factors(s, bundle),
    }?;
    update_report(stage, section, s, bundle)
}

fn update_report(stage: Stage, section: Section, s: &mut Session, bundle: &mut Bundle) -> Result<()> {
    let mut report = match bundle.get(REPORT_FILE)? {
        Some(bytes) => match serde_json::from_slice::<Value>(bytes) {
            Ok(Value::Object(map)) => map,
            _ => Map::new(),
        },
        None => Map::new(),
    };
    report.insert("parameters".into(), s.config.report_parameters());
    if section.uses_document {
        let doc = s.document()?;
        report.insert(
            "input".into(),
            json!({
                "characters": doc.char_len(),
                "sentences": doc.sentences().len(),
                "tokens": doc.tokens().len(),
                "words": doc.tokens().iter().filter(|t| t.is_word()).count(),
                "segments": doc.segment_count(),
            }),
        );
    }
    let mut body = section.body;
    body.insert("warnings".into(), json!(section.warnings));
    report.insert(stage.name().into(), Value::Object(body));

    let mut warnings = Vec::new();
    for st in Stage::ALL {
        if let Some(list) = report.get(st.name()).and_then(|v| v.get("warnings")).and_then(Value::as_array) {
            warnings.extend(list.iter().filter_map(Value::as_str).map(|w| format!("{st}: {w}")));
        }
    }
    report.insert("warnings".into(), json!(warnings));

    let mut bytes = serde_json::to_vec_pretty(&Value::Object(report)).expect("report serializes");
    bytes.push(b'\n');
    bundle.put(REPORT_FILE, bytes);
    Ok(())
}

/// Runs every stage in memory and, when all succeed, writes the 12-file
/// bundle into `config.output_dir`. Returns the report.
pub fn run_pipeline(config: &PipelineConfig) -> std::result::Result<Value, StageError> {
    let bundle = build_bundle(config)?;
    bundle
        .commit(&config.output_dir)
        .map_err(|e| StageError::new(None, e))?;
    Ok(report_of(&bundle))
}

/// The full bundle, without touching the output directory.
pub fn build_bundle(config: &PipelineConfig) -> std::result::Result<Bundle, StageError> {
    config.validate().map_err(|e| StageError::new(None, e))?;
    let mut session = Session::new(config);
    let mut bundle = Bundle::in_memory();
    for stage in Stage::ALL {
        execute(stage, &mut session, &mut bundle).map_err(|e| StageError::new(Some(stage), e))?;
    }
    Ok(bundle)
}

/// Runs one stage against the files already in `config.output_dir` and
/// writes its outputs there. Returns the updated report.
pub fn run_stage(config: &PipelineConfig, stage: Stage) -> std::result::Result<Value, StageError> {
    config.validate().map_err(|e| StageError::new(None, e))?;
    let mut session = Session::new(config);
    let mut bundle = Bundle::on_disk(&config.output_dir);
    execute(stage, &mut session, &mut bundle).map_err(|e| StageError::new(Some(stage), e))?;
    bundle
        .commit(&config.output_dir)
        .map_err(|e| StageError::new(Some(stage), e))?;
    Ok(report_of(&bundle))
}

fn report_of(bundle: &Bundle) -> Value {
    bundle
        .files
        .get(REPORT_FILE)
        .and_then(|b| serde_json::from_slice(b).ok())
        .unwrap_or(Value::Null)
}
