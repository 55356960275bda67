use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use storychart::pipeline::{run_pipeline, run_stage, PipelineConfig, Stage, StageError};
use storychart::{BetweennessMode, CooccurrenceUnit};

/// Chart the entities of a Portuguese text: frequencies, trends,
/// co-occurrence network, communities, centrality and factor analysis.
#[derive(Debug, Parser)]
#[command(name = "storychart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every stage and write the full 12-file bundle
    Run(Options),
    /// Term frequencies and word cloud (frequencies.csv, wordcloud.svg)
    Freq(Options),
    /// Per-segment term counts (trends.csv, trends.svg)
    Trend(Options),
    /// Detect or import entity mentions and select entities (entities.csv)
    Entities(Options),
    /// Co-occurrence network of the selected entities (graph.graphml, graph.dot); needs entities.csv
    Graph(Options),
    /// Louvain communities (communities.csv); needs graph.graphml
    Communities(Options),
    /// Betweenness centrality (centrality.csv); needs graph.graphml
    Centrality(Options),
    /// PCA and k-means over entity usage per segment (factors.csv, clusters.csv); needs entities.csv
    Factors(Options),
}

/// Every option overrides the field of the same name in the --config file.
#[derive(Debug, Args)]
struct Options {
    /// JSON configuration file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Plain-text UTF-8 input
    #[arg(long, visible_alias = "input", value_name = "PATH")]
    input_path: Option<PathBuf>,
    /// Directory receiving the result files
    #[arg(long, visible_alias = "output", value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Number of equal token segments [default: 10]
    #[arg(long, value_name = "S")]
    segment_count: Option<usize>,
    /// Stopword list, one word per line [default: bundled Portuguese list]
    #[arg(long, env = "STORYCHART_STOPWORDS", value_name = "PATH")]
    stopword_path: Option<PathBuf>,
    /// JSON object mapping alias to canonical name
    #[arg(long, value_name = "PATH")]
    alias_map_path: Option<PathBuf>,
    /// JSON mention list from an external tagger; replaces the capitalization heuristic
    #[arg(long, value_name = "PATH")]
    mentions_path: Option<PathBuf>,
    /// "sentence" or "window:<tokens>" [default: sentence]
    #[arg(long, value_name = "UNIT")]
    cooccurrence_unit: Option<CooccurrenceUnit>,
    /// Minimum references for an entity to be kept [default: 3]
    #[arg(long, value_name = "N")]
    min_refs: Option<usize>,
    /// Minimum distinct co-occurrence partners [default: 1]
    #[arg(long, value_name = "N")]
    min_interactions: Option<usize>,
    /// Maximum number of entities kept [default: 40]
    #[arg(long, value_name = "N")]
    top_n: Option<usize>,
    /// "unweighted" or "weighted" [default: unweighted]
    #[arg(long, value_name = "MODE")]
    betweenness_mode: Option<BetweennessMode>,
    /// Principal components kept [default: 3]
    #[arg(long, value_name = "K")]
    pca_k: Option<usize>,
    /// k-means clusters [default: 3]
    #[arg(long, value_name = "K")]
    cluster_k: Option<usize>,
    /// Seed for k-means and the word-cloud layout [default: 42]
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Comma-separated terms to chart [default: the 5 most frequent]
    #[arg(long, visible_alias = "terms", value_delimiter = ',', value_name = "TERMS")]
    trend_terms: Option<Vec<String>>,
    /// Rows kept in frequencies.csv [default: all]
    #[arg(long, visible_alias = "top", value_name = "N")]
    freq_top: Option<usize>,
    /// Terms placed in the word cloud [default: 100]
    #[arg(long, value_name = "N")]
    wordcloud_top: Option<usize>,
    /// Fold single-word entities into the only multi-word entity ending in that word
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    auto_merge_surnames: Option<bool>,
}

impl Options {
    fn into_config(self) -> storychart::Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field {
                    cfg.$field = v;
                })*
            };
        }
        apply!(
            input_path,
            output_dir,
            segment_count,
            cooccurrence_unit,
            min_refs,
            min_interactions,
            top_n,
            betweenness_mode,
            pca_k,
            cluster_k,
            seed,
            trend_terms,
            wordcloud_top,
            auto_merge_surnames
        );
        if self.stopword_path.is_some() {
            cfg.stopword_path = self.stopword_path;
        }
        if self.alias_map_path.is_some() {
            cfg.alias_map_path = self.alias_map_path;
        }
        if self.mentions_path.is_some() {
            cfg.mentions_path = self.mentions_path;
        }
        if self.freq_top.is_some() {
            cfg.freq_top = self.freq_top;
        }
        Ok(cfg)
    }
}

fn print_warnings(report: &Value, stage: Option<Stage>) {
    let list = match stage {
        Some(st) => report.get(st.name()).and_then(|s| s.get("warnings")),
        None => report.get("warnings"),
    };
    for w in list.and_then(Value::as_array).into_iter().flatten() {
        if let Some(w) = w.as_str() {
            eprintln!("warning: {w}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stage, options) = match cli.command {
        Command::Run(o) => (None, o),
        Command::Freq(o) => (Some(Stage::Freq), o),
        Command::Trend(o) => (Some(Stage::Trend), o),
        Command::Entities(o) => (Some(Stage::Entities), o),
        Command::Graph(o) => (Some(Stage::Graph), o),
        Command::Communities(o) => (Some(Stage::Communities), o),
        Command::Centrality(o) => (Some(Stage::Centrality), o),
        Command::Factors(o) => (Some(Stage::Factors), o),
    };
    let config = match options.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("storychart: {e}");
            return ExitCode::from(2);
        }
    };
    let result: Result<Value, StageError> = match stage {
        None => run_pipeline(&config),
        Some(st) => run_stage(&config, st),
    };
    match result {
        Ok(report) => {
            print_warnings(&report, stage);
            let files: Vec<&str> = match stage {
                None => storychart::pipeline::BUNDLE_FILES.to_vec(),
                Some(st) => st.outputs().iter().copied().chain(["report.json"]).collect(),
            };
            for f in files {
                println!("{}", config.output_dir.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("storychart: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
