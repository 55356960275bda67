use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BUNDLE: [&str; 12] = [
    "frequencies.csv",
    "wordcloud.svg",
    "trends.csv",
    "trends.svg",
    "entities.csv",
    "graph.graphml",
    "graph.dot",
    "communities.csv",
    "centrality.csv",
    "factors.csv",
    "clusters.csv",
    "report.json",
];

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/praca.txt")
}

fn storychart(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_storychart"))
        .args(args)
        .arg("--output-dir")
        .arg(out)
        .env_remove("STORYCHART_STOPWORDS")
        .output()
        .expect("binary runs")
}

fn stage(name: &str, out: &Path, extra: &[&str]) -> Output {
    let input = fixture();
    let mut args = vec![name, "--input-path", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    storychart(&args, out)
}

fn lines(out: &Path, file: &str) -> Vec<String> {
    fs::read_to_string(out.join(file)).unwrap().lines().map(str::to_owned).collect()
}

#[test]
fn run_writes_the_bundle_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = stage("run", dir, &["--seed", "42"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 12);
    }
    for f in BUNDLE {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn stages_compose_to_the_same_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let (whole, staged) = (tmp.path().join("whole"), tmp.path().join("staged"));
    assert!(stage("run", &whole, &[]).status.success());
    for name in ["freq", "trend", "entities", "graph", "communities", "centrality", "factors"] {
        let out = stage(name, &staged, &[]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    for f in BUNDLE {
        assert_eq!(fs::read(whole.join(f)).unwrap(), fs::read(staged.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn missing_input_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let out = storychart(&["run", "--input-path", "/nonexistent/book.txt"], &out_dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("storychart: "));
    // nothing is written when the run fails
    assert!(!out_dir.join("report.json").exists());
    assert!(BUNDLE.iter().all(|f| !out_dir.join(f).exists()));
}

#[test]
fn stage_without_its_prerequisite_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = stage("communities", tmp.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("graph.graphml"));
}

#[test]
fn bad_flag_value_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = stage("graph", tmp.path(), &["--betweenness-mode", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analysis_failure_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let text = tmp.path().join("plain.txt");
    fs::write(&text, "sem nomes aqui. nada para ver. apenas texto.").unwrap();
    let out = storychart(&["entities", "--input-path", text.to_str().unwrap()], &tmp.path().join("out"));
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn freq_top_limits_rows() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(stage("freq", tmp.path(), &["--top", "20"]).status.success());
    let rows = lines(tmp.path(), "frequencies.csv");
    assert_eq!(rows[0], "term,count");
    assert_eq!(rows.len() - 1, 20);
}

#[test]
fn trend_rows_match_frequencies() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(stage("freq", tmp.path(), &[]).status.success());
    assert!(stage("trend", tmp.path(), &["--terms", "banco,troika,praça", "--segment-count", "8"]).status.success());
    let freq: Vec<(String, usize)> = lines(tmp.path(), "frequencies.csv")[1..]
        .iter()
        .map(|l| {
            let (t, c) = l.rsplit_once(',').unwrap();
            (t.to_owned(), c.parse().unwrap())
        })
        .collect();
    let trends = lines(tmp.path(), "trends.csv");
    assert_eq!(trends[0], "term,total,s1,s2,s3,s4,s5,s6,s7,s8");
    assert_eq!(trends.len(), 4);
    for row in &trends[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        let per_segment: usize = cells[2..].iter().map(|c| c.parse::<usize>().unwrap()).sum();
        let total: usize = cells[1].parse().unwrap();
        let global = freq.iter().find(|(t, _)| t == cells[0]).map_or(0, |f| f.1);
        assert_eq!(per_segment, total, "{row}");
        assert_eq!(total, global, "{row}");
        assert!(total > 0, "{row}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("config.json");
    fs::write(
        &config,
        format!(r#"{{"input_path": {:?}, "freq_top": 5, "segment_count": 4}}"#, fixture().to_str().unwrap()),
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let out = storychart(&["freq", "--config", config.to_str().unwrap(), "--freq-top", "7"], &out_dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out_dir, "frequencies.csv").len(), 8);
    let report: serde_json::Value = serde_json::from_slice(&fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["parameters"]["freq_top"], 7);
    assert_eq!(report["parameters"]["segment_count"], 4);
}

#[test]
fn unknown_config_field_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("config.json");
    fs::write(&config, r#"{"segmentcount": 4}"#).unwrap();
    let out = storychart(&["run", "--config", config.to_str().unwrap()], &tmp.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stopword_env_var_is_used_and_flag_wins() {
    let tmp = tempfile::tempdir().unwrap();
    let stop = tmp.path().join("stop.txt");
    fs::write(&stop, "banco\n").unwrap();
    let empty = tmp.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let input = fixture();
    let run = |out: &Path, flag: Option<&Path>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_storychart"));
        cmd.args(["freq", "--input-path", input.to_str().unwrap(), "--output-dir"])
            .arg(out)
            .env("STORYCHART_STOPWORDS", &stop);
        if let Some(f) = flag {
            cmd.arg("--stopword-path").arg(f);
        }
        assert!(cmd.output().unwrap().status.success());
        lines(out, "frequencies.csv").iter().any(|l| l.starts_with("banco,"))
    };
    assert!(!run(&tmp.path().join("env"), None));
    assert!(run(&tmp.path().join("flag"), Some(&empty)));
}
