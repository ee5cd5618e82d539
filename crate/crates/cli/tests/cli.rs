use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn snex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snex")).args(args).env_remove("SNEX_CONFIG").output().expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ingest_writes_manifest_with_stable_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fixtures().join("five_names/corpus.jsonl");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let ma: Value = serde_json::from_str(&ok(&snex(&["ingest", s(&corpus), "--out", s(&a)]))).unwrap();
    let mb: Value = serde_json::from_str(&ok(&snex(&["ingest", s(&corpus), "--out", s(&b)]))).unwrap();
    assert_eq!(ma["documents"], 539);
    assert_eq!(ma["checksum"], mb["checksum"]);
    assert!(a.join("corpus.json").is_file());
    // re-ingesting the artifact keeps the documents
    let c = dir.path().join("c");
    let mc: Value = serde_json::from_str(&ok(&snex(&["ingest", s(&a), "--out", s(&c)]))).unwrap();
    assert_eq!(mc["checksum"], ma["checksum"]);
}

#[test]
fn ingest_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let m: Value = serde_json::from_str(&ok(&snex(&["ingest", s(&empty), "--out", s(&dir.path().join("out"))]))).unwrap();
    assert_eq!(m["documents"], 0);
}

#[test]
fn missing_input_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = snex(&["ingest", s(&dir.path().join("nope.jsonl")), "--out", s(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn extract_srs_writes_graph_and_scores() {
    let dir = tempfile::tempdir().unwrap();
    let root = fixtures().join("five_names");
    let graph = dir.path().join("g.json");
    let scores = dir.path().join("scores.csv");
    ok(&snex(&[
        "extract",
        "--corpus",
        s(&root.join("corpus.jsonl")),
        "--seeds",
        s(&root.join("seeds.txt")),
        "--method",
        "srs",
        "--out",
        s(&graph),
        "--scores",
        s(&scores),
    ]));
    let g: Value = serde_json::from_str(&fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(g["nodes"].as_array().unwrap().len(), 5);
    let csv = fs::read_to_string(&scores).unwrap();
    assert_eq!(csv.lines().count(), 1 + 10, "{csv}");

    let report = ok(&snex(&["evaluate", s(&graph), s(&root.join("benchmark.tsv")), "--format", "json"]));
    let r: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(r["comparison"]["precision"], 1.0);
    assert_eq!(r["comparison"]["recall"], 1.0);

    let cov = ok(&snex(&["evaluate", s(&graph), s(&graph), "--scores", s(&scores), "--format", "json"]));
    let c: Value = serde_json::from_str(&cov).unwrap();
    assert_eq!(c["coverage"][0]["potential_pairs"], 10);
}

#[test]
fn extract_ars_from_records() {
    let dir = tempfile::tempdir().unwrap();
    let root = fixtures().join("dblp");
    let graph = dir.path().join("g.tsv");
    ok(&snex(&[
        "extract",
        "--seeds",
        s(&root.join("seeds.txt")),
        "--method",
        "ars",
        "--records",
        s(&root.join("records.bib")),
        "--out",
        s(&graph),
    ]));
    let r: Value = serde_json::from_str(&ok(&snex(&[
        "evaluate",
        s(&graph),
        s(&root.join("benchmark.tsv")),
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(r["comparison"]["shared_edges"], 253);
    assert_eq!(r["comparison"]["f_measure"], 1.0);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("seeds.txt");
    fs::write(&empty, "# nobody\n").unwrap();
    let corpus = fixtures().join("five_names/corpus.jsonl");
    let out = snex(&["extract", "--corpus", s(&corpus), "--seeds", s(&empty)]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let out = snex(&["extract", "--seeds", s(&fixtures().join("dblp/seeds.txt")), "--method", "ars"]);
    assert_eq!(out.status.code(), Some(2));
    let out = snex(&["extract", "--method", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_benchmark_gives_undefined_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.tsv");
    fs::write(&empty, "").unwrap();
    let bench = fixtures().join("five_names/benchmark.tsv");
    let r: Value = serde_json::from_str(&ok(&snex(&["evaluate", s(&bench), s(&empty), "--format", "json"]))).unwrap();
    assert_eq!(r["comparison"]["shared_edges"], 0);
    assert!(r["comparison"]["recall"].is_null());
    assert!(r["comparison"]["f_measure"].is_null());
    let csv = ok(&snex(&["evaluate", s(&bench), s(&empty), "--format", "csv"]));
    assert!(csv.lines().nth(1).unwrap().ends_with(','), "{csv}");
}

#[test]
fn keywords_for_present_and_absent_actors() {
    let corpus = fixtures().join("five_names/corpus.jsonl");
    let csv = ok(&snex(&["keywords", "--corpus", s(&corpus), "--actor", "Amin Mohd Zaki"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("actor,rank,word,tfidf,hit_fraction,delta"));
    assert!(lines.next().unwrap().starts_with("Amin Mohd Zaki,1,"));

    let csv = ok(&snex(&["keywords", "--corpus", s(&corpus), "--actor", "Nobody Here At All"]));
    assert_eq!(csv.lines().count(), 1);
    let out = snex(&["keywords", "--corpus", s(&corpus)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_config_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let root = fixtures().join("five_names");
    fs::copy(root.join("seeds.txt"), dir.path().join("seeds.txt")).unwrap();
    fs::copy(root.join("corpus.jsonl"), dir.path().join("corpus.jsonl")).unwrap();
    let config = dir.path().join("run.toml");
    // relative paths resolve against the config's directory; alpha 2 admits nothing
    fs::write(&config, "corpus = \"corpus.jsonl\"\nseeds = \"seeds.txt\"\nmethod = \"SRS\"\n[alpha]\nsrs = 2.0\n").unwrap();

    let edges = |out: &Output| ok(out).lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count();
    let via_flag = snex(&["--config", s(&config), "extract", "--format", "edgelist"]);
    assert_eq!(edges(&via_flag), 0);
    let via_env = Command::new(env!("CARGO_BIN_EXE_snex"))
        .args(["extract", "--format", "edgelist"])
        .env("SNEX_CONFIG", &config)
        .output()
        .unwrap();
    assert_eq!(edges(&via_env), 0);
    let overridden = snex(&["--config", s(&config), "extract", "--format", "edgelist", "--alpha", "0.001"]);
    assert_eq!(edges(&overridden), 6);

    fs::write(&config, "bogus_key = 1\n").unwrap();
    assert_eq!(snex(&["--config", s(&config), "extract"]).status.code(), Some(2));
}
