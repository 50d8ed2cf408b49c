use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cocite(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocite"))
        .args(args)
        .output()
        .expect("spawn cocite")
}

fn ok(args: &[&str]) -> String {
    let out = cocite(args);
    assert!(
        out.status.success(),
        "cocite {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn fails(args: &[&str]) -> String {
    let out = cocite(args);
    assert!(!out.status.success(), "cocite {args:?} should fail");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn ingest_valid_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let msg = ok(&[
        "ingest",
        s(&fixture("corpus.jsonl")),
        "--index",
        s(&fixture("index.jsonl")),
        "--out",
        s(&out),
    ]);
    assert!(msg.contains("ingested 3 documents"));
    let docs = std::fs::read_to_string(out.join("documents.jsonl")).unwrap();
    assert_eq!(docs.lines().count(), 3);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("validation.json")).unwrap()).unwrap();
    assert_eq!(report["errors"].as_array().unwrap().len(), 0);
    assert_eq!(report["totals"]["reference_match_rate"], 1.0);
}

#[test]
fn undeclared_reference_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let err = fails(&[
        "ingest",
        s(&fixture("undeclared.jsonl")),
        "--index",
        s(&fixture("index.jsonl")),
        "--out",
        s(dir.path()),
    ]);
    assert!(err.contains("BAD1"), "{err}");
    assert!(err.contains("undeclared.jsonl:1"), "{err}");
    assert!(!dir.path().join("documents.jsonl").exists());
}

#[test]
fn skip_invalid_keeps_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let msg = ok(&[
        "ingest",
        s(&fixture("undeclared.jsonl")),
        s(&fixture("corpus.jsonl")),
        "--index",
        s(&fixture("index.jsonl")),
        "--out",
        s(dir.path()),
        "--skip-invalid",
    ]);
    assert!(msg.contains("ingested 3 documents"), "{msg}");
    assert!(msg.contains("1 rejected"), "{msg}");
}

#[test]
fn empty_corpus_directory() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let err = fails(&["ingest", s(&empty), "--index", s(&fixture("index.jsonl")), "--out", s(dir.path())]);
    assert!(err.contains("no documents"), "{err}");
}

#[test]
fn missing_predecessor_names_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let out = s(dir.path());
    assert!(fails(&["pairs", "--out", out]).contains("`ingest`"));
    assert!(fails(&["measures", "--out", out]).contains("`pairs`"));
    assert!(fails(&["report", "--out", out]).contains("`measures`"));
    assert!(fails(&["pr", "--out", out]).contains("`measures`"));
}

#[test]
fn fixture_pairs_and_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = s(dir.path());
    ok(&[
        "run",
        s(&fixture("corpus.jsonl")),
        s(&fixture("article.xml")),
        "--index",
        s(&fixture("index.jsonl")),
        "--out",
        out,
        "--sample-size",
        "3",
    ]);
    let rows = data_rows(&dir.path().join("pairs.csv"));
    assert_eq!(
        rows[0],
        "journal,id_a,id_b,lowest_level,in_article,in_section,in_paragraph,in_sentence,in_bracket"
    );
    let cocited: Vec<&str> = rows[1..]
        .iter()
        .map(String::as_str)
        .filter(|r| !r.contains(",journal,"))
        .collect();
    assert_eq!(
        cocited,
        [
            "Journal A,W1,W2,bracket,1,1,1,1,1",
            "Journal A,W1,W3,paragraph,1,1,1,0,0",
            "Journal A,W1,W4,paragraph,1,1,1,0,0",
            "Journal A,W2,W3,paragraph,1,1,1,0,0",
            "Journal A,W2,W4,paragraph,1,1,1,0,0",
            "Journal A,W3,W4,sentence,1,1,1,1,0",
        ]
    );
    for f in ["measures.csv", "summary.json", "ecdf.csv", "stats.json", "pr.csv"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let measures = data_rows(&dir.path().join("measures.csv"));
    // W3 has no references, so intellectual overlap is undefined
    let w1w3 = measures.iter().find(|r| r.starts_with("Journal A,W1,W3,paragraph")).unwrap();
    assert!(w1w3.contains(",,"), "{w1w3}");
    let w1w2 = measures.iter().find(|r| r.starts_with("Journal A,W1,W2,bracket")).unwrap();
    // shared "Smith A, 2001" over min(2, 1); Abrams J. J. ~ Abrams J. over min(1, 2); Mar 2008 vs spring 2009
    assert!(w1w2.ends_with(",1,1,12"), "{w1w2}");
}

#[test]
fn review_articles_are_excluded_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = std::fs::read_to_string(fixture("corpus.jsonl"))
        .unwrap()
        .replace("\"type\": \"research\"", "\"type\": \"review\"");
    let path = dir.path().join("reviews.jsonl");
    std::fs::write(&path, corpus).unwrap();
    let out = dir.path().join("run");
    ok(&["ingest", s(&path), "--index", s(&fixture("index.jsonl")), "--out", s(&out)]);
    assert!(fails(&["pairs", "--out", s(&out)]).contains("no admitted documents"));
    ok(&["pairs", "--out", s(&out), "--admit", "review"]);
}

fn synth_run(dir: &Path, seed: &str, name: &str) -> PathBuf {
    let input = dir.join("in");
    if !input.exists() {
        ok(&["synth", "--documents", "40", "--dir", s(&input), "--seed", "3"]);
    }
    let out = dir.join(name);
    ok(&[
        "run",
        s(&input.join("corpus.jsonl")),
        "--index",
        s(&input.join("index.jsonl")),
        "--out",
        s(&out),
        "--seed",
        seed,
        "--sample-size",
        "200",
    ]);
    out
}

#[test]
fn reruns_are_byte_identical_and_seeds_only_touch_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let a = synth_run(dir.path(), "11", "a");
    let b = synth_run(dir.path(), "11", "b");
    let c = synth_run(dir.path(), "12", "c");
    for f in ["pairs.csv", "measures.csv", "summary.json", "ecdf.csv", "stats.json", "pr.csv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f} differs between identical runs"
        );
    }
    let cocited = |p: &Path| -> Vec<String> {
        data_rows(&p.join("pairs.csv"))
            .into_iter()
            .filter(|r| !r.contains(",journal,"))
            .collect()
    };
    assert_eq!(cocited(&a), cocited(&c));
    assert_ne!(data_rows(&a.join("pr.csv")), data_rows(&c.join("pr.csv")));
}

#[test]
fn downstream_reruns_leave_upstream_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let out = synth_run(dir.path(), "5", "run");
    let pairs = std::fs::read(out.join("pairs.csv")).unwrap();
    let measures = std::fs::read(out.join("measures.csv")).unwrap();
    std::fs::remove_file(out.join("pr.csv")).unwrap();
    std::fs::remove_file(out.join("summary.json")).unwrap();
    ok(&["report", "--out", s(&out)]);
    ok(&["pr", "--out", s(&out), "--sample-size", "200", "--seed", "5"]);
    assert_eq!(std::fs::read(out.join("pairs.csv")).unwrap(), pairs);
    assert_eq!(std::fs::read(out.join("measures.csv")).unwrap(), measures);
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "corpus = [{:?}]\nindex = {:?}\nout = \"out\"\nseed = 4\npr_sample_size = 2\nmeasures = [\"time_months\"]\nlevels = [\"sentence\"]\n",
            fixture("corpus.jsonl"),
            fixture("index.jsonl")
        ),
    )
    .unwrap();
    ok(&["--config", s(&cfg), "run"]);
    let pr = data_rows(&dir.path().join("out/pr.csv"));
    assert!(pr[1..].iter().all(|r| r.starts_with("Journal A,sentence,time_months,")));
}

#[test]
fn pr_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = synth_run(dir.path(), "8", "run");
    ok(&[
        "pr",
        "--out",
        s(&out),
        "--level",
        "bracket",
        "--measure",
        "intel_overlap",
        "--sample-size",
        "50",
        "--exclude-article-cocited",
    ]);
    let rows = data_rows(&out.join("pr.csv"));
    assert_eq!(rows.len(), 1 + 100);
    assert!(rows.last().unwrap().ends_with(",100,0.5,1"));
    assert!(fails(&["pr", "--out", s(&out), "--measure", "cosine"]).contains("unknown measure"));
}
