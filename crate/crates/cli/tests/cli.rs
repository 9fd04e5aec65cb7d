use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const JANE_DOE: &str = r#"{"text":"Jane Doe sleeps .","tokens":[{"form":"Jane","ws":true,"lemma":"jane","upos":"PROPN","head":2,"deprel":"nsubj"},{"form":"Doe","ws":true,"lemma":"doe","upos":"PROPN","head":0,"deprel":"flat"},{"form":"sleeps","ws":true,"lemma":"sleep","upos":"VERB","head":null,"deprel":"root"},{"form":".","ws":false,"lemma":".","upos":"PUNCT","head":2,"deprel":"punct"}],"sents":[[0,4]],"ents":[{"start":0,"end":2,"label":"PER"}]}
"#;

const OVERLAPPING: &str = r#"{"text":"Jane Doe","tokens":[{"form":"Jane","ws":true,"lemma":"jane","upos":"PROPN","head":null,"deprel":"root"},{"form":"Doe","ws":false,"lemma":"doe","upos":"PROPN","head":0,"deprel":"flat"}],"sents":[[0,2]],"ents":[{"start":0,"end":2,"label":"PER"},{"start":1,"end":2,"label":"PER"}]}
"#;

fn golden() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/golden.jsonl")
}

fn resources() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/resources")
}

fn textaug(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_textaug"));
    for a in args {
        cmd.arg(a);
    }
    cmd.output().expect("run textaug")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn augment(input: &Path, pipeline: &Path, output: &Path, extra: &[&str]) -> Output {
    let mut args: Vec<&dyn AsRef<std::ffi::OsStr>> = vec![
        &"augment",
        &"--input",
        &input,
        &"--pipeline",
        &pipeline,
        &"--output",
        &output,
    ];
    for e in extra {
        args.push(e);
    }
    textaug(&args)
}

#[test]
fn per_doc_zero_echoes_canonical_input() {
    let dir = TempDir::new().unwrap();
    let pipeline = write(
        &dir,
        "p.json",
        r#"{"per_doc":{"p":0,"inner":{"aug":"casing","level":1,"mode":"upper"}}}"#,
    );
    let out = dir.path().join("out.jsonl");
    let result = augment(&golden(), &pipeline, &out, &[]);
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    assert_eq!(fs::read(&out).unwrap(), fs::read(golden()).unwrap());
}

#[test]
fn output_goes_to_stdout_by_default() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", JANE_DOE);
    let pipeline = write(&dir, "p.json", r#"{"combine":[]}"#);
    let result = textaug(&[&"augment", &"--input", &input, &"--pipeline", &pipeline]);
    assert_eq!(result.status.code(), Some(0));
    assert_eq!(String::from_utf8(result.stdout).unwrap(), JANE_DOE);
}

#[test]
fn entity_replace_with_resources_and_stats() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", JANE_DOE);
    let pipeline = write(
        &dir,
        "p.json",
        r#"{"aug":"entity_replace","level":1.0,"names":"names_en"}"#,
    );
    let out = dir.path().join("out.jsonl");
    let stats = dir.path().join("stats.json");
    let res = resources();
    let result = augment(
        &input,
        &pipeline,
        &out,
        &[
            "--resources",
            res.to_str().unwrap(),
            "--stats",
            stats.to_str().unwrap(),
        ],
    );
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["ents"][0]["label"], "PER");
    assert_ne!(doc["text"], "Jane Doe sleeps .");

    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    let keys: Vec<&str> = stats
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    for key in [
        "docs_in",
        "docs_out",
        "docs_modified",
        "tokens_modified",
        "spans_dropped",
        "spans_skipped",
        "applications",
    ] {
        assert!(keys.contains(&key), "missing {}", key);
    }
    assert_eq!(stats["docs_in"], 1);
    assert_eq!(stats["docs_modified"], 1);
    assert_eq!(stats["applications"]["entity_replace"], 1);
}

#[test]
fn converts_to_conllu() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", JANE_DOE);
    let pipeline = write(&dir, "p.json", r#"{"combine":[]}"#);
    let out = dir.path().join("out.conllu");
    let result = augment(&input, &pipeline, &out, &["--output-format", "conllu"]);
    assert!(result.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with(
        "# newdoc\n# text = Jane Doe sleeps .\n1\tJane\tjane\tPROPN\t_\t_\t3\tnsubj\t_\t_\n"
    ));
}

#[test]
fn missing_layout_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", JANE_DOE);
    let pipeline = write(
        &dir,
        "p.json",
        r#"{"aug":"keystroke_error","level":0.1,"layout":"dvorak"}"#,
    );
    let out = dir.path().join("out.jsonl");
    let res = resources();
    let result = augment(
        &input,
        &pipeline,
        &out,
        &["--resources", res.to_str().unwrap()],
    );
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("UNKNOWN_RESOURCE"));
    assert!(!out.exists());
}

#[test]
fn missing_resource_dir_exits_2() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", JANE_DOE);
    let pipeline = write(&dir, "p.json", r#"{"combine":[]}"#);
    let out = dir.path().join("out.jsonl");
    let result = augment(
        &input,
        &pipeline,
        &out,
        &["--resources", "/nonexistent/resources"],
    );
    assert_eq!(result.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn malformed_resource_exits_2() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", JANE_DOE);
    write(&dir, "bad.vec", "2 3\ncat 1 0 0\ndog 1 0\n");
    let pipeline = write(
        &dir,
        "p.json",
        r#"{"aug":"embedding_replace","level":1,"embeddings":"bad","k":2}"#,
    );
    let out = dir.path().join("out.jsonl");
    let result = augment(
        &input,
        &pipeline,
        &out,
        &["--resources", dir.path().to_str().unwrap()],
    );
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("DIM_MISMATCH"));
    assert!(!out.exists());
}

#[test]
fn invalid_input_exits_1_and_keeps_existing_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", OVERLAPPING);
    let pipeline = write(&dir, "p.json", r#"{"combine":[]}"#);
    let out = write(&dir, "out.jsonl", "previous\n");
    let result = augment(&input, &pipeline, &out, &[]);
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(
        stderr.contains("document 0") && stderr.contains("SPAN_OVERLAP"),
        "{}",
        stderr
    );
    assert_eq!(fs::read_to_string(&out).unwrap(), "previous\n");
}

#[test]
fn bad_pipeline_config_exits_1() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", JANE_DOE);
    let out = dir.path().join("out.jsonl");
    for config in [
        "{not json",
        r#"{"aug":"teleport","level":0.1}"#,
        r#"{"aug":"char_swap","level":1.5}"#,
        r#"{"repeat":{"n":0,"inner":{"combine":[]}}}"#,
    ] {
        let pipeline = write(&dir, "p.json", config);
        let result = augment(&input, &pipeline, &out, &[]);
        assert_eq!(result.status.code(), Some(1), "{}", config);
        assert!(!out.exists());
    }
}

#[test]
fn unparseable_conllu_reports_line() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "in.conllu",
        "1\tA\ta\tX\t_\t_\t0\troot\t_\t_\n1-2\tdu\t_\t_\t_\t_\t_\t_\t_\t_\n",
    );
    let pipeline = write(&dir, "p.json", r#"{"combine":[]}"#);
    let out = dir.path().join("out.conllu");
    let result = augment(&input, &pipeline, &out, &[]);
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(
        stderr.contains("UNSUPPORTED_MWT") && stderr.contains("line 2"),
        "{}",
        stderr
    );
}

#[test]
fn validate_reports() {
    let dir = TempDir::new().unwrap();
    let ok = textaug(&[&"validate", &"--input", &golden()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "OK 100 docs\n");

    let bad = write(&dir, "bad.jsonl", &format!("{}{}", JANE_DOE, OVERLAPPING));
    let result = textaug(&[&"validate", &"--input", &bad]);
    assert_eq!(result.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("doc 1: SPAN_OVERLAP"), "{}", stdout);
    assert!(!stdout.contains("doc 0"));

    let empty = write(&dir, "empty.conllu", "");
    let result = textaug(&[&"validate", &"--input", &empty]);
    assert_eq!(result.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&result.stdout), "OK 0 docs\n");
}

#[test]
fn stats_counts() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.jsonl", JANE_DOE);
    let result = textaug(&[&"stats", &"--input", &input]);
    assert_eq!(result.status.code(), Some(0));
    let stats: serde_json::Value = serde_json::from_slice(&result.stdout).unwrap();
    assert_eq!(
        stats,
        serde_json::json!({"docs": 1, "sentences": 1, "tokens": 4, "ents": {"PER": 1}})
    );

    let empty = write(&dir, "empty.jsonl", "");
    let result = textaug(&[&"stats", &"--input", &empty]);
    let stats: serde_json::Value = serde_json::from_slice(&result.stdout).unwrap();
    assert_eq!(
        stats,
        serde_json::json!({"docs": 0, "sentences": 0, "tokens": 0, "ents": {}})
    );

    let result = textaug(&[&"stats", &"--input", &dir.path().join("missing.jsonl")]);
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn unknown_extension_needs_format_flag() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "corpus.txt", JANE_DOE);
    assert_eq!(
        textaug(&[&"stats", &"--input", &input]).status.code(),
        Some(1)
    );
    let result = textaug(&[&"stats", &"--input", &input, &"--input-format", &"jsonl"]);
    assert_eq!(result.status.code(), Some(0));
}
