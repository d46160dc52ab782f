//! Black-box tests of the `eat` binary: flag parsing, exit codes, and the
//! files each subcommand leaves behind. Everything runs off the committed
//! fixture stores; no network, no credentials.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

/// The binary with chat credentials scrubbed, so a test can never
/// accidentally talk to a live endpoint.
fn eat() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eat"));
    cmd.env_remove("EAT_API_BASE").env_remove("EAT_API_KEY").env_remove("EAT_WIKI_UA");
    cmd
}

fn run_ok(cmd: &mut Command) -> Output {
    let output = cmd.output().expect("binary spawns");
    assert!(
        output.status.success(),
        "expected success, got {:?}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn exit_code(cmd: &mut Command) -> (i32, String) {
    let output = cmd.output().expect("binary spawns");
    (output.status.code().expect("no signal"), String::from_utf8_lossy(&output.stderr).into_owned())
}

fn replay_run(out: &Path, parallelism: &str) -> Output {
    run_ok(eat()
        .arg("run")
        .args(["--input", fixture("e2e/zh_10.bio").to_str().unwrap()])
        .args(["--lang", "zh"])
        .args(["--backend", "replay"])
        .args(["--fixtures", fixture("e2e/store").to_str().unwrap()])
        .args(["--out", out.to_str().unwrap()])
        .args(["--parallelism", parallelism]))
}

#[test]
fn replay_run_writes_all_artifacts_and_reproduces_gold() {
    let dir = tempfile::tempdir().unwrap();
    let output = replay_run(dir.path(), "4");

    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout, "sentences\t10\nfailures\t0\ndropped\t0\n");

    // The scripted fixtures predict every gold tag, so predictions render
    // byte-identically to the input file.
    let predictions = std::fs::read(dir.path().join("predictions.bio")).unwrap();
    assert_eq!(predictions, std::fs::read(fixture("e2e/zh_10.bio")).unwrap());
    assert_eq!(std::fs::read(dir.path().join("dropped.tsv")).unwrap(), b"");

    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["language"], "zh");
    assert_eq!(manifest["backend_id"], "mock-llm");
    assert_eq!(manifest["sentences"], 10);
    assert_eq!(manifest["failures"], 0);
}

#[test]
fn replay_run_is_byte_identical_across_parallelism() {
    let one = tempfile::tempdir().unwrap();
    let eight = tempfile::tempdir().unwrap();
    replay_run(one.path(), "1");
    replay_run(eight.path(), "8");
    for name in ["predictions.bio", "dropped.tsv"] {
        assert_eq!(
            std::fs::read(one.path().join(name)).unwrap(),
            std::fs::read(eight.path().join(name)).unwrap(),
            "{name} differs between parallelism 1 and 8"
        );
    }
}

#[test]
fn missing_fixture_dir_in_replay_mode_is_a_config_error() {
    let (code, stderr) = exit_code(eat()
        .arg("run")
        .args(["--input", fixture("e2e/zh_10.bio").to_str().unwrap()])
        .args(["--lang", "zh"])
        .args(["--backend", "replay"])
        .args(["--fixtures", "/nonexistent/store"]));
    assert_eq!(code, 1, "{stderr}");
}

#[test]
fn rounds_zero_is_a_config_error() {
    let (code, stderr) = exit_code(eat()
        .arg("run")
        .args(["--input", fixture("e2e/zh_10.bio").to_str().unwrap()])
        .args(["--lang", "zh"])
        .args(["--backend", "replay"])
        .args(["--fixtures", fixture("e2e/store").to_str().unwrap()])
        .args(["--rounds", "0"]));
    assert_eq!(code, 1);
    assert!(stderr.contains("--rounds"), "{stderr}");
}

#[test]
fn replay_miss_aborts_with_the_digest_and_exit_3() {
    let empty = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let (code, stderr) = exit_code(eat()
        .arg("run")
        .args(["--input", fixture("e2e/zh_10.bio").to_str().unwrap()])
        .args(["--lang", "zh"])
        .args(["--backend", "replay"])
        .args(["--fixtures", empty.path().to_str().unwrap()])
        .args(["--out", out.path().to_str().unwrap()]));
    assert_eq!(code, 3, "{stderr}");
    assert!(stderr.contains("digest"), "{stderr}");
}

#[test]
fn live_modes_without_credentials_are_config_errors() {
    let store = tempfile::tempdir().unwrap();
    for subcommand in [vec!["run"], vec!["record"]] {
        let mut cmd = eat();
        cmd.args(&subcommand)
            .args(["--input", fixture("e2e/zh_10.bio").to_str().unwrap()])
            .args(["--lang", "zh"])
            .args(["--fixtures", store.path().to_str().unwrap()]);
        let (code, stderr) = exit_code(&mut cmd);
        assert_eq!(code, 1, "{subcommand:?}: {stderr}");
        assert!(stderr.contains("EAT_API_BASE"), "{stderr}");
    }
}

#[test]
fn eval_identical_files_score_one() {
    let gold = fixture("e2e/zh_10.bio");
    let output = run_ok(eat()
        .arg("eval")
        .arg(&gold)
        .arg(&gold)
        .args(["--lang", "zh"]));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["f1"], 1.0);
    assert_eq!(report["fp"], 0);
}

#[test]
fn eval_reports_the_hand_computed_mixed_case() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.bio");
    let pred = dir.path().join("pred.bio");
    std::fs::write(&gold, "w1\tB-PER\nw2\tI-PER\nw3\tO\nw4\tB-LOC\n\n").unwrap();
    std::fs::write(&pred, "w1\tB-PER\nw2\tO\nw3\tO\nw4\tB-ORG\n\n").unwrap();
    let output = run_ok(eat().arg("eval").arg(&gold).arg(&pred));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["tp"], 1);
    assert_eq!(report["fp"], 1);
    assert_eq!(report["fn"], 2);
    assert_eq!(report["f1"], 0.4);
}

#[test]
fn eval_token_count_mismatch_names_the_sentence_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.bio");
    let pred = dir.path().join("pred.bio");
    std::fs::write(&gold, "a\tO\n\nb\tO\nc\tO\n\n").unwrap();
    std::fs::write(&pred, "a\tO\n\nb\tO\n\n").unwrap();
    let (code, stderr) = exit_code(eat().arg("eval").arg(&gold).arg(&pred));
    assert_eq!(code, 2);
    assert!(stderr.contains('1'), "should name sentence 1: {stderr}");
}

#[test]
fn translate_metrics_reports_the_frozen_pair_and_the_mean() {
    let dir = tempfile::tempdir().unwrap();
    let orig = dir.path().join("orig.txt");
    let rt = dir.path().join("rt.txt");
    std::fs::write(&orig, "the cat sat on the mat\n").unwrap();
    std::fs::write(&rt, "the cat sat on mat\n").unwrap();
    let output = run_ok(eat().arg("translate-metrics").arg(&orig).arg(&rt));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "line\tbleu\tentropy_loss");
    assert_eq!(lines[1], "1\t0.578930\t1.000000");
    assert_eq!(lines[2], "mean\t0.578930\t1.000000");
}

#[test]
fn translate_metrics_chars_mode_tokenizes_unspaced_text() {
    let dir = tempfile::tempdir().unwrap();
    let orig = dir.path().join("orig.txt");
    std::fs::write(&orig, "北京天气很好\n").unwrap();
    // Without --chars the line is a single token (BLEU needs 4-grams and
    // scores 0); per-character it is a perfect match.
    let spaced = run_ok(eat().arg("translate-metrics").arg(&orig).arg(&orig));
    assert!(String::from_utf8(spaced.stdout).unwrap().contains("1\t0.000000"));
    let chars = run_ok(eat().arg("translate-metrics").arg(&orig).arg(&orig).arg("--chars"));
    let stdout = String::from_utf8(chars.stdout).unwrap();
    assert!(stdout.contains("1\t1.000000\t1.000000"), "{stdout}");
}

#[test]
fn translate_metrics_line_count_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let orig = dir.path().join("orig.txt");
    let rt = dir.path().join("rt.txt");
    std::fs::write(&orig, "one line\n").unwrap();
    std::fs::write(&rt, "one line\nand another\n").unwrap();
    let (code, stderr) = exit_code(eat().arg("translate-metrics").arg(&orig).arg(&rt));
    assert_eq!(code, 2);
    assert!(stderr.contains("lines"), "{stderr}");
}

fn build_eacl(entities: &Path, out: &Path) -> Command {
    let mut cmd = eat();
    cmd.arg("build-eacl")
        .args(["--entities", entities.to_str().unwrap()])
        .args(["--langs", "ja,zh"])
        .args(["--backend", "replay"])
        .args(["--fixtures", fixture("wiki/store").to_str().unwrap()])
        .args(["--out", out.to_str().unwrap()]);
    cmd
}

#[test]
fn build_eacl_replay_writes_sharegpt_files_and_counts() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_ok(&mut build_eacl(&fixture("wiki/entities.txt"), dir.path()));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout, "ja\t1\nzh\t2\nfailed\t0\n");

    let counts: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("counts.json")).unwrap()).unwrap();
    assert_eq!(counts["ja"], 1);
    assert_eq!(counts["zh"], 2);

    let ja = std::fs::read_to_string(dir.path().join("eacl_ja.json")).unwrap();
    assert!(ja.contains("ドイツ"), "{ja}");
    let zh = std::fs::read_to_string(dir.path().join("eacl_zh.json")).unwrap();
    assert!(zh.contains("德国") && zh.contains("欧洲"), "{zh}");
}

#[test]
fn build_eacl_empty_entity_file_succeeds_with_empty_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let entities = dir.path().join("none.txt");
    std::fs::write(&entities, "").unwrap();
    let out = dir.path().join("out");
    run_ok(&mut build_eacl(&entities, &out));
    let counts: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("counts.json")).unwrap()).unwrap();
    assert_eq!(counts["ja"], 0);
    assert_eq!(counts["zh"], 0);
}

#[test]
fn build_eacl_unrecorded_entity_yields_partial_output_and_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let entities = dir.path().join("entities.txt");
    std::fs::write(&entities, "Germany\nAtlantis\n").unwrap();
    let out = dir.path().join("out");
    let (code, stderr) = exit_code(&mut build_eacl(&entities, &out));
    assert_eq!(code, 4, "{stderr}");
    assert!(stderr.contains("Atlantis"), "{stderr}");
    // Partial output still lands on disk.
    let counts: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("counts.json")).unwrap()).unwrap();
    assert_eq!(counts["ja"], 1);
}

#[test]
fn help_version_and_usage_errors_have_the_documented_exit_codes() {
    assert_eq!(exit_code(eat().arg("--help")).0, 0);
    assert_eq!(exit_code(eat().arg("--version")).0, 0);
    assert_eq!(exit_code(eat().args(["run", "--help"])).0, 0);
    assert_eq!(exit_code(eat().args(["run", "--frobnicate"])).0, 1);
    assert_eq!(exit_code(eat().arg("no-such-subcommand")).0, 1);
    assert_eq!(exit_code(&mut eat()).0, 1, "no subcommand is a usage error");
}
