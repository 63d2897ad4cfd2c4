//! End-to-end command tests: documented exit codes, stable text output, and
//! JSON payloads that match the shipped schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const H: &str = "abcabacbcabcbabcabacbcabc";
const N: &str = "abacbabcabacbcacbabcabacabcbabcabacbcabcb";

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn sqfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqfree"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn json(output: &Output) -> Value {
    serde_json::from_str(&stdout(output)).expect("stdout is valid json")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn check_extremal_word_exits_zero() {
    let out = sqfree(&["check", H]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("EXTREMAL"));
}

#[test]
fn check_square_exits_one_with_witness() {
    let out = sqfree(&["check", "aa"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("square at 0"));
}

#[test]
fn check_nearly_extremal_lists_extensions() {
    let out = sqfree(&["check", N]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("NEARLY_EXTREMAL"));
    assert!(text.contains("0:c 41:a"));
}

#[test]
fn check_rejects_bad_symbols_with_forced_alphabet() {
    let out = sqfree(&["check", "abd", "-k", "3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn check_json_matches_schema() {
    let out = sqfree(&["check", N, "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let value = json(&out);
    assert_schema_keys(
        &value,
        &["word", "length", "square_free", "status", "extensions"],
        &["square"],
    );
    assert_eq!(value["status"], "NEARLY_EXTREMAL");
    assert_eq!(value["extensions"][0]["position"], 0);
    assert_eq!(value["extensions"][0]["symbol"], "c");
    assert_eq!(value["extensions"][1]["position"], 41);
}

#[test]
fn check_reads_words_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("words.txt");
    std::fs::write(&path, format!("{H}\nabc\n")).unwrap();
    let out = sqfree(&["check", "--file", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let value = json(&out);
    assert_eq!(value.as_array().unwrap().len(), 2);
    assert_eq!(value[0]["status"], "EXTREMAL");
    assert_eq!(value[1]["status"], "EXTENDABLE");
}

#[test]
fn certify_default_fixtures_pass() {
    let out = sqfree(&["certify"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.matches(": pass").count(), 7);
    assert!(!text.contains("FAIL"));
}

#[test]
fn certify_json_contains_sub_certificates() {
    let out = sqfree(&["certify", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let value = json(&out);
    assert_schema_keys(
        &value,
        &["dn_thue", "dn_star_thue", "partition", "pns", "h", "n_report", "blocks"],
        &["expected_n_extensions"],
    );
    assert_eq!(value["partition"]["satisfied"], true);
    assert_eq!(value["blocks"].as_array().unwrap().len(), 12);
}

#[test]
fn certify_respects_fixture_env_and_rejects_missing() {
    let out = Command::new(env!("CARGO_BIN_EXE_sqfree"))
        .args(["certify"])
        .env("SQFREE_FIXTURES", "/nonexistent")
        .current_dir(workspace_root())
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn certify_broken_digraph_exits_one() {
    let fixture = workspace_root().join("fixtures/dn.digraph");
    let text = std::fs::read_to_string(fixture).unwrap();
    // drop the last edge: the partition property loses a witness path
    let broken: Vec<&str> = text.lines().collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.digraph");
    std::fs::write(&path, broken[..broken.len() - 1].join("\n")).unwrap();
    let out = sqfree(&["certify", "--digraph", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn certify_corrupt_digraph_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupt.digraph");
    std::fs::write(&path, "not a digraph\n").unwrap();
    let out = sqfree(&["certify", "--digraph", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn generate_minimal_extremal_is_pns() {
    let out = sqfree(&["generate", "--kind", "extremal", "--min-length", "102"]);
    assert_eq!(exit_code(&out), 0);
    let word = stdout(&out);
    assert_eq!(word.trim().len(), 102);

    let check = sqfree(&["check", word.trim()]);
    assert!(stdout(&check).contains("EXTREMAL"));
}

#[test]
fn generate_below_minimum_exits_two() {
    let out = sqfree(&["generate", "--kind", "extremal", "--min-length", "101"]);
    assert_eq!(exit_code(&out), 2);
    let out = sqfree(&["generate", "--kind", "nearly-extremal", "--min-length", "40"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn generate_with_verify_appends_status() {
    let out =
        sqfree(&["generate", "--kind", "nearly-extremal", "--min-length", "41", "--verify"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().len(), 41);
    assert_eq!(lines.next().unwrap(), "NEARLY_EXTREMAL");
}

#[test]
fn generate_json_record() {
    let out = sqfree(&[
        "generate",
        "--kind",
        "extremal",
        "--min-length",
        "500",
        "--verify",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let value = json(&out);
    assert_schema_keys(&value, &["kind", "min_length", "length", "word", "verified_status"], &[]);
    assert_eq!(value["verified_status"], "EXTREMAL");
    assert!(value["length"].as_u64().unwrap() >= 500);
}

#[test]
fn nonchalant_opening_sequence() {
    let out = sqfree(&["nonchalant", "-k", "3", "--steps", "8"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let words: Vec<&str> = text.lines().collect();
    assert_eq!(words, ["a", "ab", "aba", "abac", "abaca", "abacab", "abacaba", "abacabca"]);
}

#[test]
fn nonchalant_termination_exits_one() {
    let out = sqfree(&["nonchalant", "-k", "1", "--steps", "5"]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout(&out).trim(), "a");
}

#[test]
fn nonchalant_checkpoint_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.checkpoint");
    let path = path.to_str().unwrap();

    let first = sqfree(&["nonchalant", "-k", "3", "--steps", "50", "--checkpoint", path]);
    assert_eq!(exit_code(&first), 0);
    let resumed =
        sqfree(&["nonchalant", "-k", "3", "--steps", "100", "--checkpoint", path, "--summary"]);
    assert_eq!(exit_code(&resumed), 0);
    assert!(stdout(&resumed).contains("100 words"));

    let fresh = sqfree(&["nonchalant", "-k", "3", "--steps", "100", "--format", "json"]);
    let direct = json(&fresh);
    let via_checkpoint = sqfree(&["nonchalant", "-k", "3", "--steps", "100", "--checkpoint", path, "--format", "json"]);
    assert_eq!(json(&via_checkpoint), direct, "resumed run must match a fresh one");
}

#[test]
fn nonchalant_json_summary() {
    let out = sqfree(&["nonchalant", "-k", "3", "--steps", "64", "--format", "json"]);
    let value = json(&out);
    assert_schema_keys(
        &value,
        &["k", "words", "terminated", "final_length", "final_word", "summary"],
        &[],
    );
    assert_eq!(value["words"], 64);
    assert_eq!(value["final_length"], 64);
    assert_eq!(value["terminated"], false);
}

#[test]
fn search_finds_shortest_ternary_extremal() {
    let out = sqfree(&["search", "-k", "3", "--max-len", "25", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let value = json(&out);
    assert_schema_keys(
        &value,
        &["alphabet_size", "max_len", "exhaustive", "counts", "extremal", "nodes", "extension_checks"],
        &[],
    );
    assert_eq!(value["exhaustive"], true);
    let hits = value["extremal"].as_array().unwrap();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0]["length"], 25);
    assert_eq!(hits[0]["word"], H);
}

#[test]
fn search_exhausted_exits_one() {
    let out = sqfree(&["search", "-k", "4", "--max-len", "12"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("no extremal word found"));
}

#[test]
fn search_probe_runs_within_budget() {
    let out = sqfree(&[
        "search", "-k", "4", "--max-len", "100", "--probe", "random-walk", "--budget", "50000",
        "--format", "json",
    ]);
    assert_eq!(exit_code(&out), 1);
    let value = json(&out);
    assert_eq!(value["exhaustive"], false);
    assert!(value["extension_checks"].as_u64().unwrap() >= 50_000);

    let bad = sqfree(&["search", "-k", "4", "--max-len", "100", "--probe", "sideways"]);
    assert_eq!(exit_code(&bad), 2);
}

#[test]
fn search_reports_identical_across_thread_counts() {
    let one = sqfree(&["search", "-k", "3", "--max-len", "18", "--threads", "1", "--format", "json"]);
    let two = sqfree(&["search", "-k", "3", "--max-len", "18", "--threads", "2", "--format", "json"]);
    assert_eq!(stdout(&one), stdout(&two));
}

#[test]
fn search_resume_checkpoint_matches_direct_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.checkpoint");
    let path = path.to_str().unwrap();

    let resumed = sqfree(&["search", "-k", "3", "--max-len", "16", "--resume", path, "--format", "json"]);
    assert_eq!(exit_code(&resumed), 1);
    let direct = sqfree(&["search", "-k", "3", "--max-len", "16", "--format", "json"]);
    assert_eq!(json(&resumed), json(&direct));

    // second invocation consumes the checkpoint without re-searching
    let again = sqfree(&["search", "-k", "3", "--max-len", "16", "--resume", path, "--format", "json"]);
    assert_eq!(json(&again), json(&direct));
}

#[test]
fn search_census_counts() {
    let out = sqfree(&["search", "-k", "3", "--max-len", "3", "--census", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(json(&out)["counts"], serde_json::json!([3, 6, 12]));
}

#[test]
fn shipped_schemas_are_valid_json() {
    let dir = workspace_root().join("docs/schemas");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let value: Value = serde_json::from_str(&text)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(value["$id"].as_str().unwrap().contains(".v1."), "{}", path.display());
        seen += 1;
    }
    assert_eq!(seen, 5, "one schema per subcommand");
}

/// Required keys must be present; optional ones may be. Anything else is a
/// schema drift.
fn assert_schema_keys(value: &Value, required: &[&str], optional: &[&str]) {
    let object = value.as_object().expect("json object");
    for key in required {
        assert!(object.contains_key(*key), "missing key {key}");
    }
    for key in object.keys() {
        assert!(
            required.contains(&key.as_str()) || optional.contains(&key.as_str()),
            "unexpected key {key}"
        );
    }
}
