mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use skograft::{read_gs3, read_tableau};
use skograft_core::gs3::check;

fn skograft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skograft")).args(args).output().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prove_the_drinker_and_emit_both_proofs() {
    let dir = tempfile::tempdir().unwrap();
    let out = skograft(&["prove", s(&common::fixture("drinker.p")), "--negate", "--emit", "both", "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let closed = read_tableau(&fs::read_to_string(dir.path().join("drinker.tab")).unwrap()).unwrap();
    assert_eq!(closed.rule_count(), 4);
    let proof = read_gs3(&fs::read_to_string(dir.path().join("drinker.gs3")).unwrap()).unwrap();
    assert_eq!(proof.inference_count(), 8);
    assert_eq!(check(&proof), Ok(()));

    let checked = skograft(&["check", s(&dir.path().join("drinker.gs3"))]);
    assert_eq!(text(&checked.stdout), "Accepted\n");
}

#[test]
fn emit_selects_the_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = common::fixture("drinker.p");
    let out = skograft(&["prove", s(&input), "--negate", "--emit", "tableau", "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("drinker.tab").exists());
    assert!(!dir.path().join("drinker.gs3").exists());
}

#[test]
fn check_the_hand_encoded_figures() {
    let ok = skograft(&["check", s(&common::fixture("drinker_ground.gs3"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(text(&ok.stdout), "Accepted\n");
    let bad = skograft(&["check", s(&common::fixture("unsound_witness.gs3"))]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(text(&bad.stdout), "Rejected: freshness-violation at path 000\n");
}

#[test]
fn translate_reproduces_the_proof_written_by_prove() {
    let dir = tempfile::tempdir().unwrap();
    let again = tempfile::tempdir().unwrap();
    let input = common::fixture("drinker.p");
    assert_eq!(skograft(&["prove", s(&input), "--negate", "--out", s(dir.path())]).status.code(), Some(0));
    let tab = dir.path().join("drinker.tab");
    let out = skograft(&["translate", s(&tab), "--out", s(again.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert_eq!(fs::read(dir.path().join("drinker.gs3")).unwrap(), fs::read(again.path().join("drinker.gs3")).unwrap());
}

#[test]
fn outputs_are_deterministic_and_independent_of_jobs() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut inputs: Vec<String> =
        fs::read_dir(&corpus).unwrap().map(|e| e.unwrap().path().to_string_lossy().into_owned()).collect();
    inputs.sort();
    let mut runs = Vec::new();
    for jobs in ["1", "1", "4"] {
        let dir = tempfile::tempdir().unwrap();
        let mut args = vec!["prove", "--negate", "--jobs", jobs, "--out", s(dir.path())];
        args.extend(inputs.iter().map(String::as_str));
        let out = skograft(&args);
        assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| {
                let p = e.unwrap().path();
                (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
            })
            .collect();
        files.sort();
        let stdout = text(&out.stdout).replace(s(dir.path()), "OUT");
        runs.push((files, stdout));
    }
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn exit_status_reports_the_kind_of_failure() {
    let dir = tempfile::tempdir().unwrap();
    let open = dir.path().join("open.p");
    fs::write(&open, "# not refutable\nP\n").unwrap();
    assert_eq!(skograft(&["prove", s(&open), "--out", s(dir.path())]).status.code(), Some(1));

    let broken = dir.path().join("broken.p");
    fs::write(&broken, "P &\n").unwrap();
    let out = skograft(&["prove", s(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("broken.p:1:4"));

    let reserved = dir.path().join("reserved.p");
    fs::write(&reserved, "P(sko1)\n").unwrap();
    assert_eq!(skograft(&["prove", s(&reserved)]).status.code(), Some(2));

    let junk = dir.path().join("junk.gs3");
    fs::write(&junk, "{\"sequent\": [\"P\"]}").unwrap();
    assert_eq!(skograft(&["check", s(&junk)]).status.code(), Some(2));
    assert_eq!(skograft(&["check", s(&dir.path().join("missing.gs3"))]).status.code(), Some(2));
    assert_eq!(skograft(&["translate", s(&junk)]).status.code(), Some(2));
    assert_eq!(skograft(&["prove", s(&open), "--gamma-limit", "0"]).status.code(), Some(2));
}

#[test]
fn worst_status_wins_across_inputs() {
    let out = skograft(&["check", s(&common::fixture("drinker_ground.gs3")), s(&common::fixture("unsound_witness.gs3"))]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("drinker_ground.gs3: Accepted"));
    assert!(stdout.contains("unsound_witness.gs3: Rejected: freshness-violation at path 000"));
}

#[test]
fn deferred_closure_and_limits_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let input = common::fixture("drinker.p");
    let out = skograft(&[
        "prove",
        s(&input),
        "--negate",
        "--eager-close",
        "false",
        "--gamma-limit",
        "1",
        "--depth-limit",
        "10",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let proof = read_gs3(&fs::read_to_string(dir.path().join("drinker.gs3")).unwrap()).unwrap();
    assert_eq!(check(&proof), Ok(()));
}

#[test]
fn pretty_prints_both_proofs() {
    let dir = tempfile::tempdir().unwrap();
    let out = skograft(&["prove", s(&common::fixture("drinker.p")), "--negate", "--pretty", "--out", s(dir.path())]);
    let stdout = text(&out.stdout);
    assert!(stdout.contains("gamma with X1: (~(D(X1) => (forall y. D(y))))"));
    assert!(stdout.contains("unifier X1 := sko1"));
    assert!(stdout.contains("~forall c1"));
}
