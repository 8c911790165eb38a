//! End-to-end runs of the `stratify` binary.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stratify"))
}

fn data(p: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../stratify/data").join(p).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("stratify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.display().to_string()
}

#[test]
fn degree_from_files_and_bundled_names_agree() {
    let strat = data("gr24/strat.json");
    let atlas = data("gr24/atlas");
    let ring = data("gr24/ring.json");
    let (code, from_files, _) = run(&["degree", "--strat", &strat, "--atlas", &atlas, "--ring", &ring]);
    assert_eq!(code, 0);
    let (_, bundled, _) = run(&["degree", "--strat", "gr24"]);
    assert_eq!(from_files, bundled);
    assert!(from_files.starts_with("{\"schema\":\"stratify/degree\",\"version\":1}\n"));
    assert!(from_files.contains("\"degree\": \"2\""));
    let (_, sl3b, _) = run(&["degree", "--strat", "sl3b"]);
    assert!(sl3b.contains("\"degree\": \"6\""), "{sl3b}");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["valuate", "--strat", "sl3b", "--poly", "m13*d1 + m12"],
        vec!["hilbert", "--strat", "quadric", "--max", "4"],
        vec!["lspaths", "--type", "A2", "--lambda", "1,1", "--degree", "2"],
    ] {
        let a = run(&args);
        let b = bin().args(&args).env("STRATIFY_THREADS", "1").output().unwrap();
        assert_eq!(a.0, 0, "{args:?}: {}", a.2);
        assert_eq!(a.1, String::from_utf8(b.stdout).unwrap(), "{args:?}");
    }
}

#[test]
fn headers_for_each_format() {
    let (_, csv, _) = run(&["hilbert", "--strat", "gr24", "--max", "2"]);
    assert_eq!(csv, "# schema: stratify/hilbert v1\nm,incl_excl,stanley_reisner,ring\n0,1,1,1\n1,6,6,6\n2,20,20,20\n");
    let out = scratch("hasse.dot", "");
    assert_eq!(run(&["hasse", "--strat", "elliptic2", "--dot", &out]).0, 0);
    let dot = std::fs::read_to_string(&out).unwrap();
    assert!(dot.starts_with("// schema: stratify/hasse v1\ndigraph"));
    let (_, ls, _) = run(&["lspaths", "--type", "A2", "--lambda", "1,1"]);
    assert!(ls.starts_with("{\"schema\":\"stratify/lspaths\",\"version\":1}"));
    assert!(ls.contains("\"count\": 8"));
    assert!(ls.contains("\"value\": 6"));
}

#[test]
fn lspaths_with_tau() {
    let (code, out, _) = run(&["lspaths", "--type", "A1", "--lambda", "3", "--tau", "s1"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"value\": 3"));
    let (code, out, _) = run(&["lspaths", "--type", "A2", "--lambda", "1,1", "--tau", "e"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"value\": 1"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["validate", "--strat", "torus"]).0, 0);
    let two_tops = r#"{"elements":[{"id":"a","label":"","fdeg":1},{"id":"b","label":"","fdeg":1},{"id":"c","label":"","fdeg":1}],
        "covers":[{"upper":"a","lower":"c","bond":1},{"upper":"b","lower":"c","bond":1}],"extend_bottom":false}"#;
    let (code, out, _) = run(&["validate", "--strat", &scratch("two_tops.json", two_tops)]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("\"ok\": false"));
    assert_eq!(run(&["degree", "--strat", &scratch("broken.json", "{\"elements\": [")]).0, 2);
    assert_eq!(run(&["degree", "--strat", "/nonexistent/strat.json"]).0, 2);
    assert_eq!(run(&["valuate", "--strat", "gr24", "--poly", "x14 +* 2"]).0, 2);
    assert_eq!(run(&["lspaths", "--type", "A9", "--lambda", "1,1,1,1,1,1,1,1,1"]).0, 3);
    assert_eq!(run(&["lspaths", "--type", "A2", "--lambda", "1,0"]).0, 1);
    assert_eq!(run(&["subduct", "--strat", "elliptic1", "--poly", "x"]).0, 1);
}
