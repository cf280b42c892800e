use std::path::PathBuf;
use std::process::Command;

fn polyseq(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_polyseq"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn file(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn extract_pgld_loop() {
    let (code, out, _) = polyseq(&["extract", "--notation", "pgld", "a;##1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0: a -> 0, 0\n");
}

#[test]
fn extract_pga_reads_files() {
    let f = file("loop.pga", "(a)*\n");
    let (code, out, _) = polyseq(&["extract", &format!("@file:{f}")]);
    assert_eq!(code, 0);
    assert_eq!(out, "0: a -> 0, 0\n");
}

#[test]
fn project_prints_the_pga_term() {
    let (code, out, _) = polyseq(&["project", "a;##1"]);
    assert_eq!(code, 0);
    let term: polyseq::PgaTerm = out.trim().parse().unwrap();
    let expected = polyseq::pgld_to_pga(&"a;##1".parse().unwrap());
    assert_eq!(term, expected);
}

#[test]
fn equiv_exit_codes() {
    assert_eq!(polyseq(&["equiv", "a;##1", "a;##1"]).0, 0);
    assert_eq!(polyseq(&["equiv", "a;##1", "a;a;##1"]).0, 0);
    assert_eq!(polyseq(&["equiv", "a;##1", "a"]).0, 1);
    assert_eq!(
        polyseq(&["equiv", "--notation", "pga", "(a)*", "a;(a)*"]).0,
        0
    );
}

#[test]
fn check_theorem1_single_fragment() {
    let v = file("single.vec", "D: get(1);a\n");
    let (code, out, _) = polyseq(&["check-theorem1", "--main", "put(1,{#1});@1", "--vector", &v]);
    assert_eq!(code, 0);
    assert_eq!(out, "PASS {}\n");

    let (code, out, _) = polyseq(&[
        "check-theorem1",
        "--main",
        "put(1,{#1});@1",
        "--vector",
        &v,
        "--all-sigma",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "PASS {}\nPASS {1=#1}\n");
}

#[test]
fn state_guard_is_a_usage_error() {
    let v = file("guard.vec", "D: get(1);a\n");
    let (code, _, err) = polyseq(&[
        "check-theorem1",
        "--main",
        "put(1,{#1});@1",
        "--vector",
        &v,
        "--all-sigma",
        "--max-states",
        "1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("too large"), "{err}");
}

#[test]
fn split_output_is_a_vector_file() {
    let (code, out, _) = polyseq(&["split", "--at", "1", "a;##1"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "# main: put(1,{#1});@1\nD: get(1);a;put(2,{#1});@2\nD: get(2);put(1,{#1});@1\n"
    );
    let v = file("split.vec", &out);
    let (code, out, _) = polyseq(&[
        "poly-extract",
        "--vector",
        &v,
        "--main",
        "put(1,{#1});@1",
        "--abstract",
        "tau,gnl",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "0: a -> 0, 0\n");
    let (code, _, _) = polyseq(&[
        "check-theorem1",
        "--vector",
        &v,
        "--main",
        "put(1,{#1});@1",
        "--all-sigma",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn synthesize_report_starts_with_program() {
    let v = file("synth.vec", "D: get(1);a\n");
    let (code, out, _) = polyseq(&["synthesize", "--vector", &v, "--main", "put(1,{#1});@1"]);
    assert_eq!(code, 0);
    let first = out.lines().next().unwrap();
    let p: polyseq::PgldProgram = first.parse().unwrap();
    assert!(out.contains("# layout\n"));
    assert!(out.contains(&format!("# length {}\n", p.len())));
}

#[test]
fn corpus_is_deterministic() {
    let a = polyseq(&["corpus", "--seed", "11", "--count", "10"]);
    let b = polyseq(&["corpus", "--seed", "11", "--count", "10"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert!(a.1.ends_with("10/10 instances passed\n"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let (code, _, err) = polyseq(&["extract", "--notation", "pgld", "a;#1"]);
    assert_eq!(code, 2);
    assert!(err.contains("1:3"), "{err}");
    assert_eq!(polyseq(&["extract", "--bogus", "a"]).0, 2);
    assert_eq!(polyseq(&["frobnicate"]).0, 2);
    assert_eq!(polyseq(&["extract", "@file:/nonexistent/prog"]).0, 2);
    assert_eq!(polyseq(&["split", "--at", "2", "a;b"]).0, 2);
    let v = file("bad.vec", "X: a\n");
    let (code, _, err) = polyseq(&["synthesize", "--vector", &v, "--main", "a"]);
    assert_eq!(code, 2);
    assert!(err.contains("X"), "{err}");
}
