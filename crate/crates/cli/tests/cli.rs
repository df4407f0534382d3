use std::process::{Command, Output};

fn hyperfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperfactor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn decide_exit_codes() {
    let o = hyperfactor(&["decide", "--n", "18", "--k", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NOT_FACTORABLE\n"));
    assert!(stdout(&o).contains("certificate: 3 3 3 1 -1 0"));

    let o = hyperfactor(&["decide", "--n", "11", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("FACTORABLE\n"));

    let o = hyperfactor(&["decide", "--n", "12", "--levels", "2,4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hyperfactor(&["decide", "--n", "5"]).status.code(), Some(2));
    assert_eq!(hyperfactor(&["decide", "--n", "5", "--k", "9"]).status.code(), Some(2));
    assert_eq!(hyperfactor(&["decide", "--n", "5", "--levels", "0,2"]).status.code(), Some(2));
    assert_eq!(hyperfactor(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn certificate_prints_rationals() {
    let o = hyperfactor(&["certificate", "--n", "7", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2 1/2 -1\n");
    assert_eq!(hyperfactor(&["certificate", "--n", "12", "--k", "3"]).status.code(), Some(1));
}

#[test]
fn construct_write_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k6_3.txt");
    let p = path.to_str().unwrap();
    let o = hyperfactor(&["construct", "--n", "6", "--k", "3", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("HYPERFACTOR v1\nn=6 levels=1,2,3\n"));
    assert_eq!(text.lines().count(), 2 + 16);

    let o = hyperfactor(&["verify", "--file", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // A factor repeated in place of another: well formed, but invalid.
    let mut lines: Vec<&str> = text.lines().collect();
    lines[3] = lines[2];
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert_eq!(hyperfactor(&["verify", "--file", p]).status.code(), Some(1));

    // An element outside [6] does not parse.
    std::fs::write(&path, text.replacen("{1", "{7", 1)).unwrap();
    assert_eq!(hyperfactor(&["verify", "--file", p]).status.code(), Some(2));
}

#[test]
fn verify_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "HYPERFACTOR v1\nn=4 levels=2\n{1,2} | {3,4}\n{1,2} | {3,4}\n{1,4} | {2,3}\n").unwrap();
    let o = hyperfactor(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("{1,2} appears 2 times"), "{out}");
    assert!(out.contains("{1,3} appears in no factor"), "{out}");
}

#[test]
fn certificate_file_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let p = path.to_str().unwrap();
    let o = hyperfactor(&["certificate", "--n", "18", "--k", "6", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "FARKAS v1\nn=18 levels=1,2,3,4,5,6\n3 3 3 1 -1 0\n"
    );
    assert_eq!(hyperfactor(&["verify", "--file", p]).status.code(), Some(0));
}

#[test]
fn trace_goes_to_stderr() {
    let o = hyperfactor(&["construct", "--n", "6", "--levels", "3", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(err.lines().filter(|l| l.starts_with("step ")).count(), 6);
    assert!(err.contains("step ell=6 flow=10 "), "{err}");
    assert_eq!(stdout(&o).lines().count(), 2 + 10);
}

#[test]
fn solve_and_types() {
    let o = hyperfactor(&["solve", "--n", "12", "--k", "3"]);
    assert_eq!(stdout(&o), "(0,0,4): 41\n(3,0,3): 4\n(0,3,2): 22\n");
    let o = hyperfactor(&["types", "--n", "7", "--k", "3"]);
    assert_eq!(stdout(&o).lines().count(), 8);
    assert_eq!(stdout(&o).lines().next(), Some("(1,0,2)"));
}
