use std::path::Path;
use std::process::{Command, Output};

fn gbg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn gen(dir: &tempfile::TempDir, name: &str, args: &[&str]) -> String {
    let out = path(dir, name);
    let mut full = vec!["gen", "--out", &out];
    full.extend_from_slice(args);
    let o = gbg(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn summary_field(line: &str, key: &str) -> i64 {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn solve_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let board = gen(&dir, "g.txt", &["--kind", "grid", "--rows", "4", "--cols", "4", "--seed", "3"]);
    for solver in ["auto", "third", "near-perfect", "balance"] {
        let cert = path(&dir, &format!("{solver}.cert"));
        let o = gbg(&["solve", "--in", &board, "--out", &cert, "--solver", solver]);
        assert!(o.status.success(), "{solver}: {}", String::from_utf8_lossy(&o.stderr));
        let line = stdout(&o);
        assert!(line.starts_with("n=16 final="), "{line}");
        let v = gbg(&["verify", "--in", &cert]);
        assert!(v.status.success(), "{solver}: {}", stdout(&v));
        assert!(stdout(&v).starts_with("accept"));
        assert_eq!(
            summary_field(&stdout(&v), "final"),
            summary_field(&line, "final")
        );
    }
}

#[test]
fn cubic_solver_precondition() {
    let dir = tempfile::tempdir().unwrap();
    let grid = gen(&dir, "g.txt", &["--kind", "grid", "--rows", "4", "--cols", "4"]);
    let o = gbg(&["solve", "--in", &grid, "--solver", "cubic"]);
    assert_eq!(o.status.code(), Some(2));
    let cubic = gen(&dir, "c.txt", &["--kind", "cubic", "--n", "11", "--weights", "all_minus"]);
    let cert = path(&dir, "c.cert");
    let o = gbg(&["solve", "--in", &cubic, "--out", &cert, "--solver", "cubic"]);
    assert!(o.status.success());
    assert!(summary_field(&stdout(&o), "final") >= 9);
    assert!(gbg(&["verify", "--in", &cert]).status.success());
}

#[test]
fn tampered_claim_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let board = gen(&dir, "g.txt", &["--kind", "near_pencil", "--n", "7", "--weights", "all_minus"]);
    let cert = path(&dir, "c.cert");
    assert!(gbg(&["solve", "--in", &board, "--out", &cert, "--solver", "third"]).status.success());
    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered: String = text
        .lines()
        .map(|l| match l.strip_prefix("CLAIM third ") {
            Some(_) => "CLAIM third 99".to_string(),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n");
    assert_ne!(tampered.trim(), text.trim());
    std::fs::write(&cert, tampered).unwrap();
    let v = gbg(&["verify", "--in", &cert]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("claim not met"), "{}", stdout(&v));
}

#[test]
fn oracle_output_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let np = gen(&dir, "np.txt", &["--kind", "near_pencil", "--n", "4", "--weights", "all_minus"]);
    let o = gbg(&["oracle", "--in", &np]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "F=4"), "{text}");
    assert!(text.contains("F_board=4"), "{text}");

    let witness = path(&dir, "w.cert");
    let grid = gen(&dir, "g.txt", &["--kind", "grid", "--rows", "3", "--cols", "3", "--seed", "9"]);
    assert!(gbg(&["oracle", "--in", &grid, "--witness", &witness]).status.success());
    assert!(gbg(&["verify", "--in", &witness]).status.success());

    let big = gen(&dir, "big.txt", &["--kind", "grid", "--rows", "5", "--cols", "6"]);
    assert_eq!(gbg(&["oracle", "--in", &big]).status.code(), Some(3));
    assert!(gbg(&["oracle", "--in", &big, "--cap", "40"]).status.code() != Some(4));
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let junk = path(&dir, "junk.txt");
    std::fs::write(&junk, "not a board\n").unwrap();
    assert_eq!(gbg(&["solve", "--in", &junk]).status.code(), Some(2));
    assert_eq!(gbg(&["solve", "--in", &path(&dir, "missing.txt")]).status.code(), Some(2));
    let dup = path(&dir, "dup.txt");
    std::fs::write(&dup, "3\n0 0 1\n0 0 1\n1 1 1\n").unwrap();
    assert_eq!(gbg(&["profile", "--in", &dup]).status.code(), Some(2));
    let line = path(&dir, "line.txt");
    std::fs::write(&line, "3\n0 0 1\n1 1 -1\n2 2 -1\n").unwrap();
    assert_eq!(gbg(&["solve", "--in", &line]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_spec_equivalent() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(&dir, "a.txt", &["--kind", "random_gp", "--n", "12", "--seed", "7"]);
    let b = gen(&dir, "b.txt", &["--spec", "kind=random_gp n=12 seed=7 weights=random"]);
    let read = |p: &str| std::fs::read_to_string(Path::new(p)).unwrap();
    assert_eq!(read(&a), read(&b));
    let c = gen(&dir, "c.txt", &["--kind", "random_gp", "--n", "12", "--seed", "8"]);
    assert_ne!(read(&a), read(&c));
}

#[test]
fn profile_reports_table() {
    let dir = tempfile::tempdir().unwrap();
    let grid = gen(&dir, "g.txt", &["--kind", "grid", "--rows", "3", "--cols", "3"]);
    let o = gbg(&["profile", "--in", &grid]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("n=9 lines=20"));
    assert!(text.contains("2\t12\n3\t8\n"), "{text}");
    assert!(!text.contains("VIOLATED"));
}

#[test]
fn bench_emits_fixed_header() {
    let o = gbg(&["bench", "--kinds", "grid,cubic", "--sizes", "9", "--trials", "2", "--solvers", "third,balance"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "kind\tn\tseed\tsolver\tstatus\tfinal\tswitches\tbound\tmicros");
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 2 * 2 * 2);
    assert!(rows.iter().all(|r| r.split('\t').count() == 9 && r.contains("\tok\t")));
}
