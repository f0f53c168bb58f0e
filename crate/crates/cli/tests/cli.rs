use std::fs;
use std::process::{Command, Output};

use resmod_core::prover::ProofTrace;

fn resmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resmod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Drop the timing from a report so runs compare byte for byte.
fn untimed(s: &str) -> String {
    s.lines()
        .map(|l| match l.find(" time ") {
            Some(i) if l.starts_with("generated ") => &l[..i],
            _ => l,
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn proved_exits_zero() {
    let o = resmod(&["prove", "--theory", "arith", "--goal", "half_of_four"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PROVED\nX := S(S(0))\n"));
}

#[test]
fn saturated_exits_one() {
    let o = resmod(&["prove", "--theory", "{A -> A => B}", "--goal", "B"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("SATURATED"));
}

#[test]
fn resource_out_exits_two() {
    let o = resmod(&[
        "prove",
        "--theory",
        "set-cantor",
        "--goal",
        "cantor",
        "--max-clauses",
        "20",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("RESOURCE_OUT"));
}

#[test]
fn unverified_refutation_exits_four() {
    let o = resmod(&[
        "prove",
        "--theory",
        "hol-sigma",
        "--goal",
        "cantor_function",
        "--max-clauses",
        "200",
    ]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("PROVED_UNVERIFIED"));
}

#[test]
fn input_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.goal");
    fs::write(&empty, "# nothing here\n").unwrap();
    let empty = empty.to_str().unwrap();
    for args in [
        vec!["prove", "--theory", "arith", "--goal", empty],
        vec!["prove", "--theory", "no-such-preset", "--goal", "A"],
        vec!["prove", "--theory", "arith", "--goal", "2 * ="],
        vec![
            "prove",
            "--theory",
            "arith",
            "--goal",
            "half_of_four",
            "--strategy",
            "eager",
        ],
        vec![
            "prove",
            "--theory",
            "arith",
            "--goal",
            "half_of_four",
            "--fuel",
            "0",
        ],
        vec!["no-such-command"],
        vec![
            "check-solution",
            "hol-sigma",
            "missing.constraints",
            "missing.solution",
        ],
    ] {
        let o = resmod(&args);
        assert_eq!(code(&o), 3, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn trace_file_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.trace");
    let o = resmod(&[
        "prove",
        "--theory",
        "integral-rings",
        "--goal",
        "square",
        "--trace",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&path).unwrap();
    let trace = ProofTrace::parse(&text).unwrap();
    assert_eq!(trace.to_string(), text);
    assert!(stdout(&o).starts_with(&text));
}

#[test]
fn json_report() {
    let o = resmod(&[
        "prove",
        "--theory",
        "arith",
        "--goal",
        "half_of_four",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "PROVED");
    assert_eq!(v["solution"][0], "X := S(S(0))");
    assert!(v["statistics"]["generated"].as_u64().unwrap() > 0);
}

#[test]
fn runs_are_deterministic() {
    let args = ["prove", "--theory", "set-cantor", "--goal", "cantor"];
    let a = resmod(&args);
    let b = resmod(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(untimed(&stdout(&a)), untimed(&stdout(&b)));
}

#[test]
fn normalize_reports_fuel() {
    let o = resmod(&["normalize", "arith", "2 * 2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("NORMAL S(S(S(S(0)))) in 7 steps\n"));
    let o = resmod(&["normalize", "set", "f(a) in f(a)", "--fuel", "2"]);
    assert_eq!(code(&o), 2);
    assert_eq!(
        stdout(&o),
        "0: f(a) in f(a)\n\
         1: f(a) in a /\\ ~f(a) in f(a)\n\
         2: f(a) in a /\\ ~(f(a) in a /\\ ~f(a) in f(a))\n\
         FUEL EXHAUSTED after 2 steps\n"
    );
}

#[test]
fn clausify_prints_clauses() {
    let o = resmod(&["clausify", "chain(3)", "P1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1 []\n");
}

#[test]
fn rejected_solution_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cs = dir.path().join("c");
    let s = dir.path().join("s");
    fs::write(&cs, "X * 2 = 4\n").unwrap();
    fs::write(&s, "X = 3\n").unwrap();
    let o = resmod(&[
        "check-solution",
        "arith",
        cs.to_str().unwrap(),
        s.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("c1: X * S(S(0)) = S(S(S(S(0)))) DISTINCT"));
    fs::write(&s, "X = 2\n").unwrap();
    let o = resmod(&[
        "check-solution",
        "arith",
        cs.to_str().unwrap(),
        s.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("SOLUTION VERIFIED\n"));
}
