use std::io::Write;
use std::process::{Command, Output};

fn qcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcalc")).args(args).env_remove("QCALC_BUDGET").output().expect("runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn position_law_with_void_rhs() {
    let o = qcalc(&["equiv", "[[A]A] == "]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("equivalent (16 assignments)"));
}

#[test]
fn non_commuting_marks_give_a_counterexample() {
    let o = qcalc(&["equiv", "[[A]i]j == [[A]j]i"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("counterexample {A=UUUU}"), "{}", stdout(&o));
    let o = qcalc(&["--format", "json", "equiv", "[[A]i]j == [[A]j]i"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["result"]["verdict"], "inequivalent");
    assert_eq!(v["result"]["counterexample"]["env"]["q"]["A"], "UUUU");
}

#[test]
fn parse_errors_exit_two_with_a_span() {
    let o = qcalc(&["equiv", "[a == a"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unbalanced '['"));
    assert!(stderr(&o).contains('^'));
    assert_eq!(code(&qcalc(&["equiv", "[a]"])), 2);
    assert_eq!(code(&qcalc(&["no-such-command"])), 2);
    assert_eq!(code(&qcalc(&["laws", "nonsense"])), 2);
}

#[test]
fn appendix_b_suite_lists_every_law() {
    let o = qcalc(&["laws", "q_appendix_b"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for n in 1..=13 {
        assert!(text.contains(&format!("Q{n} ")), "Q{n} missing:\n{text}");
    }
    assert_eq!(code(&qcalc(&["laws"])), 0);
}

#[test]
fn eval_with_environment() {
    let o = qcalc(&["eval", "[A]i", "--env", "A=UUUU"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "MUUM");
    let o = qcalc(&["--format", "json", "eval", "{a, [b], c, d}", "--env", "a=M,b=M,c=U,d=U"]);
    assert_eq!(json(&o)["value"], "MUUU");
    assert_eq!(code(&qcalc(&["eval", "A", "--env", "A=MU"])), 2);
    assert_eq!(code(&qcalc(&["eval", "A", "--env", "Z=MUUU"])), 2);
}

#[test]
fn budget_flag_and_environment_variable() {
    let four = "A B C D E == E D C B A";
    assert_eq!(code(&qcalc(&["--budget", "1000", "equiv", four])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_qcalc"))
        .args(["equiv", four])
        .env("QCALC_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
    assert_eq!(code(&qcalc(&["--budget", "8", "equiv", "A == A"])), 2);
    assert_eq!(code(&qcalc(&["--jobs", "2", "equiv", four])), 0);
}

#[test]
fn json_output_is_stable() {
    let a = qcalc(&["--format", "json", "distribution"]);
    let b = qcalc(&["--format", "json", "distribution"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["demonstrations"]["valid_second_form"], "(A and_j C) and_k (B and_j C)");
    let text = String::from_utf8(a.stdout).unwrap();
    let keys: Vec<usize> = ["\"demonstrations\"", "\"matrix\""].iter().map(|k| text.find(k).unwrap()).collect();
    assert!(keys[0] < keys[1], "keys are sorted");
}

#[test]
fn group_table() {
    let o = qcalc(&["group-table"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("quaternion group: yes"));
}

#[test]
fn braid_commands() {
    let o = qcalc(&["braid", "compose", "s1 s3'", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("acts as the operator i"));
    for n in ["2", "4", "8"] {
        assert_eq!(code(&qcalc(&["braid", "verify", "--n", n])), 0);
    }
    let o = qcalc(&["braid", "diagram", "s1 s3' s2 s1' s3 s2'"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("([d], c, [b], a)"), "{}", stdout(&o));
    assert_eq!(code(&qcalc(&["braid", "compose", "s4", "--n", "4"])), 2);
    assert_eq!(code(&qcalc(&["braid", "verify", "--n", "1"])), 2);
    assert_eq!(code(&qcalc(&["braid", "quaternion"])), 0);
}

#[test]
fn parse_and_check_files() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# laws\n[[a]]  ==  a\n[]i   []j\n[[A]i]j == [A]k\n[[A]i]j == [[A]j]i").unwrap();
    let path = f.path().to_str().unwrap();
    let o = qcalc(&["parse", path]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "[[a]] == a\n[]i []j\n[[A]i]j == [A]k\n[[A]i]j == [[A]j]i\n");
    let o = qcalc(&["check", path]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("2/3 assertions hold"), "{}", stdout(&o));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "a\n{{a, b}}").unwrap();
    let o = qcalc(&["parse", bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("tuple must have 4 slots"));
    assert_eq!(code(&qcalc(&["parse", "/no/such/file.qlf"])), 2);
}

#[test]
fn derivations() {
    let o = qcalc(&["check-derivation", "--builtin", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&qcalc(&["check-derivation", "--builtin", "QIJ"])), 0);
    assert_eq!(code(&qcalc(&["check-derivation", "--builtin", "nope"])), 2);
    assert!(stdout(&qcalc(&["check-derivation", "--list"])).contains("appendix-c-exercise"));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"start": "[[[X]i]j]k", "steps": [{{"rule": "IJ", "dir": "ltr", "pos": [0], "subst": {{}}}}, {{"rule": "Q1", "dir": "ltr", "pos": [], "params": {{"alpha": "k"}}}}], "end": "[X]"}}"#).unwrap();
    let o = qcalc(&["check-derivation", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));

    let mut wrong = tempfile::NamedTempFile::new().unwrap();
    write!(wrong, r#"{{"start": "[[x]]", "steps": [{{"rule": "A3", "dir": "ltr", "pos": [], "subst": {{}}}}], "end": "[x]"}}"#).unwrap();
    assert_eq!(code(&qcalc(&["check-derivation", wrong.path().to_str().unwrap()])), 1);

    let mut junk = tempfile::NamedTempFile::new().unwrap();
    write!(junk, "{{\"start\": 3}}").unwrap();
    assert_eq!(code(&qcalc(&["check-derivation", junk.path().to_str().unwrap()])), 2);
}

#[test]
fn constructors() {
    let o = qcalc(&["construct", "mark-slot", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("[X []i []j] [[X] [[]i []j]]"));
    let o = qcalc(&["--format", "json", "construct", "permute", "(a, d, b, c)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verified"], true);
    assert_eq!(code(&qcalc(&["construct", "permute", "a [d] ~b c"])), 0);
    assert_eq!(code(&qcalc(&["construct", "permute", "a a b c"])), 2);
    assert_eq!(code(&qcalc(&["construct", "mark-slot", "5"])), 2);
}
