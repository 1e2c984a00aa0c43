use std::process::{Command, Output};

fn stiso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stiso")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn dual_prints_dual() {
    let o = stiso(&["dual", "!int.end"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "?int.end\n");
}

#[test]
fn iso_of_swapped_outputs_succeeds() {
    let o = stiso(&["iso", "!int.!bool.end", "!bool.!int.end"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("A = ") && out.contains("B = "), "{out}");
    assert!(out.contains("1. [a1 →] at ε"), "derivation is printed: {out}");
}

#[test]
fn iso_of_unrelated_types_is_negative() {
    let o = stiso(&["iso", "!int.end", "end"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("not derivable from a1–a12"));
    assert!(out.contains("nf(!int.end) = !int.end"));
    assert!(out.contains("nf(end) = end"));
}

#[test]
fn parse_errors_exit_two() {
    let o = stiso(&["dual", "!int."]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot parse type"));
    assert_eq!(code(&stiso(&["no-such-command"])), 2);
}

#[test]
fn parse_prints_canonical_text() {
    let o = stiso(&["parse", "l?(x : int) . r!( x ).0"]);
    assert_eq!(stdout(&o), "l?(x:int).r!(x).0\n");
    let o = stiso(&["parse", "--as", "expr", "1+2==3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn json_envelope_has_three_fields() {
    let o = stiso(&["normalize", "?bool.!unit.end", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["result"], "end + end");
    assert_eq!(v["evidence"].as_array().unwrap().len(), 2);
}

#[test]
fn check_with_and_without_interface() {
    let o = stiso(&["check", "l?(x:int).r!(x).0", "?int.end", "!int.end", "--explain"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("T-input"));
    let o = stiso(&["check", "l?(x:int).r!(x).0", "?int.end", "!bool.end"]);
    assert_eq!(code(&o), 1);
    let o = stiso(&["check", "l?(x:int).r!(x).0"]);
    assert!(stdout(&o).contains("▷ ?int.end ; !int.end"));
}

#[test]
fn id_prints_forwarder() {
    assert_eq!(stdout(&stiso(&["id", "!int.end"])), "l?(x:int).r!(x).0\n");
}

#[test]
fn run_reports_stuck_state() {
    let ok = stiso(&["run", "r!(1).0 || l?(x:int).0"]);
    assert_eq!(code(&ok), 0);
    let bad = stiso(&[
        "run",
        "r!(0+1).0 || (l?(x:int).0 || r!(0).0) || l?(x:int).if x == 0+1 then {0} else {r!(false).0}",
    ]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("stuck at: [0, r!(false).0]"));
}

#[test]
fn synth_and_verify_certify() {
    let o = stiso(&["synth", "?int.?bool.end", "?bool.?int.end"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = stiso(&[
        "verify",
        "!int.!bool.end",
        "!bool.!int.end",
        "l?(x:int).l?(y:bool).r!(y).r!(x).0",
        "l?(x:bool).l?(y:int).r!(y).r!(x).0",
    ]);
    assert_eq!(code(&o), 0);
    let o = stiso(&["verify", "!int.end", "!int.end", "l?(x:int).r!(0).0", "l?(x:int).r!(x).0", "--max-steps", "500"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("A || B"));
}

#[test]
fn tiny_budget_exits_three() {
    let o = stiso(&["synth", "!int.!bool.end", "!bool.!int.end", "--max-steps", "0"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
}

#[test]
fn equiv_distinguishes_made_up_value() {
    let same = stiso(&["equiv", "l?(x:int).r!(x).0", "l?(y:int).r!(y).0", "?int.end", "!int.end", "--trials", "50"]);
    assert_eq!(code(&same), 0);
    let diff = stiso(&["equiv", "l?(x:int).r!(x).0", "l?(x:int).r!(7).0", "?int.end", "!int.end", "--trials", "300"]);
    assert_eq!(code(&diff), 1);
    assert!(stdout(&diff).contains("counterexample found"));
}

#[test]
fn search_uses_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lib.json");
    std::fs::write(
        &path,
        r#"[{"name":"sendIB","type":"!int.!bool.end"},{"name":"unitSrc","type":"!unit.end","description":"sends nothing"}]"#,
    )
    .unwrap();
    let lib = path.to_str().unwrap();
    let o = stiso(&["search", "!bool.!int.end", "--library", lib]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "sendIB : !int.!bool.end (isomorphic)\n");
    let o = stiso(&["search", "end", "--library", lib, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"][0]["name"], "unitSrc");
    let o = stiso(&["search", "?int.end", "--library", lib]);
    assert_eq!(code(&o), 1);

    std::fs::write(&path, r#"[{"name":"a","type":"end"},{"name":"a","type":"end"}]"#).unwrap();
    let o = stiso(&["search", "end", "--library", lib]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate component name `a`"));
}

#[test]
fn deterministic_output_is_stable() {
    let args = ["iso", "?int.(end + !bool.end)", "?int.!bool.end + ?int.end", "--explain", "--deterministic"];
    assert_eq!(stdout(&stiso(&args)), stdout(&stiso(&args)));
    let args = ["normalize", "!bool.!bool.end", "--explain", "--deterministic"];
    assert_eq!(stdout(&stiso(&args)), stdout(&stiso(&args)));
}
