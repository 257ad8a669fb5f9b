use std::path::PathBuf;
use std::process::{Command, Output};

fn model(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name);
    p.to_str().unwrap().to_string()
}

fn cyclecheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclecheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = cyclecheck(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    cyclecheck(args).status.code().unwrap()
}

#[test]
fn mc_reports_cycles_with_witnesses() {
    let out = stdout_of(&["mc", &model("selfloop.kr"), "EC true", "--witness"]);
    assert_eq!(out, "TRUE\nprefix:\nloop: a (anchor: a)\n");

    let out = stdout_of(&["mc", &model("chain.kr"), "EC true"]);
    assert_eq!(out, "FALSE\n");
}

#[test]
fn mc_scheduler_specification_holds() {
    let phi = "A G (dec -> EC((dec & !res1 & G !res2) -> F res1))";
    assert_eq!(stdout_of(&["mc", &model("scheduler.kr"), phi]), "TRUE\n");
    let fairness = "E (G F res1 & G F res2)";
    assert_eq!(
        stdout_of(&["mc", &model("scheduler.kr"), fairness]),
        "TRUE\n"
    );
}

#[test]
fn mc_table_lists_quantified_rows() {
    let out = stdout_of(&[
        "mc",
        &model("scheduler.kr"),
        "A G (dec -> EC F res1)",
        "--table",
    ]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("TRUE"));
    assert_eq!(lines.next(), Some("formula\ts\td\tr1\tr2"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("EC F res1\t"), "got {row}");
}

#[test]
fn mc_exit_codes() {
    // formula syntax
    assert_eq!(exit_code(&["mc", &model("selfloop.kr"), "p &"]), 2);
    // a bare path formula is a category error, still syntax class
    assert_eq!(exit_code(&["mc", &model("selfloop.kr"), "X p"]), 2);
    // unknown atom
    assert_eq!(exit_code(&["mc", &model("selfloop.kr"), "E F ghost"]), 4);
    // invalid model
    let bad = std::env::temp_dir().join("cyclecheck_bad_model.kr");
    std::fs::write(&bad, "world a []\nworld b []\ninit a\nedge a b\n").unwrap();
    assert_eq!(exit_code(&["mc", bad.to_str().unwrap(), "EC true"]), 3);
}

#[test]
fn sat_emits_models_and_disclaimers() {
    let out = stdout_of(&["sat", "EC true", "--max-states", "3"]);
    assert_eq!(out, "world w0 []\ninit w0\nedge w0 w0\n");

    let out = stdout_of(&["sat", "A G ! EC true", "--max-states", "4"]);
    assert_eq!(
        out,
        "no model with ≤ 4 worlds (logic lacks the finite-model property; this is not UNSAT)\n"
    );

    assert_eq!(exit_code(&["sat", "p & |", "--max-states", "2"]), 2);
}

#[test]
fn sat_time_limit_exits_with_budget_code() {
    assert_eq!(
        exit_code(&[
            "sat",
            "A G ! EC true",
            "--max-states",
            "5",
            "--time-limit",
            "0",
        ]),
        5
    );
}

#[test]
fn unwind_exports_text_and_dot() {
    let dot = stdout_of(&[
        "unwind",
        &model("selfloop.kr"),
        "--depth",
        "2",
        "--out",
        "dot",
    ]);
    assert_eq!(
        dot,
        "digraph unwinding {\n  n0 [label=\"a\"];\n  n1 [label=\"a:n\"];\n  n2 [label=\"a:n\"];\n  n0 -> n1;\n  n1 -> n2;\n  n1 -> n0 [style=dashed];\n  n2 -> n1 [style=dashed];\n}\n"
    );

    let text = stdout_of(&["unwind", &model("selfloop.kr"), "--depth", "2"]);
    assert_eq!(
        text,
        "node 0: ε\nnode 1: a:n\nnode 2: a:n.a:n\ntree edge: 0 -> 1\ntree edge: 1 -> 2\nback edge: 1 -> 0\nback edge: 2 -> 1\n"
    );

    // depth 0 is a usage error
    assert_eq!(
        exit_code(&["unwind", &model("selfloop.kr"), "--depth", "0"]),
        2
    );
}

#[test]
fn pg_checks_parity_and_prompt_violation() {
    assert_eq!(
        stdout_of(&["pg", &model("delaygame.pg"), "--check", "par"]),
        "TRUE\n"
    );
    assert_eq!(
        stdout_of(&["pg", &model("delaygame.pg"), "--check", "npmt"]),
        "TRUE\n"
    );

    // a Player 0 state without a strategy line is an invalid game
    let bad = std::env::temp_dir().join("cyclecheck_bad_game.pg");
    std::fs::write(&bad, "state a 0 0\nedge a a\ninit a\n").unwrap();
    assert_eq!(
        exit_code(&["pg", bad.to_str().unwrap(), "--check", "par"]),
        3
    );
}

#[test]
fn output_is_deterministic() {
    let args = ["mc", &model("figure8.kr"), "EC (F px & F py)", "--witness"];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    assert_eq!(a, b);
    assert!(a.starts_with("TRUE\n"));
}

#[test]
fn thread_cap_does_not_change_verdicts() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclecheck"))
        .args(["mc", &model("scheduler.kr"), "A G (dec -> EC F res1)"])
        .env("CYCLECHECK_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "TRUE\n");
}
