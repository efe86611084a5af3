use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_demazure")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn a1_square() {
    let o = run(&["mult", "--type", "A1", "--family", "x", "--u", "1", "--v", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 * 1 -> 1 : -2*t1");
}

#[test]
fn multiplicative_product_has_three_rows() {
    let o = run(&["mult", "--type", "A2", "--fgl", "multiplicative", "--family", "x", "--u", "1", "--v", "2", "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3, "{text}");
    assert_eq!(rows[2], "1 * 2 -> 121 : 1");
}

#[test]
fn identity_times_top_class() {
    let o = run(&["mult", "--type", "A2", "--family", "x", "--u", "", "--v", "121"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "e * 121 -> 121 : 1");
}

#[test]
fn restrictions() {
    let o = run(&["restrict", "--type", "A2", "--fgl", "additive", "--family", "x", "--w", "1", "--v", "121"]);
    assert_eq!(o.status.code(), Some(0));
    // -alpha_1 - alpha_2 = -(t1 + t2) in the fundamental-weight basis
    assert_eq!(stdout(&o).trim(), "-t1 - t2");
    // -x_{alpha_1 + alpha_2} with e_i = e^{t_i}
    let o = run(&["restrict", "--type", "A2", "--fgl", "multiplicative", "--family", "x", "--w", "1", "--v", "121"]);
    assert_eq!(stdout(&o).trim(), "e1*e2 - 1");
    let o = run(&["restrict", "--type", "A2", "--w", "", "--v", "21"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn json_round_trips_byte_identically() {
    let o = run(&["mult", "--type", "B2", "--fgl", "multiplicative", "--family", "y", "--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&v).unwrap();
    again.push('\n');
    assert_eq!(text, again);
}

#[test]
fn deterministic_across_worker_counts() {
    let a = run(&["mult", "--type", "A2", "--family", "y", "--out", "json", "--jobs", "1"]);
    let b = run(&["mult", "--type", "A2", "--family", "y", "--out", "json", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn coh_stable_row() {
    let o = run(&["stab", "coh", "--type", "A2", "--u", "1", "--v", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("121 :")).expect("row for w0");
    // the oracle value -h^2 (h + alpha_1), alpha_1 = 2 t1 - t2
    assert_eq!(row, "121 : -2*t1*h^2 + t2*h^2 - h^3");
}

#[test]
fn coh_check_reports_formula_deviation() {
    let o = run(&["stab", "coh", "--type", "A2", "--u", "1", "--v", "1", "--check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("discrepancy"));
}

#[test]
fn k_theory_check_is_clean() {
    let o = run(&["stab", "k", "--type", "A2", "--u", "1", "--v", "2", "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "worked-examples", "--type", "A2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    let o = run(&["verify", "--suite", "relations", "--family", "t"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "--suite", "all", "--type", "B2", "--fgl", "multiplicative", "--family", "y", "--out", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn config_errors_exit_3() {
    assert_eq!(run(&["mult", "--type", "Q7"]).status.code(), Some(3));
    assert_eq!(run(&["mult", "--family", "t", "--fgl", "multiplicative"]).status.code(), Some(3));
    assert_eq!(run(&["mult", "--words", "file:/nonexistent"]).status.code(), Some(3));
    assert_eq!(run(&["restrict", "--type", "A2", "--w", "4", "--v", "1"]).status.code(), Some(3));
}
