use std::process::{Command, Output};

fn mulam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mulam")).args(args).env_remove("MULAM_NODE_CAP").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn parse_prints_canonical_form() {
    let o = mulam(&["parse", "-e", "\\x. mu 'a . <'a>  x"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "\\x.mu 'a.<'a> x");
}

#[test]
fn parse_json_gives_an_ast() {
    let o = mulam(&["parse", "--json", "-e", "x[y]"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn parse_error_exits_2_with_position() {
    let o = mulam(&["parse", "-e", "(\\x."]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(mulam(&["taylor", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(mulam(&["check", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn normalize_trace_shows_three_addend_mu_step() {
    let o = mulam(&["normalize", "-e", "(mu 'a.<'a> mu 'e.<'a> x)[y,y]", "--semiring", "nat", "--trace"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let first = out.lines().next().unwrap();
    assert!(first.contains("mu at []"), "{first}");
    assert!(
        first.contains("(mu 'b.<'a> x 1)[y,y] + 2*mu 'a.<'a> (mu 'b.<'a> x[y])[y] + mu 'a.<'a> (mu 'b.<'a> x[y,y]) 1")
    );
    assert!(first.contains("measure"));
    assert_eq!(out.lines().last().unwrap(), "mu 'a.<'a> x[y,y]");
}

#[test]
fn normalize_rejects_lamu_input_with_hint() {
    let o = mulam(&["normalize", "-e", "(\\x.x) y"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reduce"));
}

#[test]
fn reduce_lamu_head_trace() {
    let o = mulam(&["reduce", "--calculus", "lamu", "--strategy", "head", "-e", "(\\x.x x)(\\y.y)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last().unwrap(), "2: lambda at [] -> \\x.x");
}

#[test]
fn reduce_stops_at_max_steps() {
    let o = mulam(&["reduce", "--max-steps", "3", "-e", "(\\x.x x)(\\x.x x)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn reduce_resource_random_is_seeded() {
    let args =
        ["reduce", "--calculus", "res", "--strategy", "random", "--seed", "4", "-e", "(\\x.x[(\\y.y)[z]])[(\\w.w)[v]]"];
    let (a, b) = (mulam(&args), mulam(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).trim_end().ends_with("v[z]"));
}

#[test]
fn measure_reports_components() {
    let o = mulam(&["measure", "--json", "-e", "mu 'a.<'a> mu 'b.<'a> x"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["deg_mu"], 2);
    assert_eq!(v["size"], 3);
}

#[test]
fn taylor_lists_small_approximants() {
    let o = mulam(&["taylor", "-e", "\\x.x x", "--max-size", "6"]);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "\\x.x 1"));
    assert!(out.lines().any(|l| l == "\\x.x[x]"));
    let limited = mulam(&["taylor", "-e", "\\x.x x", "--max-size", "12", "--limit", "2"]);
    assert_eq!(stdout(&limited).lines().count(), 2);
}

#[test]
fn nft_of_omega_is_empty() {
    let o = mulam(&["nft", "-e", "(\\x.x x)(\\x.x x)", "--max-size", "12"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn nft_eq_separates_booleans() {
    let o = mulam(&["nft-eq", "\\x.\\y.x", "\\x.\\y.y", "--max-size", "8"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("different"));
    let o = mulam(&["nft-eq", "\\x.x", "\\x.(\\y.y) x", "--max-size", "8"]);
    assert!(stdout(&o).starts_with("equal"));
}

#[test]
fn solvable_verdicts() {
    assert_eq!(stdout(&mulam(&["solvable", "-e", "(\\x.x) y"])).trim(), "Solvable(1)");
    assert_eq!(stdout(&mulam(&["solvable", "-e", "(\\x.x x)(\\x.x x)", "--fuel", "100"])).trim(), "Unknown");
}

#[test]
fn check_passes_and_reports() {
    let o = mulam(&["check", "--suite", "injectivity", "--samples", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failures"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wall time"));
}

#[test]
fn check_output_is_deterministic() {
    let args = ["check", "--suite", "lemmas", "--samples", "5", "--seed", "3", "--json"];
    let (a, b) = (mulam(&args), mulam(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["samples"], 80);
}

#[test]
fn gen_is_seeded() {
    let a = mulam(&["gen", "--kind", "term", "--size", "15", "--seed", "9", "--closed"]);
    let b = mulam(&["gen", "--kind", "term", "--size", "15", "--seed", "9", "--closed"]);
    assert_eq!(a.stdout, b.stdout);
    // the output parses back
    let t = stdout(&a);
    assert!(mulam(&["parse", "-e", t.trim()]).status.success());
}

#[test]
fn explore_reports_single_sink() {
    let o = mulam(&["explore", "--json", "--semiring", "nat", "-e", "(mu 'a.<'a> mu 'e.<'a> x)[y,y]"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sinks"].as_array().unwrap().len(), 1);
    assert_eq!(v["semiring"], "nat");
}

#[test]
fn explore_respects_node_cap_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_mulam"))
        .args(["explore", "-e", "(mu 'a.<'a> mu 'e.<'a> x)[y,y]"])
        .env("MULAM_NODE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2"));
}

#[test]
fn reads_expression_from_file() {
    let dir = std::env::temp_dir().join(format!("mulam-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("t.txt");
    std::fs::write(&f, "(\\x.x)[y]\n").unwrap();
    let o = mulam(&["normalize", f.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "y");
    std::fs::remove_dir_all(dir).ok();
}
