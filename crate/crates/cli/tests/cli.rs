use std::io::Write;
use std::process::{Command, Output};

fn ldform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldform")).env_remove("LDFORM_BUDGET").args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = ldform(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["cmp", "x", "x x"]).trim(), "Less");
    assert_eq!(ok(&["eq", "x (x x)", "(x x) (x x)"]).trim(), "Equal");
    assert_eq!(ok(&["div", "x x", "(x x) x"]).trim(), "(df (xx) [x] app)");
}

#[test]
fn order_and_equality() {
    assert_eq!(ok(&["cmp", "x x", "x"]).trim(), "Greater");
    assert_eq!(ok(&["cmp", "x o x", "x x o x"]).trim(), "Equal");
    assert_eq!(ok(&["eq", "x", "x x"]).trim(), "NotEqual");
    assert_eq!(ok(&["cmp", "--oracle", "x", "x x"]).trim(), "Less");
}

#[test]
fn forms() {
    assert_eq!(ok(&["df", "(x x) x"]).trim(), "(df x [x x] app)");
    assert_eq!(ok(&["nf", "x", "x x"]).trim(), "(nf x p^(1))");
    assert_eq!(ok(&["power", "x", "2", "--kind", "app"]).trim(), "x (x x)");
    assert_eq!(ok(&["power", "x", "2", "--kind", "comp"]).trim(), "x o x");
    assert_eq!(ok(&["findpow", "x", "x"]).trim(), "1");
    assert_eq!(ok(&["enum", "--leaves", "7", "--a-only", "--count"]).lines().next().unwrap().split(' ').nth(1), Some("197"));
}

#[test]
fn rewriting() {
    let out = ok(&["rewrite", "x (x x)", "--steps", "1"]);
    assert_eq!(out.lines().last(), Some("x x (x x)"));
    let out = ok(&["confluence", "x (x x)", "(x x) (x x)"]);
    assert_eq!(out.lines().next(), Some("x x (x x)"));
}

#[test]
fn json_mode() {
    let out = ok(&["--json", "cmp", "x", "x x"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["op"], "cmp");
    assert_eq!(v["result"], "Less");
    assert_eq!(v["inputs"], serde_json::json!(["x", "x x"]));
    assert!(v.get("tier_used").is_some() && v.get("cost").is_some());
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "div", "x x x", "x (x x) (x x)"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn exit_codes() {
    assert_eq!(ldform(&["parse", "x (x"]).status.code(), Some(2));
    assert_eq!(ldform(&["--budget", "0", "cmp", "x", "x"]).status.code(), Some(2));
    assert_eq!(ldform(&["print", "@/nonexistent/corpus"]).status.code(), Some(2));
    let out = ldform(&["eq", "--oracle", "x", "x x"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "Unknown");
}

#[test]
fn corpus_files() {
    let mut f = std::env::temp_dir();
    f.push(format!("ldform-corpus-{}.txt", std::process::id()));
    let mut h = std::fs::File::create(&f).unwrap();
    writeln!(h, "x (x x)").unwrap();
    drop(h);
    let arg = format!("@{}", f.display());
    assert_eq!(ok(&["eq", &arg, "(x x) (x x)"]).trim(), "Equal");
    std::fs::remove_file(f).unwrap();
}

#[test]
fn check_suites_pass_on_small_terms() {
    for suite in ["thm1", "canonical", "division", "nf"] {
        let out = ok(&["check", "--suite", suite, "--leaves", "3"]);
        assert!(out.contains("0 disagreements"), "{suite}: {out}");
        assert!(out.contains("tier usage"), "{suite}: {out}");
    }
}
