use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdchain")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn large_tensor_reports_the_computed_rank() {
    let o = run(&["large-tensor", "--complex", &data("delta1.json"), "--degree", "1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("tensor ranks [4,4,1]"), "{s}");
    assert!(s.lines().any(|l| l == "rank 5"), "{s}");
}

#[test]
fn verify_axioms_table() {
    let o = run(&["verify-axioms", "--algebra", &data("gammaZx.json"), "--gamma", &data("g.json")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let s = stdout(&o);
    for name in pdchain::divpow::AXIOM_NAMES {
        assert!(s.lines().any(|l| l.starts_with(name) && l.contains("PASS")), "{name}: {s}");
    }
}

#[test]
fn hochschild_dual_numbers() {
    let o = run(&["hochschild", "--algebra", &data("f2eps.json"), "--truncate", "4", "--homology", "2", "--gamma", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("HH_1 rank 2\nHH_2 rank 2\n"), "{s}");
    assert!(s.contains("gamma_2 on HH_1 independent of lifts PASS (40 checked)"), "{s}");
}

#[test]
fn odd_degree_gamma_over_f3_fails_with_witness() {
    let o = run(&["hochschild", "--algebra", &data("f3x3.json"), "--homology", "2", "--gamma", "2"]);
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    assert!(s.contains("HH_1 rank 3\nHH_2 rank 3\n"), "{s}");
    assert!(s.contains("FAIL") && s.contains("witness"), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["selftest"])), 0);
    assert_eq!(code(&run(&["search-dp", "--algebra", &data("zx.json")])), 1);
    assert_eq!(code(&run(&["monoid-check", "--algebra", &data("z4.json"), "--degree", "3", "--corrupt"])), 1);
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["bar", "--algebra", "/nonexistent.json"])), 2);
    assert_eq!(code(&run(&["bar", "--algebra", &data("z4.json"), "--ring", "Z/3"])), 2);
    assert_eq!(code(&run(&["normalize", "--simplex", "1", "--ring", "Z/1"])), 2);
    assert_eq!(code(&run(&["free-dp", "--generators", "x2"])), 2);
}

#[test]
fn search_witnesses_are_machine_readable() {
    let o = run(&["search-dp", "--algebra", &data("f2x.json"), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "FAIL");
    let w = &v["checks"][0]["witness"];
    assert_eq!(w["reason"], "exhausted");
    assert_eq!(w["conflicts"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_deterministic_and_duplicated() {
    let dir = std::env::temp_dir().join(format!("pdchain-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.txt");
    let args = ["pd-chain-check", "--algebra", &data("f2eps.json"), "--seed", "5", "--out", out.to_str().unwrap()];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    let other = run(&["pd-chain-check", "--algebra", &data("f2eps.json"), "--seed", "6"]);
    assert_eq!(code(&other), code(&a));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dold_kan_subcommands() {
    for args in [
        vec!["normalize", "--simplex", "2"],
        vec!["gamma", "--complex", &data("delta1.json"), "--truncate", "3"],
        vec!["roundtrip", "--simplex", "1", "--ring", "Z/5"],
        vec!["shuffle-check", "--simplex", "1", "--second-simplex", "2"],
        vec!["aw-check", "--simplex", "1"],
        vec!["transferred-structure", "--simplex", "1"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stdout(&o));
    }
    let s = stdout(&run(&["aw-check", "--simplex", "1"]));
    assert!(s.contains("aw symmetric false"), "{s}");
}

#[test]
fn monoid_subcommands() {
    let o = run(&["monoid-check", "--algebra", &data("z4.json"), "--degree", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    for dir in ["to-chain", "to-simplicial", "round-trip"] {
        let o = run(&["monoid-transfer", "--algebra", &data("f2eps.json"), "--truncate", "2", "--direction", dir]);
        assert_eq!(code(&o), 0, "{dir}: {}", stdout(&o));
    }
}

#[test]
fn graded_subcommands() {
    let o = run(&["free-dp", "--generators", "x:2,y:1", "--truncate", "6", "--ring", "Z/2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("basis [[\"1\"],[\"y\"],[\"x\"],[\"x*y\"]"));
    assert_eq!(code(&run(&["invariants-model", "--generators", "x:2", "--truncate", "8"])), 0);
    assert_eq!(code(&run(&["pd-chain-check", "--graded", &data("gammaZx.json"), "--gamma", &data("g.json")])), 0);
    assert_eq!(code(&run(&["pd-chain-check", "--graded", &data("f2x.json")])), 1);
}
