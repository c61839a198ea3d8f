use std::path::PathBuf;
use std::process::{Command, Output};

use fa_cli::workspace::{builtin, Binding, Workspace};
use fa_core::Caps;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn fa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fa")).args(args).env_remove("FA_CARRY_CAP").env_remove("FA_KERNEL_CAP").env_remove("FA_LADDER_BOUND").output().unwrap()
}

fn fa_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fa")).args(args).env(key, val).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fa-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    let p = d.join(name);
    let _ = std::fs::remove_file(&p);
    p
}

#[test]
fn gate_rejects_fibonacci_matrix() {
    let o = fa(&["span", "gate", "--group", &data("fib.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rejects: eigenvalue modulus < 1"));
}

#[test]
fn gate_verdicts() {
    assert_eq!(fa(&["span", "gate", "--group", &data("rot.json")]).status.code(), Some(1));
    assert_eq!(fa(&["span", "gate", "--group", &data("z4.json")]).status.code(), Some(0));
    let o = fa(&["--json", "span", "gate", "--group", "fib"]);
    assert_eq!(json(&o)["witness"], "inside_unit_disk");
}

#[test]
fn powers_of_t_are_sparse() {
    let o = fa(&["set", "sparse", "--name", "tN"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0*1"), "{}", stdout(&o));
    assert_eq!(fa(&["set", "sparse", "--name", "F7all"]).status.code(), Some(1));
}

#[test]
fn polysnip_demo_passes() {
    let out = tmp("polysnip.json");
    let o = fa(&["demo", "polysnip", "--p", "7", "--dmax", "12", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["chosen"], "coefficient 3");
    let checks = v["readings"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn reports_are_byte_identical() {
    let runs = [
        vec!["--json", "set", "kernel", "--name", "tN2"],
        vec!["--json", "demo", "polysnip", "--dmax", "6"],
        vec!["--json", "mt", "ladder", "--name", "order", "--n", "2"],
        vec!["--json", "presburger", "decide", "--formula", "exists y. x = y + y + 1"],
    ];
    for args in runs {
        let a = fa(&args);
        let b = fa(&args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn decisions_set_exit_codes() {
    assert_eq!(fa(&["set", "member", "--name", "tN", "--elem", "[0,0,0,1]"]).status.code(), Some(0));
    assert_eq!(fa(&["set", "member", "--name", "tN", "--elem", "[0,0,2]"]).status.code(), Some(1));
    assert_eq!(fa(&["set", "empty", "--expr", "tN & !tN"]).status.code(), Some(0));
    assert_eq!(fa(&["set", "empty", "--expr", "tN & tN2"]).status.code(), Some(1));
    assert_eq!(fa(&["presburger", "decide", "--formula", "exists y. 3 = y + y"]).status.code(), Some(1));
    assert_eq!(fa(&["presburger", "decide", "--formula", "exists y. 4 = y + y"]).status.code(), Some(0));
    assert_eq!(fa(&["mt", "edp", "member", "--edp", &data("edp_squares.json"), "--elem", "16"]).status.code(), Some(0));
    assert_eq!(fa(&["mt", "edp", "member", "--edp", &data("edp_squares.json"), "--elem", "8"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fa(&["frob"]).status.code(), Some(2));
    assert_eq!(fa(&["set", "member", "--name", "nosuch", "--elem", "1"]).status.code(), Some(2));
    assert_eq!(fa(&["set", "build", "--expr", "tN |"]).status.code(), Some(2));
    assert_eq!(fa(&["span", "verify", "--group", "Z4", "--digits", "[0,1"]).status.code(), Some(2));
    let o = fa(&["--json", "set", "member", "--name", "tN", "--elem", "[[1],[2]]"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["module"], "set");
}

#[test]
fn caps_exit_3_with_diagnostics() {
    let o = fa(&["--json", "--carry-cap", "1", "mt", "edp", "member", "--edp", &data("edp_squares.json"), "--elem", "16"]);
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "cap");
    assert_eq!(v["error"]["module"], "mt");
    assert_eq!(v["error"]["caps"]["carry"], 1);
    let o = fa_env(&["mt", "edp", "member", "--edp", &data("edp_squares.json"), "--elem", "16"], "FA_CARRY_CAP", "1");
    assert_eq!(o.status.code(), Some(3));
    let o = fa(&["--kernel-cap", "1", "set", "kernel", "--name", "tN"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn ladder_bound_from_environment() {
    let o = fa_env(&["--json", "mt", "ladder", "--name", "cycle1", "--n", "3"], "FA_LADDER_BOUND", "4");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["bound"], 4);
}

#[test]
fn lang_commands() {
    assert_eq!(fa(&["lang", "sparse", "--in", &data("ab_star.json")]).status.code(), Some(0));
    assert_eq!(fa(&["lang", "sparse", "--in", &data("two_loops.json")]).status.code(), Some(1));
    let o = fa(&["--json", "lang", "count", "--in", &data("two_loops.json"), "--upto", "5"]);
    assert_eq!(json(&o)["counts"], serde_json::json!(["1", "2", "4", "8", "16", "32"]));
    let o = fa(&["--json", "lang", "parikh", "--in", &data("ab_star.json")]);
    assert_eq!(json(&o)["linear_sets"], serde_json::json!([{"base": [0, 0], "periods": [[1, 1]]}]));
}

#[test]
fn lambda_uses_the_stored_spanning_set() {
    let ws = tmp("lambda.json");
    let w = ws.to_str().unwrap();
    assert_eq!(fa(&["--workspace", w, "span", "verify", "--group", "Z4", "--digits", "[-2,-1,0,1,2]"]).status.code(), Some(0));
    let o = fa(&["--workspace", w, "--json", "span", "lambda", "--elem", "[6]"]);
    assert_eq!(o.status.code(), Some(0));
    // 6 = 2 + 4·1
    assert_eq!(json(&o)["length"], 2);
    let o = fa(&["--json", "span", "verify", "--group", "Z4", "--digits", "[0,1,2,3]"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["axiom"], "ii");
}

#[test]
fn workspace_round_trip() {
    let ws = tmp("ws.json");
    let w = ws.to_str().unwrap();
    for (name, e) in [("u", "tN | cycle([1], 2)"), ("o", "order([1])"), ("p", "exists/1(o)"), ("z", "whole(1) & !translate(tN, [3])")] {
        let o = fa(&["--workspace", w, "set", "build", "--expr", e, "--name", name, "--group", "F7"]);
        assert_eq!(o.status.code(), Some(0), "{e}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fa(&["--workspace", w, "mt", "edp", "from-sparse", "--name", "tN2", "--store", "e"]).status.code(), Some(0));
    assert_eq!(fa(&["--workspace", w, "mt", "edp", "normal-form", "--edp", "e", "--name", "n"]).status.code(), Some(0));

    let caps = Caps::default();
    let loaded = Workspace::open(Some(ws.clone()), caps).unwrap();
    let set = |n: &str| match &loaded.bindings[n] {
        Binding::Set(a) => a.clone(),
        _ => panic!("{n} is not a set"),
    };
    let tn = match builtin("tN", &caps).unwrap().unwrap() {
        Binding::Set(a) => a,
        _ => unreachable!(),
    };
    // exists/1 of the order set is t^ℕ
    assert!(set("p").same_set(&tn).unwrap());
    assert!(set("o").member(&[fa_core::Element::from_i64s(&[0, 1]), fa_core::Element::from_i64s(&[0, 0, 1])]).unwrap());
    for n in ["u", "o", "p", "z"] {
        let a = set(n);
        let again = fa_cli::formats::set_from(&fa_cli::formats::set_json(&a).unwrap(), None, &caps).unwrap();
        assert_eq!(again.dfa().minimize().canonical_key(), a.dfa().minimize().canonical_key(), "{n}");
    }
    // writing the reloaded workspace back gives the same bytes
    let before = std::fs::read(&ws).unwrap();
    let mut again = Workspace::open(Some(ws.clone()), caps).unwrap();
    let b = again.bindings["u"].clone();
    again.store("u", b).unwrap();
    assert_eq!(std::fs::read(&ws).unwrap(), before);
    for n in ["e", "n"] {
        let Binding::Edp(e) = &loaded.bindings[n] else { panic!("{n} is not an EDP set") };
        for k in 0..6 {
            let x = fa_core::Element::from_i64s(&[0; 6][..k].iter().copied().chain([2]).collect::<Vec<_>>());
            assert!(e.member(&x, &caps).unwrap(), "{n}: 2t^{k}");
        }
    }
}

#[test]
fn timings_only_on_request() {
    let o = fa(&["--json", "--timings", "set", "empty", "--name", "tN"]);
    assert!(json(&o).get("timing_ms").is_some());
}
