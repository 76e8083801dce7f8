use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pluscx-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn pluscx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pluscx"))
        .args(args)
        .env_remove("PLUSCX_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn run_file(args: &[&str], file: &str) -> (i32, Value) {
    let path = data(file);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    report(&pluscx(&all))
}

fn report(out: &Output) -> (i32, Value) {
    let code = out.status.code().expect("exit code");
    let json: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (code, json)
}

#[test]
fn schur_of_klein_table() {
    let path = data("klein.json");
    let (code, r) = report(&pluscx(&["schur", path.to_str().unwrap()]));
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["order"], 4);
    assert_eq!(r["input"]["order"], 4, "group file is echoed");
    let (code, r) = report(&pluscx(&["schur", "Z2xZ2"]));
    assert_eq!(code, 0);
    assert_eq!(r["input"], "Z2xZ2");
}

#[test]
fn homology_of_cyclic_presentation() {
    let (code, r) = run_file(&["homology"], "cyclic3.json");
    assert_eq!(code, 0);
    let text = r["result"].to_string();
    assert!(text.contains("Z/3"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run_file(&["plus"], "z5_plus.json").0, 0);
    assert_eq!(run_file(&["plus"], "a5_target.json").0, 0);
    assert_eq!(run_file(&["plus"], "not_perfect.json").0, 1);
    assert_eq!(run_file(&["plus"], "point_klein.json").0, 1);
    assert_eq!(report(&pluscx(&["moore", "Z2xZ2"])).0, 1);
    assert_eq!(report(&pluscx(&["sphere-criterion", "A5"])).0, 1);
    assert_eq!(run_file(&["framing"], "framing_ok.json").0, 0);
    assert_eq!(run_file(&["framing"], "framing_bad.json").0, 1);
    assert_eq!(run_file(&["knot-criterion"], "trefoil.json").0, 0);
    assert_eq!(run_file(&["knot-criterion"], "free2.json").0, 1);
    assert_eq!(run_file(&["homology"], "malformed.json").0, 2);
    assert_eq!(report(&pluscx(&["schur", "NoSuchGroup"])).0, 2);
    assert_eq!(report(&pluscx(&["schur", "A5", "--budget", "bar_column_budget=10"])).0, 3);
}

#[test]
fn missing_file_and_bad_budget_are_input_errors() {
    let out = pluscx(&["homology", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pluscx(&["schur", "Z2", "--budget", "no_such_key=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn obstruction_names_kind() {
    let (_, r) = run_file(&["plus"], "not_perfect.json");
    assert_eq!(r["status"], "obstruction");
    assert_eq!(r["obstruction"]["kind"], "not_perfect");
    let (_, r) = run_file(&["plus"], "point_klein.json");
    assert_eq!(r["obstruction"]["kind"], "not_liftable");
    let (_, r) = run_file(&["homology"], "malformed.json");
    assert_eq!(r["status"], "invalid_input");
    assert!(r.get("error").is_some());
}

#[test]
fn deterministic_output() {
    for (args, file) in [(&["plus"][..], "z5_plus.json"), (&["plus"][..], "point_klein.json"), (&["framing"][..], "framing_ok.json")] {
        let path = data(file);
        let mut all: Vec<&str> = args.to_vec();
        all.push(path.to_str().unwrap());
        let a = pluscx(&all);
        let b = pluscx(&all);
        assert_eq!(a.stdout, b.stdout, "{file}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn obstruction_report_reruns_from_its_input() {
    let dir = scratch("rerun");
    let (code, first) = run_file(&["plus"], "point_klein.json");
    assert_eq!(code, 1);
    let replay = dir.join("replay.json");
    std::fs::write(&replay, serde_json::to_string(&first["input"]).unwrap()).unwrap();
    let (code2, second) = report(&pluscx(&["plus", replay.to_str().unwrap()]));
    assert_eq!(code2, code);
    assert_eq!(second["obstruction"], first["obstruction"]);
    assert_eq!(second["input"], first["input"]);
}

#[test]
fn realize_then_classify_roundtrip() {
    let dir = scratch("roundtrip");
    let model = dir.join("model.json");
    let input = data("z5_plus.json");
    let (code, realized) =
        report(&pluscx(&["realize", input.to_str().unwrap(), "--model-out", model.to_str().unwrap()]));
    assert_eq!(code, 0, "{realized}");
    assert!(model.is_file());
    let (code, classified) = report(&pluscx(&["classify", model.to_str().unwrap()]));
    assert_eq!(code, 0, "{classified}");
    assert_eq!(classified["result"]["torsion"], realized["result"]["class"]["torsion"]);
    assert_eq!(classified["result"]["p_order"], 60);
    assert_eq!(classified["result"]["group_order"], 5);

    // A realize report is itself accepted by classify.
    let saved = dir.join("realize.json");
    std::fs::write(&saved, serde_json::to_string(&realized).unwrap()).unwrap();
    let (code, again) = report(&pluscx(&["classify", saved.to_str().unwrap()]));
    assert_eq!(code, 0);
    assert_eq!(again["result"]["torsion"], classified["result"]["torsion"]);
}

#[test]
fn text_format_has_header() {
    let path = data("framing_ok.json");
    let out = pluscx(&["--format", "text", "framing", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("pluscx "), "{text}");
    assert!(text.lines().next().unwrap().ends_with("framing: ok"), "{text}");
}

#[test]
fn out_dir_flag_and_env() {
    let dir = scratch("outdir");
    let path = data("framing_ok.json");
    let out = pluscx(&["--out-dir", dir.to_str().unwrap(), "framing", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(dir.join("framing.json")).unwrap();
    assert_eq!(written, out.stdout);
    assert!(dir.join("framing.txt").is_file());

    let env_dir = scratch("envdir");
    let out = Command::new(env!("CARGO_BIN_EXE_pluscx"))
        .args(["moore", "Z2xZ2"])
        .env("PLUSCX_OUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(std::fs::read(env_dir.join("moore.json")).unwrap(), out.stdout);
}

#[test]
fn torsion_of_unit() {
    let path = data("unit.json");
    let (code, r) = report(&pluscx(&["torsion", path.to_str().unwrap(), "--group", "Z5", "--invariant"]));
    assert_eq!(code, 0, "{r}");
    let text = r["result"].to_string();
    assert!(text.contains("2.618") && text.contains("0.381"), "{text}");
}

#[test]
fn enumerate_a5() {
    let (code, r) = report(&pluscx(&["enumerate", "A5"]));
    assert_eq!(code, 0);
    let text = r["result"].to_string();
    assert!(text.contains("60"), "{text}");
}
