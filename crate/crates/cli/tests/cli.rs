use std::path::PathBuf;
use std::process::{Command, Output};

use chamberlab_cli::{cmd_check, cmd_rgd, cmd_triangles, RgdKind, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str], env: &[(&str, &str)]) -> (i32, Value, Output) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chamberlab"));
    cmd.args(args).env_remove("CHAMBERLAB_MAX_ELEMENTS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report, out)
}

fn path(rel: &str) -> String {
    data(rel).display().to_string()
}

#[test]
fn check_reports_diagram_properties() {
    let (code, r, _) = run(&["check", &path("diagrams/444.json")], &[]);
    assert_eq!(code, 0);
    assert_eq!(r["command"], "check");
    assert_eq!(r["results"]["two_complete"], true);
    assert_eq!(r["results"]["a2tilde_free"], true);
    let (_, r, _) = run(&["check", &path("diagrams/333.json")], &[]);
    assert_eq!(r["results"]["a2tilde_free"], false);
    let hash = r["inputs"].as_object().unwrap().values().next().unwrap().as_str().unwrap();
    assert_eq!(hash.len(), 64);
}

#[test]
fn triangles_exit_codes() {
    let (code, r, _) = run(&["triangles", &path("diagrams/444.json"), "--radius", "3", "--verify"], &[]);
    assert_eq!(code, 0);
    assert!(r["results"]["triangles_found"].as_u64().unwrap() >= 1);
    assert_eq!(r["results"]["ball_radius"], 3);
    assert_eq!(r["violations"], Value::Array(vec![]));
    let (code, r, _) = run(&["triangles", &path("diagrams/333.json")], &[]);
    assert_eq!(code, 3);
    assert!(r["results"]["error"].as_str().unwrap().contains("hypothesis"));
    let (code, _, _) = run(&["triangles", &path("diagrams/34inf.json")], &[]);
    assert_eq!(code, 3);
}

#[test]
fn element_cap_from_flag_and_environment() {
    let args = ["triangles", &path("diagrams/444.json"), "--radius", "6"];
    let (code, _, _) = run(&[&args[..], &["--max-elements", "20"]].concat(), &[]);
    assert_eq!(code, 4);
    // the environment variable overrides the flag
    let (code, _, _) = run(&[&args[..], &["--max-elements", "20"]].concat(), &[("CHAMBERLAB_MAX_ELEMENTS", "100000")]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&args, &[("CHAMBERLAB_MAX_ELEMENTS", "20")]);
    assert_eq!(code, 4);
    let (code, _, _) = run(&args, &[("CHAMBERLAB_MAX_ELEMENTS", "lots")]);
    assert_eq!(code, 2);
}

#[test]
fn bad_inputs_exit_two() {
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let truncated = tmp.join("truncated.json");
    let text = std::fs::read_to_string(data("diagrams/444.json")).unwrap();
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    let (code, r, _) = run(&["check", &truncated.display().to_string()], &[]);
    assert_eq!(code, 2);
    assert!(r["results"]["error"].is_string());
    let (code, _, _) = run(&["check", "/nonexistent/diagram.json"], &[]);
    assert_eq!(code, 2);

    let fano = std::fs::read_to_string(data("incidence/fano.txt")).unwrap();
    let short = tmp.join("fano_short.txt");
    std::fs::write(&short, fano.lines().take(15).collect::<Vec<_>>().join("\n")).unwrap();
    let (code, r, _) = run(&["building", "validate", &short.display().to_string(), "--gonality", "3"], &[]);
    assert_eq!(code, 2);
    assert_eq!(r["results"]["passed"], false);
    assert!(!r["violations"].as_array().unwrap().is_empty());
}

#[test]
fn building_examples() {
    let (code, r, _) = run(&["building", "validate", &path("incidence/doily.txt"), "--gonality", "4"], &[]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["passed"], true);
    let (code, r, _) = run(&["building", "show", &path("incidence/g2_2_hexagon.txt"), "--gonality", "6"], &[]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["chambers"], 189);
    assert_eq!(r["results"]["apartments"], 1008);
    let (code, _, _) = run(&["building", "validate", &path("incidence/doily.txt"), "--gonality", "3"], &[]);
    assert_eq!(code, 2);
}

#[test]
fn property_suite_and_fault_injection() {
    let diagram = path("diagrams/444.json");
    let (code, r, _) = run(&["property-suite", &diagram, "--radius", "3", "--seed", "2"], &[]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["passed"], true);
    let (code, r, _) = run(&["property-suite", &diagram, "--radius", "3", "--inject-fault", "broken-projection"], &[]);
    assert_eq!(code, 5);
    assert_eq!(r["parameters"]["inject_fault"], "broken-projection");
    assert!(!r["violations"].as_array().unwrap().is_empty());
}

#[test]
fn json_flag_writes_the_report() {
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("rgd_a2.json");
    let (code, _, o) = run(&["rgd", "a2", "--json", &out.display().to_string()], &[]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read(&out).unwrap(), o.stdout);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let a = cmd_triangles(&data("diagrams/345.json"), 4, true, None);
    let b = cmd_triangles(&data("diagrams/345.json"), 4, true, None);
    assert_eq!(a.exit_code, EXIT_OK);
    assert_eq!(a.report.body(), b.report.body());
    let a = cmd_rgd(RgdKind::B2);
    let b = cmd_rgd(RgdKind::B2);
    assert_eq!(a.report.body(), b.report.body());
    assert_eq!(a.report.results["group_order"], 720);
    assert_eq!(cmd_check(&data("diagrams/333.json")).exit_code, EXIT_OK);
    assert_eq!(cmd_triangles(&data("diagrams/333.json"), 2, false, None).exit_code, EXIT_HYPOTHESIS);
    assert_eq!(cmd_check(&data("diagrams/missing.json")).exit_code, EXIT_INPUT);
}
