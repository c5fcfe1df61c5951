use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomy-lab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn field(text: &str, key: &str) -> String {
    text.lines().find_map(|l| l.strip_prefix(key)).map(|s| s.trim().to_string()).expect(key)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn default_triangle_matches_the_closed_form() {
    let o = lab(&["triangle-holonomy"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(field(&text, "delta"), "1");
    let d: f64 = field(&text, "distance").split_whitespace().next().unwrap().parse().unwrap();
    assert!(d < 1e-6, "{d}");
}

#[test]
fn reversed_orientation_takes_the_negative_branch() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = lab(&["triangle-holonomy", "--orientation", "-1", "--dim", "3", "--out", out]);
    assert_eq!(code(&o), 0);
    let r = read_json(&dir.path().join("triangle_holonomy.json"));
    assert_eq!(r["delta"], -1);
    assert!(r["alpha"].as_f64().unwrap() < 0.0);
    assert!(r["distance"].as_f64().unwrap() < 1e-6);
}

#[test]
fn collinear_vertices_are_rejected() {
    let o = lab(&["triangle-holonomy", "--vertices", "0,0;0.5,0;-0.5,0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn invalid_configuration_exits_with_two() {
    assert_eq!(code(&lab(&["theorem", "--depth", "5"])), 2);
    assert_eq!(code(&lab(&["theorem", "--dim", "1"])), 2);
    assert_eq!(code(&lab(&["theorem", "--disk", "bumped-disk", "--dim", "2"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_holonomy-lab"))
        .args(["subdivision-audit", "--depth", "1"])
        .env("HOLONOMY_LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn audit_lists_every_triangle() {
    let o = lab(&["subdivision-audit", "--depth", "2"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["passed"], true);
    assert_eq!(r["triangles"].as_array().unwrap().len(), 84);
    assert_eq!(r["levels"].as_array().unwrap().len(), 3);

    let o = lab(&["subdivision-audit", "--depth", "0", "--orientation", "-1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["triangles"].as_array().unwrap().len(), 1);
}

#[test]
fn corrupted_order_fails_the_audit() {
    let o = lab(&["subdivision-audit", "--depth", "2", "--corrupt-order"]);
    assert_eq!(code(&o), 3);
    let r = stdout_json(&o);
    assert_eq!(r["passed"], false);
    assert!(!r["levels"][2]["failures"]["p4"].as_array().unwrap().is_empty());
}

#[test]
fn theorem_table_for_the_geodesic_disk() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["theorem", "--depth", "3", "--out", dir.path().to_str().unwrap()]);
    // The depth-3 endpoint is 3.74e-2 from Psi(disk area), above the 1e-3 limit.
    assert_eq!(code(&o), 3);
    let table = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert_eq!(table.lines().count(), 4);
    assert!(table.starts_with("n,triangles,pleated_area,length,"));
    let s = read_json(&dir.path().join("summary.json"));
    let rows = s["report"]["rows"].as_array().unwrap();
    let gaps: Vec<f64> = rows.iter().map(|r| r["psi_gap"].as_f64().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!((gaps[2] - 3.7425e-2).abs() < 1e-5, "{gaps:?}");
    let failed: Vec<&str> =
        s["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed, ["holonomy gap", "psi gap"]);
}

#[test]
fn theorem_cauchy_differences_shrink_for_the_bumped_disk() {
    let o = lab(&["theorem", "--disk", "bumped-disk", "--depth", "3"]);
    let s = stdout_json(&o);
    let cauchy = s["checks"].as_array().unwrap().iter().find(|c| c["name"].as_str().unwrap().starts_with("cauchy")).unwrap();
    assert_eq!(cauchy["passed"], true);
    assert_eq!(s["report"]["dim"], 3);
}

#[test]
fn theorem_at_depth_zero_has_one_row() {
    let o = lab(&["theorem", "--depth", "0"]);
    assert_eq!(code(&o), 0);
    let s = stdout_json(&o);
    let rows = s["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["triangles"], 1);
}

#[test]
fn reports_are_deterministic() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let o = Command::new(env!("CARGO_BIN_EXE_holonomy-lab"))
            .args(["theorem", "--disk", "bumped-disk", "--depth", "2", "--seed", "7", "--out", dir.path().to_str().unwrap()])
            .env("HOLONOMY_LAB_THREADS", "2")
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        std::fs::read(dir.path().join("summary.json")).unwrap()
    };
    assert_eq!(run(), run());
    let a = lab(&["triangle-holonomy", "--seed", "11", "--dim", "4"]);
    let b = lab(&["triangle-holonomy", "--seed", "11", "--dim", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# audit settings\ndepth = 1\norientation = -1\n").unwrap();
    let conf = conf.to_str().unwrap();
    let r = stdout_json(&lab(&["subdivision-audit", "--config", conf]));
    assert_eq!(r["depth"], 1);
    assert_eq!(r["orientation"], -1);
    let r = stdout_json(&lab(&["subdivision-audit", "--config", conf, "--depth", "2"]));
    assert_eq!(r["depth"], 2);
    assert_eq!(r["triangles"].as_array().unwrap().len(), 84);
    std::fs::write(dir.path().join("bad.conf"), "colour = blue\n").unwrap();
    assert_eq!(code(&lab(&["theorem", "--config", dir.path().join("bad.conf").to_str().unwrap()])), 2);
}
