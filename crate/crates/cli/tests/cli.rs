use std::fs;
use std::path::Path;
use std::process::Command;

use biarc_core::sim::{desk_scenario, Scenario};

fn biarc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_biarc"))
        .args(args)
        .output()
        .unwrap();
    let text =
        String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn write(dir: &Path, file: &str, sc: &Scenario) -> String {
    let p = dir.join(file);
    fs::write(&p, serde_json::to_string_pretty(sc).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn empty_map() -> Scenario {
    Scenario::with_defaults("empty", vec![[0.0, 0.0], [4.0, 0.0], [6.0, 1.5]])
}

fn walled() -> Scenario {
    let mut sc = Scenario::with_defaults("walled", vec![[0.0, 0.0], [6.0, 0.0]]);
    sc.obstacles.lines = vec![[[3.0, 0.0], [0.0, 1.0]]];
    sc
}

#[test]
fn plan_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "empty.json", &empty_map());
    let out = dir.path().join("trace.csv");
    let (code, text) = biarc(&["plan", &sc, "--out", out.to_str().unwrap(), "--ds", "0.05"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("cost"));
    let mut r = csv::Reader::from_path(&out).unwrap();
    assert_eq!(
        r.headers().unwrap(),
        vec!["s", "x", "y", "theta", "curvature"]
    );
    let rows: Vec<[f64; 5]> = r.deserialize().map(|x| x.unwrap()).collect();
    assert!(rows.len() > 100);
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0]);
    }
    for row in &rows {
        assert!(row[3] > -std::f64::consts::PI && row[3] <= std::f64::consts::PI);
    }
}

#[test]
fn plan_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "walled.json", &walled());
    let out = dir.path().join("t.csv");
    let out = out.to_str().unwrap();
    assert_eq!(biarc(&["plan", &sc, "--out", out]).0, 2);
    assert_eq!(biarc(&["plan", "/nonexistent/x.json", "--out", out]).0, 1);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(biarc(&["plan", bad.to_str().unwrap(), "--out", out]).0, 1);
    assert_eq!(biarc(&["plan"]).0, 1);
    assert_eq!(biarc(&["frobnicate"]).0, 1);
}

#[test]
fn simulate_records() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "empty.json", &empty_map());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(
        biarc(&["simulate", &sc, "--out", a.to_str().unwrap(), "--seed", "5"]).0,
        0
    );
    assert_eq!(
        biarc(&["simulate", &sc, "--out", b.to_str().unwrap(), "--seed", "5"]).0,
        0
    );
    let ta = fs::read(&a).unwrap();
    assert_eq!(ta, fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["success"], true);
    assert_eq!(v["scenario"], "empty");

    let w = write(dir.path(), "walled.json", &walled());
    let c = dir.path().join("c.json");
    assert_eq!(biarc(&["simulate", &w, "--out", c.to_str().unwrap()]).0, 2);
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&c).unwrap()).unwrap();
    assert_eq!(v["success"], false);
}

#[test]
fn validate_codes() {
    let (code, text) = biarc(&["validate", "--trials", "1000"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("disagreements 0"));
    assert_eq!(biarc(&["validate", "--trials", "0"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name": "x", "waypoints": [[0, 0]]}"#).unwrap();
    assert_eq!(
        biarc(&["validate", bad.to_str().unwrap(), "--trials", "10"]).0,
        1
    );
}

#[test]
fn bench_rows() {
    let dir = tempfile::tempdir().unwrap();
    let scen = dir.path().join("scenarios");
    fs::create_dir(&scen).unwrap();
    let out = dir.path().join("bench.csv");
    assert_eq!(
        biarc(&[
            "bench",
            scen.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])
        .0,
        0
    );
    assert_eq!(
        fs::read_to_string(&out).unwrap().trim(),
        "scenario,plan_ms_median,plan_ms_max,path_m,time_s,prox_m,success"
    );
    for k in 0..3 {
        write(
            &scen,
            &format!("d{k}.json"),
            &desk_scenario(&format!("desk{k}"), k, 20, 100),
        );
    }
    assert_eq!(
        biarc(&[
            "bench",
            scen.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])
        .0,
        0
    );
    let mut r = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<(String, f64, f64, f64, f64, f64, bool)> =
        r.deserialize().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert!(row.1 > 0.0 && row.1 <= row.2, "{row:?}");
        assert!(row.6);
    }
}

#[test]
fn scenario_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let sc = desk_scenario("rt", 11, 15, 40);
    let p = write(dir.path(), "rt.json", &sc);
    let back: Scenario = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(back, sc);
}

#[test]
fn planned_trace_clears_obstacles() {
    use biarc_core::sim::min_proximity;
    use biarc_core::Pose;
    let dir = tempfile::tempdir().unwrap();
    let sc = desk_scenario("desk", 4, 40, 300);
    let path = write(dir.path(), "desk.json", &sc);
    let out = dir.path().join("trace.csv");
    assert_eq!(
        biarc(&[
            "plan",
            &path,
            "--out",
            out.to_str().unwrap(),
            "--ds",
            "0.005"
        ])
        .0,
        0
    );
    let mut r = csv::Reader::from_path(&out).unwrap();
    let poses: Vec<Pose> = r
        .deserialize::<[f64; 5]>()
        .map(|row| {
            let row = row.unwrap();
            Pose::new(row[1], row[2], row[3])
        })
        .collect();
    let p = sc.prepare().unwrap();
    assert!(min_proximity(&poses, &p.hitbox, &p.obstacles, 0.001) > 0.0);
}
