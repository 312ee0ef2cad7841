use std::path::PathBuf;
use std::process::{Command, Output};

fn pinch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pinch-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const ID4: &str = "[1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1]";

#[test]
fn certify_exit_codes() {
    assert_eq!(pinch(&["certify", "--dims", "2"]).status.code(), Some(2));
    assert_eq!(
        pinch(&["certify", "--dims", "3", "--trials", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pinch(&["certify", "--dims", "4", "--tol", "-1"])
            .status
            .code(),
        Some(2)
    );
    let out = pinch(&["certify", "--dims", "3", "--trials", "1000", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["verdict"], true);
    assert_eq!(doc["results"][0]["n"], 3);
    assert!(doc["counterexample"].is_null());
}

#[test]
fn certify_writes_document() {
    let path = scratch("cert.json", "");
    let out = pinch(
        &[
            "certify", "--dims", "4,5", "--trials", "200", "--seed", "3", "--out",
        ]
        .iter()
        .copied()
        .chain([path.to_str().unwrap()])
        .collect::<Vec<_>>(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    let slice = &results[0]["slices"][1];
    assert_eq!(
        (slice["a1"].as_i64(), slice["discriminant"].as_i64()),
        (Some(5), Some(-64))
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("certified"));
}

#[test]
fn phi_tables() {
    let doc = json(&pinch(&["phi", "--n", "10", "--k", "5", "--json"]));
    let s = &doc["slices"][0];
    assert_eq!(
        [
            s["a1"].as_i64(),
            s["b1"].as_i64(),
            s["c1"].as_i64(),
            s["discriminant"].as_i64()
        ],
        [Some(176), Some(-288), Some(176), Some(-40960)]
    );
    let doc = json(&pinch(&["phi", "--n", "4", "--json"]));
    let rows = doc["slices"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["min_on_interval"] == 0.0));
    let text = pinch(&["phi", "--n", "3"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("no interior slices"));
    assert_eq!(
        pinch(&["phi", "--n", "4", "--k", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pinch(&["phi", "--n", "4", "--k", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn evolve_sphere_from_flags() {
    let out = pinch(&[
        "evolve", "--model", "sphere", "--n", "4", "--kappa0", "1", "--h0", "ricci", "--dt",
        "1e-3", "--t-end", "0.1", "--stride", "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,R,ric2,rm,h2,ratio,bound15,bound31,P"));
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let ratio: f64 = r[5].parse().unwrap();
        assert!((ratio - 0.25).abs() < 1e-6);
    }
    assert!(rows.last().unwrap()[6].is_empty());
    let summary: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["passed"], true);
}

#[test]
fn evolve_from_config_file() {
    let cfg = scratch(
        "run.json",
        r#"{"model":"lcf","n":4,"ricci":[2,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1],
            "h0":[1,0.5,0,0,0.5,-1,0,0,0,0,2,0,0,0,0,0],"dt":0.001,"t_end":0.01,"stride":5}"#,
    );
    let summary = scratch("summary.json", "");
    let csv = scratch("tele.csv", "");
    let out = pinch(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["model"], "lcf");
    assert_eq!(s["steps"], 10);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);
}

#[test]
fn evolve_rejects_bad_input() {
    // constant negative curvature
    let mut riemann = vec![0.0f64; 81];
    for i in 0..3 {
        for k in 0..3 {
            if i != k {
                riemann[((i * 3 + k) * 3 + i) * 3 + k] = -1.0;
                riemann[((i * 3 + k) * 3 + k) * 3 + i] = 1.0;
            }
        }
    }
    let list = riemann
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let out = pinch(&[
        "evolve",
        "--model",
        "frozen",
        "--n",
        "3",
        "--riemann",
        &list,
        "--h0",
        "metric",
        "--dt",
        "0.01",
        "--t-end",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        pinch(&["evolve", "--model", "torus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pinch(&["evolve", "--model", "sphere", "--n", "4"])
            .status
            .code(),
        Some(2)
    );
    let out = pinch(&[
        "evolve", "--model", "sphere", "--n", "4", "--kappa0", "1", "--h0", "metric", "--dt",
        "0.01", "--t-end", "0.3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_documents() {
    let a = scratch("a.json", &format!(r#"{{"n":4,"kappa":1,"h":{ID4}}}"#));
    let doc = json(&pinch(&["decompose", a.to_str().unwrap()]));
    assert_eq!(doc["R"], 12.0);
    assert_eq!(doc["weyl_norm"], 0.0);
    assert!(doc["P"].as_f64().unwrap().abs() < 1e-12);

    let b = scratch(
        "b.json",
        &format!(
            r#"{{"n":4,"ricci":[3,0,0,0,0,3,0,0,0,0,3,0,0,0,0,3],"h":[1{}]}}"#,
            ",0".repeat(15)
        ),
    );
    let doc = json(&pinch(&["decompose", b.to_str().unwrap()]));
    assert!((doc["P"].as_f64().unwrap() - 36.0).abs() < 1e-10);

    let c = scratch(
        "c.json",
        &format!(r#"{{"n":4,"kappa":1,"riemann":[],"h":{ID4}}}"#),
    );
    assert_eq!(
        pinch(&["decompose", c.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        pinch(&["decompose", "/nonexistent/doc.json"]).status.code(),
        Some(2)
    );
}
