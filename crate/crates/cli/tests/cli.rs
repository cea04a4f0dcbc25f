use std::path::Path;
use std::process::{Command, Output};

use corrgraph::correlations::SyncCorrelation;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corrgraph")).args(args).env_remove("CORRGRAPH_SEED").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

#[test]
fn default_grid_has_21_rows() {
    let o = run(&["curves", "--graph", "complete:5", "--fns", "--floc"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 22);
    assert!(text.starts_with("t,f_ns,f_loc,f_vect,f_q_upper,status_ns,status_loc,status_vect,status_q_upper\n"));
    let ns = csv_column(&text, "f_ns");
    assert_eq!(ns[10].parse::<f64>().unwrap(), 0.0);
    assert_eq!(ns[20].parse::<f64>().unwrap(), 20.0);
    assert!(csv_column(&text, "status_vect").iter().all(|s| s == "skipped"));
}

#[test]
fn pentagon_vect_to_file_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("c5.csv"), dir.path().join("c5.svg"));
    let o = run(&[
        "curves", "--graph", "cycle:5", "--grid", "0.5", "--fvect",
        "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let v: f64 = csv_column(&text, "f_vect")[0].parse().unwrap();
    // unit vectors at angle 4π/5 across each edge: 10 · (1 + cos 4π/5) / 4
    let expected = 2.5 * (1.0 - (std::f64::consts::PI / 5.0).cos());
    assert!((v - expected).abs() < 1e-6, "{v} vs {expected}");
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline") && svg.contains("f_vect"));
}

#[test]
fn k5_svg_shades_band_and_gap() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("k5.svg");
    let o = run(&["curves", "--graph", "complete:5", "--grid", "0.4,0.5,0.6", "--all", "--svg", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.contains("0.27639") && svg.contains("<polygon"));
}

#[test]
fn bad_inputs_are_usage_errors() {
    assert_eq!(code(&run(&["curves", "--graph", "dodecahedron"])), 2);
    assert_eq!(code(&run(&["curves", "--graph", "cycle:5", "--grid", "0:0.5"])), 2);
    assert_eq!(code(&run(&["curves", "--graph", "cycle:5", "--grid", "1.5"])), 2);
    assert_eq!(code(&run(&["certify-nonclosure", "--t", ""])), 2);
    assert_eq!(code(&run(&["certify-nonclosure", "--t", "0.3"])), 2);
    assert_eq!(code(&run(&["game", "--t", "0.5"])), 2);
}

#[test]
fn certificate_and_witness_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let wdir = dir.path().join("w");
    let cert = dir.path().join("cert.json");
    let o = run(&[
        "certify-nonclosure", "--t", "3/10,1/2,7/10",
        "--witness-dir", wdir.to_str().unwrap(), "--out", cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["complete"], true);
    assert_eq!(c["seed"], 0x5eed);
    assert!(c["tolerances"]["gap"].as_f64().is_some());
    assert!(c["max_gap"].as_f64().unwrap() <= 1e-5);
    assert_eq!(c["second_differences"].as_array().unwrap().len(), 1);
    for e in c["entries"].as_array().unwrap() {
        let file = wdir.join(e["witness_file"].as_str().unwrap());
        let o = run(&["verify-witness", file.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        assert_eq!(json(&o)["pass"], true);
    }
}

fn pentagon_witness(dir: &Path) -> (std::path::PathBuf, Value) {
    let o = run(&["certify-nonclosure", "--t", "1/2", "--witness-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let path = dir.join("witness_t1-2.json");
    let doc = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (path, doc)
}

#[test]
fn tampered_witnesses_fail() {
    let dir = tempfile::tempdir().unwrap();
    let (_, doc) = pentagon_witness(dir.path());

    let mut perturbed = doc.clone();
    let x = perturbed["projections"][0][0].as_f64().unwrap();
    perturbed["projections"][0][0] = (x + 1e-3).into();
    let p = dir.path().join("perturbed.json");
    std::fs::write(&p, perturbed.to_string()).unwrap();
    let o = run(&["verify-witness", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["projection_ok"], false);

    let mut wrong_t = doc.clone();
    wrong_t["t"] = 0.4.into();
    wrong_t["t_exact"] = "2/5".into();
    let p = dir.path().join("wrong_t.json");
    std::fs::write(&p, wrong_t.to_string()).unwrap();
    let o = run(&["verify-witness", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["trace_ok"], false);

    let p = dir.path().join("garbage.json");
    std::fs::write(&p, "{\"dim\": 2}").unwrap();
    assert_eq!(code(&run(&["verify-witness", p.to_str().unwrap()])), 2);
}

#[test]
fn seed_env_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_corrgraph"))
        .args(["certify-nonclosure", "--t", "1/2", "--seed", "1"])
        .env("CORRGRAPH_SEED", "77")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["seed"], 77);
}

#[test]
fn game_reports() {
    let o = run(&["game", "--t", "1/2"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["lambda_star_exact"], "5/2");
    assert_eq!(r["attained"], true);
    assert!((r["supremum"].as_f64().unwrap() - 0.15625).abs() < 1e-12);

    let r = json(&run(&["game", "--t", "1/100"]));
    assert_eq!(r["in_interval"], false);
    assert_eq!(r["attained"], false);

    let r = json(&run(&["game", "--t", &format!("irrational:{}", 1.0 / 5f64.sqrt())]));
    assert_eq!(r["rational"], false);
    assert_eq!(r["attained"], false);

    assert_eq!(code(&run(&["game", "--n", "6", "--t", "1/2"])), 2);
}

#[test]
fn check_correlation_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = SyncCorrelation::explicit_qa_not_q(0.5).unwrap().to_json();
    let p = dir.path().join("good.json");
    std::fs::write(&p, serde_json::to_string(&good).unwrap()).unwrap();
    let o = run(&["check", p.to_str().unwrap(), "--graph", "complete:5"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["pass"], true);
    assert!((r["edge_objective"].as_f64().unwrap() - 3.75).abs() < 1e-9);

    let mut unnormalized = good.clone();
    unnormalized.p[0][1][0][0] += 0.1;
    unnormalized.p[0][1][1][1] += 0.1;
    let p = dir.path().join("unnormalized.json");
    std::fs::write(&p, serde_json::to_string(&unnormalized).unwrap()).unwrap();
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["normalized"], false);

    // shifts Alice's marginal for question 1 depending on Bob's question
    let mut signalling = good.clone();
    signalling.p[1][2] = [[0.3, 0.3], [0.2, 0.2]];
    let p = dir.path().join("signalling.json");
    std::fs::write(&p, serde_json::to_string(&signalling).unwrap()).unwrap();
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["nonsignalling"], false);

    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"n\": 3, \"p\": []}").unwrap();
    assert_eq!(code(&run(&["check", p.to_str().unwrap()])), 2);
}

#[test]
fn graph_info_petersen() {
    let o = run(&["graph-info", "--graph", "petersen"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["n"], 10);
    assert_eq!(r["ordered_edges"], 30);
    assert_eq!(r["automorphism_group_order"], 120);
    assert_eq!(r["arc_transitive"], true);
    assert!((r["fractional_chromatic"].as_f64().unwrap() - 2.5).abs() < 1e-9);
}
