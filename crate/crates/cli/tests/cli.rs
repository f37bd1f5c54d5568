use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gsb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Rows of a CSV report as maps from column name to cell text.
fn read_rows(path: &Path) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            headers.iter().map(String::from).zip(rec.iter().map(String::from)).collect()
        })
        .collect()
}

fn num(row: &std::collections::HashMap<String, String>, col: &str) -> f64 {
    row[col].parse().unwrap()
}

#[test]
fn mass_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let out = gsb(&["verify", "mass", "--group", "torus:1", "--t", "1", "--out", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows(&dir.path().join("mass_torus1_t1.csv"));
    assert_eq!(rows.len(), 1);
    assert!(num(&rows[0], "rel_err") <= 1e-10);
    assert_eq!(rows[0]["pass"], "true");
}

#[test]
fn su2_unitarity_at_cutoff_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = gsb(&[
        "verify", "unitarity", "--group", "su2", "--t", "1", "--cutoff", "4", "--out", path_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows(&dir.path().join("unitarity_su2_t1.csv"));
    assert_eq!(rows.len(), 1 + 4 + 9 + 16);
    for r in &rows {
        assert!(num(r, "rel_err") <= 1e-3, "{r:?}");
        assert_eq!(r["tol"].parse::<f64>().unwrap(), 1e-3);
    }
}

#[test]
fn failing_tolerance_exits_one_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = gsb(&[
        "verify", "unitarity", "--group", "su2", "--cutoff", "2", "--tolerance", "1e-30", "--out", path_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(dir.path().join("unitarity_su2_t1.csv").exists());
}

#[test]
fn bad_config_exits_two_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("reports");
    let cases = [
        ("malformed.json", "{\"group\": \"su2\", "),
        ("unknown.json", r#"{"group": "su2", "colour": "blue"}"#),
        ("negative.json", r#"{"t": [1.0, -2.0]}"#),
        ("cutoff.json", r#"{"cutoff": 100}"#),
        ("radius.json", r#"{"radii": [60.0]}"#),
    ];
    for (name, text) in cases {
        let cfg = dir.path().join(name);
        fs::write(&cfg, text).unwrap();
        let out = gsb(&["verify", "mass", "--config", path_str(&cfg), "--out", path_str(&out_dir)]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(!out.stderr.is_empty());
        assert!(!out_dir.exists(), "{name} left files behind");
    }
    let out = gsb(&["verify", "mass", "--t", "0", "--out", path_str(&out_dir)]);
    assert_eq!(out.status.code(), Some(2));
    let out = gsb(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"group": "su2", "t": [0.5], "format": "json"}"#).unwrap();
    let out = gsb(&[
        "verify", "mass", "--group", "torus:1", "--t", "2", "--config", path_str(&cfg), "--out", path_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("mass_su2_t0.5.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["columns"][0], "case_id");
    assert_eq!(v["rows"][0][5], true);
    assert!(v["rows"][0][3].as_f64().unwrap() <= 1e-10);
}

#[test]
fn symbol_report_degree_equals_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = gsb(&["report", "symbol", "--group", "su2", "--t", "1", "--n", "3", "--out", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let rows = read_rows(&dir.path().join("symbol_su2_t1.csv"));
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["degree"] == "3" && r["n"] == "3"));
    let top = rows.iter().find(|r| r["power"] == "3").unwrap();
    assert_eq!(num(top, "coefficient"), 1.0);
}

#[test]
fn lattice_report_gap_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = gsb(&[
        "report", "lattice", "--group", "su2", "--tau", "1,4,16,64,256", "--out", path_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let gaps: Vec<f64> = read_rows(&dir.path().join("lattice_su2.csv")).iter().map(|r| num(r, "gap")).collect();
    assert_eq!(gaps.len(), 5);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");

    let out = gsb(&["report", "lattice", "--tau", "4,1", "--out", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn smoothness_of_the_constant_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    for g in ["torus:1", "su2"] {
        let out = gsb(&["report", "smoothness", "--group", g, "--out", path_str(dir.path())]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["smoothness_torus1_t1.csv", "smoothness_su2_t1.csv"] {
        let rows = read_rows(&dir.path().join(name));
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r["stable"] == "true"), "{name}");
    }
}

#[test]
fn bounds_report_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let out = gsb(&["report", "bounds", "--group", "torus:2", "--t", "1", "--out", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let alpha = read_rows(&dir.path().join("bounds_alpha_torus2_t1.csv"));
    assert_eq!(alpha.len(), 3);
    let cons = read_rows(&dir.path().join("bounds_consistency_torus2_t1.csv"));
    assert!(!cons.is_empty());
    assert!(cons.iter().all(|r| num(r, "ratio") > 0.0));
}

fn write_inputs(dir: &Path, coefs: &str, points: &str) -> (String, String) {
    let c = dir.join("coefs.json");
    let p = dir.join("points.json");
    fs::write(&c, coefs).unwrap();
    fs::write(&p, points).unwrap();
    (path_str(&c).to_string(), path_str(&p).to_string())
}

#[test]
fn invert_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let (c, p) = write_inputs(
        dir.path(),
        r#"{"group": "torus:1", "entries": [{"label": "n=(1)", "matrix": [[1, 0]]}]}"#,
        "[[0.0], [0.7], [2.5], [-1.9]]",
    );
    let out = gsb(&["invert", "--coefs", &c, "--points", &p, "--out", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows(&dir.path().join("invert_torus1_t1.csv"));
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!(num(r, "abs_err") <= 1e-8, "{r:?}");
        assert_eq!(r["stabilized"], "true");
        assert_eq!(r["trace"].split(';').count(), 4);
    }
}

#[test]
fn invert_su2_character() {
    let dir = tempfile::tempdir().unwrap();
    let (c, p) = write_inputs(
        dir.path(),
        r#"{"group": "su2", "entries": [{"label": "m=2", "matrix": [[1, 0], [0, 0], [0, 0], [1, 0]]}]}"#,
        r#"{"points": [[1, 0, 0, 0], [0.3, 0.5, -0.2, 0.7]]}"#,
    );
    let out = gsb(&["invert", "--coefs", &c, "--points", &p, "--out", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows(&dir.path().join("invert_su2_t1.csv"));
    assert_eq!(rows.len(), 2);
    // χ_2(identity) = 2
    assert!((num(&rows[0], "spectral_re") - 2.0).abs() < 1e-12);
    for r in &rows {
        assert!(num(r, "abs_err") <= 1e-2, "{r:?}");
        assert_eq!(num(r, "radius"), 10.0);
    }
}

#[test]
fn invert_empty_points_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (c, p) = write_inputs(
        dir.path(),
        r#"{"group": "torus:1", "entries": [{"label": "n=(2)", "matrix": [[0, 1]]}]}"#,
        "[]",
    );
    let out = gsb(&["invert", "--coefs", &c, "--points", &p, "--out", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("invert_torus1_t1.csv")).unwrap();
    assert_eq!(text.lines().count(), 1, "header only");

    let bad_dir = dir.path().join("bad");
    let (c, p) = write_inputs(dir.path(), r#"{"group": "torus:1", "entries": [{"label": "m=2"}]}"#, "[]");
    let out = gsb(&["invert", "--coefs", &c, "--points", &p, "--out", path_str(&bad_dir)]);
    assert_eq!(out.status.code(), Some(2));
    let (c, p) = write_inputs(
        dir.path(),
        r#"{"group": "torus:1", "entries": [{"label": "n=(2)", "matrix": [[0, 1]]}]}"#,
        "[[1.0, 2.0]]",
    );
    let out = gsb(&["invert", "--coefs", &c, "--points", &p, "--out", path_str(&bad_dir)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!bad_dir.exists());
}

#[test]
fn reports_are_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = gsb(&[
            "verify", "reproducing", "--group", "torus:1", "--t", "0.5,1", "--seed", "9", "--out", path_str(dir.path()),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let out = gsb(&["report", "bounds", "--group", "su2", "--format", "json", "--out", path_str(dir.path())]);
        assert_eq!(out.status.code(), Some(0));
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 4);
    for name in names {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap());
    }
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gsb"))
        .args(["verify", "mass", "--out", path_str(dir.path())])
        .env("GSB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_gsb"))
        .args(["verify", "mass", "--out", path_str(&dir.path().join("x"))])
        .env("GSB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
