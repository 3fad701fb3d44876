use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn geoft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoft"))
        .args(args)
        .output()
        .expect("spawn geoft")
}

fn ok_json(args: &[&str]) -> Value {
    let out = geoft(args);
    assert!(
        out.status.success(),
        "geoft {args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    geoft(args).status.code().expect("exit code")
}

fn put(dir: &TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn path_of(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn read_json(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn structure(rows: Value) -> Value {
    let dim = rows.as_array().unwrap().len();
    json!({ "dim": dim, "matrix": rows })
}

fn unit_torus_field(n: usize, f: impl Fn(f64) -> (f64, f64)) -> Value {
    let values: Vec<Value> = (0..n)
        .map(|k| {
            let (re, im) = f(k as f64 / n as f64);
            json!([re, im])
        })
        .collect();
    json!({
        "grid": {"dim": 1, "shape": [n], "origin": [0.0], "spacing": [1.0 / n as f64], "mode": "periodic"},
        "values": values,
    })
}

#[test]
fn pair_reports_inverse_and_determinant() {
    let dir = tempfile::tempdir().unwrap();
    let s = put(&dir, "s.json", &structure(json!([[2.0, 1.0], [0.0, 1.0]])));
    let v = ok_json(&["pair", &s]);
    assert_eq!(v["det_b"].as_f64().unwrap(), 2.0);
    let b: Vec<Vec<f64>> = serde_json::from_value(v["B"].clone()).unwrap();
    let expected = [[0.5, -0.5], [0.0, 1.0]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((b[i][j] - expected[i][j]).abs() < 1e-15);
        }
    }
    assert_eq!(v["classification"]["positive_definite"], json!(true));
    assert_eq!(v["classification"]["symmetric"], json!(false));
}

#[test]
fn pair_classifies_identity_and_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let id = put(&dir, "i.json", &structure(json!([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])));
    let v = ok_json(&["pair", &id]);
    assert_eq!(v["det_b"].as_f64().unwrap(), 1.0);
    assert_eq!(v["classification"]["symmetric"], json!(true));
    assert_eq!(v["condition_estimate"].as_f64().unwrap(), 1.0);

    let j = put(&dir, "j.json", &structure(json!([[0.0, 1.0], [-1.0, 0.0]])));
    let v = ok_json(&["pair", &j]);
    assert_eq!(v["classification"]["skew_symmetric"], json!(true));
    assert_eq!(v["classification"]["positive_definite"], json!(false));
    assert_eq!(v["det_b"].as_f64().unwrap(), 1.0);
}

#[test]
fn exit_codes_follow_error_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2, \"matrix\": ").unwrap();
    assert_eq!(code(&["pair", bad.to_str().unwrap()]), 2);
    assert_eq!(code(&["pair", "/nonexistent/structure.json"]), 2);

    let degenerate = put(&dir, "deg.json", &structure(json!([[1.0, 2.0], [2.0, 4.0]])));
    assert_eq!(code(&["pair", &degenerate]), 3);

    let field = put(&dir, "f.json", &unit_torus_field(16, |x| ((2.0 * PI * x).cos(), 0.0)));
    let unit = put(&dir, "unit.json", &structure(json!([[1.0]])));
    let neg = put(&dir, "neg.json", &structure(json!([[-1.0]])));
    assert_eq!(code(&["frac", &field, &neg, "--s", "0.5"]), 4);
    assert_eq!(code(&["frac", &field, &unit, "--s", "1.5"]), 5);

    let g = put(&dir, "g.json", &json!({"A": [[1.0]], "c": [0.0], "amp": [1.0, 0.0]}));
    let l = put(&dir, "l.json", &json!({"generator": [[1.0]]}));
    assert_eq!(code(&["poisson", &g, &l, "--space-radius", "0.5"]), 6);

    let not_pd = put(&dir, "npd.json", &json!({"A": [[-1.0]], "c": [0.0], "amp": [1.0, 0.0]}));
    assert_eq!(code(&["poisson", &not_pd, &l]), 4);
}

/// With `B = I` both sides reduce to the classical transform, whose value on
/// `exp(-π xᵀAx)` is `det(A)^{-1/2} exp(-π ξᵀA⁻¹ξ)`.
#[test]
fn identity_structure_matches_classical_gaussian_transform() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(&dir, "g.json", &json!({"A": [[2.0, 0.0], [0.0, 0.5]], "c": [0.0, 0.0], "amp": [1.0, 0.0]}));
    let s = put(&dir, "s.json", &structure(json!([[1.0, 0.0], [0.0, 1.0]])));
    let freqs: Vec<[f64; 2]> = vec![[0.0, 0.0], [0.3, -0.2], [-0.7, 0.4], [1.1, 0.9]];
    let f = put(&dir, "freqs.json", &json!(freqs));
    for side in ["left", "right"] {
        let v = ok_json(&["transform", &g, &s, "--side", side, "--method", "direct", "--freqs", &f]);
        let values = v["values"].as_array().unwrap();
        for (xi, val) in freqs.iter().zip(values) {
            let expected = (-PI * (xi[0] * xi[0] / 2.0 + xi[1] * xi[1] / 0.5)).exp();
            let (re, im) = complex(val);
            assert!((re - expected).abs() < 1e-12 && im.abs() < 1e-12, "{side} at {xi:?}: {re} {im}");
        }
    }
}

/// `F^L f(ξ) = Ff(Mᵀξ)` for a non-symmetric structure.
#[test]
fn sheared_transform_of_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(&dir, "g.json", &json!({"A": [[1.0, 0.0], [0.0, 1.0]], "c": [0.0, 0.0], "amp": [1.0, 0.0]}));
    let s = put(&dir, "s.json", &structure(json!([[2.0, 1.0], [0.0, 1.0]])));
    let freqs: Vec<[f64; 2]> = vec![[0.1, 0.2], [-0.3, 0.25]];
    let f = put(&dir, "freqs.json", &json!(freqs));
    let left = ok_json(&["transform", &g, &s, "--side", "left", "--method", "direct", "--freqs", &f]);
    let right = ok_json(&["transform", &g, &s, "--side", "right", "--method", "direct", "--freqs", &f]);
    for (k, xi) in freqs.iter().enumerate() {
        let mt = [2.0 * xi[0], xi[0] + xi[1]];
        let m = [2.0 * xi[0] + xi[1], xi[1]];
        let el = (-PI * (mt[0] * mt[0] + mt[1] * mt[1])).exp();
        let er = (-PI * (m[0] * m[0] + m[1] * m[1])).exp();
        assert!((complex(&left["values"][k]).0 - el).abs() < 1e-12);
        assert!((complex(&right["values"][k]).0 - er).abs() < 1e-12);
    }
}

#[test]
fn fft_agrees_with_direct_on_its_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(
        &dir,
        "g.json",
        &json!({"A": [[1.3, 0.2], [0.2, 0.8]], "c": [0.1, -0.2], "amp": [0.7, 0.4], "w": [0.15, 0.0]}),
    );
    let s = put(&dir, "s.json", &structure(json!([[1.2, 0.5], [-0.3, 0.9]])));
    for side in ["left", "right"] {
        let fft = ok_json(&["transform", &g, &s, "--side", side, "--points", "32", "--half", "6"]);
        let direct = ok_json(&[
            "transform", &g, &s, "--side", side, "--points", "32", "--half", "6", "--method", "direct",
        ]);
        assert_eq!(fft["lattice"], direct["lattice"]);
        let a = fft["values"].as_array().unwrap();
        let b = direct["values"].as_array().unwrap();
        assert_eq!(a.len(), 32 * 32);
        let scale = b.iter().map(|z| complex(z).0.hypot(complex(z).1)).fold(0.0, f64::max);
        let gap = a
            .iter()
            .zip(b)
            .map(|(x, y)| {
                let (x, y) = (complex(x), complex(y));
                (x.0 - y.0).hypot(x.1 - y.1)
            })
            .fold(0.0, f64::max);
        assert!(gap <= 1e-10 * scale, "{side}: {gap:e}");
    }
}

#[test]
fn round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(&dir, "g.json", &json!({"A": [[1.0, 0.0], [0.0, 1.5]], "c": [0.0, 0.0], "amp": [1.0, 0.0]}));
    let s = put(&dir, "s.json", &structure(json!([[1.0, 0.4], [0.1, 1.3]])));
    let spec = path_of(&dir, "spec.json");
    let out = geoft(&[
        "transform", &g, &s, "--side", "right", "--points", "32", "--half", "6", "--roundtrip", "-o",
        spec.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let log = String::from_utf8_lossy(&out.stderr);
    let residual: f64 = log
        .lines()
        .find_map(|l| l.strip_prefix("round-trip residual: "))
        .expect("round-trip line")
        .trim()
        .parse()
        .unwrap();
    assert!(residual < 1e-12, "{residual:e}");

    let back = path_of(&dir, "back.json");
    let csv = path_of(&dir, "back.csv");
    let out = geoft(&[
        "transform",
        spec.to_str().unwrap(),
        &s,
        "--side",
        "right",
        "--inverse",
        "-o",
        back.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("|det b|"));
    let v = read_json(&back);
    let grid = &v["grid"];
    let origin = grid["origin"][0].as_f64().unwrap();
    let h = grid["spacing"][0].as_f64().unwrap();
    let values = v["values"].as_array().unwrap();
    let mut worst: f64 = 0.0;
    for (k, z) in values.iter().enumerate() {
        let (x0, x1) = (origin + h * (k / 32) as f64, origin + h * (k % 32) as f64);
        let exact = (-PI * (x0 * x0 + 1.5 * x1 * x1)).exp();
        let (re, im) = complex(z);
        worst = worst.max((re - exact).abs()).max(im.abs());
    }
    assert!(worst < 1e-12, "{worst:e}");

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,re,im"));
    assert_eq!(lines.count(), 32 * 32);
}

#[test]
fn fft_with_explicit_points_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(&dir, "g.json", &json!({"A": [[1.0]], "c": [0.0], "amp": [1.0, 0.0]}));
    let s = put(&dir, "s.json", &structure(json!([[1.0]])));
    let f = put(&dir, "f.json", &json!([[0.0]]));
    assert_eq!(code(&["transform", &g, &s, "--freqs", &f]), 2);
}

#[test]
fn frac_of_constant_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let field = put(&dir, "f.json", &unit_torus_field(16, |_| (3.0, -1.0)));
    let s = put(&dir, "s.json", &structure(json!([[1.7]])));
    let v = ok_json(&["frac", &field, &s, "--s", "0.4"]);
    for z in v["values"].as_array().unwrap() {
        let (re, im) = complex(z);
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
    }
}

/// On the unit torus with the identity structure the multiplier of `e^{2πimx}` is `(4π²m²)^s`.
#[test]
fn frac_scales_plane_wave() {
    let dir = tempfile::tempdir().unwrap();
    let m = 3.0;
    let field = put(
        &dir,
        "f.json",
        &unit_torus_field(32, |x| ((2.0 * PI * m * x).cos(), (2.0 * PI * m * x).sin())),
    );
    let s = put(&dir, "s.json", &structure(json!([[1.0]])));
    let power = 0.3;
    let v = ok_json(&["frac", &field, &s, "--s", "0.3", "--path", "left"]);
    let lambda = (4.0 * PI * PI * m * m).powf(power);
    for (k, z) in v["values"].as_array().unwrap().iter().enumerate() {
        let x = k as f64 / 32.0;
        let (re, im) = complex(z);
        assert!((re - lambda * (2.0 * PI * m * x).cos()).abs() < 1e-11 * lambda);
        assert!((im - lambda * (2.0 * PI * m * x).sin()).abs() < 1e-11 * lambda);
    }
}

#[test]
fn frac_paths_agree_from_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let field = put(
        &dir,
        "f.json",
        &unit_torus_field(32, |x| ((2.0 * PI * x).sin() + 0.5 * (6.0 * PI * x).cos(), 0.2 * (4.0 * PI * x).sin())),
    );
    let params = put(&dir, "p.json", &json!({"s": 0.6, "structure": {"dim": 1, "matrix": [[2.5]]}, "path": "all"}));
    let out = geoft(&["frac", &field, "--params", &params]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let log = String::from_utf8_lossy(&out.stderr);
    let residual: f64 = log
        .lines()
        .find_map(|l| l.strip_prefix("path agreement residual: "))
        .expect("agreement line")
        .trim()
        .parse()
        .unwrap();
    assert!(residual <= 1e-12, "{residual:e}");
}

#[test]
fn frac_rejects_truncated_grids() {
    let dir = tempfile::tempdir().unwrap();
    let mut f = unit_torus_field(8, |_| (1.0, 0.0));
    f["grid"]["mode"] = json!("truncated");
    let field = put(&dir, "f.json", &f);
    let s = put(&dir, "s.json", &structure(json!([[1.0]])));
    assert_ne!(code(&["frac", &field, &s, "--s", "0.5"]), 0);
}

#[test]
fn poisson_on_integers_matches_theta_function() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(&dir, "g.json", &json!({"A": [[1.0]], "c": [0.0], "amp": [1.0, 0.0]}));
    let l = put(&dir, "l.json", &json!({"generator": [[1.0]]}));
    let v = ok_json(&["poisson", &g, &l, "--x", "0"]);
    let (lhs, _) = complex(&v["lhs"]);
    let (rhs, _) = complex(&v["rhs"]);
    // Σ e^{-πk²} = 1 + 2(e^{-π} + e^{-4π} + ...)
    let theta: f64 = 1.0 + 2.0 * (1..10).map(|k| (-PI * (k * k) as f64).exp()).sum::<f64>();
    assert!((lhs - theta).abs() < 1e-14 && (rhs - theta).abs() < 1e-14);
    assert!(v["abs_gap"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn poisson_all_forms_on_a_sheared_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let g = put(
        &dir,
        "g.json",
        &json!({"A": [[1.2, 0.3], [0.3, 0.9]], "c": [0.1, 0.0], "amp": [1.0, 0.5], "w": [0.05, -0.1]}),
    );
    let l = put(&dir, "l.json", &json!({"generator": [[1.0, 0.3], [0.0, 1.2]]}));
    let v = ok_json(&["poisson", &g, &l, "--x", "0.2,-0.35", "--form", "all"]);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 7);
    for r in reports {
        let (lhs_re, lhs_im) = complex(&r["lhs"]);
        let scale = lhs_re.hypot(lhs_im).max(1.0);
        assert!(r["abs_gap"].as_f64().unwrap() <= 1e-10 * scale, "{r}");
    }
    let single = ok_json(&["poisson", &g, &l, "--x", "0.2,-0.35", "--form", "PoiL"]);
    assert!(single["abs_gap"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn verify_filter_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = path_of(&dir, "a.json");
    let b = path_of(&dir, "b.json");
    for p in [&a, &b] {
        let out = geoft(&["verify", "--filter", "relb,frac.leqr", "--seed", "11", "-o", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stderr).contains("PASS relb.pair"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v = read_json(&a);
    assert_eq!(v["summary"]["total"], json!(2));
    assert_eq!(v["reports"][0]["id"], json!("relb.pair"));
    assert_eq!(v["reports"][0]["seed"], json!(11));
    assert!(v["reports"][0].get("runtime_ms").is_none());

    let v = ok_json(&["verify", "--filter", "no.such.check"]);
    assert_eq!(v["summary"]["total"], json!(0));

    let v = ok_json(&["verify", "--filter", "relb", "--timings"]);
    assert!(v["reports"][0]["runtime_ms"].is_number());
}

#[test]
fn verify_lists_catalog() {
    let v = ok_json(&["verify", "--list"]);
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"teo2.i.fft"));
    assert!(ids.contains(&"poisson.dual"));
    assert!(ids.len() >= 80);
}
