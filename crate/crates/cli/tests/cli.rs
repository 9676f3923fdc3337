use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn norden(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_norden"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn sphere_info_values() {
    let out = norden(&["sphere", "info", "--a", "3", "--b", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // a / (a^2 + b^2), -b / (a^2 + b^2)
    assert!((num(&v["nu"]) - 0.12).abs() < 1e-15);
    assert!((num(&v["nu_t"]) + 0.16).abs() < 1e-15);
    let (l, mu) = (num(&v["lambda"]), num(&v["mu"]));
    assert!((l * l - mu * mu - 0.12).abs() < 1e-14);
    assert!((2.0 * l * mu - 0.16).abs() < 1e-14);
}

#[test]
fn sphere_info_negative_parameters() {
    let v = json(&norden(&["sphere", "info", "--a", "-1", "--b", "2"]));
    assert!((num(&v["nu"]) + 0.2).abs() < 1e-15);
    assert!((num(&v["nu_t"]) + 0.4).abs() < 1e-15);
}

#[test]
fn sphere_info_rejects_isotropic_parameters() {
    let out = norden(&["sphere", "info", "--a", "0", "--b", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn sampling_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    for p in [&p1, &p2] {
        let out = norden(&["sample", "--a", "3", "--b", "4", "--count", "10", "--seed", "7", "--out", s(p)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(num(&json(&out)["max_containment_residual"]) <= 1e-10);
    }
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    let p3 = path(dir.path(), "c.json");
    norden(&["sample", "--a", "3", "--b", "4", "--count", "10", "--seed", "8", "--out", s(&p3)]);
    assert_ne!(std::fs::read(&p1).unwrap(), std::fs::read(&p3).unwrap());
}

/// Points written with the default center lie on the quadric `q(p) = a + ib`.
#[test]
fn sampled_points_lie_on_the_quadric() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = path(dir.path(), "pts.json");
    norden(&["sample", "--a", "2", "--b", "-3", "--m", "3", "--count", "10", "--out", s(&out_path)]);
    let v: Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(v["kind"], "points");
    let (re, im) = (2.0, -3.0);
    for p in v["points"].as_array().unwrap() {
        let p: Vec<f64> = p.as_array().unwrap().iter().map(num).collect();
        let (x, y) = p.split_at(3);
        let q_re: f64 = x.iter().zip(y).map(|(x, y)| x * x - y * y).sum();
        let q_im: f64 = x.iter().zip(y).map(|(x, y)| 2.0 * x * y).sum();
        assert!((q_re - re).abs() < 1e-12 && (q_im - im).abs() < 1e-12, "{q_re} {q_im}");
    }
}

fn shape_operators(file: &Path) -> Vec<Vec<Vec<f64>>> {
    let v: Value = serde_json::from_slice(&std::fs::read(file).unwrap()).unwrap();
    v["samples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            s["A"]
                .as_array()
                .unwrap()
                .iter()
                .map(|r| r.as_array().unwrap().iter().map(num).collect())
                .collect()
        })
        .collect()
}

#[test]
fn finite_difference_frames_match_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let (exact, fd) = (path(dir.path(), "exact.json"), path(dir.path(), "fd.json"));
    let base = ["sample", "--a", "3", "--b", "4", "--count", "10", "--seed", "3", "--with-frames"];
    let mut args = base.to_vec();
    args.extend(["--out", s(&exact)]);
    assert_eq!(norden(&args).status.code(), Some(0));
    let mut args = base.to_vec();
    args.extend(["--fd", "--out", s(&fd)]);
    assert_eq!(norden(&args).status.code(), Some(0));
    let mut worst = 0.0_f64;
    for (a, b) in shape_operators(&exact).iter().zip(shape_operators(&fd)) {
        for (ra, rb) in a.iter().zip(&b) {
            for (x, y) in ra.iter().zip(rb) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn sample_reports_io_errors() {
    let out = norden(&["sample", "--count", "2", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_suites_pass() {
    let out = norden(&["verify", "curvature", "--a", "3", "--b", "4", "--points", "20", "--planes", "50", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], true);
    let out = norden(&["verify", "frame", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_reports_the_first_failing_invariant() {
    // at this step the truncation error exceeds the residual threshold
    let out = norden(&["verify", "codazzi", "--a", "1", "--b", "0", "--points", "2", "--h", "0.05"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Codazzi residual at h = 5e-2"), "{stderr}");
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn verify_rejects_unknown_suites() {
    let out = norden(&["verify", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

fn sample_file(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let p = path(dir, name);
    let mut args = vec!["sample", "--with-frames", "--count", "12", "--seed", "4", "--out", s(&p)];
    args.extend_from_slice(extra);
    let out = norden(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn classify_sphere_and_hyperplane() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = sample_file(dir.path(), "s.json", &["--a", "-1", "--b", "2"]);
    let out = norden(&["classify", "--input", s(&sphere)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "HSphere");
    assert!((num(&v["recovered"]["a"]) + 1.0).abs() < 1e-9);
    assert!((num(&v["recovered"]["b"]) - 2.0).abs() < 1e-9);

    let plane = sample_file(dir.path(), "h.json", &["--hyperplane", "--d", "1", "--fd"]);
    let out = norden(&["classify", "--input", s(&plane)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "HolomorphicHyperplane");
    assert_eq!(v["corollaries"]["consistent"], true);
    assert!((num(&v["recovered"]["d"]) - 1.0).abs() < 1e-9);
}

#[test]
fn classify_dimension_gate() {
    let dir = tempfile::tempdir().unwrap();
    let small = sample_file(dir.path(), "m3.json", &["--m", "3"]);
    let out = norden(&["classify", "--input", s(&small)]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out)["verdict"], "DimensionTooSmall");
}

#[test]
fn classify_rejects_mixed_spheres() {
    let dir = tempfile::tempdir().unwrap();
    let one = sample_file(dir.path(), "one.json", &["--a", "1", "--b", "0"]);
    let two = sample_file(dir.path(), "two.json", &["--a", "3", "--b", "4"]);
    let mut v: Value = serde_json::from_slice(&std::fs::read(&one).unwrap()).unwrap();
    let w: Value = serde_json::from_slice(&std::fs::read(&two).unwrap()).unwrap();
    for key in ["points", "samples"] {
        let extra = w[key].as_array().unwrap().clone();
        v[key].as_array_mut().unwrap().extend(extra);
    }
    let mixed = path(dir.path(), "mixed.json");
    std::fs::write(&mixed, serde_json::to_string(&v).unwrap()).unwrap();
    let out = norden(&["classify", "--input", s(&mixed)]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["verdict"], "NonConstantInvariants");
}

#[test]
fn classify_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, "{\"version\": 1, \"m\": 4}").unwrap();
    assert_eq!(norden(&["classify", "--input", s(&bad)]).status.code(), Some(3));
    assert_eq!(norden(&["classify", "--input", s(&path(dir.path(), "missing.json"))]).status.code(), Some(3));
    let points = path(dir.path(), "points.json");
    norden(&["sample", "--count", "3", "--out", s(&points)]);
    assert_eq!(norden(&["classify", "--input", s(&points)]).status.code(), Some(3));
}

fn decompose(dir: &Path, rows: &str) -> Output {
    let p = path(dir, "m.json");
    std::fs::write(&p, rows).unwrap();
    norden(&["decompose", "--input", s(&p)])
}

#[test]
fn decompose_identity() {
    let dir = tempfile::tempdir().unwrap();
    let out = decompose(dir.path(), "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for pair in v["pairs"].as_array().unwrap() {
        assert!((num(&pair["lambda"]) - 1.0).abs() < 1e-12);
        assert!(num(&pair["mu"]).abs() < 1e-12);
    }
    assert!(num(&v["reconstruction_error"]) < 1e-12);
}

#[test]
fn decompose_scalar_block() {
    // 2 I + 3 J on R^4 in standard coordinates
    let dir = tempfile::tempdir().unwrap();
    let out = decompose(dir.path(), "[[2,0,3,0],[0,2,0,3],[-3,0,2,0],[0,-3,0,2]]");
    assert_eq!(out.status.code(), Some(0));
    for pair in json(&out)["pairs"].as_array().unwrap() {
        assert!((num(&pair["lambda"]) - 2.0).abs() < 1e-12);
        assert!((num(&pair["mu"]).abs() - 3.0).abs() < 1e-12);
    }
}

#[test]
fn decompose_rejections() {
    let dir = tempfile::tempdir().unwrap();
    // does not commute with J
    let out = decompose(dir.path(), "[[1,0,0,0],[0,2,0,0],[0,0,3,0],[0,0,0,4]]");
    assert_eq!(out.status.code(), Some(2));
    // realification of [[1, i], [i, -1]]
    let out = decompose(dir.path(), "[[1,0,0,-1],[0,-1,-1,0],[0,1,1,0],[1,0,0,-1]]");
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    let out = decompose(dir.path(), "[[1,2],[3]]");
    assert_eq!(out.status.code(), Some(3));
}
