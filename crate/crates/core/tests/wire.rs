use norden::classify::SampleSet;
use norden::hypersurface::Hypersurface;
use norden::io::{parse_matrix, to_json_string, CloudKind, PointCloudFile};
use norden::space::{NordenSpace, RealVector};
use norden::verify::test_sphere;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3..1e3_f64,
        Just(0.0),
        Just(-0.0),
    ]
}

fn cloud() -> impl Strategy<Value = (usize, Vec<Vec<f64>>, Option<String>)> {
    (1..5_usize).prop_flat_map(|m| {
        (
            Just(m),
            prop::collection::vec(prop::collection::vec(finite(), 2 * m), 0..8),
            prop::option::of("[ -~]{0,20}"),
        )
    })
}

proptest! {
    #[test]
    fn point_files_round_trip((m, points, provenance) in cloud()) {
        let space = NordenSpace::new(m).unwrap();
        let pts: Vec<RealVector> = points.iter().map(|p| RealVector::from_vec(p.clone())).collect();
        let file = PointCloudFile::from_points(space, &pts, provenance);
        let back = PointCloudFile::from_json(&file.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.kind, CloudKind::Points);
        for (a, b) in back.points.iter().flatten().zip(file.points.iter().flatten()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        prop_assert_eq!(back, file);
    }

    #[test]
    fn floats_survive_the_formatter(x in finite()) {
        let back: f64 = serde_json::from_str(&to_json_string(&x).unwrap()).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn sample_files_round_trip(seed in 0..500_u64, m in 2..5_usize) {
        let sphere = test_sphere(-1.0, 2.0, m, seed).unwrap();
        let space = NordenSpace::new(m).unwrap();
        let set = SampleSet::new(space, sphere.sample_surfaces(3, seed, 1e-9).unwrap(), "sphere").unwrap();
        let file = PointCloudFile::from_sample_set(&set);
        let back = PointCloudFile::from_json(&file.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &file);
        let restored = back.to_sample_set(1e-9).unwrap();
        prop_assert_eq!(restored.samples(), set.samples());
    }
}

#[test]
fn files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cloud.json");
    let space = NordenSpace::new(2).unwrap();
    let file = PointCloudFile::from_points(space, &[space.e(0), space.f(1) * 0.1], Some("unit".into()));
    file.write(&path).unwrap();
    assert_eq!(PointCloudFile::read(&path).unwrap(), file);
    assert!(PointCloudFile::read(&dir.path().join("missing.json")).is_err());
}

#[test]
fn malformed_documents() {
    for text in [
        "",
        "[]",
        r#"{"version": 1, "m": 2, "kind": "points"}"#,
        r#"{"version": 2, "m": 2, "kind": "points", "points": []}"#,
        r#"{"version": 1, "m": 2, "kind": "points", "points": [[1, 2, 3]]}"#,
        r#"{"version": 1, "m": 2, "kind": "samples", "points": []}"#,
        r#"{"version": 1, "m": 0, "kind": "points", "points": []}"#,
        r#"{"version": 1, "m": 2, "kind": "lines", "points": []}"#,
    ] {
        assert!(PointCloudFile::from_json(text).is_err(), "{text}");
    }
    assert!(parse_matrix("[]").is_err());
    assert!(parse_matrix("[[1, \"a\"]]").is_err());
}
