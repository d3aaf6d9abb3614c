//! The committed `fixtures/` files must match what the catalog generates,
//! and their curvature must match hand-derived values.

use std::path::PathBuf;

use solitonforge::cli_io::{catalog, format};
use solitonforge::curvature;
use solitonforge::Tolerances;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn load(name: &str) -> solitonforge::MetricLieAlgebra {
    format::load(&fixture_dir().join(format!("{name}.json")), &Tolerances::default()).unwrap()
}

#[test]
fn fixtures_match_catalog() {
    let entries = catalog::catalog();
    let mut files: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    files.sort();
    let mut names: Vec<String> = entries.iter().map(|e| format!("{}.json", e.name())).collect();
    names.sort();
    assert_eq!(files, names);
    for e in entries {
        let path = fixture_dir().join(format!("{}.json", e.name()));
        let committed = std::fs::read_to_string(&path).unwrap();
        assert_eq!(committed, format::to_json(&e.algebra), "{} is stale; re-run `solitonforge catalog --emit`", e.name());
    }
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
    }
}

#[test]
fn fixture_curvature_values() {
    let t = Tolerances::default();
    let cases: [(&str, Vec<f64>, f64); 7] = [
        ("heisenberg3", vec![-0.5, -0.5, 0.5], -0.5),
        ("heisenberg5", vec![-0.5, -0.5, -0.5, -0.5, 1.0], -1.0),
        ("solv2", vec![-1.0, -1.0], -2.0),
        ("abelian_4", vec![0.0; 4], 0.0),
        ("einstein_ext_heis3", vec![-1.5; 4], -6.0),
        ("ambient_heis3_m2", vec![-1.5; 6], -9.0),
        ("hyperbolic_4", vec![-1.0; 4], -4.0),
    ];
    for (name, eig, scal) in cases {
        let r = curvature::ricci(&load(name), &t).unwrap();
        assert_close(&r.eigenvalues, &eig, 1e-12);
        assert!((r.scal - scal).abs() <= 1e-12, "{name}: scal {}", r.scal);
    }
    // WPE extension with m = 2: scal = 4λ + m L² + m L tr(T) = −51/14.
    let r = curvature::ricci(&load("wpe_ext_heis3_m2"), &t).unwrap();
    assert!((r.scal + 51.0 / 14.0).abs() <= 1e-12, "{}", r.scal);
}
