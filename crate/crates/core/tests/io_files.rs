//! File-level interchange: path CSV, vector-field JSON and check reports.

use proptest::prelude::*;
use tempfile::TempDir;

use rough_besov::io::{field_to_json, read_field_file, read_path_file, write_path_file};
use rough_besov::path::{EuclideanPath, TimeGrid};
use rough_besov::vector_field::VectorField;
use rough_besov::verify::record::{write_csv, write_json};
use rough_besov::verify::{run_suite_scaled, Suite, SuiteScale};
use rough_besov::Error;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, -1e-6..1e-6f64, Just(0.0), Just(-0.0), Just(f64::MIN_POSITIVE), Just(f64::MAX)]
}

fn any_path() -> impl Strategy<Value = EuclideanPath> {
    (1usize..=4, prop::collection::vec(1e-9..10.0f64, 1..=20)).prop_flat_map(|(dim, steps)| {
        let mut t = 0.0;
        let times: Vec<f64> = std::iter::once(0.0)
            .chain(steps.iter().map(|s| {
                t += s;
                t
            }))
            .collect();
        prop::collection::vec(finite(), dim * times.len()).prop_map(move |flat| {
            let values = flat.chunks(dim).map(<[f64]>::to_vec).collect();
            EuclideanPath::new(TimeGrid::new(times.clone()).unwrap(), values).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_files_round_trip_losslessly(path in any_path()) {
        let dir = TempDir::new().unwrap();
        let file = dir.path().join("path.csv");
        write_path_file(&path, &file).unwrap();
        let back = read_path_file(&file).unwrap();
        prop_assert_eq!(back.grid().times(), path.grid().times());
        for j in 0..path.grid().len() {
            let (a, b) = (back.point(j), path.point(j));
            prop_assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }
}

#[test]
fn field_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let quads = vec![vec![0.1, 0.2, 0.2, -0.3, 0.0, 0.5, 0.5, 1.0]; 2];
    let v = VectorField::polynomial(&[vec![1.0, 0.0], vec![0.0, -1.0]], &vec![vec![0.0, -1.0, 1.0, 0.0]; 2], &quads, 2, 4.0)
        .unwrap()
        .with_gamma(2.5)
        .unwrap();
    let file = dir.path().join("field.json");
    std::fs::write(&file, field_to_json(&v).unwrap()).unwrap();
    let back = read_field_file(&file).unwrap();
    assert_eq!(back, v);
    assert!(matches!(read_field_file(&dir.path().join("missing.json")), Err(Error::Io(_))));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let scale = SuiteScale::quick();
    let mut texts = Vec::new();
    for run in 0..2 {
        let records = run_suite_scaled(Suite::Algebra, 7, &scale).unwrap();
        let (json, csv) = (dir.path().join(format!("r{run}.json")), dir.path().join(format!("r{run}.csv")));
        write_json(&records, &json).unwrap();
        write_csv(&records, &csv).unwrap();
        texts.push((std::fs::read(&json).unwrap(), std::fs::read(&csv).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
    let doc: serde_json::Value = serde_json::from_slice(&texts[0].0).unwrap();
    let arr = doc.as_array().expect("report is an array of records");
    assert!(arr.iter().all(|r| r["schema_version"] == 1 && r["id"].is_string()));
    let csv = String::from_utf8(texts[0].1.clone()).unwrap();
    assert!(csv.starts_with("id,delta,p,gamma,b,l,lhs,rhs,constant,pass,expect_fail,ok\n"));
    assert_eq!(csv.lines().count(), arr.len() + 1);
}
