use std::path::Path;

use pisubspace::ingest::{
    load_samples, parse_samples, render_samples, save_samples, save_samples_as, Coordinates,
};
use pisubspace::models::{HartmannModel, ModelFunction, ParameterSpace};
use pisubspace::subspace::{estimate_c_from_samples, GradientSampleSet};
use pisubspace::Error;

fn set() -> GradientSampleSet {
    GradientSampleSet::draw(&HartmannModel::b_ind(), 12, 17).unwrap()
}

#[test]
fn round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let s = set();
    save_samples(&s, &path).unwrap();
    let back = load_samples(&path, Some(&ParameterSpace::hartmann())).unwrap();
    assert_eq!(back.records, s.records);
    assert_eq!(back.provenance.seed, Some(17));
    assert_eq!(
        estimate_c_from_samples(&back).unwrap().matrix,
        estimate_c_from_samples(&s).unwrap().matrix
    );
}

#[test]
fn existing_files_are_not_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    save_samples(&set(), &path).unwrap();
    let before = std::fs::read(&path).unwrap();
    let err = save_samples(&set(), &path).unwrap_err();
    assert!(matches!(err, Error::SampleFile { .. }));
    assert_eq!(std::fs::read(&path).unwrap(), before);
}

#[test]
fn nan_reports_its_row() {
    let text = render_samples(&set(), Coordinates::NormalizedLog).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let data_start = lines.iter().position(|l| !l.starts_with('#')).unwrap() + 1;
    let row = &mut lines[data_start + 6];
    let mut cells: Vec<&str> = row.split(',').collect();
    cells[6] = "NaN";
    *row = cells.join(",");
    let err = parse_samples(&lines.join("\n"), Path::new("x.csv"), None).unwrap_err();
    match err {
        Error::NonFinite { row, .. } => assert_eq!(row, 7),
        other => panic!("{other:?}"),
    }
}

#[test]
fn malformed_files_are_rejected() {
    let text = render_samples(&set(), Coordinates::NormalizedLog).unwrap();
    let p = Path::new("x.csv");
    let truncated: String =
        text.lines().map(|l| format!("{l}\n")).collect::<String>() + "0.1,0.2\n";
    assert!(parse_samples(&truncated, p, None).is_err());
    let no_header: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    assert!(parse_samples(&no_header, p, None).is_err());
    assert!(parse_samples(&text, p, Some(&ParameterSpace::standard(5))).is_err());
    assert!(load_samples("/nonexistent/file.csv", None).is_err());
}

#[test]
fn physical_files_convert_to_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let s = set();
    let norm = dir.path().join("n.csv");
    let phys = dir.path().join("p.csv");
    save_samples(&s, &norm).unwrap();
    save_samples_as(&s, &phys, Coordinates::Physical).unwrap();
    let a = load_samples(&norm, None).unwrap();
    let b = load_samples(&phys, None).unwrap();
    assert!(b.provenance.converted_from_physical);
    for (ra, rb) in a.records.iter().zip(&b.records) {
        for (x, y) in ra.x_normalized.iter().zip(&rb.x_normalized) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in ra.grad.iter().zip(&rb.grad) {
            assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()));
        }
    }
    let (ca, cb) = (
        estimate_c_from_samples(&a).unwrap().matrix,
        estimate_c_from_samples(&b).unwrap().matrix,
    );
    assert!((ca - &cb).amax() < 1e-12 * cb.amax());
}

#[test]
fn coordinate_maps_are_inverse() {
    let space = HartmannModel::u_avg().space().clone();
    for r in &set().records {
        let t = space.to_physical(&r.x_normalized);
        let xi = space.to_normalized(&t).unwrap();
        for (a, b) in xi.iter().zip(&r.x_normalized) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
