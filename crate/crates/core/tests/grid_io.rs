//! Sampling, windows, peak shapes and file formats.

mod common;

use common::*;
use sgwigner::grid::*;
use sgwigner::marginals::moments;
use sgwigner::quadrature::{integrate_2d, Tolerance};
use sgwigner::{Error, WignerAt};

#[test]
fn trace_splits_into_two_peaks_without_damping() {
    let scn = silver(1.0);
    let t = 200e-6;
    let grid = auto_window(t, &scn, 5.0).unwrap();
    let f = sample(FieldKind::Trace, t, &grid, &scn).unwrap();
    let peaks = local_maxima(&f, 1e-3);
    assert_eq!(peaks.len(), 2, "{peaks:?}");
    let zc = moments(t, &scn).z_c;
    assert!(zc > 0.9e-3 && zc < 1.2e-3);
    let sep = (peaks[0].z - peaks[1].z).abs();
    assert!(rel(sep, 2.0 * zc) < 0.02, "separation {sep} vs {}", 2.0 * zc);
}

#[test]
fn trace_stays_at_origin_with_strong_damping() {
    let scn = silver(1e10);
    let t = 200e-6;
    let grid = auto_window(t, &scn, 5.0).unwrap();
    let f = sample(FieldKind::Trace, t, &grid, &scn).unwrap();
    let peaks = local_maxima(&f, 1e-3);
    assert_eq!(peaks.len(), 1, "{peaks:?}");
    assert!(peaks[0].z.abs() <= grid.dz());
    assert!(peaks[0].p.abs() <= grid.dp());
}

#[test]
fn auto_window_holds_the_trace_mass() {
    let scn = silver(1.0);
    let t = 200e-6;
    let g = auto_window(t, &scn, 5.0).unwrap();
    let w = WignerAt::new(&scn, t).unwrap();
    let mass = integrate_2d(
        |z, p| w.trace(z, p),
        (g.z_min(), g.z_max()),
        (g.p_min(), g.p_max()),
        Tolerance { rel: 1e-9, ..Tolerance::default() },
    );
    assert!(mass.value >= 1.0 - 1e-6 && mass.value < 1.0 + 1e-6, "{}", mass.value);
}

#[test]
fn auto_window_grows_with_time() {
    let scn = silver(1e3);
    let mut prev = auto_window(0.0, &scn, 4.0).unwrap();
    for t in [1e-5, 5e-5, 1e-4, 2e-4, 4e-4] {
        let g = auto_window(t, &scn, 4.0).unwrap();
        assert!(g.z_max() > prev.z_max() && g.p_max() > prev.p_max());
        prev = g;
    }
}

#[test]
fn sampling_is_pure_and_trace_nonnegative() {
    let scn = silver(1e3);
    let g = auto_window(1e-4, &scn, 5.0).unwrap();
    let a = sample(FieldKind::Trace, 1e-4, &g, &scn).unwrap();
    let b = sample(FieldKind::Trace, 1e-4, &g, &scn).unwrap();
    assert_eq!(a, b);
    assert!(a.values().iter().all(|v| *v >= 0.0));
}

#[test]
fn offdiag_parts_are_consistent() {
    let scn = silver(1e3);
    let t = 1e-7;
    let g = auto_window(t, &scn, 4.0).unwrap();
    let re = sample(FieldKind::OffdiagRe, t, &g, &scn).unwrap();
    let im = sample(FieldKind::OffdiagIm, t, &g, &scn).unwrap();
    let ab = sample(FieldKind::OffdiagAbs, t, &g, &scn).unwrap();
    for k in 0..g.len() {
        let m = re.values()[k].hypot(im.values()[k]);
        assert!((m - ab.values()[k]).abs() <= 1e-12 * ab.values()[k].max(1e-300));
    }
}

#[test]
fn files_round_trip() {
    let scn = silver(1e3);
    let g = auto_window_with(1e-4, &scn, 5.0, 33, 17).unwrap();
    let f = sample(FieldKind::DiagMinus, 1e-4, &g, &scn).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for fmt in [ExportFormat::Csv, ExportFormat::GridBin] {
        let path = dir.path().join(format!("field.{}", fmt.extension()));
        export_field(&f, &path, fmt).unwrap();
        assert_eq!(import_field(&path, fmt).unwrap(), f);
    }
    let bin = std::fs::read(dir.path().join("field.wsg")).unwrap();
    assert_eq!(bin.len(), 64 + 8 * 33 * 17);
    let csv = std::fs::read_to_string(dir.path().join("field.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "# kind,t,n_z,n_p,z_min,z_max,p_min,p_max");
    assert!(lines.next().unwrap().starts_with("# diag-,"));
    assert_eq!(csv.lines().count(), 2 + 33 * 17);
}

#[test]
fn export_to_missing_directory_fails_with_path() {
    let scn = silver(1e3);
    let g = auto_window_with(0.0, &scn, 5.0, 8, 8).unwrap();
    let f = sample(FieldKind::Trace, 0.0, &g, &scn).unwrap();
    let path = std::path::Path::new("/nonexistent-dir/x/field.csv");
    match export_field(&f, path, ExportFormat::Csv) {
        Err(Error::IoFailure { path: p, .. }) => assert!(p.ends_with("field.csv")),
        other => panic!("{other:?}"),
    }
}
