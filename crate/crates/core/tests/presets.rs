//! Runs every built-in preset end to end and checks what lands on disk.
//!
//! The presets share one test so that only one large grid is alive at a time.

use std::path::Path;

use diracsim::io::config::Observable;
use diracsim::io::scenario::read_report;
use diracsim::io::{import_slice, preset, preset_names, read_series_file, run_scenario};

fn check_slices(dir: &Path, files: &[String], time: f64) {
    for f in files.iter().filter(|f| f.ends_with(".dat")) {
        let text = std::fs::read_to_string(dir.join(f)).unwrap();
        let s = import_slice(&text).unwrap();
        assert_eq!(s.time, time, "{f}");
        assert_eq!(s.slice.values.len(), s.slice.rows * s.slice.cols);
        assert!(s.slice.values.iter().all(|v| v.is_finite()), "{f}");
        if s.quantity == "density" {
            assert!(s.slice.values.iter().all(|&v| v >= 0.0));
            assert!(s.slice.values.iter().any(|&v| v > 0.0), "{f} is empty");
        }
    }
}

#[test]
fn every_preset_runs_cleanly() {
    let root = tempfile::tempdir().unwrap();
    for name in preset_names() {
        let cfg = preset(name).unwrap();
        let dir = root.path().join(name);
        let report = run_scenario(&cfg, Some(&dir)).unwrap();
        assert!(report.complete, "{name}: {:?}", report.errors);
        assert_eq!(report.exit_code, 0, "{name}");
        assert_eq!(read_report(&dir.join("report.json")).unwrap(), report, "{name}");

        let obs = &cfg.outputs.observables;
        if obs.contains(&Observable::WCurve) {
            let w = report.w.as_ref().unwrap();
            assert!((w.totals[0] + w.totals[1] - 1.0).abs() < 1e-6, "{name}");
            assert!(dir.join("w_curve.csv").is_file());
        }
        if obs.contains(&Observable::Oracle) {
            let rows = read_series_file(&dir.join("series_oracle.csv")).unwrap();
            assert!(rows.len() > 1, "{name}");
        }
        for engine in &report.engines {
            assert!(engine.complete, "{name}/{}", engine.engine);
            assert!(engine.max_norm_deviation < 1e-6, "{name}/{}", engine.engine);
            let sub = dir.join(&engine.engine);
            assert_eq!(engine.snapshots.len(), cfg.schedule.snapshots.len(), "{name}");
            for snap in &engine.snapshots {
                let expected = cfg.outputs.slices.len()
                    * (obs.contains(&Observable::Density) as usize
                        + 3 * obs.contains(&Observable::SpinDensity) as usize);
                let dats = snap.files.iter().filter(|f| f.ends_with(".dat")).count();
                assert_eq!(dats, expected, "{name}/{} at t = {}", engine.engine, snap.time);
                for f in &snap.files {
                    assert!(sub.join(f).is_file(), "{name}: missing {f}");
                }
                check_slices(&sub, &snap.files, snap.time);
            }
        }
    }
}
