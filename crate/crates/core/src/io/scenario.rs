//! Runs a configuration end to end and writes every artifact plus `report.json`.
//!
//! Directory layout under `outputs.directory`:
//!
//! ```text
//! config.toml                 resolved configuration (re-runnable)
//! report.json                 fits, symmetry metrics, norms, errors
//! series_oracle.csv           quadrature expectation values
//! w_curve.csv                 pz, w_plus, w_minus
//! spectral/, fdtd/            per engine: series.csv, field_t*.bin, *.dat slices
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdtd::{self, LeapFrogOptions, LeapFrogState};
use crate::grid::{slice_scalar, BispinorField, Plane, PositionGrid};
use crate::io::config::{DtSetting, Observable, RunConfig};
use crate::io::dump::write_dump;
use crate::io::series_csv::{write_series_file, SeriesRow};
use crate::io::slice::{export_slice, TextSlice};
use crate::observables::symmetry::significant_planes;
use crate::observables::zb::zb_fit_values;
use crate::observables::{
    axial_metric_spectral, drift_velocity_general, probability_density, spin_density, spin_expectation,
    symmetry_metrics, velocity_expectation_position, OracleTable, Quantity, SymmetryKind,
};
use crate::observables::density::{spin_expectation_momentum, velocity_expectation_grid};
use crate::packet::{initial_bispinor_field, PolarizationKind, PolarizedState};
use crate::spectral::split::{default_pz_samples, w_curve, w_totals};
use crate::spectral::SpectralEngine;
use crate::spinor::Axis;

/// z planes holding at least this fraction of the peak density enter the spectral axial metric.
const AXIAL_PLANE_FRACTION: f64 = 0.1;
const NEGLIGIBLE_AMPLITUDE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFit {
    pub quantity: String,
    pub axis: String,
    pub drift: f64,
    pub frequency: Option<f64>,
    pub amplitude: f64,
    /// Time after which the oscillation envelope stays below 10% of its start value.
    pub decay_time_10pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotReport {
    pub time: f64,
    pub norm: f64,
    pub axial: f64,
    pub z_parity: f64,
    pub xy_parity: f64,
    /// Exact-rotation axial metric from the Fourier interpolant (spectral engine only).
    pub axial_spectral: Option<f64>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineReport {
    pub engine: String,
    pub complete: bool,
    pub error: Option<String>,
    pub dt: Option<f64>,
    pub steps: usize,
    pub max_norm_deviation: f64,
    pub snapshots: Vec<SnapshotReport>,
    pub fits: Vec<ComponentFit>,
    pub notes: Vec<String>,
}

impl EngineReport {
    fn new(engine: &str) -> Self {
        EngineReport {
            engine: engine.into(),
            complete: true,
            error: None,
            dt: None,
            steps: 0,
            max_norm_deviation: 0.0,
            snapshots: Vec::new(),
            fits: Vec::new(),
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineComparison {
    pub time: f64,
    /// ‖ρ_fdtd − ρ_spectral‖₂ / ‖ρ_spectral‖₂ over the grid.
    pub density_rel_l2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WReport {
    /// Trapezoid integrals of the written samples.
    pub sampled_integrals: [f64; 2],
    /// Converged quadrature of ∫W± dp_z.
    pub totals: [f64; 2],
    /// p_z at the maxima of W₊ and W₋.
    pub peaks: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub complete: bool,
    pub parameters: String,
    /// Exact constant drift velocity per axis (m_axial = 0 only).
    pub drift_exact: Option<[f64; 3]>,
    pub oracle_fits: Vec<ComponentFit>,
    pub engines: Vec<EngineReport>,
    pub comparisons: Vec<EngineComparison>,
    pub w: Option<WReport>,
    pub errors: Vec<String>,
    pub notes: Vec<String>,
    /// Exit code the driver should use: 0, or that of the first recorded error.
    pub exit_code: i32,
}

impl ScenarioReport {
    fn record(&mut self, e: &Error) {
        if self.exit_code == 0 {
            self.exit_code = e.exit_code();
        }
        self.complete = false;
        self.errors.push(e.to_string());
    }
}

fn kind_label(kind: PolarizationKind) -> &'static str {
    match kind {
        PolarizationKind::ExampleI => "example-i",
        PolarizationKind::ExampleII => "example-ii",
        PolarizationKind::General => "general",
    }
}

/// One-line description of the run used in slice headers.
pub fn parameter_line(cfg: &RunConfig, state: &PolarizedState) -> String {
    let p = &cfg.packet;
    format!(
        "d={} delta={} k0={} m_axial={} polarization={}",
        p.d,
        p.delta,
        p.k0,
        p.m_axial,
        kind_label(state.kind())
    )
}

/// Uniform series times 0, Δ, 2Δ, … ≤ t_end; empty when disabled.
pub fn series_times(cfg: &RunConfig) -> Vec<f64> {
    let s = &cfg.schedule;
    if s.series_dt <= 0.0 {
        return Vec::new();
    }
    let n = (s.t_end / s.series_dt + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * s.series_dt).collect()
}

/// Leap-frog step: a fixed `dt` is used as given; `"auto"` is shrunk so that it divides the
/// series interval, which keeps the recorded series uniformly spaced.
pub fn fdtd_dt(cfg: &RunConfig) -> Result<f64> {
    let dt = cfg.resolved_dt()?;
    let sdt = cfg.schedule.series_dt;
    Ok(match cfg.grid.dt {
        DtSetting::Auto if sdt > 0.0 => sdt / (sdt / dt).ceil(),
        _ => dt,
    })
}

/// Config checks plus the norm gate on the sampled initial field.
pub fn validate_sampled(cfg: &RunConfig) -> Result<BispinorField> {
    cfg.validate()?;
    initial_bispinor_field(&cfg.state()?, cfg.position_grid()?)
}

fn plane_tag(p: &Plane) -> String {
    p.to_string().replace('=', "")
}

fn fits_for(quantity: &str, times: &[f64], values: &[[f64; 3]], notes: &mut Vec<String>) -> Vec<ComponentFit> {
    let mut out = Vec::new();
    for a in Axis::ALL {
        let v: Vec<f64> = values.iter().map(|x| x[a.index()]).collect();
        match zb_fit_values(times, &v) {
            Ok(f) => {
                // Round-off residue of a component that vanishes by symmetry has no frequency.
                let oscillates = f.amplitude > NEGLIGIBLE_AMPLITUDE;
                out.push(ComponentFit {
                    quantity: quantity.into(),
                    axis: a.to_string(),
                    drift: f.drift,
                    frequency: f.frequency.filter(|_| oscillates),
                    amplitude: f.amplitude,
                    decay_time_10pct: if oscillates { f.time_to_fraction(0.1) } else { None },
                })
            }
            Err(e) => {
                notes.push(format!("{quantity} {a}: no oscillation fit ({e})"));
                break;
            }
        }
    }
    out
}

struct Writer<'a> {
    cfg: &'a RunConfig,
    params: String,
    planes: Vec<Plane>,
}

impl Writer<'_> {
    /// Dumps and slices for one snapshot; returns the file names relative to `dir`.
    fn snapshot(&self, dir: &Path, field: &BispinorField, density: &[f64]) -> Result<Vec<String>> {
        let mut files = Vec::new();
        let t = field.time;
        if self.cfg.outputs.dumps {
            let name = format!("field_t{t:.4}.bin");
            write_dump(&dir.join(&name), field)?;
            files.push(name);
        }
        let mut emit = |quantity: &str, values: &[f64], plane: Plane| -> Result<()> {
            let slice = slice_scalar(&field.grid, values, plane)?;
            let name = format!("{quantity}_{}_t{t:.4}.dat", plane_tag(&plane));
            let text = export_slice(&TextSlice {
                quantity: quantity.into(),
                time: t,
                parameters: self.params.clone(),
                slice,
            });
            fs::write(dir.join(&name), text)?;
            files.push(name);
            Ok(())
        };
        for &plane in &self.planes {
            if self.cfg.wants(Observable::Density) {
                emit("density", density, plane)?;
            }
            if self.cfg.wants(Observable::SpinDensity) {
                let s = spin_density(field);
                for a in Axis::ALL {
                    emit(&format!("spin_{a}"), s.component(a.index()), plane)?;
                }
            }
        }
        Ok(files)
    }
}

fn grid_symmetry(grid: &PositionGrid, density: &[f64]) -> [f64; 3] {
    [SymmetryKind::Axial, SymmetryKind::ZParity, SymmetryKind::XyParity].map(|k| symmetry_metrics(grid, density, k))
}

fn run_spectral(
    cfg: &RunConfig,
    state: &PolarizedState,
    w: &Writer,
    dir: &Path,
    times: &[f64],
    report: &mut EngineReport,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let engine = SpectralEngine::new(*state, cfg.position_grid()?)?;
    let mut densities = Vec::new();
    if cfg.wants(Observable::Series) && !times.is_empty() {
        let mut rows = Vec::with_capacity(times.len());
        for &t in times {
            let m = engine.momentum_at(t);
            rows.push(SeriesRow::new(t, velocity_expectation_grid(&m), spin_expectation_momentum(&m), m.norm()));
        }
        write_series_file(&dir.join("series.csv"), &rows)?;
        report.max_norm_deviation = rows.iter().map(|r| (r.norm - rows[0].norm).abs()).fold(0.0, f64::max);
        let ts: Vec<f64> = rows.iter().map(|r| r.time).collect();
        let v: Vec<[f64; 3]> = rows.iter().map(|r| r.velocity()).collect();
        let s: Vec<[f64; 3]> = rows.iter().map(|r| r.spin()).collect();
        report.fits = fits_for("velocity", &ts, &v, &mut report.notes);
        report.fits.extend(fits_for("spin", &ts, &s, &mut report.notes));
    }
    for &t in &cfg.schedule.snapshots {
        let field = engine.synthesize_checked(t)?;
        let rho = probability_density(&field);
        let [axial, z_parity, xy_parity] = grid_symmetry(&field.grid, &rho);
        let axial_spectral = cfg
            .wants(Observable::Symmetry)
            .then(|| axial_metric_spectral(&engine, t, &significant_planes(&field.grid, &rho, AXIAL_PLANE_FRACTION)));
        let files = w.snapshot(dir, &field, &rho)?;
        report.snapshots.push(SnapshotReport {
            time: t,
            norm: field.norm(),
            axial,
            z_parity,
            xy_parity,
            axial_spectral,
            files,
        });
        densities.push((t, rho));
    }
    Ok(densities)
}

fn run_fdtd(
    cfg: &RunConfig,
    state: &PolarizedState,
    w: &Writer,
    dir: &Path,
    times: &[f64],
    report: &mut EngineReport,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let dt = fdtd_dt(cfg)?;
    report.dt = Some(dt);
    let field0 = initial_bispinor_field(state, cfg.position_grid()?)?;
    let options = LeapFrogOptions {
        bootstrap: cfg.grid.bootstrap,
        ..LeapFrogOptions::default()
    };
    let mut lf = LeapFrogState::new(field0, dt, options)?;
    let step_of = |t: f64| (t / dt).round() as usize;
    let series_steps: Vec<usize> = if cfg.wants(Observable::Series) {
        times.iter().map(|&t| step_of(t)).collect()
    } else {
        Vec::new()
    };
    let snap_steps: Vec<usize> = cfg.schedule.snapshots.iter().map(|&t| step_of(t)).collect();
    let n_steps = step_of(cfg.schedule.t_end).max(snap_steps.iter().copied().max().unwrap_or(0));
    let mut rows = Vec::new();
    let mut densities = Vec::new();
    let mut boundary_noted = false;
    let mut outcome = Ok(());
    for n in 0..=n_steps {
        if n > 0 {
            if let Err(e) = lf.step() {
                outcome = Err(e);
                break;
            }
        }
        let field = lf.current();
        if series_steps.contains(&n) {
            rows.push(SeriesRow::new(
                field.time,
                velocity_expectation_position(field),
                spin_expectation(field),
                lf.norm_history[n],
            ));
        }
        if snap_steps.contains(&n) {
            let rho = probability_density(field);
            let [axial, z_parity, xy_parity] = grid_symmetry(&field.grid, &rho);
            let files = w.snapshot(dir, field, &rho)?;
            report.snapshots.push(SnapshotReport {
                time: field.time,
                norm: field.norm(),
                axial,
                z_parity,
                xy_parity,
                axial_spectral: None,
                files,
            });
            densities.push((field.time, rho));
        }
        if !boundary_noted && n % 25 == 0 && field.boundary_mass(1) > fdtd::BOUNDARY_LIMIT {
            boundary_noted = true;
            report.notes.push(format!(
                "packet reached the grid boundary at t = {:.4}; later values include wall reflections",
                field.time
            ));
        }
    }
    report.steps = lf.step_count;
    report.max_norm_deviation = lf.max_norm_deviation();
    if !rows.is_empty() {
        write_series_file(&dir.join("series.csv"), &rows)?;
        let ts: Vec<f64> = rows.iter().map(|r| r.time).collect();
        let v: Vec<[f64; 3]> = rows.iter().map(|r| r.velocity()).collect();
        let s: Vec<[f64; 3]> = rows.iter().map(|r| r.spin()).collect();
        report.fits = fits_for("velocity", &ts, &v, &mut report.notes);
        report.fits.extend(fits_for("spin", &ts, &s, &mut report.notes));
    }
    outcome.map(|_| densities)
}

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Writes a `pz,w_plus,w_minus` CSV.
pub fn write_w_curve(path: &Path, pz: &[f64], wp: &[f64], wm: &[f64]) -> Result<()> {
    let mut wr = csv::Writer::from_path(path).map_err(|e| Error::Format(e.to_string()))?;
    wr.write_record(["pz", "w_plus", "w_minus"]).map_err(|e| Error::Format(e.to_string()))?;
    for i in 0..pz.len() {
        wr.write_record([pz[i], wp[i], wm[i]].map(|v| format!("{v:.16e}")))
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

/// Velocity and spin expectations from momentum quadrature at the given times (norm column 1).
pub fn oracle_rows(state: &PolarizedState, times: &[f64]) -> Result<Vec<SeriesRow>> {
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let v = OracleTable::new(state, Quantity::Velocity, t_max)?;
    let s = OracleTable::new(state, Quantity::Spin, t_max)?;
    Ok(times.iter().map(|&t| SeriesRow::new(t, v.eval(t), s.eval(t), 1.0)).collect())
}

fn write_oracle(state: &PolarizedState, dir: &Path, times: &[f64], report: &mut ScenarioReport) -> Result<()> {
    let rows = oracle_rows(state, times)?;
    write_series_file(&dir.join("series_oracle.csv"), &rows)?;
    let vv: Vec<[f64; 3]> = rows.iter().map(|r| r.velocity()).collect();
    let ss: Vec<[f64; 3]> = rows.iter().map(|r| r.spin()).collect();
    report.oracle_fits = fits_for("velocity", times, &vv, &mut report.notes);
    report.oracle_fits.extend(fits_for("spin", times, &ss, &mut report.notes));
    Ok(())
}

/// Runs `cfg`, writing into `cfg.outputs.directory` (or `out_dir` when given).
///
/// Configuration and initial-state problems are returned as errors before anything is written.
/// Failures later in the run are recorded in the report, which is still written along with
/// whatever outputs were produced.
pub fn run_scenario(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<ScenarioReport> {
    validate_sampled(cfg)?;
    let state = cfg.state()?;
    let dir: PathBuf = out_dir.map(Path::to_path_buf).unwrap_or_else(|| cfg.outputs.directory.clone());
    fs::create_dir_all(&dir)?;
    let mut echo = cfg.clone();
    echo.outputs.directory = dir.clone();
    fs::write(dir.join("config.toml"), echo.to_toml())?;

    let times = series_times(cfg);
    let params = parameter_line(cfg, &state);
    let mut report = ScenarioReport {
        complete: true,
        parameters: params.clone(),
        drift_exact: None,
        oracle_fits: Vec::new(),
        engines: Vec::new(),
        comparisons: Vec::new(),
        w: None,
        errors: Vec::new(),
        notes: Vec::new(),
        exit_code: 0,
    };
    let axial_free = cfg.packet.m_axial == 0;

    if axial_free {
        let packet = state.packet;
        match Axis::ALL
            .iter()
            .map(|&a| drift_velocity_general(&state.phi, &packet, a).map(|d| d.total))
            .collect::<Result<Vec<_>>>()
        {
            Ok(d) => report.drift_exact = Some([d[0], d[1], d[2]]),
            Err(e) => report.record(&e),
        }
    }

    if cfg.wants(Observable::Oracle) && !times.is_empty() {
        if axial_free {
            if let Err(e) = write_oracle(&state, &dir, &times, &mut report) {
                report.record(&e);
            }
        } else {
            report.notes.push("quadrature oracle skipped: m_axial != 0".into());
        }
    }

    if cfg.wants(Observable::WCurve) {
        let pz = default_pz_samples(&state, cfg.outputs.w_samples);
        let res = w_curve(&state, &pz).and_then(|c| {
            write_w_curve(&dir.join("w_curve.csv"), &c.pz, &c.w_plus, &c.w_minus)?;
            let (tp, tm) = w_totals(&state)?;
            let argmax = |w: &[f64]| {
                let i = (0..w.len()).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap_or(0);
                c.pz[i]
            };
            let (ip, im) = c.integrals();
            Ok(WReport {
                sampled_integrals: [ip, im],
                totals: [tp, tm],
                peaks: [argmax(&c.w_plus), argmax(&c.w_minus)],
            })
        });
        match res {
            Ok(w) => report.w = Some(w),
            Err(e) => report.record(&e),
        }
    }

    let needs_engine = (cfg.wants(Observable::Series) && !times.is_empty()) || !cfg.schedule.snapshots.is_empty();
    let writer = Writer {
        cfg,
        params,
        planes: cfg.planes()?,
    };
    let mut spectral_rho = Vec::new();
    let mut fdtd_rho = Vec::new();
    if needs_engine && cfg.engine.uses_spectral() {
        let sub = dir.join("spectral");
        fs::create_dir_all(&sub)?;
        let mut er = EngineReport::new("spectral");
        match run_spectral(cfg, &state, &writer, &sub, &times, &mut er) {
            Ok(r) => spectral_rho = r,
            Err(e) => {
                er.complete = false;
                er.error = Some(e.to_string());
                report.record(&e);
            }
        }
        report.engines.push(er);
    }
    if needs_engine && cfg.engine.uses_fdtd() {
        let sub = dir.join("fdtd");
        fs::create_dir_all(&sub)?;
        let mut er = EngineReport::new("fdtd");
        match run_fdtd(cfg, &state, &writer, &sub, &times, &mut er) {
            Ok(r) => fdtd_rho = r,
            Err(e) => {
                er.complete = false;
                er.error = Some(e.to_string());
                report.record(&e);
            }
        }
        report.engines.push(er);
    }
    if !fdtd_rho.is_empty() && cfg.engine.uses_spectral() {
        // Compare at the leap-frog time itself, which may differ from the requested one by < dt/2.
        let engine = SpectralEngine::new(state, cfg.position_grid()?)?;
        for (t, rho) in &fdtd_rho {
            let reference = spectral_rho
                .iter()
                .find(|(ts, _)| (ts - t).abs() < 1e-12)
                .map(|(_, r)| r.clone())
                .unwrap_or_else(|| probability_density(&engine.synthesize(*t)));
            report.comparisons.push(EngineComparison {
                time: *t,
                density_rel_l2: rel_l2(rho, &reference),
            });
        }
    }

    fs::write(
        dir.join("report.json"),
        serde_json::to_string_pretty(&report).map_err(|e| Error::Format(e.to_string()))?,
    )?;
    Ok(report)
}

pub fn read_report(path: &Path) -> Result<ScenarioReport> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}
