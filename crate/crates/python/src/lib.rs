//! Python bindings for `diracsim`.
//!
//! Polarizations are passed as four Python complex numbers and momenta as three floats.
//! Configuration errors raise `ValueError`; numerical failures raise `RuntimeError`.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use diracsim::grid::{slice_scalar, Plane, PositionGrid};
use diracsim::io::presets::preset_text as builtin_preset_text;
use diracsim::io::{parse_config_with, preset_names, preset_with, run_scenario as run};
use diracsim::observables::{drift_velocity_general, probability_density, OracleTable, Quantity};
use diracsim::spectral::split::{energy_split as split_at, w_totals as totals};
use diracsim::spectral::SpectralEngine;
use diracsim::spinor::{energy as lambda, Axis};
use diracsim::{Bispinor, GaussianPacket, Momentum3, PolarizedState};

fn py_err(e: diracsim::Error) -> PyErr {
    if e.exit_code() == 2 {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn state(d: f64, delta: f64, k0: f64, phi: [Complex64; 4]) -> PyResult<PolarizedState> {
    let packet = GaussianPacket::new(d, delta, k0).map_err(py_err)?;
    PolarizedState::new(packet, Bispinor(phi)).map_err(py_err)
}

/// Relativistic energy sqrt(1 + p^2).
#[pyfunction]
fn energy(p: [f64; 3]) -> f64 {
    lambda(Momentum3(p))
}

/// Positive- and negative-energy weights of polarization `phi` at momentum `p`.
#[pyfunction]
fn energy_split(d: f64, delta: f64, k0: f64, phi: [Complex64; 4], p: [f64; 3]) -> PyResult<(f64, f64)> {
    split_at(&state(d, delta, k0, phi)?, Momentum3(p)).map_err(py_err)
}

/// Integrated positive- and negative-energy content of the packet.
#[pyfunction]
fn w_totals(d: f64, delta: f64, k0: f64, phi: [Complex64; 4]) -> PyResult<(f64, f64)> {
    totals(&state(d, delta, k0, phi)?).map_err(py_err)
}

/// Constant (non-oscillating) part of the mean velocity, per axis.
#[pyfunction]
fn drift_velocity(d: f64, delta: f64, k0: f64, phi: [Complex64; 4]) -> PyResult<[f64; 3]> {
    let packet = GaussianPacket::new(d, delta, k0).map_err(py_err)?;
    let mut out = [0.0; 3];
    for a in Axis::ALL {
        out[a.index()] = drift_velocity_general(&Bispinor(phi), &packet, a).map_err(py_err)?.total;
    }
    Ok(out)
}

/// Mean velocity and spin at the given times from momentum-space quadrature.
///
/// Returns a dict with keys `time`, `velocity` and `spin`; the last two are lists of triples.
#[pyfunction]
fn expectation_series<'py>(
    py: Python<'py>,
    d: f64,
    delta: f64,
    k0: f64,
    phi: [Complex64; 4],
    times: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let st = state(d, delta, k0, phi)?;
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let (v, s) = py
        .detach(|| {
            Ok::<_, diracsim::Error>((
                OracleTable::new(&st, Quantity::Velocity, t_max)?,
                OracleTable::new(&st, Quantity::Spin, t_max)?,
            ))
        })
        .map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("velocity", times.iter().map(|&t| v.eval(t)).collect::<Vec<_>>())?;
    out.set_item("spin", times.iter().map(|&t| s.eval(t)).collect::<Vec<_>>())?;
    out.set_item("time", times)?;
    Ok(out)
}

/// Probability density on a plane at time `t`, evolved exactly on an `n` grid with spacing `h`.
///
/// Returns `(row_coords, col_coords, rows)` where `rows` is a list of lists.
#[pyfunction]
#[pyo3(signature = (d, delta, k0, phi, n, h, t, plane = "z=0"))]
#[allow(clippy::too_many_arguments, clippy::type_complexity)]
fn density_slice(
    py: Python<'_>,
    d: f64,
    delta: f64,
    k0: f64,
    phi: [Complex64; 4],
    n: [usize; 3],
    h: f64,
    t: f64,
    plane: &str,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
    let st = state(d, delta, k0, phi)?;
    let plane = Plane::parse(plane).map_err(py_err)?;
    let slice = py
        .detach(|| {
            let grid = PositionGrid::centered(n, [h; 3])?;
            let field = SpectralEngine::new(st, grid)?.synthesize_checked(t)?;
            slice_scalar(&grid, &probability_density(&field), plane)
        })
        .map_err(py_err)?;
    let rows = slice.values.chunks(slice.cols).map(<[f64]>::to_vec).collect();
    Ok((slice.row_coords, slice.col_coords, rows))
}

/// Largest leap-frog time step that keeps the stability margin positive at spacing `h`.
#[pyfunction]
fn max_stable_dt(h: f64) -> f64 {
    diracsim::fdtd::max_stable_dt(h)
}

/// Names of the built-in scenario presets.
#[pyfunction]
fn presets() -> Vec<&'static str> {
    preset_names().collect()
}

/// TOML text of a built-in preset.
#[pyfunction]
fn preset_text(name: &str) -> PyResult<&'static str> {
    builtin_preset_text(name).map_err(py_err)
}

/// Parses and validates a TOML configuration, returning it fully resolved.
#[pyfunction]
#[pyo3(signature = (text, overrides = Vec::new()))]
fn validate_config(text: &str, overrides: Vec<String>) -> PyResult<String> {
    let cfg = parse_config_with(text, &overrides).map_err(py_err)?;
    Ok(cfg.to_toml())
}

/// Runs a scenario given as TOML text or a preset name and returns the report as JSON.
///
/// Outputs go to `out` when given; otherwise nothing is written to disk.
#[pyfunction]
#[pyo3(signature = (config = None, preset = None, overrides = Vec::new(), out = None))]
fn run_scenario(
    py: Python<'_>,
    config: Option<&str>,
    preset: Option<&str>,
    overrides: Vec<String>,
    out: Option<PathBuf>,
) -> PyResult<String> {
    let cfg = match (config, preset) {
        (Some(text), None) => parse_config_with(text, &overrides),
        (None, Some(name)) => preset_with(name, &overrides),
        _ => return Err(PyValueError::new_err("give exactly one of config or preset")),
    }
    .map_err(py_err)?;
    let report = py.detach(|| run(&cfg, out.as_deref())).map_err(py_err)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn diracsim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(energy_split, m)?)?;
    m.add_function(wrap_pyfunction!(w_totals, m)?)?;
    m.add_function(wrap_pyfunction!(drift_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(expectation_series, m)?)?;
    m.add_function(wrap_pyfunction!(density_slice, m)?)?;
    m.add_function(wrap_pyfunction!(max_stable_dt, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(preset_text, m)?)?;
    m.add_function(wrap_pyfunction!(validate_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
