"""Smoke test for the diracsim_py extension.

Build and install it first:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/diracsim_py-*.whl
"""

import json
import math
import sys
import tempfile
from pathlib import Path

import diracsim_py as ds

S = 1 / math.sqrt(2)
EXAMPLE_I = [S, 0, S, 0]
EXAMPLE_II = [S, 0, 0, S]


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    close(ds.energy([3.0, 0.0, 4.0]), math.sqrt(26.0), 1e-15)

    wp, wm = ds.energy_split(1.0, 5.0, 0.0, EXAMPLE_I, [0.0, 0.0, 1.0])
    close(wp, 0.5 * (1 + 1 / math.sqrt(2)), 1e-14)
    close(wp + wm, 1.0, 1e-14)

    wp, wm = ds.w_totals(1.0, 5.0, 0.0, EXAMPLE_I)
    close(wp, 0.5, 1e-10)
    close(wm, 0.5, 1e-10)

    drift = ds.drift_velocity(1.0, 5.0, 0.0, EXAMPLE_II)
    assert abs(drift[1]) < 1e-12 and abs(drift[2]) < 1e-12, drift

    times = [0.0, 1.0, 2.0]
    series = ds.expectation_series(1.0, 5.0, 0.0, EXAMPLE_II, times)
    assert series["time"] == times
    close(series["velocity"][0][0], 1.0, 1e-10)
    close(series["spin"][0][2], 0.0, 1e-12)

    xs, ys, rows = ds.density_slice(1.0, 1.5, 0.0, EXAMPLE_I, [32, 32, 48], 0.4, 1.0)
    assert len(rows) == len(xs) and len(rows[0]) == len(ys)
    assert all(v >= 0 for row in rows for v in row)

    close(ds.max_stable_dt(0.5), 0.117041, 1e-6)
    assert "fig1a" in ds.presets()
    assert "[packet]" in ds.preset_text("fig2b")

    try:
        ds.validate_config(ds.preset_text("fig1a"), ["grid.dt=0.2"])
    except ValueError as e:
        assert "stability" in str(e)
    else:
        raise AssertionError("unstable dt accepted")

    with tempfile.TemporaryDirectory() as tmp:
        report = json.loads(ds.run_scenario(preset="fig2b", out=tmp))
        assert report["complete"] and report["exit_code"] == 0
        total = sum(report["w"]["totals"])
        close(total, 1.0, 1e-6)
        assert (Path(tmp) / "w_curve.csv").is_file()

    print("diracsim_py smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
