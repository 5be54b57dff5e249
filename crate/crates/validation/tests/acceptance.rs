//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test --release -p diracsim --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use diracsim::fdtd::{self, Bootstrap, LeapFrogOptions, LeapFrogState};
use diracsim::grid::{slice_scalar, Plane, PositionGrid};
use diracsim::io::{preset, run_scenario};
use diracsim::observables::density::velocity_expectation_grid;
use diracsim::observables::symmetry::significant_planes;
use diracsim::observables::zb::zb_fit_values;
use diracsim::observables::{
    axial_metric_spectral, drift_velocity_general, probability_density, spin_density, symmetry_metrics, OracleTable,
    Quantity, SymmetryKind,
};
use diracsim::packet::initial_bispinor_field;
use diracsim::spectral::split::{default_pz_samples, w_curve, w_totals};
use diracsim::spectral::SpectralEngine;
use diracsim::spinor::Axis;
use diracsim::{Bispinor, GaussianPacket, PolarizedState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn packet(d: f64, delta: f64, k0: f64) -> GaussianPacket {
    GaussianPacket::new(d, delta, k0).unwrap()
}

fn uniform_times(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt).round() as usize;
    (0..=n).map(|i| i as f64 * dt).collect()
}

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// ∫|f|² g(p) d³p by the 3D trapezoid rule on the full Cartesian momentum space.
///
/// Independent of the crate's cylindrical rules. The integrands are analytic in a strip of
/// half-width ≥ 1 around the real axes, so the rule converges geometrically in the step.
fn trapezoid_3d(d: f64, delta: f64, k0: f64, g: impl Fn([f64; 3]) -> f64) -> f64 {
    let axis = |width: f64, centre: f64| -> Vec<f64> {
        let sigma = 1.0 / (width * 2f64.sqrt());
        let h = (sigma / 3.0).min(0.1);
        let n = (9.0 * sigma / h).ceil() as i64;
        (-n..=n).map(|i| centre + i as f64 * h).collect()
    };
    let (xs, zs) = (axis(d, 0.0), axis(delta, k0));
    let (hx, hz) = (xs[1] - xs[0], zs[1] - zs[0]);
    let pref = d * d * delta / PI.powf(1.5);
    let mut acc = 0.0;
    for &px in &xs {
        for &py in &xs {
            for &pz in &zs {
                let f2 = pref * (-(px * px + py * py) * d * d - (pz - k0).powi(2) * delta * delta).exp();
                acc += f2 * g([px, py, pz]);
            }
        }
    }
    acc * hx * hx * hz
}

fn criterion_1() -> Outcome {
    let pk = packet(5.0, 5.0, 0.0);
    let st = PolarizedState::example_i(pk);
    let clock = Instant::now();
    let mean = OracleTable::new(&st, Quantity::Velocity, 0.0).unwrap().constant[2];
    let oracle_time = clock.elapsed().as_secs_f64();
    let target = 0.02;
    let within = ((mean - target) / target).abs() <= 0.10;

    let times: Vec<f64> = (0..40).map(|k| 0.5 * k as f64).collect();
    let table = OracleTable::new(&st, Quantity::Velocity, *times.last().unwrap()).unwrap();
    let clock = Instant::now();
    let engine = SpectralEngine::new(st, PositionGrid::cubic(128, 0.5).unwrap()).unwrap();
    let worst = times
        .iter()
        .map(|&t| (velocity_expectation_grid(&engine.momentum_at(t))[2] - table.eval(t)[2]).abs())
        .fold(0.0, f64::max);
    let spectral_time = clock.elapsed().as_secs_f64();
    let agree = worst <= 0.02;
    outcome(
        within && agree,
        format!(
            "drift velocity, example i, d = delta = 5: long-time mean Vz = {mean:.6} (target 0.02 +-10%, oracle {oracle_time:.2} s); \
             spectral 128^3 grid moments vs oracle at 40 times: max |diff| = {worst:.2e} (limit 0.02, {spectral_time:.1} s)"
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut errs = Vec::new();
    for d in [8.0, 10.0, 12.0] {
        let st = PolarizedState::example_i(packet(d, d, 0.0));
        let v = OracleTable::new(&st, Quantity::Velocity, 0.0).unwrap().constant[2];
        let law = 1.0 / (2.0 * d * d);
        errs.push((d, v, ((v - law) / law).abs()));
    }
    let pass = errs.iter().all(|e| e.2 <= 0.05) && errs.windows(2).all(|w| w[1].2 < w[0].2);
    let list: Vec<String> = errs
        .iter()
        .map(|(d, v, e)| format!("d = {d}: Vz0 = {v:.6e}, 1/(2d^2) = {:.6e}, rel err {:.2}%", 1.0 / (2.0 * d * d), e * 100.0))
        .collect();
    outcome(pass, format!("asymptotic drift law: {} (limit 5%, decreasing)", list.join("; ")))
}

fn criterion_3() -> Outcome {
    let st = PolarizedState::example_i(packet(5.0, 5.0, 0.0));
    let times = uniform_times(40.0, 0.05);
    let table = OracleTable::new(&st, Quantity::Velocity, 40.0).unwrap();
    let vz: Vec<f64> = times.iter().map(|&t| table.eval(t)[2]).collect();
    let fit = zb_fit_values(&times, &vz).unwrap();
    let w = fit.frequency.unwrap_or(0.0);
    outcome(
        ((w - 2.0) / 2.0).abs() <= 0.05,
        format!("Zitterbewegung frequency, example i, d = delta = 5, t in [0, 40]: {w:.4} (target 2.0 +-5%)"),
    )
}

fn criterion_4() -> Outcome {
    let h = 0.4;
    let grid = PositionGrid::cubic(96, h).unwrap();
    let field = initial_bispinor_field(&PolarizedState::example_i(packet(2.0, 2.0, 0.0)), grid).unwrap();
    let dt = 0.5 * fdtd::max_stable_dt(h);
    let mut lf = LeapFrogState::new(field, dt, LeapFrogOptions::default()).unwrap();
    let clock = Instant::now();
    let mut result = Ok(());
    for _ in 0..1000 {
        if let Err(e) = lf.step() {
            result = Err(e);
            break;
        }
    }
    let worst = lf.norm_history.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    outcome(
        result.is_ok() && worst <= 1e-9,
        format!(
            "leap-frog norm, 96^3, h = 0.4, dt = {dt:.5}, {} steps: max |norm - 1| = {worst:.2e} (limit 1e-9, {:.0} s){}",
            lf.step_count,
            clock.elapsed().as_secs_f64(),
            result.err().map_or(String::new(), |e| format!(", aborted: {e}"))
        ),
    )
}

/// Largest norm change over 10³ steps of a Gaussian plus seeded high-frequency noise.
fn growth(dt: f64) -> f64 {
    let h = 0.5;
    let grid = PositionGrid::cubic(32, h).unwrap();
    let mut field = initial_bispinor_field(&PolarizedState::example_i(packet(1.5, 1.5, 0.0)), grid).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20240605);
    let n = grid.n[0];
    for idx in 0..grid.len() {
        let [i, j, k] = grid.unravel(idx);
        let interior = [i, j, k].iter().all(|&c| c >= 2 && c + 2 < n);
        if interior {
            for c in 0..4 {
                field.data[idx].0[c] += Complex64::new(rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3));
            }
        }
    }
    let options = LeapFrogOptions {
        bootstrap: Bootstrap::Taylor,
        norm_tolerance: f64::INFINITY,
        enforce_stability: false,
    };
    let mut lf = LeapFrogState::new(field, dt, options).unwrap();
    for _ in 0..1000 {
        lf.step().unwrap();
    }
    let g = lf.max_norm_deviation();
    if g.is_finite() {
        g
    } else {
        f64::INFINITY
    }
}

fn criterion_5() -> Outcome {
    let critical = fdtd::max_stable_dt(0.5);
    let above = growth(1.05 * critical);
    let below = growth(0.95 * critical);
    let pass = above > 1e-3 && below <= 1e-3;
    outcome(
        pass,
        format!(
            "stability dichotomy, h = 0.5, critical dt = {critical:.5}: norm growth at 1.05x = {above:.2e} (needs > 1e-3), \
             at 0.95x = {below:.2e} (needs <= 1e-3); the lattice's own limit is dt = {:.5}",
            fdtd::lattice_critical_dt(&PositionGrid::cubic(32, 0.5).unwrap())
        ),
    )
}

/// Relative L2 between leap-frog and spectral densities at t ≈ 7.5 for the fig1a packet.
fn ladder_error(n: [usize; 3], h: f64) -> f64 {
    let st = PolarizedState::example_i(packet(1.0, 5.0, 0.0));
    let grid = PositionGrid::centered(n, [h; 3]).unwrap();
    let engine = SpectralEngine::new(st, grid).unwrap();
    let field = initial_bispinor_field(&st, grid).unwrap();
    let dt = fdtd::auto_dt(&grid).unwrap();
    let steps = (7.5 / dt).round() as usize;
    let mut lf = LeapFrogState::new(field, dt, LeapFrogOptions::default()).unwrap();
    for _ in 0..steps {
        lf.step().unwrap();
    }
    let t = lf.time();
    rel_l2(&probability_density(lf.current()), &probability_density(&engine.synthesize(t)))
}

fn criterion_6() -> Outcome {
    let cfg = preset("fig1a").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let report = run_scenario(&cfg, Some(dir.path())).unwrap();
    let preset_err = report.comparisons.first().map_or(f64::INFINITY, |c| c.density_rel_l2);

    // Same physical box, 24 x 24 x 48, at three spacings.
    let ladder: Vec<(f64, f64)> = [(0.4, [60, 60, 120]), (0.3, [80, 80, 160]), (0.2, [120, 120, 240])]
        .iter()
        .map(|&(h, n)| (h, ladder_error(n, h)))
        .collect();
    let orders: Vec<f64> = ladder
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect();
    let overall = (ladder[0].1 / ladder[2].1).ln() / (ladder[0].0 / ladder[2].0).ln();
    let order_ok = (1.8..=2.2).contains(&overall);
    let pass = preset_err <= 0.01 && order_ok;
    outcome(
        pass,
        format!(
            "engine equivalence, fig1a at t = 7.5: relative L2 = {preset_err:.4} (limit 0.01); ladder h = 0.4/0.3/0.2: {:.4}/{:.4}/{:.4}, \
             pairwise orders {:.2}/{:.2}, overall order {overall:.2} (range [1.8, 2.2]: {})",
            ladder[0].1,
            ladder[1].1,
            ladder[2].1,
            orders[0],
            orders[1],
            if order_ok { "met" } else { "missed" }
        ),
    )
}

fn criterion_7() -> Outcome {
    let grid = PositionGrid::centered([64, 64, 128], [0.5; 3]).unwrap();
    let axial_at = |st: PolarizedState, t: f64| {
        let e = SpectralEngine::new(st, grid).unwrap();
        let rho = probability_density(&e.synthesize(t));
        axial_metric_spectral(&e, t, &significant_planes(&grid, &rho, 0.1))
    };
    let ex_i = PolarizedState::example_i(packet(1.0, 5.0, 0.0));
    let axial_i: Vec<f64> = [2.5, 5.0, 7.5].iter().map(|&t| axial_at(ex_i, t)).collect();
    let mut zpar = Vec::new();
    for (d, k0) in [(1.0, 0.0), (2.5, 1.0)] {
        let e = SpectralEngine::new(PolarizedState::example_ii(packet(d, 5.0, k0)), grid).unwrap();
        for t in [2.0 * PI, 7.5] {
            zpar.push(symmetry_metrics(&grid, &probability_density(&e.synthesize(t)), SymmetryKind::ZParity));
        }
    }
    let broken = axial_at(PolarizedState::example_ii(packet(1.0, 5.0, 0.0)), 2.0 * PI);
    let ai = axial_i.iter().copied().fold(0.0, f64::max);
    let zp = zpar.iter().copied().fold(0.0, f64::max);
    outcome(
        ai < 1e-6 && zp < 1e-6 && broken > 0.05,
        format!(
            "symmetries: example i axial metric max {ai:.2e} at t = 2.5/5/7.5 (limit 1e-6); example ii z-parity max {zp:.2e} \
             for k0 = 0, 1 (limit 1e-6); example ii axial metric at t = 2pi = {broken:.3} (needs > 0.05)"
        ),
    )
}

fn criterion_8() -> Outcome {
    let times = uniform_times(30.0, 0.05);
    let max_abs = |st: &PolarizedState, q: Quantity, comps: &[usize]| {
        let t = OracleTable::new(st, q, 30.0).unwrap();
        times
            .iter()
            .flat_map(|&s| {
                let v = t.eval(s);
                comps.iter().map(move |&c| v[c].abs())
            })
            .fold(0.0, f64::max)
    };
    let mut worst = 0.0f64;
    for k0 in [0.0, 1.0] {
        let i = PolarizedState::example_i(packet(1.0, 5.0, k0));
        worst = worst.max(max_abs(&i, Quantity::Velocity, &[0, 1]));
        worst = worst.max(max_abs(&i, Quantity::Spin, &[0, 1]));
        let ii = PolarizedState::example_ii(packet(1.0, 5.0, k0));
        worst = worst.max(max_abs(&ii, Quantity::Velocity, &[2]));
    }
    worst = worst.max(max_abs(&PolarizedState::example_ii(packet(1.0, 5.0, 0.0)), Quantity::Spin, &[0, 1, 2]));

    let grid = PositionGrid::centered([64, 64, 128], [0.5; 3]).unwrap();
    let e = SpectralEngine::new(PolarizedState::example_ii(packet(1.0, 5.0, 0.0)), grid).unwrap();
    let mut plane_max = 0.0f64;
    for t in [2.0 * PI, 7.5] {
        let s = spin_density(&e.synthesize(t));
        for a in 0..3 {
            let sl = slice_scalar(&grid, s.component(a), Plane::parse("z=0").unwrap()).unwrap();
            plane_max = plane_max.max(sl.values.iter().map(|v| v.abs()).fold(0.0, f64::max));
        }
    }
    outcome(
        worst <= 1e-10 && plane_max <= 1e-10,
        format!(
            "zero identities: oracle max |component| = {worst:.2e} over t in [0, 30]; example ii spin density on z = 0 max {plane_max:.2e} \
             (limit 1e-10)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut worst_reduction = 0.0f64;
    for (d, delta, k0) in [(1.0, 5.0, 0.0), (5.0, 5.0, 0.0), (2.5, 5.0, 1.0)] {
        let pk = packet(d, delta, k0);
        let lam2 = |p: [f64; 3]| 1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let z_const = trapezoid_3d(d, delta, k0, |p| p[2] * p[2] / lam2(p));
        let x_const = trapezoid_3d(d, delta, k0, |p| p[0] * p[0] / lam2(p));
        let vi = drift_velocity_general(&PolarizedState::example_i(pk).phi, &pk, Axis::Z).unwrap().total;
        let vii = drift_velocity_general(&PolarizedState::example_ii(pk).phi, &pk, Axis::X).unwrap().total;
        worst_reduction = worst_reduction.max((vi - z_const).abs()).max((vii - x_const).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_split = 0.0f64;
    for n in 0..100 {
        let phi = Bispinor(std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
        let pk = packet(rng.random_range(0.8..3.0), rng.random_range(0.8..5.0), rng.random_range(-1.0..1.0));
        let axis = Axis::ALL[n % 3];
        let dv = drift_velocity_general(&phi, &pk, axis).unwrap();
        let split = dv.initial_velocity_term + dv.mass_term + dv.cross_term;
        worst_split = worst_split.max((split - dv.total).abs());
    }
    outcome(
        worst_reduction <= 1e-10 && worst_split <= 1e-12,
        format!(
            "general drift: reduction to the example constants max |diff| = {worst_reduction:.2e} (limit 1e-10, independent 3D trapezoid); \
             split sums over 100 random polarizations max |diff| = {worst_split:.2e} (limit 1e-12)"
        ),
    )
}

fn criterion_10() -> Outcome {
    let a = PolarizedState::example_i(packet(1.0, 5.0, 0.0));
    let b = PolarizedState::example_i(packet(5.0, 5.0, 1.0));
    let (pa, ma) = w_totals(&a).unwrap();
    let (pb, mb) = w_totals(&b).unwrap();
    let norm_err = (pa + ma - 1.0).abs().max((pb + mb - 1.0).abs());

    let pz = default_pz_samples(&a, 201);
    let mirrored: Vec<f64> = pz.iter().map(|p| -p).collect();
    let c = w_curve(&a, &pz).unwrap();
    let m = w_curve(&a, &mirrored).unwrap();
    let mirror_err = c.w_plus.iter().zip(&m.w_minus).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    let pz = default_pz_samples(&b, 4001);
    let cb = w_curve(&b, &pz).unwrap();
    let neg = |w: &[f64]| {
        pz.windows(2)
            .zip(w.windows(2))
            .filter(|(x, _)| x[1] <= 0.0)
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum::<f64>()
    };
    let frac = (neg(&cb.w_plus) / pb).max(neg(&cb.w_minus) / mb);
    outcome(
        norm_err <= 1e-8 && mirror_err <= 1e-10 && frac < 0.01,
        format!(
            "W curves: |int W+ + int W- - 1| = {norm_err:.2e} (limit 1e-8); k0 = 0 mirror max |diff| = {mirror_err:.2e} (limit 1e-10); \
             k0 = 1 negative-pz fraction {frac:.2e} (limit 0.01)"
        ),
    )
}

fn criterion_11() -> Outcome {
    let times = uniform_times(30.0, 0.05);
    let decay = |st: PolarizedState| {
        let t = OracleTable::new(&st, Quantity::Velocity, 30.0).unwrap();
        let vx: Vec<f64> = times.iter().map(|&s| t.eval(s)[0]).collect();
        zb_fit_values(&times, &vx).unwrap().time_to_fraction(0.1)
    };
    let slow = decay(PolarizedState::example_ii(packet(1.0, 5.0, 0.0)));
    let fast = decay(PolarizedState::example_ii(packet(2.5, 5.0, 1.0)));
    let pass = match (fast, slow) {
        (Some(f), Some(s)) => f < s,
        (Some(_), None) => true,
        _ => false,
    };
    let show = |v: Option<f64>| v.map_or("not reached".to_string(), |t| format!("{t:.2}"));
    outcome(
        pass,
        format!(
            "damping, example ii Vx envelope to 10%: k0 = 1, d = 2.5 at t = {}; k0 = 0, d = 1 at t = {} (first must be earlier)",
            show(fast),
            show(slow)
        ),
    )
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (n, f) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let clock = Instant::now();
        let o = f();
        println!(
            "{} criterion {n:>2}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            clock.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: {} failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}

